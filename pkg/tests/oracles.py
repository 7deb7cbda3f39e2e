"""Independent brute-force oracles shared by the test modules.

These deliberately avoid the package's sparse cochain machinery: dense
matrices, direct kernel/SNF calls, and hand-rolled constructions, so
they can arbitrate values the fast paths produce.
"""

from itertools import product

from qplat.glattice import GLattice
from qplat.intmat import IntMatrix, kernel_basis, snf, solve_left, stack


def dense_bar_matrix(L: GLattice, n: int) -> IntMatrix:
    """Dense matrix of the normalized bar differential d^n."""
    group = L.group
    m = group.order
    r = L.rank
    tuples_n = list(product(range(1, m), repeat=n))
    tuples_n1 = list(product(range(1, m), repeat=n + 1))
    pos_n = {t: i for i, t in enumerate(tuples_n)}
    rows = [[0] * (len(tuples_n1) * r) for _ in range(len(tuples_n) * r)]
    for ci, t in enumerate(tuples_n1):
        left = L.left_action(t[0])
        tail = pos_n[t[1:]]
        for j in range(r):
            for k in range(r):
                rows[tail * r + j][ci * r + k] += left.data[j][k]
        for i in range(n):
            merged = group.mult(t[i], t[i + 1])
            if merged == 0:
                continue
            s = pos_n[t[:i] + (merged,) + t[i + 2 :]]
            sign = -1 if (i + 1) % 2 else 1
            for j in range(r):
                rows[s * r + j][ci * r + j] += sign
        head = pos_n[t[:-1]]
        sign = -1 if (n + 1) % 2 else 1
        for j in range(r):
            rows[head * r + j][ci * r + j] += sign
    return IntMatrix(rows, cols=len(tuples_n1) * r)


def dense_h_n(L: GLattice, degree: int) -> tuple[int, ...]:
    """Invariant factors of H^degree by dense kernel + SNF; brute force."""
    dn = dense_bar_matrix(L, degree)
    dprev = dense_bar_matrix(L, degree - 1)
    K = kernel_basis(dn)
    if K.rows == 0:
        return ()
    coords = solve_left(K, dprev)
    assert coords is not None, "coboundaries must be cocycles"
    facs = snf(coords).invariant_factors
    assert len(facs) == K.rows, "positive-degree cohomology must be finite"
    return tuple(d for d in facs if d > 1)


def j_lattice(group) -> GLattice:
    """Z[G]/(norm) with basis the images of the nontrivial elements."""
    m = group.order
    acts = []
    for g in group.generators:
        j = group.index_of(g)
        rows = []
        for h in range(1, m):
            target = group.mult(h, j)
            if target == 0:
                rows.append([-1] * (m - 1))
            else:
                rows.append([1 if k == target else 0 for k in range(1, m)])
        acts.append(IntMatrix(rows))
    return GLattice(group, acts)
