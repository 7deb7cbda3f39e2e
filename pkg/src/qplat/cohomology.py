"""Group cohomology H^n(G, L) for finite G and G-lattices L, and Sha^2.

The default path is the normalized bar complex (tuples containing the
identity are dropped).  Differentials are held sparsely and kernels are
computed by unimodular sparse elimination, so permutation-flavoured
actions stay fast.  Sha^2 is the kernel of restriction from H^2(G, L) to
the product of H^2(C, L) over all nontrivial cyclic subgroups C; since
it vanishes on permutation lattices and is additive, a nonzero value
certifies that a lattice is not quasi-permutation.

For elementary abelian p-groups a tensor product of periodic resolutions
replaces the bar complex; both paths must agree and the test suite
cross-checks them.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import BudgetExceeded, NotElementaryAbelian
from .glattice import FinGroup, GLattice, restrict
from .intmat import IntMatrix, hnf, intersect_row_spans, snf, solve_left, stack

DEFAULT_MAX_CELLS = 50_000_000


@dataclass(frozen=True)
class AbGroupStructure:
    """Canonical form of a finitely generated abelian group."""

    invariant_factors: tuple[int, ...]
    free_rank: int = 0

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors and self.free_rank == 0

    @property
    def order(self) -> int:
        if self.free_rank:
            raise ValueError("infinite group")
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n


def merge_structures(a: AbGroupStructure, b: AbGroupStructure) -> AbGroupStructure:
    """Canonical invariant factors of the direct sum."""
    diag = IntMatrix.diagonal(list(a.invariant_factors) + list(b.invariant_factors))
    facs = tuple(d for d in snf(diag).invariant_factors if d > 1)
    return AbGroupStructure(facs, a.free_rank + b.free_rank)


@dataclass
class CohomologyResult:
    degree: int
    group: AbGroupStructure
    resolution_used: str
    representatives: IntMatrix | None = None


# -- sparse elimination -----------------------------------------------------


class SparseSolver:
    """Unimodular row elimination of sparse integer rows, free pivot order.

    Pivots are chosen Markowitz-style (sparsest row, then unit entries in
    the thinnest column), and each pivot column is resolved by a local gcd
    chain with nearest-integer quotients.  That keeps intermediate entries
    small, which naive minimum-column elimination does not.

    Rows that reduce to zero yield ``kernel_combos``: a saturated basis of
    the left kernel, expressed over the input row indices.  ``express``
    writes a vector as an integer combination of the input rows by
    back-substitution along the pivot sequence (each pivot row vanishes on
    all earlier pivot columns, so the system is triangular).
    """

    def __init__(self, input_rows):
        import heapq

        self.rows: list[dict[int, int]] = [
            {k: v for k, v in r.items() if v} for r in input_rows
        ]
        n = len(self.rows)
        self.combos: list[dict[int, int]] = [{i: 1} for i in range(n)]
        self.kernel_combos: list[dict[int, int]] = []
        self.pivot_seq: list[tuple[int, int]] = []  # (row id, column)
        cols: dict[int, set[int]] = {}
        for i, r in enumerate(self.rows):
            for c in r:
                cols.setdefault(c, set()).add(i)
        self._cols = cols
        alive: set[int] = set()
        heap: list[tuple[int, int]] = []
        for i, r in enumerate(self.rows):
            if r:
                alive.add(i)
                heap.append((len(r), i))
            else:
                self.kernel_combos.append(self.combos[i])
        heapq.heapify(heap)

        def row_sub(i: int, k: int, q: int) -> None:
            # row i -= q * row k, with column-index upkeep
            ri = self.rows[i]
            for c, v in self.rows[k].items():
                nv = ri.get(c, 0) - q * v
                if nv:
                    if c not in ri:
                        cols.setdefault(c, set()).add(i)
                    ri[c] = nv
                else:
                    if c in ri:
                        del ri[c]
                        cols[c].discard(i)
            ci = self.combos[i]
            for c, v in self.combos[k].items():
                nv = ci.get(c, 0) - q * v
                if nv:
                    ci[c] = nv
                else:
                    ci.pop(c, None)

        while heap:
            length, rid = heapq.heappop(heap)
            if rid not in alive:
                continue
            row = self.rows[rid]
            if not row:
                alive.discard(rid)
                self.kernel_combos.append(self.combos[rid])
                continue
            if len(row) != length:
                heapq.heappush(heap, (len(row), rid))
                continue
            # Column choice: favour unit entries, then thin columns.
            col = min(
                row,
                key=lambda c: (0 if abs(row[c]) == 1 else 1, len(cols.get(c, ())), c),
            )
            # Local gcd chain: shrink the column to a single owner.
            while True:
                owners = [r for r in cols.get(col, ()) if r in alive]
                if len(owners) <= 1:
                    break
                rmin = min(owners, key=lambda r: (abs(self.rows[r][col]), r))
                a = self.rows[rmin][col]
                for r in owners:
                    if r == rmin:
                        continue
                    q = _nearest_quotient(self.rows[r][col], a)
                    if q:
                        row_sub(r, rmin, q)
                    if not self.rows[r]:
                        alive.discard(r)
                        cols[col].discard(r)
                        self.kernel_combos.append(self.combos[r])
                    else:
                        heapq.heappush(heap, (len(self.rows[r]), r))
            owners = [r for r in cols.get(col, ()) if r in alive]
            if not owners:
                continue  # the candidate row dissolved; move on
            pivot = min(owners)
            alive.discard(pivot)
            for c in self.rows[pivot]:
                cols[c].discard(pivot)
            self.pivot_seq.append((pivot, col))
        # Keep kernel output deterministic regardless of heap internals.
        self.kernel_combos.sort(key=lambda combo: min(combo))

    @property
    def rank(self) -> int:
        return len(self.pivot_seq)

    def express(self, vector: dict[int, int]) -> dict[int, int] | None:
        """Integer coordinates of ``vector`` over the input rows, or None."""
        data = {k: v for k, v in vector.items() if v}
        coeffs: dict[int, int] = {}
        for rid, col in self.pivot_seq:
            b = data.get(col, 0)
            if b == 0:
                continue
            a = self.rows[rid][col]
            if b % a != 0:
                return None
            q = b // a
            for c, v in self.rows[rid].items():
                nv = data.get(c, 0) - q * v
                if nv:
                    data[c] = nv
                else:
                    data.pop(c, None)
            for c, v in self.combos[rid].items():
                nv = coeffs.get(c, 0) + q * v
                if nv:
                    coeffs[c] = nv
                else:
                    coeffs.pop(c, None)
        if data:
            return None
        return coeffs

    def reduced_rows(self) -> list[dict[int, int]]:
        """The pivot rows, in pivot order; they span the input row span."""
        return [self.rows[rid] for rid, _ in self.pivot_seq]


def _nearest_quotient(b: int, a: int) -> int:
    """Quotient q minimizing |b - q*a|; remainder magnitude is <= |a|/2."""
    q, r = divmod(b, a)
    if 2 * abs(r) > abs(a):
        q += 1
    return q


# -- normalized bar complex -------------------------------------------------


class BarComplex:
    """Normalized inhomogeneous cochain complex of (G, L) up to a degree."""

    def __init__(self, L: GLattice, max_cells: int = DEFAULT_MAX_CELLS):
        self.L = L
        self.group = L.group
        self.order = self.group.order
        self.rank = L.rank
        self.max_cells = max_cells
        self._left: dict[int, IntMatrix] = {}

    def left_mat(self, i: int) -> IntMatrix:
        got = self._left.get(i)
        if got is None:
            got = self.L.left_action(i)
            self._left[i] = got
        return got

    def dim(self, n: int) -> int:
        return (self.order - 1) ** n * self.rank

    def tuples(self, n: int) -> list[tuple[int, ...]]:
        return list(product(range(1, self.order), repeat=n))

    def tuple_index(self, t: tuple[int, ...]) -> int:
        idx = 0
        for g in t:
            idx = idx * (self.order - 1) + (g - 1)
        return idx

    def differential_rows(self, n: int) -> list[dict[int, int]]:
        """Rows of d^n : C^n -> C^{n+1}, indexed by (tuple, coordinate)."""
        if self.dim(n) * self.dim(n + 1) > self.max_cells:
            raise BudgetExceeded(
                f"bar differential d^{n} needs {self.dim(n)}x{self.dim(n + 1)} cells"
            )
        r = self.rank
        rows: list[dict[int, int]] = [dict() for _ in range(self.dim(n))]
        mult = self.group.mult
        for t in self.tuples(n + 1):
            col_base = self.tuple_index(t) * r
            # g1 . f(g2, ..., g_{n+1})
            tail_idx = self.tuple_index(t[1:])
            left = self.left_mat(t[0])
            for j in range(r):
                base = tail_idx * r + j
                lrow = left.data[j]
                row = rows[base]
                for k in range(r):
                    v = lrow[k]
                    if v:
                        key = col_base + k
                        nv = row.get(key, 0) + v
                        if nv:
                            row[key] = nv
                        else:
                            row.pop(key, None)
            # (-1)^i f(..., g_i g_{i+1}, ...)
            for i in range(n):
                merged = mult(t[i], t[i + 1])
                if merged == 0:
                    continue
                s = t[:i] + (merged,) + t[i + 2 :]
                s_base = self.tuple_index(s) * r
                sign = -1 if (i + 1) % 2 else 1
                for j in range(r):
                    row = rows[s_base + j]
                    key = col_base + j
                    nv = row.get(key, 0) + sign
                    if nv:
                        row[key] = nv
                    else:
                        row.pop(key, None)
            # (-1)^{n+1} f(g1, ..., g_n)
            head_idx = self.tuple_index(t[:-1])
            sign = -1 if (n + 1) % 2 else 1
            for j in range(r):
                row = rows[head_idx * r + j]
                key = col_base + j
                nv = row.get(key, 0) + sign
                if nv:
                    row[key] = nv
                else:
                    row.pop(key, None)
        return rows


@dataclass
class CochainHomology:
    """H^n data with cocycle generators and their relation matrix."""

    degree: int
    dim_n: int
    cocycles: list[dict[int, int]]  # saturated basis of ker d^n
    relations: IntMatrix  # rows: im d^{n-1} in cocycle coordinates
    structure: AbGroupStructure
    echelon: SparseEchelon  # echelon of the cocycle basis, for projections


def _homology_from_rows(
    degree: int,
    dim_n: int,
    dn_rows: list[dict[int, int]],
    dprev_rows: list[dict[int, int]],
) -> CochainHomology:
    ech = SparseEchelon()
    for row in dn_rows:
        ech.add_row(row)
    cocycles = ech.zero_combos
    cech = SparseEchelon()
    for z in cocycles:
        cech.add_row(z)
    # index of each cocycle in the echelon's input order is its coordinate
    rel_rows: list[list[int]] = []
    k = len(cocycles)
    seen = SparseEchelon()
    for row in dprev_rows:
        coords = cech.express(row)
        if coords is None:
            raise AssertionError("coboundary outside the cocycle lattice")
        if coords:
            seen.add_row(dict(coords))
    # densify the echelonized relations (at most k independent rows)
    for j, (pdata, _) in sorted(seen.pivots.items()):
        dense = [0] * k
        for idx, v in pdata.items():
            dense[idx] = v
        rel_rows.append(dense)
    relations = IntMatrix(rel_rows, cols=k)
    facs = snf(relations).invariant_factors if rel_rows else ()
    torsion = tuple(d for d in facs if d > 1)
    free = k - len(facs)
    return CochainHomology(
        degree=degree,
        dim_n=dim_n,
        cocycles=cocycles,
        relations=relations,
        structure=AbGroupStructure(torsion, free),
        echelon=cech,
    )


def bar_homology(L: GLattice, degree: int, max_cells: int = DEFAULT_MAX_CELLS) -> CochainHomology:
    cx = BarComplex(L, max_cells=max_cells)
    dn = cx.differential_rows(degree)
    dprev = cx.differential_rows(degree - 1) if degree >= 1 else []
    return _homology_from_rows(degree, cx.dim(degree), dn, dprev)


def h_n(
    group: FinGroup,
    L: GLattice,
    degree: int,
    *,
    max_cells: int = DEFAULT_MAX_CELLS,
    with_representatives: bool = False,
) -> CohomologyResult:
    """H^degree(group, L) by the normalized bar complex; degree in 1..3."""
    if L.group is not group:
        raise ValueError("lattice is not over the given group")
    if not 1 <= degree <= 3:
        raise ValueError("degree capped at 3")
    hom = bar_homology(L, degree, max_cells=max_cells)
    if hom.structure.free_rank:
        raise AssertionError("positive-degree cohomology of a finite group must be finite")
    reps = None
    if with_representatives and hom.dim_n <= 20000:
        reps = IntMatrix(
            [[z.get(c, 0) for c in range(hom.dim_n)] for z in hom.cocycles],
            cols=hom.dim_n,
        )
    return CohomologyResult(degree=degree, group=hom.structure, resolution_used="bar", representatives=reps)


# -- Sha^2 -------------------------------------------------------------------


def sha2(
    group: FinGroup,
    L: GLattice,
    *,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> AbGroupStructure:
    """Kernel of restriction H^2(G, L) -> prod over cyclic C of H^2(C, L).

    If the group itself is cyclic the restriction along the identity
    inclusion is the identity map, so the kernel is trivial without any
    cochain work.
    """
    if L.group is not group:
        raise ValueError("lattice is not over the given group")
    n = group.order
    if n == 1 or any(group.element_order(i) == n for i in range(1, n)):
        return AbGroupStructure(())
    amb = bar_homology(L, 2, max_cells=max_cells)
    k = len(amb.cocycles)
    if k == 0:
        return AbGroupStructure(())
    lattice = IntMatrix.identity(k)
    order = group.order
    rank = L.rank
    for members in group.cyclic_subgroups():
        gen = _cyclic_generator(group, members)
        sub = restrict(L, [gen])
        sub_hom = bar_homology(sub, 2, max_cells=max_cells)
        # map ambient tuple coordinates into the subgroup complex
        sub_elems = [L.group.index_of(m) for m in sub.group.elements]
        pos = {e: i for i, e in enumerate(sub_elems)}
        m1 = order - 1
        s1 = sub.group.order - 1
        rows = []
        for z in amb.cocycles:
            restricted: dict[int, int] = {}
            for c, v in z.items():
                tup, j = divmod(c, rank)
                g2 = tup % m1 + 1
                g1 = tup // m1 + 1
                i1 = pos.get(g1)
                i2 = pos.get(g2)
                if i1 and i2:  # both nontrivial elements of the subgroup
                    restricted[((i1 - 1) * s1 + (i2 - 1)) * rank + j] = v
            coords = sub_hom.echelon.express(restricted)
            if coords is None:
                raise AssertionError("restricted cocycle is not a subgroup cocycle")
            rows.append([coords.get(i, 0) for i in range(len(sub_hom.cocycles))])
        M = IntMatrix(rows, cols=len(sub_hom.cocycles))
        # u with u @ M in the row span of the subgroup's coboundary relations
        stacked = stack([M, sub_hom.relations]) if sub_hom.relations.rows else M
        ker = hnf(stacked).kernel_rows
        u_part = IntMatrix([row[:k] for row in ker.data], cols=k) if ker.rows else IntMatrix((), cols=k)
        lam = hnf(u_part).H
        lattice = intersect_row_spans(lattice, lam)
        if lattice.rows == 0:
            return AbGroupStructure(())
    # Sha^2 = lattice / coboundary relations
    if amb.relations.rows == 0:
        facs, free = _quotient_of_spans(lattice, IntMatrix((), cols=k))
    else:
        facs, free = _quotient_of_spans(lattice, amb.relations)
    if free:
        raise AssertionError("Sha^2 must be finite")
    return AbGroupStructure(facs)


def _cyclic_generator(group: FinGroup, members: tuple[int, ...]) -> int:
    size = len(members)
    for i in members:
        if i and group.element_order(i) == size:
            return i
    raise AssertionError("cyclic subgroup without generator")


def _quotient_of_spans(big: IntMatrix, small: IntMatrix) -> tuple[tuple[int, ...], int]:
    """Structure of (row span of big) / (row span of small)."""
    if small.rows == 0:
        facs = ()
        coords = IntMatrix((), cols=big.rows)
    else:
        coords = solve_left(big, small)
        if coords is None:
            raise ValueError("small span not inside big span")
        facs = snf(coords).invariant_factors
    torsion = tuple(d for d in facs if d > 1)
    return torsion, big.rows - len([d for d in facs if d])


# -- periodic-tensor resolution for elementary abelian groups ---------------


def periodic_resolution_h_n(
    group: FinGroup,
    L: GLattice,
    degree: int,
    *,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> CohomologyResult:
    """H^degree via the tensor product of m periodic resolutions of Z/p."""
    if L.group is not group:
        raise ValueError("lattice is not over the given group")
    if not 1 <= degree <= 3:
        raise ValueError("degree capped at 3")
    decomp = group.elementary_abelian()
    if decomp is None:
        raise NotElementaryAbelian("group is not (Z/p)^m")
    p, gens = decomp
    m = len(gens)
    sigma_left = [L.left_action(g) for g in gens]
    norm_left = []
    for g in gens:
        total = IntMatrix.identity(L.rank)
        j = g
        for _ in range(p - 1):
            total = total + L.left_action(j)
            j = group.mult(j, g)
        norm_left.append(total)

    def multi_indices(n: int) -> list[tuple[int, ...]]:
        out = []

        def rec(prefix, remaining, slots):
            if slots == 1:
                out.append(prefix + (remaining,))
                return
            for v in range(remaining + 1):
                rec(prefix + (v,), remaining - v, slots - 1)

        rec((), n, m)
        return out

    def diff_rows(n: int) -> list[dict[int, int]]:
        src = multi_indices(n)
        dst = multi_indices(n + 1)
        dst_pos = {a: i for i, a in enumerate(dst)}
        r = L.rank
        if len(src) * len(dst) * r * r > max_cells:
            raise BudgetExceeded("periodic-tensor complex exceeds the cell budget")
        rows: list[dict[int, int]] = [dict() for _ in range(len(src) * r)]
        ident = IntMatrix.identity(r)
        for si, a in enumerate(src):
            for i in range(m):
                b = a[:i] + (a[i] + 1,) + a[i + 1 :]
                sign = -1 if sum(a[:i]) % 2 else 1
                op = (sigma_left[i] - ident) if a[i] % 2 == 0 else norm_left[i]
                col_base = dst_pos[b] * r
                for j in range(r):
                    row = rows[si * r + j]
                    oprow = op.data[j]
                    for kk in range(r):
                        v = oprow[kk]
                        if v:
                            key = col_base + kk
                            nv = row.get(key, 0) + sign * v
                            if nv:
                                row[key] = nv
                            else:
                                row.pop(key, None)
        return rows

    dn = diff_rows(degree)
    dprev = diff_rows(degree - 1)
    hom = _homology_from_rows(degree, len(multi_indices(degree)) * L.rank, dn, dprev)
    if hom.structure.free_rank:
        raise AssertionError("positive-degree cohomology of a finite group must be finite")
    return CohomologyResult(degree=degree, group=hom.structure, resolution_used="periodic-tensor")
