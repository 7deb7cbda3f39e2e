"""Exact integer matrices and their canonical forms.

Everything here runs over arbitrary-precision Python integers; there is no
floating point anywhere.  Lattices are row spans throughout the package, so
the row-style Hermite normal form is the canonical representation of a
lattice and two matrices span the same lattice iff their HNFs agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import NotUnimodular


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        g, x, y = -g, -x, -y
    return g, x, y


class IntMatrix:
    """Immutable integer matrix; rows are the unit of iteration."""

    __slots__ = ("rows", "cols", "data", "_hash")

    def __init__(self, data: Iterable[Sequence[int]], cols: int | None = None):
        frozen = tuple(tuple(int(x) for x in row) for row in data)
        if frozen:
            width = len(frozen[0])
            if any(len(r) != width for r in frozen):
                raise ValueError("ragged rows")
            if cols is not None and cols != width:
                raise ValueError("cols mismatch")
            cols = width
        elif cols is None:
            cols = 0
        self.rows = len(frozen)
        self.cols = cols
        self.data = frozen
        self._hash = None

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)), cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(tuple((0,) * cols for _ in range(rows)), cols=cols)

    @classmethod
    def row_vector(cls, row: Sequence[int]) -> "IntMatrix":
        return cls((row,), cols=len(row))

    @classmethod
    def diagonal(cls, entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return cls(tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)), cols=n)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.data[ij[0]][ij[1]]

    def row(self, i: int) -> tuple[int, ...]:
        return self.data[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.data)

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.cols, self.data))
        return self._hash

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self.data]!r})"

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        return IntMatrix(
            tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.data, other.data)),
            cols=self.cols,
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        return IntMatrix(
            tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(self.data, other.data)),
            cols=self.cols,
        )

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(tuple(tuple(-a for a in r) for r in self.data), cols=self.cols)

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(k * a for a in r) for r in self.data), cols=self.cols)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        other_t = tuple(zip(*other.data)) if other.data else ()
        out = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in other_t)
            for row in self.data
        )
        return IntMatrix(out, cols=other.cols)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.data)) if self.rows else (), cols=self.rows)

    def _same_shape(self, other: "IntMatrix") -> None:
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(all(a == 0 for a in r) for r in self.data)

    def is_identity(self) -> bool:
        return self.is_square and all(
            a == (1 if i == j else 0) for i, r in enumerate(self.data) for j, a in enumerate(r)
        )

    def is_permutation(self) -> bool:
        """True iff this is a permutation matrix."""
        if not self.is_square:
            return False
        seen = set()
        for r in self.data:
            ones = [j for j, a in enumerate(r) if a != 0]
            if len(ones) != 1 or r[ones[0]] != 1 or ones[0] in seen:
                return False
            seen.add(ones[0])
        return True

    def is_signed_permutation(self) -> bool:
        """True iff this is a permutation matrix with entries +-1."""
        if not self.is_square:
            return False
        seen = set()
        for r in self.data:
            hits = [j for j, a in enumerate(r) if a != 0]
            if len(hits) != 1 or abs(r[hits[0]]) != 1 or hits[0] in seen:
                return False
            seen.add(hits[0])
        return True

    def permutation(self) -> tuple[int, ...]:
        """Return the permutation j = p[i] for a permutation matrix."""
        if not self.is_permutation():
            raise ValueError("not a permutation matrix")
        return tuple(r.index(1) for r in self.data)

    def det(self) -> int:
        """Determinant by fraction-free Bareiss elimination."""
        if not self.is_square:
            raise ValueError("determinant of non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = [list(r) for r in self.data]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.is_square and abs(self.det()) == 1

    def inverse(self) -> "IntMatrix":
        """Exact inverse of a unimodular matrix."""
        if not self.is_square:
            raise NotUnimodular("matrix is not square")
        form = hnf(self)
        if form.rank != self.rows or not form.h_full.is_identity():
            raise NotUnimodular("matrix is not invertible over the integers")
        return form.U


def stack(matrices: Sequence[IntMatrix]) -> IntMatrix:
    """Vertical concatenation; all matrices must share a column count."""
    mats = [m for m in matrices]
    if not mats:
        raise ValueError("nothing to stack")
    cols = mats[0].cols
    rows: list[tuple[int, ...]] = []
    for m in mats:
        if m.cols != cols:
            raise ValueError("column mismatch in stack")
        rows.extend(m.data)
    return IntMatrix(rows, cols=cols)


def block_diag(matrices: Sequence[IntMatrix]) -> IntMatrix:
    """Block-diagonal assembly."""
    total_r = sum(m.rows for m in matrices)
    total_c = sum(m.cols for m in matrices)
    out = [[0] * total_c for _ in range(total_r)]
    r0 = c0 = 0
    for m in matrices:
        for i, row in enumerate(m.data):
            out[r0 + i][c0 : c0 + m.cols] = list(row)
        r0 += m.rows
        c0 += m.cols
    return IntMatrix(out, cols=total_c)


@dataclass(frozen=True)
class SmithForm:
    """U @ A @ V = D with U, V unimodular and D = diag(d1 | d2 | ...)."""

    D: IntMatrix
    U: IntMatrix
    V: IntMatrix

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        """All nonzero diagonal entries, in divisibility order."""
        k = min(self.D.rows, self.D.cols)
        return tuple(self.D.data[i][i] for i in range(k) if self.D.data[i][i] != 0)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


@dataclass(frozen=True)
class HermiteForm:
    """U @ A = [H; 0] with U unimodular and H the canonical row-style HNF.

    ``H`` holds only the ``rank`` nonzero rows (so a rank-0 matrix has an
    empty H); ``h_full`` restores the zero rows for shape-preserving uses.
    """

    H: IntMatrix
    U: IntMatrix
    rank: int
    source_rows: int

    @property
    def h_full(self) -> IntMatrix:
        pad = IntMatrix.zeros(self.source_rows - self.rank, self.H.cols)
        return stack([self.H, pad]) if self.source_rows > self.rank else self.H

    @property
    def kernel_rows(self) -> IntMatrix:
        """Rows of U mapping to zero; a saturated basis of the left kernel."""
        return IntMatrix(self.U.data[self.rank :], cols=self.U.cols)


def hnf(A: IntMatrix) -> HermiteForm:
    """Canonical row-style Hermite normal form with unimodular transform.

    Pivots are positive, entries above each pivot are reduced into
    [0, pivot), and pivot columns strictly increase.  Two matrices have the
    same row span over Z iff their HNFs coincide.
    """
    m, n = A.rows, A.cols
    work = [list(r) for r in A.data]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    r = 0
    for j in range(n):
        # Clear column j below row r down to a single pivot.
        pivot = None
        for i in range(r, m):
            if work[i][j] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        for i in range(pivot + 1, m):
            if work[i][j] == 0:
                continue
            a, b = work[pivot][j], work[i][j]
            if b % a == 0:
                q = b // a
                _row_sub(work, i, pivot, q, j)
                _row_sub(U, i, pivot, q, 0)
            else:
                g, x, y = xgcd(a, b)
                _row_combine(work, U, pivot, i, x, y, -(b // g), a // g)
        if pivot != r:
            work[r], work[pivot] = work[pivot], work[r]
            U[r], U[pivot] = U[pivot], U[r]
        if work[r][j] < 0:
            work[r] = [-x for x in work[r]]
            U[r] = [-x for x in U[r]]
        p = work[r][j]
        for i in range(r):
            q = work[i][j] // p  # floor -> entries land in [0, p)
            if q:
                _row_sub(work, i, r, q, 0)
                _row_sub(U, i, r, q, 0)
        r += 1
        if r == m:
            break
    return HermiteForm(
        H=IntMatrix(work[:r], cols=n),
        U=IntMatrix(U, cols=m),
        rank=r,
        source_rows=m,
    )


def _row_sub(mat: list[list[int]], i: int, k: int, q: int, start: int) -> None:
    ri, rk = mat[i], mat[k]
    for j in range(start, len(ri)):
        ri[j] -= q * rk[j]


def _row_combine(work, U, p, i, x, y, u, v) -> None:
    # rows (p, i) <- (x*p + y*i, u*p + v*i); the 2x2 transform has det 1.
    for mat in (work, U):
        rp, ri = mat[p], mat[i]
        for j in range(len(rp)):
            a, b = rp[j], ri[j]
            rp[j] = x * a + y * b
            ri[j] = u * a + v * b


def snf(A: IntMatrix) -> SmithForm:
    """Smith normal form with both unimodular transforms.

    Pivots are chosen by least absolute value; the final pass enforces the
    divisibility chain, so the invariant factors are canonical.
    """
    m, n = A.rows, A.cols
    D = [list(r) for r in A.data]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def col_sub(mat, j, k, q):
        for row in mat:
            row[j] -= q * row[k]

    def col_combine(mat, j, k, x, y, u, v):
        for row in mat:
            a, b = row[j], row[k]
            row[j] = x * a + y * b
            row[k] = u * a + v * b

    t = 0
    limit = min(m, n)
    while t < limit:
        # Find nonzero entry of least absolute value in the trailing block.
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = D[i][j]
                if a != 0 and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            D[t], D[bi] = D[bi], D[t]
            U[t], U[bi] = U[bi], U[t]
        if bj != t:
            for row in D:
                row[t], row[bj] = row[bj], row[t]
            for row in V:
                row[t], row[bj] = row[bj], row[t]
        while True:
            # Clear column t with row operations.
            for i in range(t + 1, m):
                if D[i][t] == 0:
                    continue
                a, b = D[t][t], D[i][t]
                if b % a == 0:
                    q = b // a
                    _row_sub(D, i, t, q, 0)
                    _row_sub(U, i, t, q, 0)
                else:
                    g, x, y = xgcd(a, b)
                    _row_combine(D, U, t, i, x, y, -(b // g), a // g)
            # Clear row t with column operations.
            dirty = False
            for j in range(t + 1, n):
                if D[t][j] == 0:
                    continue
                a, b = D[t][t], D[t][j]
                if b % a == 0:
                    q = b // a
                    col_sub(D, j, t, q)
                    col_sub(V, j, t, q)
                else:
                    g, x, y = xgcd(a, b)
                    col_combine(D, t, j, x, y, -(b // g), a // g)
                    col_combine(V, t, j, x, y, -(b // g), a // g)
                    dirty = True
            if not dirty and all(D[i][t] == 0 for i in range(t + 1, m)):
                break
        t += 1

    # Enforce the divisibility chain d_i | d_{i+1}.
    changed = True
    while changed:
        changed = False
        for i in range(limit - 1):
            a, b = D[i][i], D[i + 1][i + 1]
            if a != 0 and b % a != 0:
                # Fold b into position (i, i+1), then re-clear the 2x2 block.
                col_sub(D, i, i + 1, -1)
                col_sub(V, i, i + 1, -1)
                g, x, y = xgcd(a, b)
                _row_combine(D, U, i, i + 1, x, y, -(b // g), a // g)
                # Row op may leave D[i][i+1] != 0; clear by column op.
                q = D[i][i + 1] // D[i][i]
                col_sub(D, i + 1, i, q)
                col_sub(V, i + 1, i, q)
                changed = True
    for i in range(limit):
        if D[i][i] < 0:
            for row in D:
                row[i] = -row[i]
            for row in V:
                row[i] = -row[i]
    # Sort zero diagonal entries to the end (they already are, by rank logic).
    return SmithForm(D=IntMatrix(D, cols=n), U=IntMatrix(U, cols=m), V=IntMatrix(V, cols=n))


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Canonical basis of the left kernel {x : x @ A = 0}; saturated."""
    form = hnf(A)
    ker = form.kernel_rows
    return hnf(ker).H


def cokernel_invariants(A: IntMatrix) -> tuple[tuple[int, ...], int]:
    """Structure of Z^rows / (column span of A).

    Returns (invariant factors > 1 in divisibility order, free rank).
    """
    facs = snf(A).invariant_factors
    free = A.rows - len(facs)
    return tuple(d for d in facs if d > 1), free


def row_span_invariants(A: IntMatrix) -> tuple[tuple[int, ...], int]:
    """Structure of Z^cols / (row span of A)."""
    facs = snf(A).invariant_factors
    return tuple(d for d in facs if d > 1), A.cols - len(facs)


def same_row_span(A: IntMatrix, B: IntMatrix) -> bool:
    return hnf(A).H == hnf(B).H


def row_span_contains(A: IntMatrix, v: Sequence[int]) -> bool:
    """Whether the row span of A contains the vector v."""
    return solve_left(A, IntMatrix.row_vector(v)) is not None


def solve_left(A: IntMatrix, B: IntMatrix) -> IntMatrix | None:
    """Solve X @ A = B over the integers; None if no solution exists."""
    form = hnf(A)
    H = form.H
    coords: list[list[int]] = []
    pivots = []
    for i in range(form.rank):
        j = next(k for k, a in enumerate(H.data[i]) if a != 0)
        pivots.append(j)
    for brow in B.data:
        residual = list(brow)
        x = [0] * form.rank
        for i, j in enumerate(pivots):
            p = H.data[i][j]
            if residual[j] % p != 0:
                return None
            q = residual[j] // p
            x[i] = q
            if q:
                hrow = H.data[i]
                for k in range(len(residual)):
                    residual[k] -= q * hrow[k]
        if any(residual):
            return None
        coords.append(x)
    X_h = IntMatrix(coords, cols=form.rank)
    # x_H @ H = b and H = (U A)[:rank]  =>  (x_H | 0) @ U @ A = b.
    U_top = IntMatrix(form.U.data[: form.rank], cols=form.U.cols)
    return X_h @ U_top


def intersect_row_spans(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    """Canonical basis of (row span of A) âˆ© (row span of B)."""
    if A.cols != B.cols:
        raise ValueError("ambient mismatch")
    # x = u@A = v@B  <=>  (u, -v) is in the left kernel of [A; B].
    ker = hnf(stack([A, B])).kernel_rows
    if ker.rows == 0:
        return IntMatrix((), cols=A.cols)
    U_part = IntMatrix([row[: A.rows] for row in ker.data], cols=A.rows)
    return hnf(U_part @ A).H
