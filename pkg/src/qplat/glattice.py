"""Lattices with finite group actions and equivariant maps.

Conventions, fixed project-wide: lattice elements are row vectors and a
group element g acts on the right, x |-> x @ action(g), with
action(g) @ action(h) = action(gh).  Equivariance of a map F: source ->
target therefore reads  action_src(g) @ F == F @ action_tgt(g).

Groups are closures of generator matrices.  The closure is computed
lazily, so constructions over large Weyl groups stay cheap as long as
only generator-level checks are needed (products of permutation
matrices are permutation matrices, and the set where two actions agree
is a subgroup, so generator checks suffice for those predicates).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import (
    GroupMismatch,
    GroupTooLarge,
    NotASubgroupElement,
    NotEquivariant,
    NotInvariant,
    NotPermutationInThisBasis,
    NotUnimodular,
)
from .intmat import IntMatrix, block_diag, hnf, kernel_basis, snf, solve_left, stack

DEFAULT_MAX_ORDER = 20000


class FinGroup:
    """A finite group presented as the closure of invertible integer matrices."""

    def __init__(self, generators: Sequence[IntMatrix], *, max_order: int = DEFAULT_MAX_ORDER):
        gens = tuple(generators)
        if not gens:
            raise ValueError("need at least one generator (use identity for the trivial group)")
        n = gens[0].rows
        for g in gens:
            if not g.is_square or g.rows != n:
                raise ValueError("generators must be square matrices of equal size")
            if not g.is_unimodular():
                raise NotUnimodular("generator is not invertible over the integers")
        self.generators = gens
        self.degree = n
        self.max_order = max_order
        self._elements: tuple[IntMatrix, ...] | None = None
        self._index: dict[IntMatrix, int] = {}
        self._parent: list[tuple[int, int]] = []  # element i = parent * generator
        self._mult_cache: dict[tuple[int, int], int] = {}
        self._inv_cache: dict[int, int] = {}

    # -- closure ---------------------------------------------------------

    def _close(self) -> None:
        if self._elements is not None:
            return
        ident = IntMatrix.identity(self.degree)
        elements = [ident]
        index = {ident: 0}
        parent: list[tuple[int, int]] = [(-1, -1)]
        frontier = [0]
        while frontier:
            nxt = []
            for i in frontier:
                for gpos, g in enumerate(self.generators):
                    prod = elements[i] @ g
                    if prod not in index:
                        if len(elements) >= self.max_order:
                            raise GroupTooLarge(
                                f"group closure exceeds cap of {self.max_order} elements"
                            )
                        index[prod] = len(elements)
                        elements.append(prod)
                        parent.append((i, gpos))
                        nxt.append(index[prod])
            frontier = nxt
        self._elements = tuple(elements)
        self._index = index
        self._parent = parent

    @property
    def elements(self) -> tuple[IntMatrix, ...]:
        self._close()
        return self._elements

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity_index(self) -> int:
        return 0

    def index_of(self, mat: IntMatrix) -> int:
        self._close()
        try:
            return self._index[mat]
        except KeyError:
            raise NotASubgroupElement("matrix is not an element of this group") from None

    def word(self, i: int) -> tuple[int, ...]:
        """Generator positions whose product (left to right) is element i."""
        self._close()
        out: list[int] = []
        while i != 0:
            i, gpos = self._parent[i]
            out.append(gpos)
        return tuple(reversed(out))

    def mult(self, i: int, j: int) -> int:
        key = (i, j)
        got = self._mult_cache.get(key)
        if got is None:
            got = self.index_of(self.elements[i] @ self.elements[j])
            self._mult_cache[key] = got
        return got

    def inv(self, i: int) -> int:
        got = self._inv_cache.get(i)
        if got is None:
            got = self.index_of(self.elements[i].inverse())
            self._inv_cache[i] = got
        return got

    def element_order(self, i: int) -> int:
        k, j = 1, i
        while j != 0:
            j = self.mult(j, i)
            k += 1
        return k

    def is_abelian(self) -> bool:
        gens = [self.index_of(g) for g in self.generators]
        return all(self.mult(a, b) == self.mult(b, a) for a in gens for b in gens)

    def cyclic_subgroups(self) -> list[tuple[int, ...]]:
        """One index tuple per distinct nontrivial cyclic subgroup."""
        seen = set()
        out = []
        for i in range(1, self.order):
            members = [0]
            j = i
            while j != 0:
                members.append(j)
                j = self.mult(j, i)
            key = frozenset(members)
            if key not in seen:
                seen.add(key)
                out.append(tuple(sorted(members)))
        return out

    def subgroup(self, generator_indices: Sequence[int]) -> tuple["FinGroup", list[int]]:
        """Closure of the given elements; returns (group, element index map)."""
        mats = [self.elements[i] for i in generator_indices]
        sub = FinGroup(mats, max_order=self.max_order)
        mapping = [self.index_of(m) for m in sub.elements]
        return sub, mapping

    def elementary_abelian(self) -> tuple[int, list[int]] | None:
        """(p, independent generator indices) if the group is (Z/p)^m, else None."""
        if self.order == 1 or not self.is_abelian():
            return None
        orders = {self.element_order(i) for i in range(1, self.order)}
        if len(orders) != 1:
            return None
        p = orders.pop()
        if any(p % q == 0 and q != p and q > 1 for q in range(2, p)):
            return None
        gens: list[int] = []
        span = {0}
        for i in range(1, self.order):
            if i in span:
                continue
            gens.append(i)
            new_span = set(span)
            for s in span:
                j = s
                for _ in range(p - 1):
                    j = self.mult(j, i)
                    new_span.add(j)
            span = new_span
            if len(span) == self.order:
                break
        if len(span) != self.order:
            return None
        return p, gens


def cyclic_group(n: int, *, max_order: int = DEFAULT_MAX_ORDER) -> FinGroup:
    """Z/n as the cyclic permutation matrix of degree n (degree 1 for n = 1)."""
    if n == 1:
        return FinGroup([IntMatrix.identity(1)], max_order=max_order)
    rows = [[1 if j == (i + 1) % n else 0 for j in range(n)] for i in range(n)]
    return FinGroup([IntMatrix(rows)], max_order=max_order)


def abelian_group(orders: Sequence[int], *, max_order: int = DEFAULT_MAX_ORDER) -> FinGroup:
    """Direct product of cyclic groups as block-diagonal permutation matrices."""
    cycles = [cyclic_group(n).generators[0] for n in orders]
    gens = []
    for i in range(len(orders)):
        blocks = [cycles[j] if j == i else IntMatrix.identity(cycles[j].rows) for j in range(len(orders))]
        gens.append(block_diag(blocks))
    return FinGroup(gens, max_order=max_order)


def close_group(generators: Sequence[IntMatrix], *, max_order: int = DEFAULT_MAX_ORDER) -> FinGroup:
    """Eagerly closed group of the given generator matrices."""
    g = FinGroup(generators, max_order=max_order)
    g._close()
    return g


class GLattice:
    """Free Z-module of finite rank with a right action of a FinGroup."""

    def __init__(
        self,
        group: FinGroup,
        gen_action: Sequence[IntMatrix],
        *,
        check: bool = True,
    ):
        acts = tuple(gen_action)
        if len(acts) != len(group.generators):
            raise ValueError("one action matrix per group generator required")
        rank = acts[0].rows if acts else 0
        for a in acts:
            if not a.is_square or a.rows != rank:
                raise ValueError("action matrices must be square of equal size")
            if check and not a.is_unimodular():
                raise NotUnimodular("action matrix is not invertible over the integers")
        self.group = group
        self.rank = rank
        self.gen_action = acts
        self._action_cache: dict[int, IntMatrix] = {}

    def action(self, i: int) -> IntMatrix:
        """Action matrix of group element i (computed along the closure tree)."""
        got = self._action_cache.get(i)
        if got is not None:
            return got
        if i == 0:
            mat = IntMatrix.identity(self.rank)
        else:
            parent, gpos = self.group._parent[i]
            mat = self.action(parent) @ self.gen_action[gpos]
        self._action_cache[i] = mat
        return mat

    def left_action(self, i: int) -> IntMatrix:
        """Matrix of the associated left module structure, action(g^-1)."""
        return self.action(self.group.inv(i))

    def validate_homomorphism(self) -> None:
        """Exhaustive check action(g) @ action(h) == action(gh)."""
        n = self.group.order
        for i in range(n):
            ai = self.action(i)
            for gpos, g in enumerate(self.group.generators):
                j = self.group.index_of(g)
                if ai @ self.gen_action[gpos] != self.action(self.group.mult(i, j)):
                    raise NotUnimodular("action is not a homomorphism")

    def __repr__(self) -> str:
        return f"GLattice(rank={self.rank}, gens={len(self.gen_action)})"


def trivial_lattice(group: FinGroup, rank: int) -> GLattice:
    return GLattice(group, [IntMatrix.identity(rank) for _ in group.generators], check=False)


def regular_lattice(group: FinGroup) -> GLattice:
    """Z[G] with basis indexed by group elements, e_h . g = e_{hg}."""
    n = group.order
    acts = []
    for g in group.generators:
        j = group.index_of(g)
        rows = [[0] * n for _ in range(n)]
        for h in range(n):
            rows[h][group.mult(h, j)] = 1
        acts.append(IntMatrix(rows))
    return GLattice(group, acts, check=False)


def coset_lattice(group: FinGroup, subgroup_indices: Sequence[int]) -> GLattice:
    """Permutation lattice Z[G/H] for the subgroup generated by the given elements."""
    sub, members = group.subgroup(subgroup_indices)
    member_set = set(members)
    cosets: list[frozenset[int]] = []
    coset_of: dict[int, int] = {}
    for g in range(group.order):
        if g in coset_of:
            continue
        coset = frozenset(group.mult(h, g) for h in member_set)
        k = len(cosets)
        cosets.append(coset)
        for x in coset:
            coset_of[x] = k
    acts = []
    for gen in group.generators:
        j = group.index_of(gen)
        rows = [[0] * len(cosets) for _ in cosets]
        for k, coset in enumerate(cosets):
            rep = next(iter(coset))
            rows[k][coset_of[group.mult(rep, j)]] = 1
        acts.append(IntMatrix(rows))
    return GLattice(group, acts, check=False)


def direct_sum(L1: GLattice, L2: GLattice, mode: str = "same-group") -> GLattice:
    """Block direct sum, either over a shared group or over the product group."""
    if mode == "same-group":
        if L1.group is not L2.group:
            raise GroupMismatch("same-group direct sum needs an identical group object")
        acts = [block_diag([a, b]) for a, b in zip(L1.gen_action, L2.gen_action)]
        return GLattice(L1.group, acts, check=False)
    if mode == "product-group":
        d1 = L1.group.degree
        d2 = L2.group.degree
        gens = [block_diag([g, IntMatrix.identity(d2)]) for g in L1.group.generators]
        gens += [block_diag([IntMatrix.identity(d1), h]) for h in L2.group.generators]
        group = FinGroup(gens, max_order=max(L1.group.max_order, L2.group.max_order))
        acts = [block_diag([a, IntMatrix.identity(L2.rank)]) for a in L1.gen_action]
        acts += [block_diag([IntMatrix.identity(L1.rank), b]) for b in L2.gen_action]
        return GLattice(group, acts, check=False)
    raise ValueError(f"unknown mode {mode!r}")


def dual(L: GLattice) -> GLattice:
    """Contragredient lattice: action(g) |-> transpose(action(g^-1))."""
    acts = [a.inverse().transpose() for a in L.gen_action]
    return GLattice(L.group, acts, check=False)


def restrict(L: GLattice, generators: Sequence[IntMatrix | int]) -> GLattice:
    """Restriction of the action to the subgroup generated by the given elements.

    Generators may be element indices or matrices in the group's defining
    representation.
    """
    idxs = [
        g if isinstance(g, int) else L.group.index_of(g)
        for g in generators
    ]
    sub, _ = L.group.subgroup(idxs)
    # Action of a subgroup generator = action of the corresponding element.
    acts = []
    for mat in sub.generators:
        acts.append(L.action(L.group.index_of(mat)))
    return GLattice(sub, acts, check=False)


def invariant_sublattice(L: GLattice, rows: IntMatrix) -> tuple[GLattice, IntMatrix]:
    """Sublattice spanned by the given independent rows, with induced action.

    Returns (sublattice in its own basis, the basis rows in L's coordinates).
    Raises NotInvariant if some generator moves the span off itself.
    """
    if hnf(rows).rank != rows.rows:
        raise ValueError("rows are not independent")
    acts = []
    for a in L.gen_action:
        sol = solve_left(rows, rows @ a)
        if sol is None:
            raise NotInvariant("sublattice is not stable under the action")
        acts.append(sol)
    return GLattice(L.group, acts), rows


@dataclass
class PermutationWitness:
    """Certifies that the action permutes a basis (possibly with signs)."""

    basis: IntMatrix
    gen_perms: tuple[tuple[int, ...], ...]
    signed: bool = False
    gen_signs: tuple[tuple[int, ...], ...] | None = None


def verify_permutation_basis(L: GLattice, basis: IntMatrix) -> PermutationWitness:
    """Check that in the given basis every generator acts by a permutation matrix.

    Products of permutation matrices are permutation matrices, so the
    generator check certifies the whole group.
    """
    if basis.rows != L.rank or not basis.is_unimodular():
        raise NotUnimodular("witness basis must be a unimodular change of basis")
    inv = basis.inverse()
    perms = []
    for a in L.gen_action:
        conj = basis @ a @ inv
        if not conj.is_permutation():
            raise NotPermutationInThisBasis("a generator is not a permutation in this basis")
        perms.append(conj.permutation())
    return PermutationWitness(basis=basis, gen_perms=tuple(perms))


def is_sign_permutation(L: GLattice) -> PermutationWitness | None:
    """Witness that every generator is a signed permutation in the current basis."""
    perms = []
    signs = []
    for a in L.gen_action:
        if not a.is_signed_permutation():
            return None
        p = []
        s = []
        for row in a.data:
            j = next(k for k, x in enumerate(row) if x != 0)
            p.append(j)
            s.append(row[j])
        perms.append(tuple(p))
        signs.append(tuple(s))
    return PermutationWitness(
        basis=IntMatrix.identity(L.rank),
        gen_perms=tuple(perms),
        signed=True,
        gen_signs=tuple(signs),
    )


@dataclass
class EquivariantMap:
    """Equivariant homomorphism given by x |-> x @ matrix."""

    source: GLattice
    target: GLattice
    matrix: IntMatrix


def equivariant_map(source: GLattice, target: GLattice, matrix: IntMatrix) -> EquivariantMap:
    """Build a checked equivariant map between lattices over the same group."""
    if source.group is not target.group:
        raise GroupMismatch("source and target must share the group object")
    if matrix.rows != source.rank or matrix.cols != target.rank:
        raise ValueError("matrix shape does not match the lattices")
    for a_s, a_t in zip(source.gen_action, target.gen_action):
        if a_s @ matrix != matrix @ a_t:
            raise NotEquivariant("map does not commute with the action")
    return EquivariantMap(source, target, matrix)


def kernel_lattice(f: EquivariantMap) -> tuple[GLattice, IntMatrix]:
    """Saturated kernel with its induced action; returns (lattice, basis rows)."""
    K = kernel_basis(f.matrix)
    if K.rows == 0:
        return GLattice(f.source.group, [IntMatrix((), cols=0) for _ in f.source.gen_action], check=False), K
    return invariant_sublattice(f.source, K)


def image_lattice(f: EquivariantMap) -> tuple[GLattice, IntMatrix]:
    """Image sublattice of the target with its induced action."""
    H = hnf(f.matrix).H
    if H.rows == 0:
        return GLattice(f.target.group, [IntMatrix((), cols=0) for _ in f.target.gen_action], check=False), H
    return invariant_sublattice(f.target, H)


@dataclass(frozen=True)
class QuotientInfo:
    """Structure of a quotient L / L' with an action-triviality flag."""

    invariant_factors: tuple[int, ...]
    free_rank: int
    trivial_action: bool


def quotient_invariants(L: GLattice, sub_rows: IntMatrix) -> QuotientInfo:
    """Invariants of L / <sub_rows> and whether the group acts trivially on it."""
    if sub_rows.cols != L.rank:
        raise ValueError("sublattice rows must live in L's coordinates")
    if sub_rows.rows == 0:
        trivial = all(a.is_identity() for a in L.gen_action)
        return QuotientInfo(invariant_factors=(), free_rank=L.rank, trivial_action=trivial)
    facs = snf(sub_rows).invariant_factors
    torsion = tuple(d for d in facs if d > 1)
    free = L.rank - len(facs)
    trivial = True
    for a in L.gen_action:
        delta = a - IntMatrix.identity(L.rank)
        if solve_left(sub_rows, delta) is None:
            trivial = False
            break
    return QuotientInfo(invariant_factors=torsion, free_rank=free, trivial_action=trivial)


def lattice_from_ambient(
    basis_rows: IntMatrix,
    ambient_gens: Sequence[IntMatrix],
    *,
    group: FinGroup | None = None,
    max_order: int = DEFAULT_MAX_ORDER,
) -> GLattice:
    """Lattice spanned by basis_rows inside an ambient right action.

    The acting group is (the closure of) the ambient generator matrices; the
    returned lattice carries the action rewritten in the given basis.  Raises
    NotInvariant if the span is not stable.
    """
    if group is None:
        group = FinGroup(ambient_gens, max_order=max_order)
    acts = []
    for g in ambient_gens:
        sol = solve_left(basis_rows, basis_rows @ g)
        if sol is None:
            raise NotInvariant("ambient action does not preserve the span")
        acts.append(sol)
    return GLattice(group, acts)


def map_quotient_invariants(f: EquivariantMap) -> QuotientInfo:
    """Structure of target / image(f)."""
    img = hnf(f.matrix).H
    if img.rows == 0:
        img = IntMatrix.zeros(1, f.target.rank)
    return quotient_invariants(f.target, img)
