"""Bar-complex cohomology, Sha^2, and the periodic-tensor fast path."""

import random

import pytest

from qplat.cohomology import (
    AbGroupStructure,
    h_n,
    merge_structures,
    periodic_resolution_h_n,
    sha2,
)
from qplat.errors import BudgetExceeded, NotElementaryAbelian
from qplat.glattice import (
    GLattice,
    abelian_group,
    close_group,
    coset_lattice,
    cyclic_group,
    direct_sum,
    regular_lattice,
    restrict,
    trivial_lattice,
)
from qplat.intmat import IntMatrix

from .oracles import dense_h_n, j_lattice


def sign_lattice():
    group = cyclic_group(2)
    return group, GLattice(group, [IntMatrix([[-1]])])


def s3_group():
    return close_group(
        [
            IntMatrix([[0, 1, 0], [1, 0, 0], [0, 0, 1]]),
            IntMatrix([[1, 0, 0], [0, 0, 1], [0, 1, 0]]),
        ]
    )


class TestHn:
    def test_h1_sign_is_z2(self):
        # Cocycles f with f(s) + s.f(s) = 0 are everything; coboundaries are even.
        group, lat = sign_lattice()
        assert h_n(group, lat, 1).group == AbGroupStructure((2,))

    def test_h2_cyclic_trivial_z(self):
        for n in (2, 3, 4, 6):
            group = cyclic_group(n)
            lat = trivial_lattice(group, 1)
            assert h_n(group, lat, 1).group == AbGroupStructure(())
            assert h_n(group, lat, 2).group == AbGroupStructure((n,))

    def test_h2_free_modules_vanish(self):
        for group in (cyclic_group(2), cyclic_group(3), cyclic_group(4),
                      abelian_group([2, 2]), s3_group()):
            reg = regular_lattice(group)
            assert h_n(group, reg, 2).group == AbGroupStructure(())

    def test_h1_klein_on_j(self):
        # Frozen from the dense oracle; matches the connecting-map value
        # H^1(J) = H^2(Z) = Hom(Gamma, Q/Z) for Gamma = (Z/2)^2.
        group = abelian_group([2, 2])
        J = j_lattice(group)
        assert h_n(group, J, 1).group == AbGroupStructure((2, 2))
        assert dense_h_n(J, 1) == (2, 2)

    def test_h3_sign_periodicity(self):
        group, lat = sign_lattice()
        assert h_n(group, lat, 3).group == AbGroupStructure((2,))

    def test_matches_dense_oracle(self):
        rng = random.Random(5)
        group = abelian_group([2, 2])
        for lat in (j_lattice(group), regular_lattice(group), trivial_lattice(group, 2)):
            for degree in (1, 2):
                assert h_n(group, lat, degree).group.invariant_factors == dense_h_n(lat, degree)

    def test_budget(self):
        group = abelian_group([2, 2])
        with pytest.raises(BudgetExceeded):
            h_n(group, regular_lattice(group), 2, max_cells=10)


class TestSha2:
    def test_klein_j_is_z2(self):
        group = abelian_group([2, 2])
        assert sha2(group, j_lattice(group)) == AbGroupStructure((2,))

    def test_cyclic_always_trivial(self):
        for n in (2, 5, 8, 16):
            group = cyclic_group(n)
            assert sha2(group, regular_lattice(group)) == AbGroupStructure(())

    def test_free_module_vanishes(self):
        group = abelian_group([2, 2])
        assert sha2(group, regular_lattice(group)) == AbGroupStructure(())

    def test_coset_lattices_vanish_small(self):
        group = abelian_group([2, 2])
        for sub_gens in ([0], [1], [group.order - 1]):
            lat = coset_lattice(group, sub_gens)
            assert sha2(group, lat) == AbGroupStructure(())

    def test_additivity_random(self):
        rng = random.Random(11)
        group = abelian_group([2, 2])
        pool = [j_lattice(group), trivial_lattice(group, 1), coset_lattice(group, [1])]
        for _ in range(6):
            a, b = rng.choice(pool), rng.choice(pool)
            s = sha2(group, direct_sum(a, b))
            merged = merge_structures(sha2(group, a), sha2(group, b))
            assert s == merged

    def test_s3_regular(self):
        group = s3_group()
        assert sha2(group, regular_lattice(group)) == AbGroupStructure(())


class TestPeriodic:
    def test_rejects_non_elementary(self):
        group = cyclic_group(4)
        with pytest.raises(NotElementaryAbelian):
            periodic_resolution_h_n(group, trivial_lattice(group, 1), 2)

    def test_agrees_with_bar_on_klein_j(self):
        group = abelian_group([2, 2])
        J = j_lattice(group)
        for degree in (1, 2, 3):
            assert (
                periodic_resolution_h_n(group, J, degree).group
                == h_n(group, J, degree).group
            )

    def test_trivial_lattice_values(self):
        # H^1(G, Z) = Hom(G, Z) = 0 and H^2(G, Z) = Hom(G, Q/Z) = (Z/p)^m.
        for p, m in ((2, 2), (3, 2), (2, 3)):
            group = abelian_group([p] * m)
            lat = trivial_lattice(group, 1)
            r1 = periodic_resolution_h_n(group, lat, 1)
            r2 = periodic_resolution_h_n(group, lat, 2)
            assert r1.group == AbGroupStructure(())
            assert r2.group == AbGroupStructure(tuple([p] * m))
            assert r1.resolution_used == "periodic-tensor"

    def test_agrees_on_z3_squared_rank4(self):
        # (Z/3)^2 acting on a rank-4 lattice: two 3-cycles on Z^2 blocks of
        # the reduced regular representation of Z/3.
        c3_red = IntMatrix([[0, 1], [-1, -1]])
        g1 = IntMatrix([[0, 1, 0, 0], [-1, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
        g2 = IntMatrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, -1, -1]])
        group = close_group([g1, g2])
        lat = GLattice(group, [g1, g2])
        assert (
            periodic_resolution_h_n(group, lat, 2).group
            == h_n(group, lat, 2).group
        )
