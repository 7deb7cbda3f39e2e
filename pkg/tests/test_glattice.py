"""Group closure, lattice actions, equivariant maps, witnesses."""

import pytest

from qplat.errors import (
    GroupTooLarge,
    NotEquivariant,
    NotInvariant,
    NotPermutationInThisBasis,
    NotUnimodular,
)
from qplat.glattice import (
    FinGroup,
    GLattice,
    abelian_group,
    close_group,
    coset_lattice,
    cyclic_group,
    direct_sum,
    dual,
    equivariant_map,
    image_lattice,
    invariant_sublattice,
    is_sign_permutation,
    kernel_lattice,
    lattice_from_ambient,
    quotient_invariants,
    regular_lattice,
    restrict,
    trivial_lattice,
    verify_permutation_basis,
)
from qplat.intmat import IntMatrix


def weyl_b2_gens():
    # Signed permutations of Z^2: swap and a sign flip.
    return [IntMatrix([[0, 1], [1, 0]]), IntMatrix([[1, 0], [0, -1]])]


def weyl_g2_gens():
    # Simple reflections on the root basis; dihedral of order 12.
    return [IntMatrix([[-1, 0], [3, 1]]), IntMatrix([[1, 1], [0, -1]])]


class TestCloseGroup:
    def test_order_two(self):
        g = close_group([IntMatrix([[-1]])])
        assert g.order == 2

    def test_weyl_b2(self):
        assert close_group(weyl_b2_gens()).order == 8

    def test_weyl_g2(self):
        assert close_group(weyl_g2_gens()).order == 12

    def test_cap(self):
        with pytest.raises(GroupTooLarge):
            close_group(weyl_b2_gens(), max_order=5)

    def test_not_unimodular(self):
        with pytest.raises(NotUnimodular):
            FinGroup([IntMatrix([[2]])])

    def test_mult_inverse_order(self):
        g = close_group(weyl_b2_gens())
        for i in range(g.order):
            assert g.mult(i, g.inv(i)) == 0
            assert g.element_order(i) in (1, 2, 4)

    def test_elementary_abelian_detection(self):
        k4 = abelian_group([2, 2])
        got = k4.elementary_abelian()
        assert got is not None and got[0] == 2 and len(got[1]) == 2
        assert cyclic_group(4).elementary_abelian() is None
        assert close_group(weyl_b2_gens()).elementary_abelian() is None


class TestHomomorphism:
    def test_exhaustive_small_groups(self):
        for group in (cyclic_group(6), abelian_group([2, 2]), close_group(weyl_b2_gens()),
                      close_group(weyl_g2_gens())):
            for lat in (regular_lattice(group), trivial_lattice(group, 2)):
                lat.validate_homomorphism()

    def test_regular_is_permutation(self):
        # Z[G] in the standard basis has a regular permutation witness,
        # for every closed group of modest order here.
        for group in (cyclic_group(5), abelian_group([2, 4]), close_group(weyl_b2_gens()),
                      close_group(weyl_g2_gens()), abelian_group([2, 2, 2])):
            w = verify_permutation_basis(regular_lattice(group), IntMatrix.identity(group.order))
            assert len(w.gen_perms) == len(group.generators)


class TestDual:
    def test_involution(self):
        lat = GLattice(close_group(weyl_g2_gens()), weyl_g2_gens())
        again = dual(dual(lat))
        assert again.gen_action == lat.gen_action

    def test_permutation_self_dual(self):
        group = close_group(weyl_b2_gens())
        reg = regular_lattice(group)
        assert dual(reg).gen_action == reg.gen_action

    def test_rank1_sign(self):
        group = close_group([IntMatrix([[-1]])])
        lat = GLattice(group, [IntMatrix([[-1]])])
        assert dual(lat).gen_action == lat.gen_action


class TestRestrict:
    def test_trivial_subgroup(self):
        group = close_group(weyl_b2_gens())
        lat = GLattice(group, weyl_b2_gens())
        sub = restrict(lat, [0])
        assert sub.group.order == 1

    def test_regular_restriction_is_coset_sum(self):
        # Z[G] restricted to H decomposes into |G:H| regular H-orbits.
        group = abelian_group([2, 2])
        reg = regular_lattice(group)
        h = group.index_of(group.generators[0])
        sub = restrict(reg, [h])
        # Orbit decomposition oracle: each basis vector's H-orbit has size |H|;
        # the permutation action on basis indices splits into 2 orbits of size 2.
        w = verify_permutation_basis(sub, IntMatrix.identity(4))
        perm = w.gen_perms[0]
        orbits = set()
        for i in range(4):
            orbits.add(frozenset({i, perm[i]}))
        assert len(orbits) == 2 and all(len(o) == 2 for o in orbits)


class TestInvariantSublattice:
    def test_full_coordinate_lattice(self):
        group = close_group(weyl_b2_gens())
        lat = GLattice(group, weyl_b2_gens())
        sub, _ = invariant_sublattice(lat, IntMatrix.identity(2))
        assert sub.rank == 2

    def test_non_invariant_line(self):
        group = close_group(weyl_b2_gens())
        lat = GLattice(group, weyl_b2_gens())
        with pytest.raises(NotInvariant):
            invariant_sublattice(lat, IntMatrix([[1, 2]]))


class TestWitnesses:
    def test_sign_permutation_b2(self):
        group = close_group(weyl_b2_gens())
        lat = GLattice(group, weyl_b2_gens())
        w = is_sign_permutation(lat)
        assert w is not None and w.signed

    def test_a2_reflections_not_signed(self):
        # Simple-root basis reflection matrices of A2 are not signed permutations.
        s1 = IntMatrix([[-1, 0], [1, 1]])
        s2 = IntMatrix([[1, 1], [0, -1]])
        lat = GLattice(close_group([s1, s2]), [s1, s2])
        assert is_sign_permutation(lat) is None

    def test_trivial_action_is_signed(self):
        lat = trivial_lattice(cyclic_group(3), 2)
        assert is_sign_permutation(lat) is not None

    def test_not_permutation_raises(self):
        group = close_group([IntMatrix([[-1]])])
        lat = GLattice(group, [IntMatrix([[-1]])])
        with pytest.raises(NotPermutationInThisBasis):
            verify_permutation_basis(lat, IntMatrix.identity(1))


class TestMaps:
    def test_identity_map(self):
        group = cyclic_group(3)
        lat = regular_lattice(group)
        f = equivariant_map(lat, lat, IntMatrix.identity(3))
        ker, _ = kernel_lattice(f)
        assert ker.rank == 0

    def test_augmentation(self):
        # Z[G] -> Z (trivial) is equivariant; kernel has rank |G| - 1.
        group = cyclic_group(4)
        reg = regular_lattice(group)
        triv = trivial_lattice(group, 1)
        f = equivariant_map(reg, triv, IntMatrix([[1], [1], [1], [1]]))
        ker, basis = kernel_lattice(f)
        assert ker.rank == 3
        img, _ = image_lattice(f)
        assert img.rank == 1
        assert ker.rank + img.rank == reg.rank

    def test_not_equivariant(self):
        group = close_group([IntMatrix([[-1]])])
        sign = GLattice(group, [IntMatrix([[-1]])])
        triv = trivial_lattice(group, 1)
        with pytest.raises(NotEquivariant):
            equivariant_map(sign, triv, IntMatrix([[1]]))

    def test_quotient_invariants(self):
        group = cyclic_group(2)
        lat = regular_lattice(group)
        info = quotient_invariants(lat, IntMatrix([[1, 1], [0, 2]]))
        assert info.invariant_factors == (2,)
        assert info.free_rank == 0
        assert info.trivial_action  # swap fixes both cosets mod the sublattice

    def test_quotient_nontrivial_action(self):
        group = cyclic_group(2)
        lat = regular_lattice(group)
        info = quotient_invariants(lat, IntMatrix([[2, 0], [0, 2]]))
        assert info.invariant_factors == (2, 2)
        assert not info.trivial_action


class TestDirectSum:
    def test_same_group(self):
        group = cyclic_group(2)
        a = regular_lattice(group)
        b = trivial_lattice(group, 1)
        s = direct_sum(a, b)
        assert s.rank == 3

    def test_product_group(self):
        g1 = close_group([IntMatrix([[-1]])])
        a = GLattice(g1, [IntMatrix([[-1]])])
        s = direct_sum(a, a, mode="product-group")
        assert s.rank == 2
        assert s.group.order == 4


def test_lattice_from_ambient():
    # Even-sum sublattice of Z^2 is invariant under coordinate swap.
    basis = IntMatrix([[1, 1], [0, 2]])
    swap = IntMatrix([[0, 1], [1, 0]])
    lat = lattice_from_ambient(basis, [swap])
    assert lat.rank == 2
    lat.validate_homomorphism()
