"""Exception types shared across the package."""


class QplatError(Exception):
    """Base class for all package errors."""


class NotUnimodular(QplatError):
    """A matrix that must be invertible over the integers is not."""


class GroupTooLarge(QplatError):
    """Group closure exceeded the configured element cap."""


class GroupMismatch(QplatError):
    """Operation required two lattices over the same group."""


class NotASubgroupElement(QplatError):
    """A supplied generator does not belong to the ambient group."""


class NotInvariant(QplatError):
    """A sublattice is not stable under the group action."""


class NotPermutationInThisBasis(QplatError):
    """The action is not by permutation matrices in the supplied basis."""


class NotEquivariant(QplatError):
    """A map does not commute with the group actions."""


class InvalidRank(QplatError):
    """Dynkin family parameter out of range."""


class InvalidResidue(QplatError):
    """A residue tuple does not define a subgroup element of P/Q."""


class InvalidParameter(QplatError):
    """Named character lattice with invalid parameters."""


class BudgetExceeded(QplatError):
    """A cochain computation would exceed the configured cell budget."""


class NotElementaryAbelian(QplatError):
    """The periodic-tensor resolution needs an elementary abelian group."""


class InvalidSpec(QplatError):
    """Malformed construction specification."""


class HypothesesViolated(QplatError):
    """The construction's hypotheses do not hold for this specification."""


class ParityViolation(QplatError):
    """A sign-flip pattern leaves the Weyl group of a D-type factor."""


class UnsupportedType(QplatError):
    """Dynkin family outside the supported A/B/C/D/G2 list."""


class InvalidInput(QplatError):
    """Malformed input document or argument."""


class EvenN(QplatError):
    """The odd-parameter resolution was requested for an even parameter."""


class ConstructionFailed(QplatError):
    """A generate-and-verify construction failed its own verification."""


class NotOnPositiveList(QplatError):
    """Requested a resolution for a lattice that is not quasi-permutation."""
