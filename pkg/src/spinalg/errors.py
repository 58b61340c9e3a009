"""Exception types shared across the package."""


class SpinalgError(Exception):
    """Base class for all package errors."""


class LevelMismatchError(SpinalgError):
    """Operands live at different levels n."""


class IndexRangeError(SpinalgError):
    """A basis index is outside 1..n."""


class NotIsotropicError(SpinalgError):
    """A vector or subspace fails the isotropy requirement."""


class NotInLeftIdealError(SpinalgError):
    """A Clifford element is not of the form a*f (some monomial misses an f-factor)."""


class InvalidRootVectorError(SpinalgError):
    """A two-form is not one of the permitted nilpotent root vectors."""


class ResourceBoundError(SpinalgError):
    """A dense computation was requested beyond the supported level bound."""


class GenericityError(SpinalgError):
    """A construction's open-dense genericity condition failed; resample the group element.

    Attributes:
        condition: which condition failed.
        suggested_seed: seed hint for drawing a replacement element.
    """

    def __init__(self, condition: str, suggested_seed: int | None = None):
        super().__init__(condition)
        self.condition = condition
        self.suggested_seed = suggested_seed


class TooFewPointsError(SpinalgError):
    """Not enough sample points for a reliable nullspace slice."""


class DiscoveryError(SpinalgError):
    """An evaluation-based discovery returned an inconsistent result."""


class StructureError(SpinalgError):
    """A constructed object violates the shape the construction promises."""
