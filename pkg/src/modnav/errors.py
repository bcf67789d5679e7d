"""Exception types raised by the library."""


class ModNavError(Exception):
    """Base class for all library errors."""


class DimensionError(ModNavError, ValueError):
    """Inputs disagree on dimensionality, or the dimension is unsupported."""


class DomainError(ModNavError, ValueError):
    """Numeric input outside the function's domain (NaN, inf, wrong sign)."""


class DegenerateGradientError(ModNavError):
    """Scalar-field gradient too small to define an outward normal."""


class DegenerateVariantError(ModNavError):
    """The selected coordinate variant's gradient pair vanishes at this point."""


class NonUnitAxisError(ModNavError, ValueError):
    """Rotation axis is not a unit vector."""


class ZeroFieldError(ModNavError):
    """Nominal field is zero; the frame rotation angle is undefined."""


class NonOrthogonalBasisError(ModNavError, ValueError):
    """Matrix handed to a modulation builder is not orthonormal."""


class NoValidVariantError(ModNavError):
    """No coordinate variant is usable at this point."""


class MissingGoalError(ModNavError, ValueError):
    """Indicator rule needs a goal point but none was supplied."""


class FieldSingularError(ModNavError):
    """Vector field cannot be normalised at this state (zero magnitude)."""


class InsideObstacleError(ModNavError, RuntimeError):
    """Stepping precondition violated: the state is inside an obstacle."""


class NonFiniteStateError(ModNavError, ValueError):
    """State vector contains NaN or inf."""


class ZeroVelocityError(ModNavError):
    """Patrol modulation annihilated the direction vector."""


class ScenarioError(ModNavError, ValueError):
    """Scenario document is syntactically or semantically invalid."""
