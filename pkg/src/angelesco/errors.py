"""Exception hierarchy shared by all numeric modules."""


class AngelescoError(Exception):
    """Base class for all failures raised by this package."""


class NonConvergence(AngelescoError):
    """An iterative process exhausted its budget without stabilizing."""


class Singular(AngelescoError):
    """A linear solve hit a pivot below the precision floor."""


class StepUnderflow(AngelescoError):
    """Adaptive ODE step shrank below the representable floor."""


class OnCut(AngelescoError):
    """Evaluation requested on a branch cut without a side flag."""


class RegimeMismatch(AngelescoError):
    """Solved curve parameters violate the orderings of the requested regime."""


class ComplexCritical(AngelescoError):
    """A critical point acquired a non-negligible imaginary part."""


class ClassificationAmbiguous(AngelescoError):
    """Two sheet values coincide to working precision (branch point)."""


class OutsideSupport(AngelescoError):
    """Density evaluation outside the open support of the measure."""


class DenominatorVanishes(AngelescoError):
    """The flow field denominator vanished (corrupted state)."""


class DomainViolation(AngelescoError):
    """Requested range crosses a phase threshold."""


class TooCloseToSupport(AngelescoError):
    """Probe point violates the distance-to-support requirement."""


class TooCloseToBranchPoint(AngelescoError):
    """Evaluation inside the quarter-root blowup region of a branch point."""


class WindingDetected(AngelescoError):
    """Continuous log determination found a zero crossing of the weight."""


class DivisionByZero(AngelescoError):
    """Recurrence coefficient requested with a vanishing denominator."""
