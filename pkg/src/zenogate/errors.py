"""Exception types shared across the package."""


class ZenogateError(Exception):
    """Base class for every error raised by zenogate."""


class NonHermitianInput(ZenogateError):
    """A matrix required to be Hermitian violates the tolerance."""


class DegenerateBasis(ZenogateError):
    """Input vectors are numerically linearly dependent."""


class CriticalPoint(ZenogateError):
    """The control parameters hit (or got too close to) the gap-closing point."""


class SubspaceTrackingFailure(ZenogateError):
    """Consecutive spectral decompositions cannot be matched level by level."""


class OpenPath(ZenogateError):
    """A closed parameter loop was required but the path does not close."""


class InsufficientSamples(ZenogateError):
    """Too few grid samples for the requested finite-difference or product rule."""


class InitialStateOutsideSubspace(ZenogateError):
    """Initial state has weight outside the requested eigenspace."""


class GridMismatch(ZenogateError):
    """Two sampled quantities were expected on a common time grid."""


class ZeroSurvival(ZenogateError):
    """All measurement outcomes were incompatible; conditioning is undefined."""


class IncompleteResolution(ZenogateError):
    """A projector family does not resolve the identity."""


class NotASubspaceRotation(ZenogateError):
    """Gate is not a rotation generated by the given subspace generator."""


class StiffnessBudgetExceeded(ZenogateError):
    """Integrator step size too coarse for the requested dephasing rate."""


class ParseError(ZenogateError):
    """Scenario file is malformed or contains unknown keys."""


class ValidationError(ZenogateError):
    """Scenario parsed but violates a declared constraint."""


class AxisMismatch(ZenogateError):
    """Sweep axis is not applicable to the scenario's engine."""
