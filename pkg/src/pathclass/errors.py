"""Exception hierarchy shared by all pathclass modules."""


class PathClassError(Exception):
    """Base class for every error raised by the package."""


class InputError(PathClassError, ValueError):
    """Malformed arguments: wrong dimension, wrong arity, bad values."""


class DegeneracyError(PathClassError, ValueError):
    """Point set too degenerate for the requested construction."""


class SceneValidationError(PathClassError, ValueError):
    """Scene violates a structural invariant (overlap, bad ids, out of bounds)."""


class QueryError(PathClassError, ValueError):
    """Query against a structure that does not support it."""


class ContainmentError(QueryError):
    """Point lies inside an obstacle or outside the workspace."""


class ResolutionError(PathClassError, ValueError):
    """Consecutive path samples skip over a region."""

    def __init__(self, message, step_index):
        super().__init__(message)
        self.step_index = step_index


class ComparisonError(PathClassError, ValueError):
    """Representations built over different covers or robots were compared."""


class SpecError(PathClassError, ValueError):
    """Invalid robot specification."""


class UnsupportedError(PathClassError, NotImplementedError):
    """Operation not available for this input (e.g. closed chain, 3D)."""


class PlanningError(PathClassError):
    """Interpolation could not produce a collision-free motion."""


class NonExistenceError(PathClassError):
    """No topological path exists; carries the certificate."""

    def __init__(self, certificate):
        super().__init__(certificate.summary())
        self.certificate = certificate
