"""Exception types shared across the package."""


class VlmcError(Exception):
    """Base class for all package errors."""


# --- tree validation ---

class ValidationError(VlmcError):
    pass


class NotSaturated(ValidationError):
    pass


class NotPrefixFree(ValidationError):
    pass


class BadProbability(ValidationError):
    pass


class DanglingBranch(ValidationError):
    pass


class UnsupportedTree(ValidationError):
    pass


# --- prefix function / chain state ---

class InsufficientHistory(VlmcError):
    """pref consumed the whole suffix at an internal node but a context was required."""


class HistoryExhausted(VlmcError):
    pass


# --- stationary solving ---

class SolverError(VlmcError):
    pass


class NoStationaryMeasure(SolverError):
    pass


class MissingParameter(SolverError):
    pass


class SeriesUndecided(SolverError):
    pass


class HeightTooLarge(SolverError):
    pass


class NonUnique(SolverError):
    """Fixed point space has dimension > 1; carries a basis of solutions."""

    def __init__(self, message, basis=None, dimension=None):
        super().__init__(message)
        self.basis = basis
        self.dimension = dimension


class UnresolvedInternal(SolverError):
    pass


class BadParams(SolverError):
    pass


# --- interval map ---

class ZeroMassTree(VlmcError):
    pass


class UnresolvedPoint(VlmcError):
    """The point lies inside the truncation residual of an accumulation point."""


class UnresolvedRegion(VlmcError):
    """The queried set partially overlaps a truncation residual; carries bounds."""

    def __init__(self, message, lower=None, upper=None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper


class LimitUndefined(VlmcError):
    pass


# --- Dirichlet series ---

class DirichletError(VlmcError):
    pass


class Undefined(DirichletError):
    pass


class DivergentAt(DirichletError):
    def __init__(self, s, component=""):
        super().__init__(f"series component {component or '?'} diverges at s={s}")
        self.s = s
        self.component = component


class PoleAt(DirichletError):
    def __init__(self, s):
        super().__init__(f"denominator vanishes at s={s}")
        self.s = s


class SingularSystem(DirichletError):
    pass


# --- occurrences ---

class InternalNodeWord(VlmcError):
    pass


class UnclassifiableWord(VlmcError):
    def __init__(self, message, attempted=None):
        super().__init__(message)
        self.attempted = attempted


class OutOfRange(VlmcError):
    pass


class StateSpaceTooLarge(VlmcError):
    pass


class InsufficientSuffix(VlmcError):
    pass
