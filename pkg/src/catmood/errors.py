"""Exception types raised by the solver."""


class CatMoodError(Exception):
    """Base class for all solver errors."""


class DerivativeOrderTooHigh(CatMoodError, ValueError):
    pass


class InadmissibleState(CatMoodError, ValueError):
    pass


class NonFiniteWaveSpeed(CatMoodError, FloatingPointError):
    pass


class VacuumGenerated(CatMoodError):
    pass


class NoConvergence(CatMoodError, RuntimeError):
    pass


class SolverDiverged(CatMoodError, RuntimeError):
    pass
