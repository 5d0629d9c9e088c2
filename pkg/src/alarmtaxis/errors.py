"""Exception hierarchy shared by all modules."""


class AlarmTaxisError(Exception):
    """Base class for every error raised by this package."""


# model
class DegenerateDenominator(AlarmTaxisError, ZeroDivisionError):
    pass


class InadmissibleEquilibrium(AlarmTaxisError, ValueError):
    pass


# grid
class BadExtent(AlarmTaxisError, ValueError):
    pass


class TooFewNodes(AlarmTaxisError, ValueError):
    pass


class GridMismatch(AlarmTaxisError, ValueError):
    pass


# solver
class NumericalAbort(AlarmTaxisError, ArithmeticError):
    """Time stepping produced an unusable state.

    ``time`` is the simulation time at which the failure was detected and
    ``trajectory`` (when raised from ``simulate``) holds everything recorded
    up to that point, with status ``Aborted``.
    """

    def __init__(self, message, time=None, trajectory=None):
        super().__init__(message)
        self.time = time
        self.trajectory = trajectory


class NegativeBlowup(NumericalAbort):
    pass


class NonFiniteState(NumericalAbort):
    pass


# lyapunov
class KindMismatch(AlarmTaxisError, ValueError):
    pass


class NegativeField(AlarmTaxisError, ValueError):
    pass


class MissingSamples(AlarmTaxisError, ValueError):
    pass


# diagnostics
class TooFewSamples(AlarmTaxisError, ValueError):
    pass


class AllBelowFloor(AlarmTaxisError, ValueError):
    pass


class AbortedTrajectory(AlarmTaxisError, ValueError):
    pass


# io
class ConfigError(AlarmTaxisError, ValueError):
    pass


class MissingKey(ConfigError):
    def __init__(self, key):
        super().__init__(f"missing required key {key!r}")
        self.key = key


class BadValue(ConfigError):
    def __init__(self, key, token, reason=""):
        msg = f"bad value for {key!r}: {token!r}"
        if reason:
            msg += f" ({reason})"
        super().__init__(msg)
        self.key = key
        self.token = token


class UnknownKey(ConfigError):
    def __init__(self, key):
        super().__init__(f"unknown key {key!r}")
        self.key = key


class IoFailure(AlarmTaxisError, OSError):
    def __init__(self, path, reason=""):
        super().__init__(f"cannot write/read {path}: {reason}")
        self.path = path
