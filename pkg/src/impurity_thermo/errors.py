"""Exception hierarchy shared by all modules."""


class ImpurityThermoError(Exception):
    """Base class for every error raised by this package."""


class BoseAtZero(ImpurityThermoError, ZeroDivisionError):
    """Bose occupation requested at exactly zero frequency."""


class InvalidCount(ImpurityThermoError, ValueError):
    pass


class Unstable(ImpurityThermoError, ValueError):
    """Oscillator renormalized frequency is not positive."""


class AtDiscontinuity(ImpurityThermoError, ValueError):
    """Single-valued evaluation requested exactly at a jump; use the sided form."""


class PoleOnAxis(ImpurityThermoError, ZeroDivisionError):
    pass


class ShapeMismatch(ImpurityThermoError, ValueError):
    pass


class GridMismatch(ImpurityThermoError, ValueError):
    pass


class AsymmetricGrid(ImpurityThermoError, ValueError):
    pass


class NonRealResult(ImpurityThermoError, ArithmeticError):
    pass


class QuadratureFailure(ImpurityThermoError, ArithmeticError):
    pass


class NotConverged(ImpurityThermoError, ArithmeticError):
    pass


class WrongStatistics(ImpurityThermoError, ValueError):
    pass


class ConfigError(ImpurityThermoError, ValueError):
    """Invalid run configuration.  ``field`` names the offending key."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if field:
            where.append(f"field '{field}'")
        if line is not None:
            where.append(f"line {line}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)
