"""Exception types raised across the package."""


class HopfError(Exception):
    """Base class for all package errors."""


class UnsupportedDimension(HopfError, ValueError):
    pass


class DimensionMismatch(HopfError, ValueError):
    pass


class DivisionByZero(HopfError, ZeroDivisionError):
    pass


class ChartSingularity(HopfError, ValueError):
    """A point sits on (or too close to) the locus where a chart breaks down.

    ``kind`` is ``"base-south-pole"`` when r + x^{n+1} vanishes and
    ``"fiber-antipode"`` when the fiber element is -1 in the stereographic chart.
    """

    def __init__(self, message, kind="base-south-pole"):
        super().__init__(message)
        self.kind = kind


class InvalidFiberElement(HopfError, ValueError):
    pass


class NonAntisymmetric(HopfError, ValueError):
    pass


class NonconstantMetric(HopfError, ValueError):
    pass


class EmptyTrajectory(HopfError, ValueError):
    pass
