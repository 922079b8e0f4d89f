"""Exception hierarchy shared by every module of the package."""


class QSLError(ValueError):
    """Base class for all input and numerical-domain errors raised here."""


class NotHermitian(QSLError):
    pass


class NoConvergence(QSLError):
    pass


class DimensionMismatch(QSLError):
    pass


class NotNormalized(QSLError):
    pass


class NotDensityMatrix(QSLError):
    pass


class SingularOverlap(QSLError):
    """The overlap magnitude is too small for the analytic derivative."""


class NearSingular(QSLError):
    """The statistical distance lies outside the admissible band."""


class ZeroVariance(QSLError):
    pass


class ZeroEnergy(QSLError):
    pass


class InvalidDistance(QSLError):
    pass


class DegenerateSpectrum(QSLError):
    pass


class ConservationError(QSLError):
    """A quantity that must be conserved under the evolution drifted."""
