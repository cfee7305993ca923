"""Exception types raised by the optimizer stack."""


class HoloUavError(Exception):
    """Base class for all package errors."""


class SingularGeometryError(HoloUavError, ValueError):
    """UAV coincides with a user, or sits exactly above one where the azimuth is undefined."""


class RankDeficientError(HoloUavError, ArithmeticError):
    """The effective-channel Gram matrix is numerically singular; zero-forcing is impossible."""


class ZeroBeamformerError(HoloUavError, ArithmeticError):
    """Power normalization was asked to scale an all-zero beamformer."""


class OracleError(HoloUavError, ArithmeticError):
    """A finite-difference probe hit a non-finite function value."""
