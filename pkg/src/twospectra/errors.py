"""Exception hierarchy.

Every failure raised by the library derives from :class:`SpectralError`, so
callers (and the CLI) can catch one type and map subclasses to exit codes.
"""


class SpectralError(ValueError):
    """Base class for all library errors."""


class IterationFailure(SpectralError, ArithmeticError):
    pass


class WeightUnderflow(SpectralError, ArithmeticError):
    """A spectral weight is below the smallest representable number."""


class PoleEvaluation(SpectralError):
    pass


class ZeroM(SpectralError):
    pass


class TooSmall(SpectralError):
    pass


class ThetaOne(SpectralError):
    pass


class NotInterlaced(SpectralError):
    pass


class Ambiguous(NotInterlaced):
    """Several (regime, k0) classifications fit the same pair of spectra.

    ``candidates`` holds every fitting classification so the caller can pick
    one using outside knowledge (e.g. the sign of the mass change).
    """

    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = tuple(candidates)


class WrongRegime(SpectralError):
    pass


class OmegaOutOfRange(SpectralError):
    pass


class OmegaOutOfGap(OmegaOutOfRange):
    pass


class DegenerateProduct(SpectralError, ArithmeticError):
    pass


class Breakdown(SpectralError, ArithmeticError):
    pass


class NormalizationError(SpectralError, ArithmeticError):
    pass


class InfeasibleAlpha(OmegaOutOfRange):
    pass


class NoSolution(OmegaOutOfRange):
    pass


class UnboundedGap(SpectralError):
    pass


class NonPhysical(SpectralError):
    pass


class InconsistentFreeEnd(SpectralError):
    pass
