"""Exception hierarchy shared by every module of the package."""


class PancakeError(Exception):
    pass


class NotAPermutation(PancakeError, ValueError):
    pass


class OutOfRange(PancakeError, ValueError):
    pass


class SIsIdentity(PancakeError, ValueError):
    pass


class TooLarge(PancakeError):
    """A desk-scale guard or a search node budget was exceeded."""


class BadOffsets(PancakeError, ValueError):
    pass


class OverlappingSets(PancakeError, ValueError):
    pass


class DuplicateIndices(PancakeError, ValueError):
    pass


class UnknownKind(PancakeError, KeyError):
    pass


class DimacsSyntaxError(PancakeError, ValueError):
    pass


class ArityError(DimacsSyntaxError):
    pass


class VariableRangeError(DimacsSyntaxError):
    pass


class IncompatibleSelection(PancakeError, ValueError):
    pass


class CertificationFailed(PancakeError):
    pass


class EquivalenceViolation(PancakeError):
    pass
