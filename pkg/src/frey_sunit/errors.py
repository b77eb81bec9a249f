"""Exception hierarchy shared by all modules."""


class FreySunitError(Exception):
    """Base class; the CLI maps subclasses of InvalidInput to exit code 2."""


class InvalidInput(FreySunitError, ValueError):
    pass


class ComputationError(FreySunitError):
    pass


# qfield
class NotSquarefree(InvalidInput):
    pass


class InvalidD(InvalidInput):
    pass


class MissingTableEntry(InvalidInput):
    pass


class ZeroElement(InvalidInput, ZeroDivisionError):
    pass


class NotRealQuadratic(InvalidInput):
    pass


class DiscriminantTooLarge(ComputationError):
    pass


class FieldMismatch(InvalidInput):
    pass


# sunit
class BoxTooLarge(ComputationError):
    pass


# frey
class EquationFails(InvalidInput):
    pass


class ExponentTooSmall(InvalidInput):
    pass


class NOrdTooLarge(InvalidInput):
    pass


class NotIntegral(InvalidInput):
    pass


class SingularCurve(ComputationError):
    pass


class PreconditionFailed(InvalidInput):
    pass


class IncompleteProfiles(InvalidInput):
    pass


class DegenerateSeed(InvalidInput):
    pass


# legendre
class DegenerateLambda(InvalidInput):
    pass


class NotASolution(InvalidInput):
    pass


class DegenerateTriple(InvalidInput):
    pass


# criteria
class WrongS(InvalidInput):
    pass


# density
class CutoffTooLarge(ComputationError):
    pass
