"""Exception hierarchy shared by every layer of the package."""


class KatoHullError(Exception):
    """Base class for all domain errors."""


class ShapeMismatch(KatoHullError, ValueError):
    pass


class InadmissibleRelations(KatoHullError, ValueError):
    pass


class NotNilpotent(KatoHullError, ValueError):
    pass


class NotAssociative(KatoHullError, ValueError):
    pass


class NoUnit(KatoHullError, ValueError):
    pass


class FieldMismatch(KatoHullError, ValueError):
    pass


class AlgebraMismatch(KatoHullError, ValueError):
    pass


class Inconclusive(KatoHullError):
    """A randomized search ran out of budget without a definite answer."""


class DecompositionInconclusive(Inconclusive):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class WindowUnderflow(KatoHullError, ValueError):
    pass


class Unknowable(KatoHullError):
    pass


class IncompatibleTails(KatoHullError, ValueError):
    pass


class LiftObstruction(KatoHullError, AssertionError):
    pass


class NotInL(KatoHullError, ValueError):
    pass


class NotMinimalDegree(KatoHullError, ValueError):
    pass


class NotInPool(KatoHullError, KeyError):
    pass


class PoolOverflow(KatoHullError):
    pass


class UnverifiedBimodule(KatoHullError, ValueError):
    pass


class ParseError(KatoHullError, ValueError):
    pass
