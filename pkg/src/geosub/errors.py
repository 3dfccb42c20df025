"""Exception hierarchy shared by every geosub module."""


class GeosubError(Exception):
    """Base class for all errors raised by geosub."""


# -- linear algebra -----------------------------------------------------------

class InvalidMatrix(GeosubError, ValueError):
    pass


class DimensionMismatch(GeosubError, ValueError):
    pass


class BoundaryAmbiguity(GeosubError):
    """An eigenvalue lies too close to the imaginary axis to be classified."""


class NumericalInconsistency(GeosubError):
    """A structural identity failed numerically; usually a tolerance problem."""


# -- system model -------------------------------------------------------------

class ShapeMismatch(GeosubError, ValueError):
    pass


class NonFiniteEntry(GeosubError, ValueError):
    pass


class ParseError(GeosubError, ValueError):
    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if field is not None:
            where.append(f"field {field!r}")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


# -- closed forms that do not apply to a given system -------------------------

class Inapplicable(GeosubError):
    """The requested closed-form characterization does not apply."""


class NotSquare(Inapplicable):
    pass


class SingularPencil(Inapplicable):
    pass


class NotLeftInvertible(Inapplicable):
    pass


# -- Markov / impulsive inputs ------------------------------------------------

class InvalidOrder(GeosubError, ValueError):
    pass


class InfiniteImpulsiveSpace(GeosubError):
    """The admissible impulsive inputs do not form a finite-dimensional space."""


class NotAdmissible(GeosubError, ValueError):
    pass


class NothingToShift(GeosubError, ValueError):
    pass


class NoImpulsivePart(GeosubError, ValueError):
    pass
