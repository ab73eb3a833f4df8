"""Exception hierarchy shared by the engines and the CLI."""


class KStabError(Exception):
    """Base class for every error raised by this package."""


# geometry

class GeometryError(KStabError):
    pass


class EmptyRegion(GeometryError):
    pass


class UnboundedRegion(GeometryError):
    pass


class DegeneratePolytope(GeometryError):
    pass


class ZeroDirection(GeometryError):
    pass


class OutOfDomain(GeometryError):
    pass


# varieties and valuations

class InvalidVariety(KStabError):
    pass


class NonPrimitiveRay(InvalidVariety):
    pass


class DuplicateRay(InvalidVariety):
    pass


class OriginNotInterior(InvalidVariety):
    pass


class RayNotVertex(InvalidVariety):
    pass


class InvalidValuation(KStabError):
    pass


class NonPrimitive(InvalidValuation):
    pass


class NonPositiveScale(InvalidValuation):
    pass


class IdentityViolation(KStabError):
    """Two independent computation routes disagreed; always a bug."""


# log pairs on P^1

class InvalidLogPair(KStabError):
    pass


class IndexOutOfRange(KStabError):
    pass


# lattice point oracle

class NotDilateOfGorensteinIndex(KStabError):
    pass


class QuasiPolynomialMismatch(KStabError):
    pass
