"""Toric Q-Fano varieties given by the rays of a Fano polytope.

A toric variety is always log terminal, so a complete toric variety whose
anticanonical divisor is ample and Q-Cartier is a Q-Fano variety.  We only
accept ray sets whose rays are exactly the vertices of their convex hull with
the origin strictly inside; the face fan of that hull is then complete and
-K_X is ample and Q-Cartier.  Everything downstream is read off the
anticanonical polytope

    P = {u in M_Q : <u, v> >= -1 for every ray v}.

Toric valuations are given by primitive lattice vectors w in N.  Rays give
prime divisors on X, other primitive vectors give divisors on toric blowups,
all of them dreamy (toric varieties have finitely generated Cox rings).  The
toric dictionary used throughout:

    A_X(w)   = -min_P <u, w>
    tau(w)   = max_P <u, w> + A_X(w)                (width of P along w)
    vol(x)   = n! * Vol(P ∩ {<u, w> >= x - A_X(w)}),  0 <= x <= tau(w)
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial, lcm
from typing import Sequence, Union

from . import exact_geometry as eg
from .errors import (
    DuplicateRay,
    EmptyRegion,
    InvalidValuation,
    InvalidVariety,
    NonPrimitive,
    NonPrimitiveRay,
    OriginNotInterior,
    RayNotVertex,
    UnboundedRegion,
)


@dataclass(frozen=True)
class ToricValuation:
    """Divisorial valuation ord_w attached to a primitive lattice vector w."""

    w: eg.LatticeVector

    def __post_init__(self):
        w = eg.lattice_vector(self.w)
        if not any(w):
            raise InvalidValuation("valuation vector must be nonzero")
        if not eg.is_primitive(w):
            raise NonPrimitive("valuation vector %s is not primitive (gcd != 1)" % (w,))
        object.__setattr__(self, "w", w)

    def __neg__(self) -> ToricValuation:
        return ToricValuation(tuple(-c for c in self.w))


ValuationLike = Union[ToricValuation, Sequence[int]]


def as_valuation(X: ToricFanoVariety, w: ValuationLike) -> ToricValuation:
    v = w if isinstance(w, ToricValuation) else ToricValuation(tuple(w))
    if len(v.w) != X.dimension:
        raise InvalidValuation("valuation %s has length %d, variety has dimension %d"
                               % (v.w, len(v.w), X.dimension))
    return v


@dataclass(frozen=True)
class ToricFanoVariety:
    dimension: int
    rays: tuple[eg.LatticeVector, ...]
    polytope: eg.RationalPolytope
    gorenstein_denominator: int

    @cached_property
    def degree(self) -> Fraction:
        return anticanonical_degree(self)

    @cached_property
    def barycenter(self) -> eg.RationalVector:
        return eg.barycenter(self.polytope)


def build_variety(rays: Sequence[Sequence[int]], dim: int | None = None) -> ToricFanoVariety:
    """Validate ray data and derive the anticanonical polytope."""
    if not rays:
        raise InvalidVariety("need at least one ray")
    rays = tuple(eg.lattice_vector(r) for r in rays)
    n = len(rays[0]) if dim is None else dim
    if n < 1:
        raise InvalidVariety("dimension must be positive")
    for r in rays:
        if len(r) != n:
            raise InvalidVariety("ray %s does not have length %d" % (r, n))
        if not any(r):
            raise NonPrimitiveRay("zero ray")
        if not eg.is_primitive(r):
            raise NonPrimitiveRay("ray %s is not primitive" % (r,))
    if len(set(rays)) != len(rays):
        raise DuplicateRay("rays must be pairwise distinct")

    halfspaces = [eg.HalfSpace(r, -1) for r in rays]
    try:
        # P is bounded exactly when the rays positively span N_Q, i.e. the
        # origin is interior to conv(rays); it always contains the origin.
        P = eg.intersect_halfspaces(halfspaces, n)
    except UnboundedRegion as exc:
        raise OriginNotInterior("origin is not in the interior of conv(rays)") from exc
    except EmptyRegion as exc:  # pragma: no cover - offsets -1 always admit u = 0
        raise InvalidVariety(str(exc)) from exc

    # Facets of P are dual to vertices of conv(rays).
    facet_normals = {h.normal for h in P.halfspaces}
    for r in rays:
        if r not in facet_normals:
            raise RayNotVertex("ray %s is not a vertex of conv(rays)" % (r,))

    ell = 1
    for v in P.vertices:
        for c in v:
            ell = lcm(ell, c.denominator)
    return ToricFanoVariety(n, rays, P, ell)


def log_discrepancy(X: ToricFanoVariety, w: ValuationLike) -> Fraction:
    v = as_valuation(X, w)
    return -min(X.polytope.pairings(v.w))


def pseudoeffective_threshold(X: ToricFanoVariety, w: ValuationLike) -> Fraction:
    v = as_valuation(X, w)
    vals = X.polytope.pairings(v.w)
    return max(vals) - min(vals)


def anticanonical_degree(X: ToricFanoVariety) -> Fraction:
    """((-K_X)^n) = n! Vol(P)."""
    return factorial(X.dimension) * eg.volume(X.polytope)


def volume_function(X: ToricFanoVariety, w: ValuationLike) -> eg.PiecewisePolynomial:
    """x -> vol_X(-K_X - x F_w) on [0, tau(w)]."""
    v = as_valuation(X, w)
    a = log_discrepancy(X, v)
    sliced = eg.slice_volume(X.polytope, v.w)
    return sliced.reparametrize(1, -a) * factorial(X.dimension)


# A few varieties used throughout docs and tests.
STANDARD_RAYS = {
    "P1": [(1,), (-1,)],
    "P2": [(1, 0), (0, 1), (-1, -1)],
    "P1xP1": [(1, 0), (-1, 0), (0, 1), (0, -1)],
    "BlP2": [(1, 0), (0, 1), (-1, -1), (1, 1)],
    "P112": [(1, 0), (0, 1), (-1, -2)],
    "P3": [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)],
}
