"""Exact rational polytope primitives.

Everything here works over :class:`fractions.Fraction`; there is no floating
point anywhere.  Dimensions are expected to be small (n <= 4), so vertex
enumeration is done by brute force over n-subsets of the constraints.
"""
from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import comb, factorial, gcd
from typing import Iterable, Sequence

from .errors import (
    DegeneratePolytope,
    EmptyRegion,
    OutOfDomain,
    UnboundedRegion,
    ZeroDirection,
)

Rational = Fraction
LatticeVector = tuple[int, ...]
RationalVector = tuple[Fraction, ...]


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` literals; floats are refused."""
    if type(x) is Fraction:
        return x
    if isinstance(x, float):
        raise TypeError("floating point input is not accepted: %r" % (x,))
    return Fraction(x)


def lattice_vector(coords: Iterable[int]) -> LatticeVector:
    out = []
    for c in coords:
        if isinstance(c, bool) or int(c) != c:
            raise TypeError("lattice coordinates must be integers: %r" % (c,))
        out.append(int(c))
    return tuple(out)


def is_primitive(v: Sequence[int]) -> bool:
    g = 0
    for c in v:
        g = gcd(g, c)
    return g == 1


def pairing(u: Sequence, w: Sequence) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(u, w)), Fraction(0))


# ---------------------------------------------------------------------------
# linear algebra over Q

def _row_reduce(rows: Sequence[Sequence], ncols: int):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return len(_row_reduce(rows, ncols if ncols is not None else len(rows[0]))[1])


def solve_unique(a: Sequence[Sequence], b: Sequence) -> RationalVector | None:
    """Solve a square system; None when singular."""
    n = len(a)
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    red, piv = _row_reduce(aug, n)
    if len(piv) < n:
        return None
    return tuple(red[i][n] for i in range(n))


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[RationalVector]:
    red, piv = _row_reduce(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, piv):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def det(rows: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    sign = 1
    acc = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            sign = -sign
        acc *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return sign * acc


def affine_dimension(points: Sequence[Sequence]) -> int:
    if not points:
        return -1
    p0 = points[0]
    diffs = [[Fraction(a) - b for a, b in zip(p, p0)] for p in points[1:]]
    return rank(diffs, len(p0)) if diffs else 0


# ---------------------------------------------------------------------------
# one-variable polynomials

def _trim(c: list) -> tuple[Fraction, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Polynomial1:
    """Polynomial in one variable, rational coefficients in ascending degree.

    The zero polynomial has no coefficients.
    """

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim([as_rational(a) for a in self.coeffs]))

    @classmethod
    def constant(cls, c) -> Polynomial1:
        return cls((c,))

    @classmethod
    def interpolate(cls, xs: Sequence, ys: Sequence) -> Polynomial1:
        """Unique polynomial of degree < len(xs) through the given points."""
        xs = [as_rational(x) for x in xs]
        if len(set(xs)) != len(xs):
            raise ValueError("interpolation nodes must be distinct")
        dd = [as_rational(y) for y in ys]
        n = len(xs)
        # Newton divided differences, in place
        for k in range(1, n):
            for i in range(n - 1, k - 1, -1):
                dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - k])
        poly = cls.constant(dd[-1]) if dd else cls()
        for i in range(n - 2, -1, -1):
            poly = poly * cls((-xs[i], 1)) + dd[i]
        return poly

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other) -> Polynomial1:
        if not isinstance(other, Polynomial1):
            other = Polynomial1.constant(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Polynomial1(tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)))

    __radd__ = __add__

    def __neg__(self) -> Polynomial1:
        return Polynomial1(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> Polynomial1:
        return self + (-other)

    def __rsub__(self, other) -> Polynomial1:
        return (-self) + other

    def __mul__(self, other) -> Polynomial1:
        if not isinstance(other, Polynomial1):
            other = as_rational(other)
            return Polynomial1(tuple(c * other for c in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return Polynomial1()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial1(tuple(out))

    __rmul__ = __mul__

    def derivative(self) -> Polynomial1:
        return Polynomial1(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def antiderivative(self) -> Polynomial1:
        return Polynomial1((0,) + tuple(c / (i + 1) for i, c in enumerate(self.coeffs)))

    def compose_affine(self, a, b) -> Polynomial1:
        """x -> p(a*x + b)."""
        inner = Polynomial1((b, a))
        out = Polynomial1()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(str(c) if i == 0 else "%s*x^%d" % (c, i) if i > 1 else "%s*x" % c)
        return " + ".join(terms)


@dataclass(frozen=True)
class PiecewisePolynomial:
    """Continuous piecewise polynomial on [breakpoints[0], breakpoints[-1]].

    ``pieces[i]`` is valid on ``[breakpoints[i], breakpoints[i + 1]]``.
    """

    breakpoints: tuple[Fraction, ...]
    pieces: tuple[Polynomial1, ...]

    def __post_init__(self):
        bps = tuple(as_rational(b) for b in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if len(bps) < 2 or len(self.pieces) != len(bps) - 1:
            raise ValueError("need m+1 >= 2 breakpoints for m pieces")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        for i in range(1, len(self.pieces)):
            if self.pieces[i - 1](bps[i]) != self.pieces[i](bps[i]):
                raise ValueError("pieces disagree at breakpoint %s" % bps[i])

    @property
    def domain(self) -> tuple[Fraction, Fraction]:
        return self.breakpoints[0], self.breakpoints[-1]

    def _index(self, x: Fraction) -> int:
        lo, hi = self.domain
        if not lo <= x <= hi:
            raise OutOfDomain("%s outside [%s, %s]" % (x, lo, hi))
        return min(max(bisect.bisect_right(self.breakpoints, x) - 1, 0), len(self.pieces) - 1)

    def __call__(self, x) -> Fraction:
        x = as_rational(x)
        return self.pieces[self._index(x)](x)

    def integrate(self, a, b) -> Fraction:
        a, b = as_rational(a), as_rational(b)
        if a > b:
            raise ValueError("integrate needs a <= b")
        lo, hi = self.domain
        if a < lo or b > hi:
            raise OutOfDomain("[%s, %s] not inside [%s, %s]" % (a, b, lo, hi))
        total = Fraction(0)
        for (left, right), piece in zip(zip(self.breakpoints, self.breakpoints[1:]), self.pieces):
            s, e = max(a, left), min(b, right)
            if s < e:
                anti = piece.antiderivative()
                total += anti(e) - anti(s)
        return total

    def reparametrize(self, scale, shift) -> PiecewisePolynomial:
        """x -> f(scale*x + shift) for scale > 0."""
        scale, shift = as_rational(scale), as_rational(shift)
        if scale <= 0:
            raise ValueError("scale must be positive")
        return PiecewisePolynomial(
            tuple((b - shift) / scale for b in self.breakpoints),
            tuple(p.compose_affine(scale, shift) for p in self.pieces),
        )

    def __mul__(self, c) -> PiecewisePolynomial:
        return PiecewisePolynomial(self.breakpoints, tuple(p * c for p in self.pieces))

    __rmul__ = __mul__

    def __rsub__(self, c) -> PiecewisePolynomial:
        return PiecewisePolynomial(self.breakpoints, tuple(c - p for p in self.pieces))


def integrate(f: PiecewisePolynomial, a, b) -> Fraction:
    return f.integrate(a, b)


# ---------------------------------------------------------------------------
# polytopes

@dataclass(frozen=True)
class HalfSpace:
    """The region {u : <u, normal> >= offset}."""

    normal: LatticeVector
    offset: Fraction

    def __post_init__(self):
        normal = lattice_vector(self.normal)
        if not any(normal):
            raise ZeroDirection("half-space normal must be nonzero")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", as_rational(self.offset))

    def slack(self, u: Sequence) -> Fraction:
        return pairing(u, self.normal) - self.offset

    def contains(self, u: Sequence) -> bool:
        return self.slack(u) >= 0

    def normalized(self) -> HalfSpace:
        g = 0
        for c in self.normal:
            g = gcd(g, c)
        return HalfSpace(tuple(c // g for c in self.normal), self.offset / g)


@dataclass(frozen=True)
class RationalPolytope:
    """Bounded convex polytope with exact vertices and irredundant half-spaces.

    Build instances with :func:`intersect_halfspaces`.
    """

    dimension: int
    vertices: tuple[RationalVector, ...]
    halfspaces: tuple[HalfSpace, ...]

    @cached_property
    def affine_dim(self) -> int:
        return affine_dimension(self.vertices)

    @cached_property
    def tight_sets(self) -> tuple[frozenset, ...]:
        """For each stored half-space, the indices of vertices on its boundary."""
        return tuple(
            frozenset(i for i, v in enumerate(self.vertices) if h.slack(v) == 0)
            for h in self.halfspaces
        )

    @cached_property
    def triangulation(self) -> tuple[tuple[int, ...], ...]:
        """Pulling triangulation (vertex-index simplices), vertices pulled in order."""
        if self.affine_dim < self.dimension:
            return ()
        return tuple(_pulling(self, range(len(self.vertices))))

    @cached_property
    def simplex_volumes(self) -> tuple[Fraction, ...]:
        return tuple(simplex_volume([self.vertices[i] for i in s]) for s in self.triangulation)

    def pairings(self, w: Sequence[int]) -> tuple[Fraction, ...]:
        return tuple(pairing(v, w) for v in self.vertices)

    def contains(self, u: Sequence) -> bool:
        return all(h.contains(u) for h in self.halfspaces)


def intersect_halfspaces(halfspaces: Sequence[HalfSpace], n: int) -> RationalPolytope:
    """Exact intersection of half-spaces in Q^n.

    Raises EmptyRegion when infeasible and UnboundedRegion when the region
    is nonempty but not bounded.
    """
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if not halfspaces:
        raise ValueError("need at least one half-space")
    hs = []
    for h in halfspaces:
        if len(h.normal) != n:
            raise ValueError("half-space normal %r does not live in dimension %d" % (h.normal, n))
        hn = h.normalized()
        if hn not in hs:
            hs.append(hn)
    a = [list(h.normal) for h in hs]
    b = [h.offset for h in hs]

    _, cols = _row_reduce(a, n)
    r = len(cols)
    # Restricting to pivot columns keeps the image of A; feasibility is unchanged.
    reduced = [[row[c] for c in cols] for row in a]
    points = _enumerate_vertices(reduced, b, r)
    if not points:
        raise EmptyRegion("half-spaces have empty intersection")
    if r < n:
        raise UnboundedRegion("normals do not span; region contains a line")
    for sub in itertools.combinations(range(len(a)), n - 1):
        rows = [a[i] for i in sub]
        if rank(rows, n) != n - 1:
            continue
        (d,) = nullspace(rows, n)
        for s in (1, -1):
            if all(pairing(d, row) * s >= 0 for row in a):
                raise UnboundedRegion("recession direction %s" % (tuple(s * x for x in d),))

    vertices = tuple(sorted(points))
    full = affine_dimension(vertices) == n
    keep = []
    for h in hs:
        tight = [v for v in vertices if h.slack(v) == 0]
        if full:
            if affine_dimension(tight) == n - 1:
                keep.append(h)
        elif tight:
            keep.append(h)
    return RationalPolytope(n, vertices, tuple(keep))


def _enumerate_vertices(a, b, n) -> set[RationalVector]:
    if n == 0:
        return {()} if all(x <= 0 for x in b) else set()
    found = set()
    for sub in itertools.combinations(range(len(a)), n):
        sol = solve_unique([a[i] for i in sub], [b[i] for i in sub])
        if sol is None or sol in found:
            continue
        if all(pairing(sol, row) >= rhs for row, rhs in zip(a, b)):
            found.add(sol)
    return found


def simplex_volume(points: Sequence[Sequence]) -> Fraction:
    n = len(points) - 1
    p0 = points[0]
    return abs(det([[Fraction(a) - b for a, b in zip(p, p0)] for p in points[1:]])) / factorial(n)


def _subfacets(P: RationalPolytope, face: frozenset, d: int, cache: dict) -> list[frozenset]:
    out = set()
    for tight in P.tight_sets:
        t = face & tight
        if not t or t == face or t in out:
            continue
        if t not in cache:
            cache[t] = affine_dimension([P.vertices[i] for i in t])
        if cache[t] == d - 1:
            out.add(t)
    return sorted(out, key=sorted)


def _pulling(P: RationalPolytope, order: Iterable[int], face: frozenset | None = None,
             d: int | None = None) -> list[tuple[int, ...]]:
    rank_of = {v: i for i, v in enumerate(order)}
    dims: dict = {}
    memo: dict = {}

    def tri(face: frozenset, d: int):
        if face in memo:
            return memo[face]
        if d == 0:
            res = [tuple(face)]
        else:
            apex = min(face, key=rank_of.__getitem__)
            res = []
            for sub in _subfacets(P, face, d, dims):
                if apex not in sub:
                    res.extend(s + (apex,) for s in tri(sub, d - 1))
        memo[face] = res
        return res

    if face is None:
        face, d = frozenset(range(len(P.vertices))), P.dimension
    return tri(face, d)


def triangulate(P: RationalPolytope, order: Sequence[int] | None = None,
                method: str = "pulling") -> list[tuple[RationalVector, ...]]:
    """Triangulate a full-dimensional polytope into simplices (as coordinate tuples).

    ``pulling`` uses only vertices of P, pulled in ``order``.  ``fan`` cones the
    pulled facet triangulations from the vertex average, an interior point.
    """
    if P.affine_dim < P.dimension:
        raise DegeneratePolytope("polytope is not full-dimensional")
    order = list(range(len(P.vertices)) if order is None else order)
    if method == "pulling":
        return [tuple(P.vertices[i] for i in s) for s in _pulling(P, order)]
    if method == "fan":
        n = P.dimension
        centre = tuple(sum(c) / len(P.vertices) for c in zip(*P.vertices))
        out = []
        for facet in _subfacets(P, frozenset(range(len(P.vertices))), n, {}):
            for s in _pulling(P, order, facet, n - 1):
                out.append(tuple(P.vertices[i] for i in s) + (centre,))
        return out
    raise ValueError("unknown triangulation method %r" % method)


def volume(P: RationalPolytope) -> Fraction:
    """Euclidean volume; 0 for lower-dimensional polytopes."""
    return sum(P.simplex_volumes, Fraction(0))


def barycenter(P: RationalPolytope) -> RationalVector:
    vol = volume(P)
    if vol == 0:
        raise DegeneratePolytope("barycenter of a volume-zero polytope")
    acc = [Fraction(0)] * P.dimension
    for s, sv in zip(P.triangulation, P.simplex_volumes):
        for i in s:
            for k, c in enumerate(P.vertices[i]):
                acc[k] += sv * c
    # simplex centroid is the vertex average over n+1 vertices
    return tuple(a / (vol * (P.dimension + 1)) for a in acc)


@lru_cache(maxsize=4096)
def _upper_fraction(knots: tuple[Fraction, ...], cut: Fraction) -> Polynomial1:
    """Fraction of a simplex with {f >= c}, for c strictly between knot values.

    ``knots`` are the sorted values of the linear function f at the n+1
    vertices; knots >= cut lie above the interval of validity, the rest below.
    The answer is the n-th divided difference of t -> (t - c)_+^n over the
    knots, with repeated knots handled by derivatives.
    """
    n = len(knots) - 1

    def power(t: Fraction, m: int) -> Polynomial1:
        # (t - c)^m as a polynomial in c
        return Polynomial1(tuple(comb(m, j) * t ** (m - j) * (-1) ** j for j in range(m + 1)))

    table = [power(t, n) if t >= cut else Polynomial1() for t in knots]
    for k in range(1, n + 1):
        nxt = []
        for i in range(n + 1 - k):
            lo, hi = knots[i], knots[i + k]
            if lo == hi:
                nxt.append(power(lo, n - k) * comb(n, k) if lo >= cut else Polynomial1())
            else:
                nxt.append((table[i + 1] - table[i]) * (1 / (hi - lo)))
        table = nxt
    return table[0]


def slice_volume(P: RationalPolytope, w: Sequence[int]) -> PiecewisePolynomial:
    """c -> Vol(P ∩ {<u, w> >= c}) on [min_P <u,w>, max_P <u,w>]."""
    w = lattice_vector(w)
    if len(w) != P.dimension:
        raise ValueError("direction has wrong dimension")
    if not any(w):
        raise ZeroDirection("slicing direction must be nonzero")
    if volume(P) == 0:
        raise DegeneratePolytope("slice volume of a volume-zero polytope")
    vals = P.pairings(w)
    breaks = sorted(set(vals))
    pieces = [Polynomial1() for _ in breaks[1:]]
    for simplex, sv in zip(P.triangulation, P.simplex_volumes):
        knots = tuple(sorted(vals[i] for i in simplex))
        for i, (lo, hi) in enumerate(zip(breaks, breaks[1:])):
            if hi <= knots[0]:
                pieces[i] = pieces[i] + sv
            elif lo < knots[-1]:
                pieces[i] = pieces[i] + _upper_fraction(knots, hi) * sv
    return PiecewisePolynomial(tuple(breaks), tuple(pieces))
