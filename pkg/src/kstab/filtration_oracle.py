"""Lattice-point route to the Donaldson-Futaki invariant of a toric valuation.

For k a multiple of the Gorenstein denominator, the monomials of
H^0(-k K_X) are the lattice points of kP, and a monomial u vanishes to order
<u, w> + k A(w) along F_w.  The filtration weight of the induced test
configuration is therefore

    w(k) = int_0^inf dim F^x V_k dx - k A N_k = sum_{u in kP ∩ M} <u, w>.

w(k) and N_k = #(kP ∩ M) are polynomials on the progression k in ell*Z.
Expanding w(k) / (k N_k) = F0 + F1/k + ... gives DF = -2 F1, which must equal
beta(w) / vol(-K_X).  Adding c*k*N_k to w(k) changes only F0, so the choice of
normalisation above does not affect DF.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from . import exact_geometry as eg
from .errors import NotDilateOfGorensteinIndex, QuasiPolynomialMismatch
from .invariants import beta
from .toric_fano import (
    ToricFanoVariety,
    ValuationLike,
    anticanonical_degree,
    as_valuation,
    log_discrepancy,
)


@dataclass(frozen=True)
class WeightSample:
    k: int
    dim: int
    weight: Fraction


@dataclass(frozen=True)
class WeightFit:
    weight_poly: eg.Polynomial1
    dim_poly: eg.Polynomial1
    F0: Fraction
    F1: Fraction
    df: Fraction
    samples: tuple[WeightSample, ...]


@dataclass(frozen=True)
class CrossCheck:
    w: eg.LatticeVector
    df_oracle: Fraction
    beta_over_vol: Fraction
    agree: bool
    fit: WeightFit


def _check_dilate(X: ToricFanoVariety, k: int) -> None:
    if k < 1 or k % X.gorenstein_denominator:
        raise NotDilateOfGorensteinIndex(
            "k=%d is not a positive multiple of ell=%d" % (k, X.gorenstein_denominator))


def lattice_points(X: ToricFanoVariety, k: int) -> list[eg.LatticeVector]:
    """Integer points of kP in lexicographic order."""
    _check_dilate(X, k)
    n = X.dimension
    P = X.polytope
    lo = [math.floor(k * min(v[i] for v in P.vertices)) for i in range(n)]
    hi = [math.ceil(k * max(v[i] for v in P.vertices)) for i in range(n)]
    hs = [(h.normal, k * h.offset) for h in P.halfspaces]
    out = []
    for head in itertools.product(*(range(lo[i], hi[i] + 1) for i in range(n - 1))):
        # solve the last coordinate's range directly
        a, b = lo[-1], hi[-1]
        for normal, off in hs:
            rhs = off - sum(c * x for c, x in zip(normal, head))
            last = normal[-1]
            if last > 0:
                a = max(a, math.ceil(rhs / last))
            elif last < 0:
                b = min(b, math.floor(rhs / last))
            elif rhs > 0:
                a, b = 1, 0
                break
        out.extend(head + (t,) for t in range(a, b + 1))
    return out


def dim_filtered(X: ToricFanoVariety, w: ValuationLike, k: int, j: int) -> int:
    """dim H^0(-kK_X - j F_w): monomials vanishing to order >= j along F_w."""
    v = as_valuation(X, w)
    if j < 0:
        raise ValueError("filtration level must be >= 0")
    shift = k * log_discrepancy(X, v)
    return sum(1 for u in lattice_points(X, k) if eg.pairing(u, v.w) + shift >= j)


def weight_sum(X: ToricFanoVariety, w: ValuationLike, k: int) -> Fraction:
    return sample(X, w, k).weight


def sample(X: ToricFanoVariety, w: ValuationLike, k: int) -> WeightSample:
    v = as_valuation(X, w)
    pts = lattice_points(X, k)
    return WeightSample(k, len(pts), Fraction(sum(sum(a * b for a, b in zip(u, v.w)) for u in pts)))


def expansion(weight_poly: eg.Polynomial1, dim_poly: eg.Polynomial1, n: int) -> tuple[Fraction, Fraction]:
    """(F0, F1) of w(k) / (k N_k) from the top coefficients."""
    w1, w0 = weight_poly.coefficient(n + 1), weight_poly.coefficient(n)
    c1, c0 = dim_poly.coefficient(n), dim_poly.coefficient(n - 1)
    return w1 / c1, (w0 * c1 - w1 * c0) / (c1 * c1)


def fit_weights(X: ToricFanoVariety, w: ValuationLike, samples: int | None = None) -> WeightFit:
    """Interpolate N_k and w(k) on k = ell, 2 ell, ...; the last samples only validate."""
    v = as_valuation(X, w)
    n = X.dimension
    samples = n + 4 if samples is None else samples
    if samples < n + 4:
        raise ValueError("need at least n+4 = %d samples, got %d" % (n + 4, samples))
    ell = X.gorenstein_denominator
    data = [sample(X, v, ell * i) for i in range(1, samples + 1)]
    fit, check = data[:n + 2], data[n + 2:]
    ks = [s.k for s in fit]
    weight_poly = eg.Polynomial1.interpolate(ks, [s.weight for s in fit])
    dim_poly = eg.Polynomial1.interpolate(ks, [s.dim for s in fit])
    for s in check:
        if weight_poly(s.k) != s.weight or dim_poly(s.k) != s.dim:
            raise QuasiPolynomialMismatch("validation sample k=%d disagrees with the fit" % s.k)
    if dim_poly.degree != n:
        raise QuasiPolynomialMismatch("lattice point count has degree %d, expected %d"
                                      % (dim_poly.degree, n))
    F0, F1 = expansion(weight_poly, dim_poly, n)
    return WeightFit(weight_poly, dim_poly, F0, F1, -2 * F1, tuple(data))


def cross_check(X: ToricFanoVariety, w: ValuationLike, samples: int | None = None) -> CrossCheck:
    """DF from lattice points against beta / vol(-K_X) from the volume function."""
    v = as_valuation(X, w)
    fit = fit_weights(X, v, samples)
    bv = beta(X, v) / anticanonical_degree(X)
    return CrossCheck(v.w, fit.df, bv, fit.df == bv, fit)
