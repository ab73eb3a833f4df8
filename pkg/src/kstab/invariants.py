"""beta, j and the stability verdicts for toric valuations.

For a toric valuation w the two invariants are

    beta(w) = A(w) * vol(-K_X) - int_0^tau vol(-K_X - x F_w) dx
    j(w)    = int_0^tau (vol(-K_X) - vol(-K_X - x F_w)) dx

and beta(w) >= delta * j(w) over all divisors is the uniform criterion.
Because <u, w> + A(w) >= 0 on P, the integral of the volume function equals
n! * int_P (<u, w> + A) du, which gives the barycenter identity

    beta(w) = -n! Vol(P) <barycenter(P), w>.

:func:`report` computes beta both ways and refuses to return if they differ.
"""
from __future__ import annotations

import enum
import itertools
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional

from . import exact_geometry as eg
from .errors import IdentityViolation, NonPositiveScale
from .toric_fano import (
    ToricFanoVariety,
    ValuationLike,
    anticanonical_degree,
    as_valuation,
    log_discrepancy,
    pseudoeffective_threshold,
    volume_function,
)

log = logging.getLogger(__name__)


class ScanVerdict(str, enum.Enum):
    DESTABILIZED = "DESTABILIZED"
    SEMISTABLE_TORIC_BOUNDARY = "SEMISTABLE_TORIC_BOUNDARY"
    NO_OBSTRUCTION_UP_TO_HEIGHT = "NO_OBSTRUCTION_UP_TO_HEIGHT"


@dataclass(frozen=True)
class InvariantReport:
    w: eg.LatticeVector
    A: Fraction
    tau: Fraction
    beta: Fraction
    j: Fraction
    ratio: Fraction
    volume_poly: eg.PiecewisePolynomial


@dataclass(frozen=True)
class ScanReport:
    height: int
    reports: tuple[InvariantReport, ...]
    min_ratio: Fraction
    destabilizer: Optional[eg.LatticeVector]
    barycenter: eg.RationalVector
    verdict: ScanVerdict
    # A zero barycenter only shows beta = 0 for toric valuations; passing to all
    # divisors over X relies on equivariant K-semistability being enough, which
    # is an external result.
    conditional_on_equivariant_reduction: bool


def beta(X: ToricFanoVariety, w: ValuationLike) -> Fraction:
    """A * vol(-K_X) minus the integral of the volume function over [0, tau]."""
    v = as_valuation(X, w)
    V = volume_function(X, v)
    tau = pseudoeffective_threshold(X, v)
    return log_discrepancy(X, v) * anticanonical_degree(X) - V.integrate(0, tau)


def beta_from_barycenter(X: ToricFanoVariety, w: ValuationLike) -> Fraction:
    v = as_valuation(X, w)
    return -anticanonical_degree(X) * eg.pairing(X.barycenter, v.w)


def j_invariant(X: ToricFanoVariety, w: ValuationLike) -> Fraction:
    v = as_valuation(X, w)
    V = volume_function(X, v)
    tau = pseudoeffective_threshold(X, v)
    return (anticanonical_degree(X) - V).integrate(0, tau)


def report(X: ToricFanoVariety, w: ValuationLike) -> InvariantReport:
    v = as_valuation(X, w)
    vol = anticanonical_degree(X)
    A = log_discrepancy(X, v)
    tau = pseudoeffective_threshold(X, v)
    V = volume_function(X, v)
    b = A * vol - V.integrate(0, tau)
    j = (vol - V).integrate(0, tau)

    b_alt = beta_from_barycenter(X, v)
    if b != b_alt:
        raise IdentityViolation("beta%s: integration gives %s, barycenter gives %s" % (v.w, b, b_alt))
    if j <= 0:
        raise IdentityViolation("j%s = %s is not positive" % (v.w, j))
    if b - j != (A - tau) * vol:
        raise IdentityViolation("beta - j != (A - tau) vol at %s" % (v.w,))
    return InvariantReport(v.w, A, tau, b, j, b / j, V)


def scaled_beta(X: ToricFanoVariety, w: ValuationLike, c) -> Fraction:
    """beta of the scaled valuation c * ord_w."""
    c = eg.as_rational(c)
    if c <= 0:
        raise NonPositiveScale("scale must be positive, got %s" % c)
    return c * beta(X, w)


def scaled_j(X: ToricFanoVariety, w: ValuationLike, c) -> Fraction:
    c = eg.as_rational(c)
    if c <= 0:
        raise NonPositiveScale("scale must be positive, got %s" % c)
    return c * j_invariant(X, w)


def primitive_vectors(n: int, h: int):
    """All primitive vectors of Z^n with coordinates in [-h, h], lexicographic."""
    for w in itertools.product(range(-h, h + 1), repeat=n):
        g = 0
        for c in w:
            g = gcd(g, c)
        if g == 1:
            yield w


def _worker_count() -> int:
    env = os.environ.get("KSTAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            log.warning("ignoring non-integer KSTAB_THREADS=%r", env)
    return os.cpu_count() or 1


def _pick_destabilizer(X: ToricFanoVariety, reports) -> Optional[eg.LatticeVector]:
    # Prefer prime divisors on X (the rays) over exceptional ones, then the
    # most negative beta, then the lowest height.
    bad = [r for r in reports if r.beta < 0]
    if not bad:
        return None
    rays = set(X.rays)
    best = min(bad, key=lambda r: (r.w not in rays, r.beta,
                                   max(abs(c) for c in r.w), sum(abs(c) for c in r.w), r.w))
    return best.w


def scan(X: ToricFanoVariety, h: int, workers: int | None = None) -> ScanReport:
    """Evaluate every primitive w of height <= h (w and -w separately)."""
    if h < 1:
        raise ValueError("height must be >= 1")
    ws = list(primitive_vectors(X.dimension, h))
    workers = _worker_count() if workers is None else workers
    if workers > 1 and len(ws) >= 64:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(report, itertools.repeat(X), ws, chunksize=16))
    else:
        reports = [report(X, w) for w in ws]
    reports.sort(key=lambda r: r.w)

    bary = X.barycenter
    if any(r.beta < 0 for r in reports):
        verdict = ScanVerdict.DESTABILIZED
    elif not any(bary):
        verdict = ScanVerdict.SEMISTABLE_TORIC_BOUNDARY
    else:
        verdict = ScanVerdict.NO_OBSTRUCTION_UP_TO_HEIGHT
    if verdict is ScanVerdict.SEMISTABLE_TORIC_BOUNDARY and any(r.beta != 0 for r in reports):
        raise IdentityViolation("zero barycenter but nonzero beta")
    return ScanReport(
        height=h,
        reports=tuple(reports),
        min_ratio=min(r.ratio for r in reports),
        destabilizer=_pick_destabilizer(X, reports),
        barycenter=bary,
        verdict=verdict,
        conditional_on_equivariant_reduction=verdict is ScanVerdict.SEMISTABLE_TORIC_BOUNDARY,
    )
