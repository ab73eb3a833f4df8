"""Log Fano pairs (P^1, sum a_i p_i).

Every prime divisor over P^1 is a point q.  With d = 2 - sum a_i and a the
boundary coefficient at q (0 for a point off the boundary):

    A = 1 - a,  tau = d,  vol(-(K + Delta) - x q) = d - x  on [0, d]

so beta = (1 - a) d - d^2/2 and j = d^2/2.  The pair is uniformly K-stable
iff a_2 + ... + a_m > a_1 and K-semistable iff a_2 + ... + a_m >= a_1.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import IdentityViolation, IndexOutOfRange, InvalidLogPair
from .exact_geometry import as_rational


class _Generic:
    def __repr__(self):
        return "GENERIC"


GENERIC = _Generic()


class P1Verdict(str, enum.Enum):
    UNIFORMLY_K_STABLE = "UNIFORMLY_K_STABLE"
    K_SEMISTABLE_NOT_UNIFORM = "K_SEMISTABLE_NOT_UNIFORM"
    K_UNSTABLE = "K_UNSTABLE"


@dataclass(frozen=True)
class P1LogPair:
    """Boundary coefficients, sorted descending (stable, so ties keep input order)."""

    coefficients: tuple[Fraction, ...]
    input_positions: tuple[int, ...]

    @classmethod
    def from_coefficients(cls, coeffs: Sequence) -> P1LogPair:
        vals = [as_rational(a) for a in coeffs]
        for a in vals:
            if not 0 < a < 1:
                raise InvalidLogPair("coefficient range: %s is not in (0, 1)" % a)
        if sum(vals, Fraction(0)) >= 2:
            raise InvalidLogPair("log Fano degree: coefficients sum to %s >= 2" % sum(vals))
        order = sorted(range(len(vals)), key=lambda i: -vals[i])
        return cls(tuple(vals[i] for i in order), tuple(order))

    @property
    def degree(self) -> Fraction:
        return 2 - sum(self.coefficients, Fraction(0))


@dataclass(frozen=True)
class PointRecord:
    which: Union[int, _Generic]  # 1-based index into the sorted coefficients
    coefficient: Fraction
    A: Fraction
    tau: Fraction
    beta: Fraction
    j: Fraction

    @property
    def ratio(self) -> Fraction:
        return self.beta / self.j


@dataclass(frozen=True)
class P1Report:
    pair: P1LogPair
    points: tuple[PointRecord, ...]
    verdict: P1Verdict
    margin: Fraction
    destabilizer: Union[int, _Generic, None]


def point_invariants(pair: P1LogPair, which) -> PointRecord:
    if which is GENERIC:
        a = Fraction(0)
    else:
        if isinstance(which, bool) or not isinstance(which, int) or not 1 <= which <= len(pair.coefficients):
            raise IndexOutOfRange("point %r out of range 1..%d" % (which, len(pair.coefficients)))
        a = pair.coefficients[which - 1]
    d = pair.degree
    A = 1 - a
    return PointRecord(which, a, A, d, A * d - d * d / 2, d * d / 2)


def closed_form_verdict(pair: P1LogPair) -> P1Verdict:
    a = pair.coefficients
    first = a[0] if a else Fraction(0)
    rest = sum(a[1:], Fraction(0))
    if rest > first:
        return P1Verdict.UNIFORMLY_K_STABLE
    if rest == first:
        return P1Verdict.K_SEMISTABLE_NOT_UNIFORM
    return P1Verdict.K_UNSTABLE


def analyze(pair: P1LogPair) -> P1Report:
    points = [point_invariants(pair, i + 1) for i in range(len(pair.coefficients))]
    points.append(point_invariants(pair, GENERIC))
    worst = min(points, key=lambda p: p.beta)  # first minimum: largest coefficient
    if worst.beta > 0:
        verdict = P1Verdict.UNIFORMLY_K_STABLE
    elif worst.beta == 0:
        verdict = P1Verdict.K_SEMISTABLE_NOT_UNIFORM
    else:
        verdict = P1Verdict.K_UNSTABLE
    expected = closed_form_verdict(pair)
    if verdict is not expected:
        raise IdentityViolation("beta signs give %s, closed form gives %s" % (verdict.value, expected.value))
    return P1Report(
        pair=pair,
        points=tuple(points),
        verdict=verdict,
        margin=min(p.ratio for p in points),
        destabilizer=worst.which if worst.beta < 0 else None,
    )
