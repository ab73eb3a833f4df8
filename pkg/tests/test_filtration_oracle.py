import dataclasses
import itertools
import random
from fractions import Fraction as Q

import pytest

from conftest import variety
from kstab import exact_geometry as eg
from kstab.errors import NotDilateOfGorensteinIndex, QuasiPolynomialMismatch
from kstab.filtration_oracle import (
    cross_check,
    dim_filtered,
    expansion,
    fit_weights,
    lattice_points,
    weight_sum,
)
from kstab.invariants import beta
from kstab.toric_fano import anticanonical_degree, log_discrepancy


def brute_points(X, k, radius=None):
    """Every integer point of a generous box that satisfies <u, v> >= -k for all rays."""
    radius = radius or 4 * k * max(max(abs(c) for c in v) for v in X.polytope.vertices) + 1
    rng = range(-int(radius), int(radius) + 1)
    return [u for u in itertools.product(rng, repeat=X.dimension)
            if all(sum(a * b for a, b in zip(u, r)) >= -k for r in X.rays)]


def test_lattice_point_examples(P2, BlP2):
    assert len(lattice_points(P2, 1)) == 10
    assert len(lattice_points(P2, 2)) == 28 == Q(9, 2) * 4 + Q(9, 2) * 2 + 1
    assert len(lattice_points(BlP2, 1)) == 9


@pytest.mark.parametrize("name, ks", [("P2", [1, 3]), ("BlP2", [2]), ("P112", [1, 2]),
                                      ("P113", [3]), ("dP6", [2]), ("P3", [1, 2]), ("P1", [4])])
def test_lattice_points_match_brute_force(name, ks):
    X = variety(name)
    for k in ks:
        assert lattice_points(X, k) == sorted(brute_points(X, k))


def test_non_dilate_rejected():
    X = variety("P113")
    with pytest.raises(NotDilateOfGorensteinIndex):
        lattice_points(X, 1)
    with pytest.raises(NotDilateOfGorensteinIndex):
        lattice_points(X, 0)


def test_dim_filtered_examples(P2):
    assert dim_filtered(P2, (1, 0), 1, 0) == 10
    assert dim_filtered(P2, (1, 0), 1, 3) == 1
    assert dim_filtered(P2, (1, 0), 1, 4) == 0


def test_weight_sum_examples(P2, BlP2):
    assert weight_sum(P2, (1, 0), 1) == 0
    assert weight_sum(BlP2, (1, 1), 1) == 2
    for X, w in [(P2, (1, 0)), (BlP2, (1, 1)), (BlP2, (2, -1))]:
        neg = tuple(-c for c in w)
        assert weight_sum(X, w, 2) + weight_sum(X, neg, 2) == 0


@pytest.mark.parametrize("name, w", [("BlP2", (1, 1)), ("P112", (1, 0)), ("P113", (1, -1)),
                                     ("P3", (1, 2, 0))])
def test_integral_consistency(name, w):
    X = variety(name)
    ell = X.gorenstein_denominator
    for k in (ell, 2 * ell):
        pts = lattice_points(X, k)
        vals = [sum(a * b for a, b in zip(u, w)) for u in pts]
        top = max(vals) + 1
        up = sum(sum(1 for t in vals if t >= j) for j in range(1, top))
        down = sum(sum(1 for t in vals if t <= -j) for j in range(1, top + max(-t for t in vals)))
        assert weight_sum(X, w, k) == up - down
        shift = k * log_discrepancy(X, w)
        filt = sum(dim_filtered(X, w, k, j) for j in range(1, int(shift) + top + 1))
        assert weight_sum(X, w, k) == filt - shift * len(pts)


def test_fit_examples(P2, BlP2):
    assert fit_weights(P2, (1, 0)).df == 0
    assert fit_weights(BlP2, (1, 1)).df == Q(-1, 6) == beta(BlP2, (1, 1)) / 8
    assert fit_weights(variety("P1"), (1,)).df == 0


@pytest.mark.parametrize("name", ["P2", "BlP2", "P112", "P113", "dP7", "P3", "P2xP1"])
def test_fit_structure(name):
    X = variety(name)
    rng = random.Random(name)
    w = next(v for v in iter(lambda: tuple(rng.randint(-2, 2) for _ in range(X.dimension)), None)
             if eg.is_primitive(v))
    fit = fit_weights(X, w)
    n = X.dimension
    vol = eg.volume(X.polytope)
    assert fit.dim_poly.coefficient(n) == vol
    assert fit.dim_poly.coefficient(n) * {1: 1, 2: 2, 3: 6}[n] == anticanonical_degree(X)
    assert fit.weight_poly.degree <= n + 1
    assert fit.weight_poly.coefficient(n + 1) == vol * eg.pairing(X.barycenter, w)
    assert len(fit.samples) == n + 4
    assert [s.k for s in fit.samples] == [X.gorenstein_denominator * i for i in range(1, n + 5)]
    # F1 does not see a shift of w(k) by c * k * N_k
    for _ in range(3):
        c = Q(rng.randint(-20, 20), rng.randint(1, 7))
        shifted = fit.weight_poly + fit.dim_poly * eg.Polynomial1((0, c))
        F0, F1 = expansion(shifted, fit.dim_poly, n)
        assert F1 == fit.F1 and F0 == fit.F0 + c


def test_wrong_denominator_is_detected():
    X = variety("P113")
    bad = dataclasses.replace(X, gorenstein_denominator=1)
    with pytest.raises(QuasiPolynomialMismatch):
        fit_weights(bad, (1, 0), samples=7)


def test_too_few_samples(P2):
    with pytest.raises(ValueError):
        fit_weights(P2, (1, 0), samples=5)


@pytest.mark.parametrize("name, w, expected", [
    ("P2", (1, 0), 0),
    ("BlP2", (1, 1), Q(-1, 6)),
    ("P112", (1, 0), Q(-1, 3)),
    ("P113", (1, 0), Q(-2, 3)),
    ("P113", (1, -1), Q(-10, 9)),
])
def test_cross_check_examples(name, w, expected):
    c = cross_check(variety(name), w)
    assert c.df_oracle == c.beta_over_vol == expected
    assert c.agree
