import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from bbgwo.core import make_rng
from bbgwo.distmath import (
    DegenerateDistributionError,
    Histogram,
    LeaderUpdateDist,
    build_histogram,
    compare_to_normal,
    g_cdf,
    g_normalization,
    g_pdf,
    h_cdf_numeric,
    h_pdf_numeric,
    ks_distance,
    leader_moments,
    mn_params,
    sample_gwo_update,
    sample_leader_term,
    update_moments,
)


def proof_cdf(v, a, x, p):
    """Closed-form CDF branches for p > 0, x >= p, evaluated at u = p + v, v >= 0.

    Written straight from the four region-by-region integrals, independent of
    the density formula and of any quadrature.
    """
    if x > 2 * p:
        if v > a * (x - 2 * p):
            return 0.5 + (v / p + v / p * math.log(a * x / v) - a * (x / p - 2)) / (4 * a)
        return 0.5 + v / (4 * a * p) * math.log(x / (x - 2 * p))
    if v > a * (2 * p - x):
        return 0.5 + (v / p + v / p * math.log(a * x / v) + a * (2 - x / p)) / (4 * a)
    if v == 0:
        return 0.5
    return 0.5 + (v / p + v / p * math.log(a * math.sqrt(x * (2 * p - x)) / v)) / (2 * a)


def random_dists(seed, count, a_range=(0.05, 2.0), scale=10.0):
    rng = make_rng(seed)
    out = []
    for _ in range(count):
        a = rng.uniform(*a_range)
        x, p = rng.uniform(-scale, scale, 2)
        out.append(LeaderUpdateDist(float(a), float(x), float(p)))
    return out


@pytest.mark.parametrize(
    "a, x, p, m, n",
    [(2, 1, 1, -2, 2), (2, 1, 0.5, 0, 2), (2, 4, 1, 4, 8)],
)
def test_mn_params(a, x, p, m, n):
    assert mn_params(a, x, p) == (m, n)
    d = LeaderUpdateDist(a, x, p)
    assert (d.m, d.n) == (m, n)


@given(st.floats(0.01, 2), st.floats(-50, 50), st.floats(-50, 50))
def test_mn_invariants(a, x, p):
    m, n = mn_params(a, x, p)
    assert n >= abs(m) - 1e-12 and n >= 0
    if p != 0:
        assert n - m == pytest.approx(2 * a * abs(p), rel=1e-9, abs=1e-12)


def test_g_pdf_reference_values():
    assert g_pdf(0.0, LeaderUpdateDist(2, 1, 1)) == pytest.approx(0.25 * math.log(2))
    flat = LeaderUpdateDist(2, 4, 1)
    for u in (1.0, -2.5, 4.9):
        assert g_pdf(u, flat) == pytest.approx(math.log(2) / 8)
    d = LeaderUpdateDist(1.5, 2.25, -0.75)  # dyadic values: p +- n is exact
    assert g_pdf(d.p + d.n, d) == 0.0
    assert g_pdf(d.p - d.n, d) == 0.0
    for d in random_dists(0, 5):
        assert g_pdf(d.p + 1.01 * d.n, d) == 0.0
        assert g_pdf(d.p - 1.5 * d.n, d) == 0.0


@pytest.mark.parametrize("a, x, p, u", [(2, 1, 1, 0.0), (2, 4, 1, 2.0), (1.5, -3, 2, 4.2)])
def test_g_pdf_against_monte_carlo(a, x, p, u):
    samples = sample_leader_term(a, x, p, make_rng(100), 2 * 10**6)
    half = 0.05
    k = np.count_nonzero(np.abs(samples - u) < half)
    est = k / (samples.size * 2 * half)
    se = math.sqrt(k) / (samples.size * 2 * half)
    # bin-average vs point value: density is smooth away from p and the kinks
    assert abs(est - g_pdf(u, LeaderUpdateDist(a, x, p))) < 4 * se + 2e-3


def test_g_pdf_singularity_and_degenerate():
    assert g_pdf(1.0, LeaderUpdateDist(2, 1, 1)) == math.inf
    with pytest.raises(DegenerateDistributionError):
        g_pdf(0.0, LeaderUpdateDist(0, 1, 1))
    with pytest.raises(DegenerateDistributionError):
        g_pdf(0.0, LeaderUpdateDist(2, 0, 0))


def test_g_pdf_zero_leader_is_uniform():
    d = LeaderUpdateDist(2, 3, 0)
    assert g_pdf(0.0, d) == pytest.approx(1 / 12)
    assert g_pdf(5.9, d) == pytest.approx(1 / 12)
    assert g_normalization(d) == pytest.approx(1.0)


def test_g_normalization_random():
    for d in random_dists(1, 20):
        assert abs(g_normalization(d) - 1) < 1e-4


def test_g_cdf_edges_and_centre():
    for d in random_dists(2, 10):
        assert g_cdf(d.p, d) == 0.5
        assert g_cdf(d.p + d.n, d) == 1.0
        assert g_cdf(d.p - d.n, d) == 0.0


@pytest.mark.parametrize("a, x, p", [(2, 5, 1), (1.3, 3.5, 1), (2, 1.5, 1), (0.7, 3.0, 2.0), (1.0, 2.5, 1.25)])
def test_g_cdf_matches_region_formulas(a, x, p):
    d = LeaderUpdateDist(a, x, p)
    for v in np.linspace(0, d.n, 41):
        assert g_cdf(p + v, d) == pytest.approx(proof_cdf(v, a, x, p), abs=1e-9)
        # lower half by symmetry
        assert g_cdf(p - v, d) == pytest.approx(1 - proof_cdf(v, a, x, p), abs=1e-9)


def test_cell_mass_closed_form_matches_quadrature():
    from bbgwo.distmath import _half_mass

    for d in random_dists(3, 10):
        for frac in (0.0, 0.1, 0.5, 0.9, 1.0):
            v = frac * d.n
            assert float(_half_mass(v, d.m, d.n, d.p)) == pytest.approx(g_cdf(d.p + v, d) - 0.5, abs=1e-9)


def test_g_reflection_symmetries():
    for d in random_dists(4, 10):
        mirrored_x = LeaderUpdateDist(d.a, 2 * d.p - d.x, d.p)
        flipped = LeaderUpdateDist(d.a, -d.x, -d.p)
        for frac in np.linspace(-0.99, 0.99, 23):
            u = d.p + frac * d.n
            assert g_pdf(u, d) == pytest.approx(g_pdf(2 * d.p - u, d), rel=1e-12)
            assert g_pdf(u, d) == pytest.approx(g_pdf(u, mirrored_x), rel=1e-12)
            assert g_pdf(u, d) == pytest.approx(g_pdf(-u, flipped), rel=1e-12)


def test_g_monotone_below_centre():
    for d in random_dists(5, 10):
        u = np.linspace(d.p - 1.2 * d.n, d.p, 2000)
        assert np.all(np.diff(g_pdf(u, d)) >= 0)


def _pieces(d):
    lo = d.p - d.n
    knots = sorted({lo, d.p - abs(d.m) if abs(d.m) < d.n else lo, d.p,
                    d.p + abs(d.m) if abs(d.m) < d.n else d.p + d.n, d.p + d.n})
    return list(zip(knots[:-1], knots[1:]))


def test_moments_by_quadrature():
    for d in random_dists(6, 10):
        mean = sum(integrate.quad(lambda u: u * g_pdf(u, d), lo, hi, limit=200)[0] for lo, hi in _pieces(d))
        var = sum(integrate.quad(lambda u: (u - d.p) ** 2 * g_pdf(u, d), lo, hi, limit=200)[0]
                  for lo, hi in _pieces(d))
        m_exp, v_exp = leader_moments(d)
        assert abs(mean - m_exp) < 1e-3
        assert var == pytest.approx(v_exp, rel=1e-3)


def test_leader_moments_examples():
    assert leader_moments(LeaderUpdateDist(2, 1, 0.5)) == (0.5, pytest.approx(4 / 9))
    assert leader_moments(LeaderUpdateDist(0, 1, 0.5))[1] == 0


def test_leader_variance_monte_carlo_specific():
    s = sample_leader_term(2, 1, 0.5, make_rng(8), 10**6)
    c = s - s.mean()
    se = math.sqrt((np.mean(c**4) - np.mean(c**2) ** 2) / s.size)
    assert abs(s.var() - 4 / 9) < 3 * se


def test_update_moments_examples():
    assert update_moments(2, 3, 0, 0, 0) == (0.0, pytest.approx(2.0))
    assert update_moments(0.7, -4, 1, 2, 3)[0] == 2
    assert update_moments(0, 5, 1, 2, 3)[1] == 0


def test_update_variance_is_ninth_of_leader_sum():
    for a, x, *ps in [(1.2, 3.0, 0.5, -1.0, 2.0), (2.0, -7.0, 4.0, 4.0, -3.0)]:
        _, sigma = update_moments(a, x, *ps)
        total = sum(leader_moments(LeaderUpdateDist(a, x, p))[1] for p in ps)
        assert sigma**2 == pytest.approx(total / 9)


def test_h_normalization_symmetry_and_mode():
    ds = [LeaderUpdateDist(2, 3.0, p) for p in (0.5, -1.2, 2.0)]
    u, h = h_pdf_numeric(*ds)
    assert abs(np.trapezoid(h, u) - 1) < 0.01
    mu = np.mean([0.5, -1.2, 2.0])
    step = u[1] - u[0]
    assert abs(u[np.argmax(h)] - mu) <= step
    assert u[0] <= (sum(d.p - d.n for d in ds)) / 3 + step
    assert u[-1] >= (sum(d.p + d.n for d in ds)) / 3 - step


def test_h_symmetric_for_equal_leaders():
    ds = [LeaderUpdateDist(1.5, -2.0, 1.7)] * 3
    u, h = h_pdf_numeric(*ds)
    assert np.max(np.abs(h - h[::-1])) <= 1e-6 * h.max()
    assert np.allclose(u + u[::-1], 2 * 1.7)


def test_h_moments_match_update_moments():
    ds = [LeaderUpdateDist(1.1, 0.4, p) for p in (3.0, -2.5, 1.0)]
    u, h = h_pdf_numeric(*ds)
    mu, sigma = update_moments(1.1, 0.4, 3.0, -2.5, 1.0)
    mean = np.trapezoid(u * h, u)
    assert mean == pytest.approx(mu, abs=1e-9)
    # cell discretisation adds about step**2/12 per convolved term
    assert np.trapezoid((u - mean) ** 2 * h, u) == pytest.approx(sigma**2, rel=1e-3)


def test_h_rejects_bad_input():
    good = LeaderUpdateDist(2, 1, 1)
    with pytest.raises(DegenerateDistributionError):
        h_pdf_numeric(good, good, LeaderUpdateDist(2, 0, 0))
    with pytest.raises(ValueError):
        h_pdf_numeric(good, good, good, grid_points=100)


def test_sample_gwo_update_basics():
    rng = make_rng(0)
    assert np.all(sample_gwo_update(0, 5, 1, 2, 3, rng, 100) == 2.0)
    a = sample_gwo_update(2, 1, 0.3, -0.4, 5, make_rng(3), 1000)
    b = sample_gwo_update(2, 1, 0.3, -0.4, 5, make_rng(3), 1000)
    assert np.array_equal(a, b)
    s = sample_gwo_update(2, 1, 0.3, -0.4, 5, make_rng(4), 10**5)
    assert abs(s.mean() - (0.3 - 0.4 + 5) / 3) < 3 * s.std() / math.sqrt(s.size)
    with pytest.raises(ValueError):
        sample_gwo_update(2, 1, 0, 0, 0, rng, 0)


def test_build_histogram():
    h = build_histogram(np.full(50, 3.0), 80)
    assert np.count_nonzero(h.counts) == 1 and h.total == 50
    h = build_histogram([0.0, 1.0], 2)
    assert list(h.counts) == [1, 1]
    s = make_rng(0).standard_normal(10**5)
    h = build_histogram(s, 80)
    assert h.counts.sum() == 10**5 and len(h.counts) == len(h.bin_edges) - 1 == 80
    with pytest.raises(ValueError):
        build_histogram([], 10)


def test_compare_to_normal():
    s = make_rng(5).normal(1.0, 2.0, 10**5)
    cmp = compare_to_normal(build_histogram(s, 80), 1.0, 2.0)
    assert cmp.ks_distance < 0.01
    assert 0 <= cmp.total_variation <= 1
    with pytest.raises(DegenerateDistributionError):
        compare_to_normal(build_histogram(s, 80), 1.0, 0.0)


def test_total_variation_extremes():
    far = Histogram(np.array([100.0, 101.0, 102.0]), np.array([5, 5]), 10)
    assert compare_to_normal(far, 0.0, 1.0).total_variation == pytest.approx(1.0)
    # histogram whose bin frequencies equal the normal bin probabilities
    exact = Histogram(np.array([-60.0, 0.0, 60.0]), np.array([1, 1]), 2)
    assert compare_to_normal(exact, 0.0, 1.0).total_variation == pytest.approx(0.0, abs=1e-12)


def test_ks_distance_small_cases():
    cdf = lambda z: np.clip(z, 0, 1)  # noqa: E731
    assert ks_distance([0.5], cdf) == pytest.approx(0.5)
    assert ks_distance(np.linspace(0.05, 0.95, 10), cdf) == pytest.approx(0.05)


dyadic = st.integers(-20 * 64, 20 * 64).map(lambda k: k / 64)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 128).map(lambda k: k / 64), dyadic, dyadic, st.integers(0, 64 * 100).map(lambda k: k / 64))
def test_g_exactly_symmetric(a, x, p, v):
    # dyadic inputs keep p + v and p - v exact, so equality must be exact
    d = LeaderUpdateDist(a, x, p)
    if d.degenerate:
        return
    assert g_pdf(p + v, d) == g_pdf(p - v, d)


def test_h_cdf_against_samples():
    ds = [LeaderUpdateDist(1.7, -1.0, p) for p in (2.0, 0.3, -4.0)]
    s = sample_gwo_update(1.7, -1.0, 2.0, 0.3, -4.0, make_rng(6), 10**5)
    assert ks_distance(s, h_cdf_numeric(*ds)) < 0.02
