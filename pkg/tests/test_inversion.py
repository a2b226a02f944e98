import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgt.bcds import build_71_quantum_pair
from qgt.exceptions import InsufficientDepth
from qgt.graph import interval
from qgt.inversion import invert_moments, moments_from_pairs, peel, scaled_moments, zeta_from_series
from qgt.spectral import HeatContentSeries, heat_content_series
from qgt.torsion import moment_hierarchy


def interval_pi_moments(N, prec=256):
    # A_k scales as L^(2k+1); the rational unit-interval values carry it exactly
    unit = moment_hierarchy(interval(1), N)
    with mpmath.workprec(prec):
        return [mpmath.mpf(a.numerator) / a.denominator * mpmath.pi ** (2 * k + 1) for k, a in unit.items()]


def test_single_term():
    A = moments_from_pairs([(4, 1)], 20)
    recovered = invert_moments(A, 1)
    mu, a = recovered.pairs()[0]
    assert mu == pytest.approx(4, rel=1e-15)
    assert a == pytest.approx(1, rel=1e-15)


def test_interval_pi():
    recovered = invert_moments(interval_pi_moments(40), 2)
    (mu1, a1), (mu2, a2) = recovered.pairs()
    assert abs(mu1 - 1) < 1e-6
    assert abs(a1 - 8 / math.pi) < 1e-5
    assert abs(mu2 - 9) < 1e-6
    assert abs(a2 - 8 / (9 * math.pi)) < 1e-6


def test_g1_matches_spectrum():
    g = build_71_quantum_pair((1, 2, 3)).g1
    recovered = invert_moments(moment_hierarchy(g, 40), 1)
    lam1 = heat_content_series(g, 1.0).lams[0]
    assert abs(recovered.pairs()[0][0] - lam1) < 1e-6


def test_insufficient_depth():
    with pytest.raises(InsufficientDepth) as info:
        invert_moments(interval_pi_moments(20), 4)
    assert 1 <= info.value.achieved < 4
    assert len(info.value.partial) == info.value.achieved


def test_argument_checks():
    with pytest.raises(ValueError):
        invert_moments([1, 2, 3], 1)
    with pytest.raises(ValueError):
        invert_moments(interval_pi_moments(20), 0)


def test_peel_removes_term():
    z = scaled_moments(moments_from_pairs([(2, 3), (5, 1)], 10))
    rest = peel(z, mpmath.mpf(2), mpmath.mpf(3))
    for n, r in enumerate(rest, start=1):
        assert r == pytest.approx(float(mpmath.mpf(5) ** -n), rel=1e-30)


ratios = st.lists(st.floats(1.3, 2.0), min_size=3, max_size=3)
weights = st.lists(st.floats(0.2, 3.0), min_size=4, max_size=4)


@settings(max_examples=15)
@given(st.floats(0.5, 3.0), ratios, weights)
def test_round_trip(mu0, steps, a_sq):
    # ratios down to 1.3 between neighbours; peeling amplifies the error of
    # each removed term, and at 256 bits the fourth term can drift to ~1e-8
    mus = [mu0]
    for r in steps:
        mus.append(mus[-1] * r)
    pairs = list(zip(mus, a_sq))
    got = invert_moments(moments_from_pairs(pairs, 800, 512), 4, precision=512).pairs()
    for (mu_t, a_t), (mu_r, a_r) in zip(pairs, got):
        assert abs(mu_r - mu_t) <= 1e-8 * mu_t
        assert abs(a_r - a_t) <= 1e-8 * max(1.0, a_t)
    assert all(a > 0 for _, a in got)
    assert all(x < y for (x, _), (y, _) in zip(got, got[1:]))


def test_close_ratios_need_precision():
    pairs = [(1.5, 1.0), (3.0, 1.0), (3.9375, 1.0), (5.16796875, 0.5)]
    coarse = invert_moments(moments_from_pairs(pairs, 800, 256), 4, precision=256).pairs()
    fine = invert_moments(moments_from_pairs(pairs, 800, 512), 4, precision=512).pairs()
    assert abs(coarse[3][0] - pairs[3][0]) > abs(fine[3][0] - pairs[3][0])
    assert abs(fine[3][0] - pairs[3][0]) < 1e-12


def test_recovered_heat_content():
    pairs = [(1.0, 2.0), (4.0, 0.5)]
    recovered = invert_moments(moments_from_pairs(pairs, 200), 2)
    t = 0.7
    assert recovered.heat_content(t) == pytest.approx(sum(a * math.exp(-m * t) for m, a in pairs), rel=1e-12)


def test_zeta_single_term():
    series = HeatContentSeries([4.0], [1.0], kmax=100.0, total_length=1.0)
    z = zeta_from_series(series, 2)
    assert z.value == pytest.approx(1 / 16)
    with pytest.raises(ValueError):
        zeta_from_series(series, 0.5)


def test_zeta_interval_pi():
    g = interval(Fraction(math.pi))
    z = zeta_from_series(heat_content_series(g, 40), 1)
    assert abs(z.value - math.pi**3 / 12) <= z.error
