from fractions import Fraction

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import StandardScaler

from qgt.estimators import (
    HeatContentFeatures,
    MomentFeatures,
    MomentInverter,
    SpectrumFeatures,
    check_graphs,
    check_moments,
    first_eigenvalues,
)
from qgt.graph import interval, star
from qgt.inversion import moments_from_pairs
from qgt.torsion import moment_hierarchy


def test_check_graphs():
    gs = check_graphs([interval(1), [(0, 1, 2)], {"edges": [{"tail": 0, "head": 1, "length": "3"}]}])
    assert [g.total_length for g in gs] == [1, 2, 3]
    assert len(check_graphs(interval(1))) == 1
    with pytest.raises(ValueError):
        check_graphs([])


def test_check_moments():
    with pytest.raises(ValueError):
        check_moments([1])
    with pytest.raises(ValueError):
        check_moments(np.ones((2, 2)))
    with pytest.raises(ValueError):
        check_moments([1, -1, 2])


def test_moment_features():
    X = [interval(1), star([1, 1, 1])]
    out = MomentFeatures(n_moments=2).fit_transform(X)
    star_a2 = float(moment_hierarchy(X[1], 2)[2])
    np.testing.assert_allclose(out, [[1 / 12, 1 / 60], [1, star_a2]])
    exact = MomentFeatures(n_moments=1, exact=True).fit_transform(X)
    assert exact[0, 0] == Fraction(1, 12) and exact[1, 0] == 1


def test_not_fitted():
    with pytest.raises(NotFittedError):
        MomentFeatures().transform([interval(1)])
    with pytest.raises(NotFittedError):
        MomentInverter().predict([1.0])


def test_params_and_clone():
    est = HeatContentFeatures(times=(0.5,), kmax=10)
    assert est.get_params()["kmax"] == 10
    c = clone(est).set_params(kmax=20)
    assert c.kmax == 20 and est.kmax == 10


def test_heat_and_spectrum_features():
    X = [star([1, 1, 1])]
    q = HeatContentFeatures(times=(0.1, 1.0), kmax=40).fit_transform(X)
    assert q.shape == (1, 2) and q[0, 0] > q[0, 1] > 0
    lam = SpectrumFeatures(n_eigenvalues=3).fit_transform(X)
    np.testing.assert_allclose(lam[0], np.array([0.25, 1, 1]) * np.pi**2, rtol=1e-10)


def test_pipeline():
    pipe = make_pipeline(MomentFeatures(n_moments=2), StandardScaler())
    out = pipe.fit_transform([interval(1), interval(2), star([1, 2])])
    assert out.shape == (3, 2)


def test_first_eigenvalues_widens():
    assert len(first_eigenvalues(interval(1), 12)) == 12


def test_moment_inverter():
    pairs = [(1.0, 2.0), (3.0, 0.5)]
    inv = MomentInverter(depth=2).fit(moments_from_pairs(pairs, 120))
    np.testing.assert_allclose(inv.mu_, [1.0, 3.0], rtol=1e-10)
    np.testing.assert_allclose(inv.a_sq_, [2.0, 0.5], rtol=1e-10)
    t = np.array([0.5, 2.0])
    np.testing.assert_allclose(inv.predict(t), 2 * np.exp(-t) + 0.5 * np.exp(-3 * t), rtol=1e-10)
    assert inv.zeta(1) == pytest.approx(2 + 0.5 / 3)
    with pytest.raises(ValueError):
        inv.predict([0.0])
