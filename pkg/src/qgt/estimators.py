"""scikit-learn compatible wrappers.

The graph invariants are exposed as stateless transformers mapping a list
of graphs to a feature matrix, so they drop into a ``Pipeline``. The
moment inversion is an estimator: ``fit`` learns the heat-content
spectrum from a moment sequence and ``predict`` evaluates the heat
content it determines.
"""
from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .graph import MetricGraph, build_graph, from_dict
from .inversion import invert_moments
from .spectral import SpectralOptions, eigenvalues_up_to, heat_content_series
from .torsion import moment_hierarchy


def check_graphs(X) -> list[MetricGraph]:
    """Coerce a graph, or a sequence of graphs / edge lists / JSON dicts."""
    if isinstance(X, (MetricGraph, dict)):
        X = [X]
    out = []
    for item in X:
        if isinstance(item, MetricGraph):
            out.append(item)
        elif isinstance(item, dict):
            out.append(from_dict(item))
        else:
            out.append(build_graph(item))
    if not out:
        raise ValueError("expected at least one graph")
    return out


def check_moments(A) -> list:
    """1-d moment sequence; Fractions and mpmath values pass through untouched."""
    if hasattr(A, "values") and not isinstance(A, np.ndarray):
        A = A.values
    if isinstance(A, np.ndarray):
        if A.ndim != 1:
            raise ValueError(f"moments must be 1-d, got shape {A.shape}")
        A = A.tolist()
    A = list(A)
    if len(A) < 2:
        raise ValueError("need at least two moments")
    if any(a <= 0 for a in A):
        raise ValueError("moments must be positive")
    return A


class _GraphTransformer(TransformerMixin, BaseEstimator):
    def fit(self, X, y=None):
        self.n_graphs_seen_ = len(check_graphs(X))
        return self

    def _options(self) -> SpectralOptions:
        return SpectralOptions(k_tol=self.k_tol, rank_tol=self.rank_tol)


class MomentFeatures(_GraphTransformer):
    """``[A_1, ..., A_K]`` per graph; ``exact=True`` returns Fractions."""

    def __init__(self, n_moments: int = 1, exact: bool = False):
        self.n_moments = n_moments
        self.exact = exact

    def transform(self, X):
        check_is_fitted(self, "n_graphs_seen_")
        rows = [moment_hierarchy(g, self.n_moments).values for g in check_graphs(X)]
        if self.exact:
            return np.array(rows, dtype=object)
        return np.array([[float(a) for a in r] for r in rows])


class HeatContentFeatures(_GraphTransformer):
    """Heat content sampled at ``times``.

    ``kmax`` defaults per graph to ``100 * pi / L``, about a hundred modes.
    """

    def __init__(self, times=(0.1, 1.0, 10.0), kmax=None, k_tol=1e-12, rank_tol=1e-7):
        self.times = times
        self.kmax = kmax
        self.k_tol = k_tol
        self.rank_tol = rank_tol

    def transform(self, X):
        check_is_fitted(self, "n_graphs_seen_")
        out = []
        for g in check_graphs(X):
            kmax = self.kmax or 100 * math.pi / float(g.total_length)
            series = heat_content_series(g, kmax, self._options())
            out.append([series.heat_content(t).value for t in self.times])
        return np.array(out)


class SpectrumFeatures(_GraphTransformer):
    """The first ``n_eigenvalues`` eigenvalues, repeated by multiplicity."""

    def __init__(self, n_eigenvalues: int = 10, k_tol=1e-12, rank_tol=1e-7):
        self.n_eigenvalues = n_eigenvalues
        self.k_tol = k_tol
        self.rank_tol = rank_tol

    def transform(self, X):
        check_is_fitted(self, "n_graphs_seen_")
        out = []
        for g in check_graphs(X):
            out.append(first_eigenvalues(g, self.n_eigenvalues, self._options()))
        return np.array(out)


def first_eigenvalues(g: MetricGraph, n: int, opts: SpectralOptions | None = None) -> list[float]:
    """Smallest ``n`` eigenvalues with multiplicity, widening the search as needed."""
    L = float(g.total_length)
    kmax = math.pi * (n + len(g.vertices)) / L
    while True:
        lams = []
        for p in eigenvalues_up_to(g, kmax, opts):
            lams.extend([p.lam] * p.multiplicity)
        if len(lams) >= n:
            return lams[:n]
        kmax *= 1.5


class MomentInverter(BaseEstimator):
    """Learn ``(mu, a^2)`` from ``A_1..A_N``; predict the heat content."""

    def __init__(self, depth: int = 3, precision: int = 256, window: int = 8, stability: float = 1e-4):
        self.depth = depth
        self.precision = precision
        self.window = window
        self.stability = stability

    def fit(self, A, y=None):
        A = check_moments(A)
        self.spectrum_ = invert_moments(A, self.depth, self.precision, self.window, self.stability)
        self.mu_ = np.array([float(t.mu) for t in self.spectrum_.terms])
        self.a_sq_ = np.array([float(t.a_sq) for t in self.spectrum_.terms])
        self.n_moments_in_ = len(A)
        return self

    def predict(self, t):
        """Heat content at times ``t`` from the recovered terms."""
        check_is_fitted(self, "spectrum_")
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if np.any(t <= 0):
            raise ValueError("times must be positive")
        return np.exp(-np.outer(t, self.mu_)) @ self.a_sq_

    def zeta(self, s: float) -> float:
        check_is_fitted(self, "spectrum_")
        return float(np.sum(self.a_sq_ * self.mu_ ** (-s)))


__all__ = [
    "MomentFeatures",
    "HeatContentFeatures",
    "SpectrumFeatures",
    "MomentInverter",
    "check_graphs",
    "check_moments",
    "first_eigenvalues",
]
