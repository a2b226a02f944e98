"""Dirichlet-standard spectrum, projection coefficients and heat content.

For ``lambda = k^2 > 0`` an eigenfunction is ``A_e sin(kx) + B_e cos(kx)``
on each edge, and the vertex conditions give a ``2|E| x 2|E|`` matrix
``M(k)`` whose kernel is exactly the eigenspace (the Kirchhoff rows are
divided by ``k`` so all entries are O(1)).

Root finding scans ``sigma_min(M(k))``. Because every ``k``-dependent
entry has derivative at most ``l_e`` in magnitude,
``|sigma_min(k1) - sigma_min(k2)| <= lip * |k1 - k2|`` with
``lip = ||dM/dk||_F`` bounded independently of ``k``. A cell
``[k0, k1]`` with ``sigma(k0) + sigma(k1) > lip * (k1 - k0)`` therefore
holds no eigenvalue; all other cells are bisected until narrow, then the
minimum is located by golden-section search.
"""
from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .exceptions import MissedRootRisk, NoBoundaryVertex
from .graph import TAIL, MetricGraph

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_WEYL_MIN_MODES = 8


@dataclass(frozen=True)
class SpectralOptions:
    """Tolerances for the eigenvalue search.

    ``rank_tol`` and ``drop_tol`` are relative: to the max-norm of the
    secular matrix and to the total length respectively.
    """

    k_tol: float = 1e-12
    rank_tol: float = 1e-7
    drop_tol: float = 1e-12
    weyl_slack: float = 2.0
    workers: int | None = None

    def __post_init__(self):
        for name in ("k_tol", "rank_tol", "drop_tol", "weyl_slack"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


class Estimate(NamedTuple):
    """A truncated sum together with a bound on its distance to the full sum."""

    value: float
    error: float


class SecularSystem:
    """Vertex-condition matrix ``M(k)`` for the trig ansatz on each edge.

    Unknown ordering is ``(A_0, B_0, A_1, B_1, ...)``; rows are Dirichlet,
    continuity (against the first incidence), Kirchhoff, vertices by id.
    """

    def __init__(self, g: MetricGraph):
        if not g.has_boundary:
            raise NoBoundaryVertex("the spectral problem needs a degree-1 vertex")
        self.graph = g
        self.size = 2 * g.n_edges
        self.lengths = np.array([float(e.length) for e in g.edges])
        const, trig = [], []  # (row, col, coef) and (row, col, coef, edge, is_sin)

        def value(row, eid, side, sign):
            if side == TAIL:
                const.append((row, 2 * eid + 1, sign))
            else:
                trig.append((row, 2 * eid, sign, eid, True))
                trig.append((row, 2 * eid + 1, sign, eid, False))

        row = 0
        for v in g.boundary_vertices:
            value(row, *g.incidences(v)[0], 1.0)
            row += 1
        for v in g.interior_vertices:
            ref, *rest = g.incidences(v)
            for inc in rest:
                value(row, *inc, 1.0)
                value(row, *ref, -1.0)
                row += 1
        for v in g.interior_vertices:
            for eid, side in g.incidences(v):
                if side == TAIL:
                    const.append((row, 2 * eid, -1.0))
                else:
                    # u'(l)/k = A cos(kl) - B sin(kl)
                    trig.append((row, 2 * eid, 1.0, eid, False))
                    trig.append((row, 2 * eid + 1, -1.0, eid, True))
            row += 1
        assert row == self.size

        self._const = np.zeros((self.size, self.size))
        for r, c, v in const:
            self._const[r, c] += v
        t = np.array([(r, c, v, e, s) for r, c, v, e, s in trig], dtype=float).reshape(-1, 5)
        self._rows = t[:, 0].astype(int)
        self._cols = t[:, 1].astype(int)
        self._coef = t[:, 2]
        self._len = self.lengths[t[:, 3].astype(int)]
        self._is_sin = t[:, 4].astype(bool)
        pos = set(zip(self._rows.tolist(), self._cols.tolist()))
        assert len(pos) == len(self._rows) and not any(self._const[r, c] for r, c in pos)
        # |d/dk coef*sin(kl)| <= |coef| * l entrywise; Frobenius bounds the 2-norm
        self.lipschitz = float(np.sqrt(np.sum((self._coef * self._len) ** 2)))

    def matrix(self, k: float) -> np.ndarray:
        return self.matrices(np.array([k]))[0]

    def matrices(self, ks) -> np.ndarray:
        ks = np.asarray(ks, dtype=float)
        out = np.broadcast_to(self._const, (len(ks),) + self._const.shape).copy()
        phase = np.outer(ks, self._len)
        vals = self._coef * np.where(self._is_sin, np.sin(phase), np.cos(phase))
        # (row, col) pairs of trig entries are distinct and disjoint from the constants
        out[:, self._rows, self._cols] = vals
        return out

    def sigma_min(self, ks) -> np.ndarray:
        return np.linalg.svd(self.matrices(ks), compute_uv=False)[:, -1]


def secular_matrix(g: MetricGraph, k: float) -> np.ndarray:
    if not k > 0:
        raise ValueError("k must be positive")
    return SecularSystem(g).matrix(k)


@dataclass
class Eigenpair:
    """One eigenvalue ``lambda = k^2`` with an L2-orthonormal eigenbasis.

    ``amplitudes[i, e] = (A_e, B_e)`` for the i-th basis function.
    """

    k: float
    multiplicity: int
    amplitudes: np.ndarray
    k_err: float = 0.0
    basis_err: float = 0.0

    @property
    def lam(self) -> float:
        return self.k * self.k

    # alias; ``lambda`` is a keyword
    @property
    def lambda_(self) -> float:
        return self.lam


@dataclass
class HeatContentSeries:
    """``q(t) = sum a_sq * exp(-lam t)`` truncated at wavenumber ``kmax``."""

    lams: np.ndarray
    a_sq: np.ndarray
    kmax: float
    total_length: float
    lam_err: np.ndarray = field(default=None)
    a_err: np.ndarray = field(default=None)

    def __post_init__(self):
        self.lams = np.asarray(self.lams, dtype=float)
        self.a_sq = np.asarray(self.a_sq, dtype=float)
        if self.lam_err is None:
            self.lam_err = np.zeros_like(self.lams)
        if self.a_err is None:
            self.a_err = np.zeros_like(self.a_sq)

    def __len__(self):
        return len(self.lams)

    def pairs(self) -> list[tuple[float, float]]:
        return list(zip(self.lams.tolist(), self.a_sq.tolist()))

    def parseval_sum(self) -> float:
        return float(self.a_sq.sum())

    def remainder(self) -> float:
        """Bound on the mass ``sum a_sq`` of the omitted eigenvalues."""
        return max(self.total_length - self.parseval_sum(), 0.0) + float(self.a_err.sum())

    def dirichlet_sum(self, s: float) -> Estimate:
        """``sum a_sq lam^-s`` with truncation and rounding bounds."""
        if s < 0:
            raise ValueError("s must be nonnegative")
        w = self.lams ** (-s)
        value = float(np.sum(self.a_sq * w))
        rounding = float(np.sum((self.a_err + self.a_sq * s * self.lam_err / self.lams) * w))
        tail = self.remainder() * self.kmax ** (-2.0 * s)
        return Estimate(value, tail + rounding)

    def heat_content(self, t: float) -> Estimate:
        if not t > 0:
            raise ValueError("t must be positive")
        w = np.exp(-self.lams * t)
        value = float(np.sum(self.a_sq * w))
        rounding = float(np.sum((self.a_err + self.a_sq * t * self.lam_err) * w))
        tail = self.remainder() * math.exp(-self.kmax**2 * t)
        return Estimate(value, tail + rounding)


# --- root search -----------------------------------------------------------------

def _workers(opts: SpectralOptions) -> int:
    if opts.workers:
        return max(1, int(opts.workers))
    env = os.environ.get("QGT_THREADS")
    if env:
        return max(1, int(env))
    return 1


def _narrow_cells(sys: SecularSystem, grid: np.ndarray, sig: np.ndarray, w_min: float):
    """Bisect grid cells until each is excluded or narrower than ``w_min``."""
    lip = sys.lipschitz * (1 + 1e-9)
    cells = [(grid[i], grid[i + 1], sig[i], sig[i + 1]) for i in range(len(grid) - 1)]
    keep = []
    while cells:
        live = [c for c in cells if c[2] + c[3] <= lip * (c[1] - c[0]) + 1e-15]
        keep.extend((c[0], c[1]) for c in live if c[1] - c[0] <= w_min)
        wide = [c for c in live if c[1] - c[0] > w_min]
        if not wide:
            break
        mids = np.array([(c[0] + c[1]) / 2 for c in wide])
        smid = sys.sigma_min(mids)
        cells = []
        for (lo, hi, slo, shi), m, sm in zip(wide, mids, smid):
            cells.append((lo, m, slo, sm))
            cells.append((m, hi, sm, shi))
    return keep


def _clusters(cells):
    clusters = []
    for lo, hi in sorted(cells):
        if clusters and lo <= clusters[-1][1]:
            clusters[-1][1] = max(clusters[-1][1], hi)
        else:
            clusters.append([lo, hi])
    return clusters


def _golden_min(sys: SecularSystem, lo: float, hi: float, tol: float):
    f = lambda k: float(sys.sigma_min([k])[0])  # noqa: E731
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = f(x2)
        if hi - lo <= 4 * np.spacing(hi):
            break
    return (x1, hi - lo) if f1 <= f2 else (x2, hi - lo)


def _l2_gram(lengths: np.ndarray, k: float, vecs: np.ndarray) -> np.ndarray:
    """Gram matrix of trig functions with coefficient rows ``vecs``."""
    A = vecs[:, 0::2]
    B = vecs[:, 1::2]
    s2 = np.sin(2 * k * lengths)
    ss = lengths / 2 - s2 / (4 * k)
    cc = lengths / 2 + s2 / (4 * k)
    sc = np.sin(k * lengths) ** 2 / (2 * k)
    return (A * ss) @ A.T + (B * cc) @ B.T + (A * sc) @ B.T + (B * sc) @ A.T


def _integrals(lengths: np.ndarray, k: float, amps: np.ndarray) -> np.ndarray:
    """``int_G phi`` for each basis function; ``amps`` has shape (m, E, 2)."""
    kl = k * lengths
    return (amps[:, :, 0] * (1 - np.cos(kl)) + amps[:, :, 1] * np.sin(kl)).sum(axis=1) / k


def _eigenpair_at(sys: SecularSystem, k: float, k_err: float, rank_tol: float) -> Eigenpair | None:
    mat = sys.matrix(k)
    _, s, vh = np.linalg.svd(mat)
    m = int(np.sum(s < rank_tol * np.abs(mat).max()))
    if m == 0:
        return None
    vecs = vh[-m:]
    gram = _l2_gram(sys.lengths, k, vecs)
    w, q = np.linalg.eigh(gram)
    basis = (q / np.sqrt(w)).T @ vecs
    gap = s[-m - 1] if m < len(s) else s[0]
    theta = (sys.lipschitz * k_err + s[-m]) / gap
    cond = float(w.max() / w.min())
    basis_err = theta * math.sqrt(cond) + 1e3 * np.finfo(float).eps
    return Eigenpair(float(k), m, basis.reshape(m, -1, 2), k_err, basis_err)


def _refine(sys: SecularSystem, cluster, opts: SpectralOptions):
    k, width = _golden_min(sys, cluster[0], cluster[1], opts.k_tol)
    return _eigenpair_at(sys, k, max(width, opts.k_tol), opts.rank_tol)


def eigenvalues_up_to(g: MetricGraph, kmax: float, opts: SpectralOptions | None = None) -> list[Eigenpair]:
    """All eigenpairs with ``0 < k <= kmax``, increasing in ``k``.

    Eigenvalues closer than about ``rank_tol / slope`` are reported as one
    eigenvalue with the combined multiplicity. A ``MissedRootRisk``
    warning is emitted if the count drifts from the Weyl law.
    """
    opts = opts or SpectralOptions()
    if not kmax > 0:
        raise ValueError("kmax must be positive")
    sys = SecularSystem(g)
    L = float(g.total_length)
    step = math.pi / (4 * L)
    # the first Dirichlet eigenvalue is at least (pi / 2L)^2, so start below it
    lo = step
    if kmax <= lo:
        return []
    # the grid and every per-cell computation are fixed by (g, kmax, opts),
    # so splitting the work across threads cannot change the result
    n = max(1, int(math.ceil((kmax - lo) / step)))
    grid = np.linspace(lo, kmax, n + 1)
    w_min = 0.5 * opts.rank_tol / sys.lipschitz
    workers = min(_workers(opts), n)
    chunks = [c for c in np.array_split(np.arange(n + 1), workers) if len(c)]
    # neighbouring chunks share their boundary point
    spans = [grid[c[0] : c[-1] + 2] for c in chunks]

    def scan(span):
        return _narrow_cells(sys, span, sys.sigma_min(span), w_min) if len(span) > 1 else []

    if workers == 1:
        cells = scan(grid)
        found = [_refine(sys, c, opts) for c in _clusters(cells)]
    else:
        with ThreadPoolExecutor(workers) as pool:
            cells = [c for part in pool.map(scan, spans) for c in part]
            found = list(pool.map(lambda c: _refine(sys, c, opts), _clusters(cells)))
    merged = sorted((p for p in found if p is not None), key=lambda p: p.k)
    out: list[Eigenpair] = []
    for p in merged:
        if out and p.k - out[-1].k <= 2 * opts.k_tol:
            if p.multiplicity > out[-1].multiplicity:
                out[-1] = p
            continue
        out.append(p)
    out = [p for p in out if p.k <= kmax]
    check = weyl_check(g, out, kmax)
    # below a handful of modes the smooth count is not yet asymptotic
    if L * kmax / math.pi >= _WEYL_MIN_MODES and not check.passed(opts.weyl_slack):
        warnings.warn(
            f"eigenvalue count deviates from the Weyl law by {check.mean_deviation:.2f} on average",
            MissedRootRisk,
            stacklevel=2,
        )
    return out


class WeylCheck(NamedTuple):
    mean_deviation: float
    count: int
    expected: float

    def passed(self, slack: float) -> bool:
        return abs(self.mean_deviation) <= slack


def weyl_estimate(g: MetricGraph, k: float) -> float:
    """Smooth part of the counting function ``N(k)``.

    ``L k / pi`` plus a topological constant: ``(|E| - |V|)/2 + 1`` for
    Kirchhoff vertices, minus 1/2 for every Dirichlet vertex.
    """
    nd = len(g.boundary_vertices)
    return float(g.total_length) * k / math.pi + (g.n_edges - len(g.vertices) - nd) / 2 + 1


def weyl_check(g: MetricGraph, eigs: Sequence[Eigenpair], kmax: float, samples: int = 64) -> WeylCheck:
    """Mean of ``N(k) - weyl_estimate(k)`` over ``k`` in ``(kmax/2, kmax]``.

    The oscillating part of ``N`` averages out, so a missed eigenvalue
    shows up as a shift of about one.
    """
    ks = np.array([p.k for p in eigs])
    mult = np.array([p.multiplicity for p in eigs])
    sample = np.linspace(kmax / 2, kmax, samples + 1)[1:]
    counts = np.array([mult[ks <= s].sum() for s in sample])
    expected = np.array([weyl_estimate(g, s) for s in sample])
    return WeylCheck(float(np.mean(counts - expected)), int(mult.sum()), weyl_estimate(g, kmax))


def projection_coefficients(g: MetricGraph, eigenpairs: Sequence[Eigenpair], kmax: float | None = None,
                            opts: SpectralOptions | None = None) -> HeatContentSeries:
    """Squared norm of the projection of ``1`` onto each eigenspace.

    Eigenspaces with ``a_sq`` below ``drop_tol * L`` are orthogonal to the
    constants up to rounding and are left out.
    """
    opts = opts or SpectralOptions()
    L = float(g.total_length)
    lengths = np.array([float(e.length) for e in g.edges])
    lams, a_sq, lam_err, a_err = [], [], [], []
    for p in eigenpairs:
        ints = _integrals(lengths, p.k, p.amplitudes)
        val = float(np.sum(ints**2))
        if val < opts.drop_tol * L:
            continue
        err = p.multiplicity * (2 * math.sqrt(val * L) * p.basis_err + L * p.basis_err**2)
        lams.append(p.lam)
        a_sq.append(val)
        lam_err.append(2 * p.k * p.k_err)
        a_err.append(err)
    if kmax is None:
        kmax = eigenpairs[-1].k if eigenpairs else 0.0
    return HeatContentSeries(np.array(lams), np.array(a_sq), float(kmax), L,
                             np.array(lam_err), np.array(a_err))


def eigenspace_projections(g: MetricGraph, eigenpairs: Sequence[Eigenpair]) -> list[float]:
    """``a_sq`` for every eigenpair, without dropping the orthogonal ones."""
    lengths = np.array([float(e.length) for e in g.edges])
    return [float(np.sum(_integrals(lengths, p.k, p.amplitudes) ** 2)) for p in eigenpairs]


def heat_content_series(g: MetricGraph, kmax: float, opts: SpectralOptions | None = None) -> HeatContentSeries:
    return projection_coefficients(g, eigenvalues_up_to(g, kmax, opts), kmax, opts)


def heat_content(g: MetricGraph, t: float, kmax: float, opts: SpectralOptions | None = None) -> Estimate:
    """``q(t) = int int p(t, x, y) dx dy`` with a bound on the truncation."""
    return heat_content_series(g, kmax, opts).heat_content(t)


def spectral_moment(g: MetricGraph, n: int, kmax: float, opts: SpectralOptions | None = None,
                    series: HeatContentSeries | None = None) -> Estimate:
    """``Gamma(n+1) * zeta(n)``, the spectral side of ``A_n``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    series = series if series is not None else heat_content_series(g, kmax, opts)
    z = series.dirichlet_sum(n)
    f = math.factorial(n)
    return Estimate(f * z.value, f * z.error)
