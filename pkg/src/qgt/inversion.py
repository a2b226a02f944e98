"""Recover the heat-content spectrum from the moment sequence.

With ``z_n = A_n / n! = sum_j a_j^2 mu_j^(-n)`` the ratios ``z_n / z_(n+1)``
converge to the smallest ``mu`` at the geometric rate ``(mu_1/mu_2)^n``.
Once ``mu_1`` and ``a_1^2 = lim mu_1^n z_n`` are known the term is
subtracted and the next one is read off the residual. Peeling amplifies
the error of every recovered term by ``(mu_k/mu_1)^n``, so each stage uses
the window of ratios where they agree best rather than the last window:
late windows of a residual are dominated by the error left by earlier
stages.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .exceptions import InsufficientDepth
from .spectral import Estimate, HeatContentSeries
from .torsion import MomentSequence


@dataclass(frozen=True)
class RecoveredTerm:
    mu: mpmath.mpf
    a_sq: mpmath.mpf
    mu_err: mpmath.mpf
    a_err: mpmath.mpf
    window: tuple[int, int]  # 1-based n range of the ratios used


@dataclass
class RecoveredSpectrum:
    terms: list[RecoveredTerm] = field(default_factory=list)
    precision: int = 256

    def __len__(self):
        return len(self.terms)

    def __getitem__(self, i) -> RecoveredTerm:
        return self.terms[i]

    def pairs(self) -> list[tuple[float, float]]:
        return [(float(t.mu), float(t.a_sq)) for t in self.terms]

    def heat_content(self, t: float) -> float:
        """Heat content rebuilt from the recovered terms only."""
        return float(sum(term.a_sq * mpmath.exp(-term.mu * t) for term in self.terms))


def _to_mpf(x) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def scaled_moments(moments, precision: int = 256) -> list[mpmath.mpf]:
    """``z_n = A_n / n!`` for n = 1..N at ``precision`` bits."""
    values = moments.values if isinstance(moments, MomentSequence) else list(moments)
    with mpmath.workprec(precision):
        return [_to_mpf(a) / mpmath.factorial(n) for n, a in enumerate(values, start=1)]


def moments_from_pairs(pairs: Iterable[tuple], N: int, precision: int = 256) -> list[mpmath.mpf]:
    """``A_n = n! * sum a_sq mu^-n`` for a finite synthetic series."""
    pairs = [(_to_mpf(mu), _to_mpf(a)) for mu, a in pairs]
    with mpmath.workprec(precision):
        return [
            mpmath.factorial(n) * mpmath.fsum(a * mu ** (-n) for mu, a in pairs)
            for n in range(1, N + 1)
        ]


def peel(z: Sequence, mu, a_sq) -> list:
    """Subtract ``a_sq * mu^-n`` from ``z_n`` (index 0 holds n = 1)."""
    return [zn - a_sq * mu ** (-(i + 1)) for i, zn in enumerate(z)]


def _best_window(z, window, tol, floor):
    """(spread, end, median) of the tightest stable ratio window, or None."""
    N = len(z)
    best = None
    for end in range(N - 1, window - 1, -1):
        # ratios r_n = z_n / z_(n+1) for n = end-window+1 .. end
        block = z[end - window : end + 1]
        if any(x <= 0 for x in block):
            continue
        r = [block[i] / block[i + 1] for i in range(window)]
        med = sorted(r)[window // 2]
        if med <= floor:
            continue
        spread = (max(r) - min(r)) / med
        if spread < tol and (best is None or spread < best[0]):
            best = (spread, end, med)
    return best


def invert_moments(moments, depth: int, precision: int = 256, window: int = 8,
                   stability: float = 1e-4) -> RecoveredSpectrum:
    """Recover the first ``depth`` pairs ``(mu, a^2)`` from ``A_1..A_N``.

    ``moments`` may be a MomentSequence or any sequence of Fractions,
    mpmath numbers or floats. Raises InsufficientDepth with the pairs found
    so far when no stable window is left.
    """
    if depth < 1:
        raise ValueError("depth must be positive")
    if window < 2:
        raise ValueError("window must be at least 2")
    z = scaled_moments(moments, precision)
    if len(z) < window + 1:
        raise ValueError(f"need at least {window + 1} moments, got {len(z)}")
    out = RecoveredSpectrum(precision=precision)
    with mpmath.workprec(precision):
        tol = mpmath.mpf(stability)
        floor = mpmath.mpf(0)
        for _ in range(depth):
            best = _best_window(z, window, tol, floor)
            if best is None:
                raise InsufficientDepth(
                    f"recovered {len(out)} of {depth} terms before the residual lost significance",
                    achieved=len(out),
                    partial=out,
                )
            spread, end, mu = best
            a_sq = mu**end * z[end - 1]
            out.terms.append(
                RecoveredTerm(mu, a_sq, spread * mu, a_sq * spread * (end + 1), (end - window + 1, end))
            )
            z = peel(z, mu, a_sq)
            # the residual's late ratios drift back to mu; insist on a larger one
            floor = mu * (1 + mpmath.mpf(10) ** -6)
    return out


def zeta_from_series(series: HeatContentSeries, s: float) -> Estimate:
    """Truncated ``sum a^2 lam^-s`` with a bound on the omitted part."""
    if s < 1:
        raise ValueError("s must be at least 1")
    return series.dirichlet_sum(s)
