"""Acceptance criteria 1-9, one test each.

Every test prints a single ``criterion N (...): PASS|FAIL`` line to the
terminal, bypassing output capture, before asserting. Run this file directly to
get the nine lines without pytest.
"""
import math
import random
import sys
import time
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from qgt.bcds import (
    build_71_quantum_pair,
    combinatorial_char_polys,
    combinatorial_difference_formula,
    combinatorial_torsion_difference,
    native_torsion_difference,
    paper_torsion_difference,
    torsion_difference_formula,
)
from qgt.estimators import first_eigenvalues
from qgt.graph import interval, scale, star, subdivide
from qgt.inversion import invert_moments, moments_from_pairs
from qgt.spectral import eigenvalues_up_to, heat_content_series, spectral_moment, weyl_check
from qgt.torsion import moment_hierarchy, torsional_rigidity

RNG_SEED = 7


def _triples(n, rng):
    out = []
    while len(out) < n:
        t = tuple(Fraction(rng.randint(1, 40), rng.randint(1, 40)) for _ in range(3))
        if len(set(t)) == 3:
            out.append(t)
    return out


def _report(number, title, ok, detail=""):
    line = f"criterion {number} ({title}): {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  [{detail}]"
    print(line, flush=True)
    return ok


def criterion_1():
    rng = random.Random(RNG_SEED)
    Ls = [Fraction(rng.randint(1, 100), rng.randint(1, 100)) for _ in range(10)]
    t0 = time.perf_counter()
    ok = all(torsional_rigidity(interval(L)) == L**3 / 12 for L in Ls)
    dt = time.perf_counter() - t0
    return ok and dt < 1.0, f"{dt:.3f}s"


def criterion_2():
    g = star([1, 1, 1])
    exact = torsional_rigidity(g)
    est = spectral_moment(g, 1, 60)
    gap = abs(est.value - float(exact))
    return exact == 1 and gap <= est.error, f"|spectral - 1| = {gap:.2e} <= bound {est.error:.2e}"


def criterion_3():
    rng = random.Random(RNG_SEED + 3)
    t0 = time.perf_counter()
    seeds = [(1, 2, 3)] + _triples(20, rng)
    ok = True
    for s in seeds:
        d = native_torsion_difference(s)
        ok &= d == torsion_difference_formula(s) and d != 0
    for s in [(1, 1, 2), (2, 3, 2), (Fraction(1, 3), Fraction(5, 4), Fraction(5, 4))]:
        ok &= native_torsion_difference(s) == 0 == torsion_difference_formula(s)
    dt = time.perf_counter() - t0
    return ok and dt < 5.0, f"{len(seeds)} seeds, A1(G1)-A1(G2) at (1,2,3) = {native_torsion_difference((1, 2, 3))}, {dt:.2f}s"


def criterion_4():
    rng = random.Random(RNG_SEED + 3)
    seeds = [(1, 2, 3)] + _triples(20, rng)
    ok = all(paper_torsion_difference(s) == native_torsion_difference(s) for s in seeds)
    return ok, f"{len(seeds)} seeds"


def criterion_5():
    t0 = time.perf_counter()
    pair = build_71_quantum_pair((1, Fraction(3, 2), 2))
    kmax = 6.0
    e1 = eigenvalues_up_to(pair.g1, kmax)
    e2 = eigenvalues_up_to(pair.g2, kmax)
    lam1 = np.array([p.lam for p in e1 for _ in range(p.multiplicity)])
    lam2 = np.array([p.lam for p in e2 for _ in range(p.multiplicity)])
    ok = len(lam1) >= 30 and len(lam2) >= 30
    rel = float(np.max(np.abs(lam1[:30] - lam2[:30]) / lam1[:30])) if ok else math.inf
    w1, w2 = weyl_check(pair.g1, e1, kmax), weyl_check(pair.g2, e2, kmax)
    ok = ok and rel <= 1e-8 and w1.passed(2.0) and w2.passed(2.0)
    dt = time.perf_counter() - t0
    return ok and dt < 60, (f"max rel diff {rel:.1e}, Weyl mean deviation "
                            f"{w1.mean_deviation:+.2f}/{w2.mean_deviation:+.2f}, {dt:.1f}s")


def criterion_6():
    rng = random.Random(RNG_SEED + 6)
    t0 = time.perf_counter()
    seeds = _triples(10, rng)
    ok = True
    for s in seeds:
        p1, p2 = combinatorial_char_polys(s)
        ok &= p1 == p2
        ok &= combinatorial_torsion_difference(s) == combinatorial_difference_formula(s)
    ok &= combinatorial_torsion_difference((1, 2, 3)) == combinatorial_difference_formula((1, 2, 3))
    dt = time.perf_counter() - t0
    return ok and dt < 1.0, f"{dt:.3f}s"


def criterion_7():
    unit = moment_hierarchy(interval(1), 40)
    with mpmath.workprec(256):
        A = [mpmath.mpf(a.numerator) / a.denominator * mpmath.pi ** (2 * k + 1) for k, a in unit.items()]
    (mu, a_sq), = invert_moments(A, 1, precision=256).pairs()
    ok = abs(mu - 1) < 1e-6 and abs(a_sq - 8 / math.pi) < 1e-5
    pairs = [(0.8, 1.5), (1.7, 0.4), (3.1, 2.2), (5.9, 0.9)]
    got = invert_moments(moments_from_pairs(pairs, 800), 4).pairs()
    worst = max(max(abs(m - mt), abs(a - at)) for (m, a), (mt, at) in zip(got, pairs))
    ok = ok and worst < 1e-8
    return ok, f"mu1-1 = {mu - 1:.1e}, a^2-8/pi = {a_sq - 8 / math.pi:.1e}, round trip {worst:.1e}"


def criterion_8():
    cases = [
        ("interval 3/2", interval(Fraction(3, 2)), 80.0),
        ("3-star", star([1, 1, 1]), 60.0),
        ("G1(1,2,3)", build_71_quantum_pair((1, 2, 3)).g1, 30.0),
    ]
    ok = True
    worst = 0.0
    for _, g, kmax in cases:
        series = heat_content_series(g, kmax)
        exact = moment_hierarchy(g, 5)
        for n in range(1, 6):
            est = spectral_moment(g, n, kmax, series=series)
            gap = abs(est.value - float(exact[n]))
            ok &= gap <= est.error
            worst = max(worst, gap / est.error)
    return ok, f"max |gap| / bound = {worst:.2f}"


def criterion_9():
    checks = {}
    g = star([1, 2, Fraction(1, 2)])
    s = Fraction(5, 3)
    A, As = moment_hierarchy(g, 4), moment_hierarchy(scale(g, s), 4)
    checks["moment scaling"] = all(As[k] == A[k] * s ** (2 * k + 1) for k in range(1, 5))
    lam = first_eigenvalues(g, 20)
    lam_s = first_eigenvalues(scale(g, s), 20)
    checks["eigenvalue scaling"] = np.allclose(np.array(lam_s) * float(s) ** 2, lam, rtol=1e-10, atol=0)
    h = subdivide(g, 0, Fraction(2, 7))
    checks["moment subdivision"] = moment_hierarchy(h, 4) == A
    checks["eigenvalue subdivision"] = np.allclose(first_eigenvalues(h, 20), lam, rtol=1e-8, atol=0)
    for name, graph in (("star", g), ("G1", build_71_quantum_pair((1, 2, 3)).g1)):
        L = float(graph.total_length)
        series = heat_content_series(graph, 100 * math.pi / L)
        total = series.parseval_sum()
        checks[f"Parseval {name}"] = total <= L * (1 + 1e-12) and total >= 0.98 * L
        partial = np.cumsum(series.a_sq)
        checks[f"Parseval partials {name}"] = bool(np.all(partial <= L * (1 + 1e-12)))
        ts = np.geomspace(0.01, 10, 30)
        q = np.array([series.heat_content(t).value for t in ts])
        lam1 = first_eigenvalues(graph, 1)[0]
        checks[f"monotone {name}"] = bool(np.all(np.diff(q) < 0))
        checks[f"bound {name}"] = bool(np.all(q <= L * np.exp(-lam1 * ts) * (1 + 1e-12)))
    failed = [k for k, v in checks.items() if not v]
    return not failed, "failed: " + ", ".join(failed) if failed else f"{len(checks)} checks"


CRITERIA = [
    (1, "interval oracle", criterion_1),
    (2, "3-star oracle", criterion_2),
    (3, "torsion difference closed form", criterion_3),
    (4, "hand-assembled system", criterion_4),
    (5, "isospectrality", criterion_5),
    (6, "combinatorial pair", criterion_6),
    (7, "moment inversion", criterion_7),
    (8, "moment consistency", criterion_8),
    (9, "property suite", criterion_9),
]


@pytest.mark.parametrize("number, title, check", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print()
        _report(number, title, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    results = [_report(n, t, *c()) for n, t, c in CRITERIA]
    sys.exit(0 if all(results) else 1)
