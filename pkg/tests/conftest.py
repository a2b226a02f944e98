import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_rational(rng: random.Random, lo: int = 1, hi: int = 30) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, hi))


def random_triples(n: int, seed: int, distinct: bool = True):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        t = tuple(random_rational(rng) for _ in range(3))
        if distinct and len(set(t)) < 3:
            continue
        out.append(t)
    return out


@pytest.fixture
def rng():
    return random.Random(20240611)
