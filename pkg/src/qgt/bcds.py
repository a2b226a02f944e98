"""The 7_1 isospectral pair: quantum graphs, weighted graphs, closed forms.

Quantum graph ``G1`` is seven 3-stars whose legs carry the triangle side
lengths ``a, b, c``; six pairs of legs are glued end to end, which after
cleaning leaves 9 pendant edges and 6 internal edges of length ``2x``.
``G2`` is the same graph with ``b`` and ``c`` interchanged.

Vertex ids: leaves ``B1..B9`` are 0..8, centers ``V1..V7`` are 9..15.
Edges 0..8 are the pendant edges oriented leaf -> center, edges 9..14 the
internal ones, numbered and oriented so the native unknowns
``(alpha_e, beta_e)`` line up with the columns of the hand-assembled
21 x 21 system.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import Matrix, UniPoly, char_poly, solve_linear
from .exceptions import GraphValidationError
from .graph import MetricGraph, as_rational, build_graph
from .torsion import torsional_rigidity

LEAVES = {f"B{i}": i - 1 for i in range(1, 10)}
CENTERS = {f"V{i}": 8 + i for i in range(1, 8)}

# (leaf, center, side label)
PENDANTS_71 = [
    ("B1", "V1", "c"),
    ("B2", "V1", "a"),
    ("B3", "V2", "b"),
    ("B4", "V2", "a"),
    ("B5", "V3", "b"),
    ("B6", "V3", "c"),
    ("B7", "V4", "a"),
    ("B8", "V6", "b"),
    ("B9", "V7", "c"),
]
# (tail center, head center, label); each has length 2 * label
INTERNAL_71 = [
    ("V1", "V4", "b"),
    ("V4", "V5", "c"),
    ("V7", "V5", "b"),
    ("V6", "V5", "a"),
    ("V2", "V6", "c"),
    ("V3", "V7", "a"),
]


@dataclass(frozen=True)
class SeedLengths:
    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        for name in "abc":
            val = as_rational(getattr(self, name))
            if val <= 0:
                raise GraphValidationError(f"seed length {name} must be positive, got {val}")
            object.__setattr__(self, name, val)

    @classmethod
    def of(cls, seed) -> "SeedLengths":
        if isinstance(seed, SeedLengths):
            return seed
        a, b, c = seed
        return cls(a, b, c)

    def swapped(self) -> "SeedLengths":
        """The seed with ``b`` and ``c`` interchanged."""
        return SeedLengths(self.a, self.c, self.b)

    def label(self, name: str) -> Fraction:
        return getattr(self, name)

    def is_degenerate(self) -> bool:
        return len({self.a, self.b, self.c}) < 3


@dataclass(frozen=True)
class QuantumPair:
    seed: SeedLengths
    g1: MetricGraph
    g2: MetricGraph


def _graph_71(s: SeedLengths) -> MetricGraph:
    edges = [(LEAVES[leaf], CENTERS[ctr], s.label(lab)) for leaf, ctr, lab in PENDANTS_71]
    edges += [(CENTERS[t], CENTERS[h], 2 * s.label(lab)) for t, h, lab in INTERNAL_71]
    return build_graph(edges)


def build_71_quantum_pair(seed) -> QuantumPair:
    s = SeedLengths.of(seed)
    return QuantumPair(s, _graph_71(s), _graph_71(s.swapped()))


def glue_three_stars(stars: Sequence[dict], gluings: Sequence[tuple]) -> MetricGraph:
    """Glue labelled 3-stars leg to leg; unglued legs end at boundary vertices.

    ``stars`` holds one ``{label: length}`` mapping per star. ``gluings``
    holds ``((i, label_i), (j, label_j))`` pairs: the free end of leg
    ``label_i`` of star ``i`` is identified with that of ``label_j`` of
    star ``j`` at a new degree-2 vertex. Star ``i`` has center ``i``; leg
    ends are numbered after the centers. Each leg is oriented end -> center.
    """
    n = len(stars)
    end_vertex = {}
    for (i, li), (j, lj) in gluings:
        if (i, li) in end_vertex or (j, lj) in end_vertex:
            raise GraphValidationError(f"leg glued twice in {((i, li), (j, lj))}")
        v = n + len(set(end_vertex.values()))
        end_vertex[(i, li)] = end_vertex[(j, lj)] = v
    next_free = n + len(set(end_vertex.values()))
    edges = []
    for i, legs in enumerate(stars):
        for lab in sorted(legs):
            if (i, lab) not in end_vertex:
                end_vertex[(i, lab)] = next_free
                next_free += 1
            edges.append((end_vertex[(i, lab)], i, legs[lab]))
    return build_graph(edges)


def _glued_71(s: SeedLengths) -> MetricGraph:
    order = [f"V{i}" for i in range(1, 8)]
    stars = [{"a": s.a, "b": s.b, "c": s.c} for _ in order]
    gluings = [((order.index(t), lab), (order.index(h), lab)) for t, h, lab in INTERNAL_71]
    return glue_three_stars(stars, gluings)


def build_71_glued_pair(seed) -> QuantumPair:
    """The uncleaned 21-edge pair: seven 3-stars joined at degree-2 vertices."""
    s = SeedLengths.of(seed)
    return QuantumPair(s, _glued_71(s), _glued_71(s.swapped()))


def check_label_invariant(g: MetricGraph, s: SeedLengths) -> bool:
    """Every degree-3 vertex sees exactly one a-, b- and c-length.

    An edge of length ``2x`` between two degree-3 vertices counts as label x.
    Assumes ``a, b, c`` are pairwise distinct and no two of ``a, b, c, 2a,
    2b, 2c`` collide in a way that makes labels ambiguous.
    """
    by_len = {}
    for name in "abc":
        by_len.setdefault(s.label(name), set()).add(name)
    for v in g.vertices:
        if g.degree(v) != 3:
            continue
        seen = []
        for eid, _ in g.incidences(v):
            e = g.edges[eid]
            internal = g.degree(e.tail) == 3 and g.degree(e.head) == 3
            length = e.length / 2 if internal else e.length
            names = by_len.get(length)
            if not names or len(names) != 1:
                return False
            seen.extend(names)
        if sorted(seen) != ["a", "b", "c"]:
            return False
    return True


# --- the hand-assembled system for G1 -------------------------------------------

# Row 14 (continuity at V7) must not carry a ``b`` in the beta_10 column:
# with one there the row no longer encodes continuity and the closed-form
# difference fails. The entry is 0 here.
L1_CORRECTIONS = ({"row": 14, "column": 16, "transcribed": "b", "used": "0"},)


@dataclass(frozen=True)
class HandAssembledSystem:
    matrix: Matrix
    rhs: tuple[Fraction, ...]
    weights: tuple[Fraction, ...]
    corrections: tuple[dict, ...] = L1_CORRECTIONS

    def solution(self) -> list[Fraction]:
        return solve_linear(self.matrix, self.rhs)

    def pairing(self) -> Fraction:
        """``<L^{-1} v, l>``: the torsional rigidity minus ``sum(l^3) / 6``."""
        return sum((x * w for x, w in zip(self.solution(), self.weights)), Fraction(0))


def _hand_system(a, b, c) -> HandAssembledSystem:
    z = 0
    rows = [
        [c, z, z, z, z, z, z, z, z, z, z, z, z, z, z, -1, z, z, z, z, z],
        [z, a, z, z, z, z, z, z, z, z, z, z, z, z, z, -1, z, z, z, z, z],
        [z, z, b, z, z, z, z, z, z, z, z, z, z, z, z, z, z, z, z, -1, z],
        [z, z, z, a, z, z, z, z, z, z, z, z, z, z, z, z, z, z, z, -1, z],
        [z, z, z, z, b, z, z, z, z, z, z, z, z, z, z, z, z, z, z, z, -1],
        [z, z, z, z, z, c, z, z, z, z, z, z, z, z, z, z, z, z, z, z, -1],
        [z, z, z, z, z, z, a, z, z, z, z, z, z, z, z, z, -1, z, z, z, z],
        [z, z, z, z, z, z, z, b, z, z, z, z, z, z, z, z, z, z, -1, z, z],
        [z, z, z, z, z, z, z, z, c, z, z, z, z, z, z, z, z, -1, z, z, z],
        [z, z, z, z, z, z, z, z, z, 2 * b, z, z, z, z, z, 1, -1, z, z, z, z],
        [z, z, z, z, z, z, z, z, z, z, 2 * c, z, -2 * a, z, z, z, 1, z, -1, z, z],
        [z, z, z, z, z, z, z, z, z, z, z, -2 * b, 2 * a, z, z, z, z, -1, 1, z, z],
        [z, z, z, z, z, z, z, z, z, z, z, z, z, 2 * c, z, z, z, z, -1, 1, z],
        [z, z, z, z, z, z, z, z, z, z, z, z, z, z, 2 * a, z, z, -1, z, z, 1],
        [1, 1, z, z, z, z, z, z, z, -1, z, z, z, z, z, z, z, z, z, z, z],
        [z, z, 1, 1, z, z, z, z, z, z, z, z, z, -1, z, z, z, z, z, z, z],
        [z, z, z, z, 1, 1, z, z, z, z, z, z, z, z, -1, z, z, z, z, z, z],
        [z, z, z, z, z, z, 1, z, z, 1, -1, z, z, z, z, z, z, z, z, z, z],
        [z, z, z, z, z, z, z, 1, z, z, z, z, -1, 1, z, z, z, z, z, z, z],
        [z, z, z, z, z, z, z, z, 1, z, z, -1, z, z, 1, z, z, z, z, z, z],
        [z, z, z, z, z, z, z, z, z, z, 1, 1, 1, z, z, z, z, z, z, z, z],
    ]
    half = Fraction(1, 2)
    rhs = [
        c * c * half, a * a * half, b * b * half, a * a * half, b * b * half,
        c * c * half, a * a * half, b * b * half, c * c * half,
        2 * b * b, 2 * c * c - 2 * a * a, 2 * a * a - 2 * b * b, 2 * c * c, 2 * a * a,
        a + c, a + b, b + c, a + 2 * b, b + 2 * c, 2 * a + c, 2 * a + 2 * b + 2 * c,
    ]
    weights = [
        c * c, a * a, b * b, a * a, b * b, c * c, a * a, b * b, c * c,
        4 * b * b, 4 * c * c, 4 * b * b, 4 * a * a, 4 * c * c, 4 * a * a,
        4 * b, 4 * c, 4 * b, 4 * a, 4 * c, 4 * a,
    ]
    return HandAssembledSystem(Matrix(rows), tuple(rhs), tuple(w * half for w in weights))


def paper_L1_system(seed, graph: int = 1) -> HandAssembledSystem:
    """The 21 x 21 system ``L a = v`` and weight vector ``l`` for G1 (or G2).

    Unknowns: ``alpha`` of the 9 pendant edges, ``alpha`` of the 6 internal
    edges, then ``beta`` of the internal edges (pendant ``beta`` vanish by
    the leaf -> center orientation).
    """
    s = SeedLengths.of(seed)
    if graph == 2:
        s = s.swapped()
    elif graph != 1:
        raise ValueError("graph must be 1 or 2")
    return _hand_system(s.a, s.b, s.c)


def paper_torsion_difference(seed) -> Fraction:
    """``<L1^-1 v1, l1> - <L2^-1 v2, l2>`` from the hand-assembled systems."""
    return paper_L1_system(seed, 1).pairing() - paper_L1_system(seed, 2).pairing()


def paper_torsional_rigidity(seed, graph: int = 1) -> Fraction:
    s = SeedLengths.of(seed)
    g = build_71_quantum_pair(s)
    cubes = sum((l ** 3 for l in (g.g1 if graph == 1 else g.g2).lengths()), Fraction(0))
    return paper_L1_system(s, graph).pairing() - cubes / 6


def numerator_N(a, b, c) -> Fraction:
    return -4 * (b * c + a * (b + c)) * (
        11 * a**3 * (b + c)
        + b * c * (11 * b**2 + 23 * b * c + 11 * c**2)
        + a * (b + c) * (11 * b**2 + 48 * b * c + 11 * c**2)
        + a**2 * (23 * b**2 + 59 * b * c + 23 * c**2)
    )


def denominator_D(a, b, c) -> Fraction:
    return (
        32 * a**4 * (b + c) ** 2
        + 8 * b**2 * c**2 * (4 * b**2 + 9 * b * c + 4 * c**2)
        + 8 * a * b * c * (b + c) * (8 * b**2 + 23 * b * c + 8 * c**2)
        + 8 * a**3 * (b + c) * (9 * b**2 + 22 * b * c + 9 * c**2)
        + a**2 * (32 * b**4 + 248 * b**3 * c + 439 * b**2 * c**2 + 248 * b * c**3 + 32 * c**4)
    )


def torsion_difference_formula(seed) -> Fraction:
    """Closed form of ``A1(G1) - A1(G2)``: ``(a-b)(a-c)(b-c) N / D``."""
    s = SeedLengths.of(seed)
    a, b, c = s.a, s.b, s.c
    return (a - b) * (a - c) * (b - c) * Fraction(numerator_N(a, b, c)) / denominator_D(a, b, c)


def native_torsion_difference(seed) -> Fraction:
    pair = build_71_quantum_pair(seed)
    return torsional_rigidity(pair.g1) - torsional_rigidity(pair.g2)


# --- weighted combinatorial analog ------------------------------------------------

@dataclass(frozen=True)
class WeightedGraph:
    """Symmetric edge weights plus the diagonal of the associated Laplacian.

    ``diagonal`` defaults to the weighted degrees (row sums of ``W``). The
    7_1 graphs carry extra diagonal mass from their boundary, so theirs is
    given explicitly.
    """

    W: Matrix
    diagonal: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        n, m = self.W.shape
        if n != m:
            raise GraphValidationError("weight matrix must be square")
        if not self.W.is_symmetric():
            raise GraphValidationError("weight matrix must be symmetric")
        if any(self.W[i, i] != 0 for i in range(n)):
            raise GraphValidationError("weight matrix must have zero diagonal")
        if self.diagonal is None:
            object.__setattr__(self, "diagonal", tuple(sum(r, Fraction(0)) for r in self.W.rows))
        else:
            object.__setattr__(self, "diagonal", tuple(as_rational(x) for x in self.diagonal))
            if len(self.diagonal) != n:
                raise GraphValidationError("diagonal has the wrong length")
        seen, stack = {0}, [0]
        while stack:
            i = stack.pop()
            for j in range(n):
                if self.W[i, j] != 0 and j not in seen:
                    seen.add(j)
                    stack.append(j)
        if len(seen) != n:
            raise GraphValidationError("weighted graph is disconnected")

    @property
    def n(self) -> int:
        return self.W.shape[0]


def combinatorial_laplacian(w: WeightedGraph) -> Matrix:
    """``diag(diagonal) - W``."""
    return Matrix(
        [[w.diagonal[i] if i == j else -w.W[i, j] for j in range(w.n)] for i in range(w.n)]
    )


def _weighted_71(a, b, c) -> WeightedGraph:
    h = Fraction(1, 2)
    W = [[0] * 6 for _ in range(6)]
    for (i, j), x in {(0, 3): c, (1, 4): a, (2, 5): b, (3, 4): c, (3, 5): b, (4, 5): a}.items():
        W[i][j] = W[j][i] = x * h
    # row 4 holds both -c/2 and -b/2; symmetry requires two separate entries
    return WeightedGraph(Matrix(W), (a + c, a + b, b + c, b + c, a + c, a + b))


def build_71_combinatorial_pair(seed) -> tuple[WeightedGraph, WeightedGraph]:
    s = SeedLengths.of(seed)
    t = s.swapped()
    return _weighted_71(s.a, s.b, s.c), _weighted_71(t.a, t.b, t.c)


def combinatorial_torsion(w: WeightedGraph) -> Fraction:
    """``<D^{-1} 1, 1>`` for the Laplacian ``D`` of ``w``."""
    x = solve_linear(combinatorial_laplacian(w), [1] * w.n)
    return sum(x, Fraction(0))


def combinatorial_numerator(a, b, c) -> Fraction:
    return 56 * (b * c + a * (b + c))


def combinatorial_denominator(a, b, c) -> Fraction:
    # identical, term by term, to the quantum-graph denominator
    return denominator_D(a, b, c)


def combinatorial_difference_formula(seed) -> Fraction:
    s = SeedLengths.of(seed)
    a, b, c = s.a, s.b, s.c
    return (a - b) * (a - c) * (b - c) * Fraction(combinatorial_numerator(a, b, c)) / combinatorial_denominator(a, b, c)


def combinatorial_torsion_difference(seed) -> Fraction:
    w1, w2 = build_71_combinatorial_pair(seed)
    return combinatorial_torsion(w1) - combinatorial_torsion(w2)


def combinatorial_char_polys(seed) -> tuple[UniPoly, UniPoly]:
    w1, w2 = build_71_combinatorial_pair(seed)
    return char_poly(combinatorial_laplacian(w1)), char_poly(combinatorial_laplacian(w2))


__all__ = [
    "SeedLengths",
    "QuantumPair",
    "WeightedGraph",
    "HandAssembledSystem",
    "build_71_quantum_pair",
    "build_71_glued_pair",
    "glue_three_stars",
    "check_label_invariant",
    "paper_L1_system",
    "paper_torsion_difference",
    "paper_torsional_rigidity",
    "torsion_difference_formula",
    "native_torsion_difference",
    "build_71_combinatorial_pair",
    "combinatorial_laplacian",
    "combinatorial_torsion",
    "combinatorial_difference_formula",
    "combinatorial_torsion_difference",
    "combinatorial_char_polys",
]
