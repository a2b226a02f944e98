"""Finite connected metric graphs with oriented edges and exact lengths."""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .exceptions import (
    CycleOfDegreeTwo,
    DisconnectedGraph,
    GraphValidationError,
    NonPositiveLength,
    SelfLoop,
    UnknownVertex,
)

TAIL = 0
HEAD = 1


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions, decimal/"p/q" strings to an exact Fraction.

    Floats are accepted but converted exactly (``0.1`` becomes the binary
    value), so callers wanting decimal semantics should pass strings.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not lengths")
    if isinstance(value, (int, float)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError as exc:
            raise GraphValidationError(f"cannot parse rational {value!r}") from exc
    return Fraction(value)


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class MetricEdge:
    """Edge ``id`` identified with ``[0, length]``; ``tail`` sits at x=0."""

    id: int
    tail: int
    head: int
    length: Fraction

    def end(self, side: int) -> int:
        return self.tail if side == TAIL else self.head


@dataclass(frozen=True)
class MetricGraph:
    vertices: tuple[int, ...]
    edges: tuple[MetricEdge, ...]
    _incidence: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        inc = defaultdict(list)
        for e in self.edges:
            inc[e.tail].append((e.id, TAIL))
            inc[e.head].append((e.id, HEAD))
        object.__setattr__(self, "_incidence", {v: tuple(inc[v]) for v in self.vertices})

    def incidences(self, v: int) -> tuple[tuple[int, int], ...]:
        """(edge id, side) pairs at ``v`` in edge-id order."""
        try:
            return self._incidence[v]
        except KeyError:
            raise UnknownVertex(v) from None

    def degree(self, v: int) -> int:
        return len(self.incidences(v))

    @cached_property
    def boundary_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in self.vertices if self.degree(v) == 1)

    @cached_property
    def interior_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in self.vertices if self.degree(v) != 1)

    @property
    def has_boundary(self) -> bool:
        return bool(self.boundary_vertices)

    @cached_property
    def total_length(self) -> Fraction:
        return sum((e.length for e in self.edges), Fraction(0))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def lengths(self) -> list[Fraction]:
        return [e.length for e in self.edges]

    def edge_list(self) -> list[tuple[int, int, Fraction]]:
        return [(e.tail, e.head, e.length) for e in self.edges]

    def to_dict(self) -> dict:
        return {
            "edges": [
                {"tail": e.tail, "head": e.head, "length": format_rational(e.length)}
                for e in self.edges
            ]
        }


def build_graph(edge_list: Iterable[Sequence]) -> MetricGraph:
    """Validate ``(tail, head, length)`` triples and return a MetricGraph.

    Graphs without a degree-1 vertex are accepted here; the Poisson and
    spectral solvers refuse them with ``NoBoundaryVertex``.
    """
    edges = []
    for i, item in enumerate(edge_list):
        tail, head, length = item
        tail, head = int(tail), int(head)
        if tail < 0 or head < 0:
            raise GraphValidationError(f"edge {i}: vertex ids must be nonnegative")
        if tail == head:
            raise SelfLoop(f"edge {i} is a loop at vertex {tail}")
        length = as_rational(length)
        if length <= 0:
            raise NonPositiveLength(f"edge {i} has length {length}")
        edges.append(MetricEdge(i, tail, head, length))
    if not edges:
        raise GraphValidationError("graph has no edges")
    vertices = tuple(sorted({e.tail for e in edges} | {e.head for e in edges}))
    _check_connected(vertices, edges)
    return MetricGraph(vertices, tuple(edges))


def _check_connected(vertices, edges):
    adj = defaultdict(set)
    for e in edges:
        adj[e.tail].add(e.head)
        adj[e.head].add(e.tail)
    seen = {vertices[0]}
    stack = [vertices[0]]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(vertices):
        missing = sorted(set(vertices) - seen)
        raise DisconnectedGraph(f"vertices {missing} unreachable from {vertices[0]}")


def degree(g: MetricGraph, v: int) -> int:
    return g.degree(v)


def total_length(g: MetricGraph) -> Fraction:
    return g.total_length


def clean(g: MetricGraph) -> MetricGraph:
    """Suppress interior degree-2 vertices by merging the edges through them.

    Each maximal chain through degree-2 vertices becomes one edge whose
    length is the chain's total. A chain that is a single edge keeps its
    orientation; a merged chain is oriented along the traversal of its
    lowest-id edge. Output edges are ordered by lowest original edge id.

    A chain that returns to its starting vertex would become a self-loop,
    so it is split at its lowest-id interior vertex, which survives with
    degree 2.
    """
    if all(g.degree(v) == 2 for v in g.vertices):
        raise CycleOfDegreeTwo("every vertex has degree 2")

    by_id = {e.id: e for e in g.edges}
    consumed: set[int] = set()
    chains = []
    for e in g.edges:
        if e.id in consumed:
            continue
        chain = _chain_through(g, by_id, e)
        consumed.update(eid for eid, _ in chain)
        chains.append(chain)

    pieces = []
    for chain in chains:
        start = _walk_start(by_id, chain)
        stop = _walk_stop(by_id, chain)
        if start == stop and len(chain) > 1:
            # split a closed chain so neither half is a loop
            interior = [_walk_stop(by_id, chain[: i + 1]) for i in range(len(chain) - 1)]
            cut = interior.index(min(interior)) + 1
            pieces.extend([chain[:cut], chain[cut:]])
        else:
            pieces.append(chain)

    merged = []
    for piece in pieces:
        if len(piece) == 1:
            e = by_id[piece[0][0]]
            merged.append((e.id, e.tail, e.head, e.length))
        else:
            length = sum((by_id[eid].length for eid, _ in piece), Fraction(0))
            merged.append(
                (min(eid for eid, _ in piece), _walk_start(by_id, piece), _walk_stop(by_id, piece), length)
            )
    merged.sort()
    return build_graph([(t, h, l) for _, t, h, l in merged])


def _chain_through(g, by_id, e):
    """Maximal chain containing ``e`` as a list of (edge id, traversed tail->head).

    Terminates because a connected graph that is not a pure cycle has a
    vertex of degree != 2 on every closed walk.
    """
    chain = [(e.id, True)]
    v, prev = e.head, e.id
    while g.degree(v) == 2:
        eid, side = next(inc for inc in g.incidences(v) if inc[0] != prev)
        chain.append((eid, side == TAIL))
        prev, v = eid, by_id[eid].end(1 - side)
    v, prev = e.tail, e.id
    while g.degree(v) == 2:
        eid, side = next(inc for inc in g.incidences(v) if inc[0] != prev)
        chain.insert(0, (eid, side == HEAD))
        prev, v = eid, by_id[eid].end(1 - side)
    return chain


def _walk_start(by_id, chain):
    eid, fwd = chain[0]
    e = by_id[eid]
    return e.tail if fwd else e.head


def _walk_stop(by_id, chain):
    eid, fwd = chain[-1]
    e = by_id[eid]
    return e.head if fwd else e.tail


def subdivide(g: MetricGraph, edge_id: int, position, new_vertex: int | None = None) -> MetricGraph:
    """Insert a degree-2 vertex on ``edge_id`` at coordinate ``position``."""
    position = as_rational(position)
    target = g.edges[edge_id]
    if not 0 < position < target.length:
        raise GraphValidationError("subdivision point must lie strictly inside the edge")
    if new_vertex is None:
        new_vertex = max(g.vertices) + 1
    if new_vertex in g.vertices:
        raise GraphValidationError(f"vertex {new_vertex} already exists")
    triples = []
    for e in g.edges:
        if e.id == edge_id:
            triples.append((e.tail, new_vertex, position))
            triples.append((new_vertex, e.head, e.length - position))
        else:
            triples.append((e.tail, e.head, e.length))
    return build_graph(triples)


def scale(g: MetricGraph, s) -> MetricGraph:
    s = as_rational(s)
    return build_graph([(e.tail, e.head, e.length * s) for e in g.edges])


def star(lengths: Sequence, center: int | None = None) -> MetricGraph:
    """Star with leaves 0..n-1 (each at x=0 of its edge) and hub ``n``."""
    n = len(lengths)
    center = n if center is None else center
    return build_graph([(i, center, l) for i, l in enumerate(lengths)])


def interval(length) -> MetricGraph:
    return build_graph([(0, 1, length)])


def from_dict(doc: dict) -> MetricGraph:
    try:
        items = doc["edges"]
        return build_graph((d["tail"], d["head"], d["length"]) for d in items)
    except (KeyError, TypeError) as exc:
        raise GraphValidationError(f"malformed graph document: {exc}") from exc


def load_graph(path) -> MetricGraph:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphValidationError(f"{path}: {exc}") from exc
    return from_dict(doc)


def dump_graph(g: MetricGraph, path) -> None:
    with open(path, "w") as fh:
        json.dump(g.to_dict(), fh, indent=2)
        fh.write("\n")
