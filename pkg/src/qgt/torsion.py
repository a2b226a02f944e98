"""Exact Poisson problems with Dirichlet standard vertex conditions.

On every edge the unknown is a polynomial ``p_e(x) + alpha_e x + beta_e``
where ``p_e`` is the particular solution of ``u'' = f_e`` with
``p_e(0) = p_e'(0) = 0``. The vertex conditions are linear in the
``(alpha_e, beta_e)`` pairs:

* value zero at degree-1 vertices,
* equal values at every other vertex (against the first incidence),
* inward derivatives summing to zero at every other vertex.

With the inward derivative taken as ``-u'(0)`` at a tail and ``+u'(l)`` at
a head, the system is square (size ``2|E|``) and nonsingular whenever the
graph has a degree-1 vertex.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import Matrix, inverse, solve_linear
from .exceptions import GraphValidationError, NoBoundaryVertex
from .graph import HEAD, TAIL, MetricGraph, as_rational


@dataclass(frozen=True)
class EdgePolynomial:
    edge: int
    coeffs: tuple[Fraction, ...]

    def __call__(self, x):
        acc = Fraction(0) if not isinstance(x, float) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "EdgePolynomial":
        return EdgePolynomial(self.edge, tuple(j * c for j, c in enumerate(self.coeffs) if j))

    def integral(self, length) -> Fraction:
        """Integral over ``[0, length]``."""
        return sum((c * length ** (j + 1) / (j + 1) for j, c in enumerate(self.coeffs)), Fraction(0))

    @property
    def degree(self) -> int:
        nz = [j for j, c in enumerate(self.coeffs) if c != 0]
        return nz[-1] if nz else -1


@dataclass(frozen=True)
class PoissonSolution:
    """Per-edge polynomials solving ``u'' = -order * u_{order-1}``."""

    graph: MetricGraph
    edges: tuple[EdgePolynomial, ...]
    order: int = 1

    def value(self, edge: int, side: int) -> Fraction:
        e = self.graph.edges[edge]
        return self.edges[edge](Fraction(0) if side == TAIL else e.length)

    def inward_derivative(self, edge: int, side: int) -> Fraction:
        e = self.graph.edges[edge]
        d = self.edges[edge].derivative()
        return -d(Fraction(0)) if side == TAIL else d(e.length)

    def vertex_value(self, v: int) -> Fraction:
        eid, side = self.graph.incidences(v)[0]
        return self.value(eid, side)

    def integral(self) -> Fraction:
        return sum((p.integral(e.length) for p, e in zip(self.edges, self.graph.edges)), Fraction(0))

    def residuals(self) -> list[Fraction]:
        """Every vertex condition evaluated on the solution, rows as assembled."""
        g = self.graph
        out = []
        for v in g.boundary_vertices:
            out.append(self.value(*g.incidences(v)[0]))
        for v in g.interior_vertices:
            ref, *rest = g.incidences(v)
            out.extend(self.value(*inc) - self.value(*ref) for inc in rest)
        for v in g.interior_vertices:
            out.append(sum((self.inward_derivative(*inc) for inc in g.incidences(v)), Fraction(0)))
        return out


@dataclass(frozen=True)
class MomentSequence:
    """Consecutive moments ``A_1..A_K`` as exact rationals."""

    values: tuple[Fraction, ...]

    def __len__(self):
        return len(self.values)

    def __getitem__(self, k: int) -> Fraction:
        """1-based: ``seq[1]`` is the torsional rigidity."""
        if not 1 <= k <= len(self.values):
            raise IndexError(k)
        return self.values[k - 1]

    def items(self):
        return [(k, a) for k, a in enumerate(self.values, start=1)]


def _normalize_rhs(g: MetricGraph, rhs) -> list[tuple[Fraction, ...]]:
    if isinstance(rhs, (int, Fraction, str)):
        c = (as_rational(rhs),)
        return [c] * g.n_edges
    rhs = list(rhs)
    if len(rhs) != g.n_edges:
        raise ValueError(f"need one right-hand side per edge ({g.n_edges}), got {len(rhs)}")
    out = []
    for item in rhs:
        coeffs = item.coeffs if isinstance(item, EdgePolynomial) else item
        if isinstance(coeffs, (int, Fraction, str)):
            coeffs = (coeffs,)
        out.append(tuple(as_rational(c) for c in coeffs))
    return out


def particular_solution(f: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Coefficients of ``p`` with ``p'' = f`` and ``p(0) = p'(0) = 0``."""
    return (Fraction(0), Fraction(0)) + tuple(
        Fraction(c) / ((j + 1) * (j + 2)) for j, c in enumerate(f)
    )


def _check_solvable(g: MetricGraph):
    if not g.edges:
        raise GraphValidationError("graph has no edges")
    if not g.has_boundary:
        raise NoBoundaryVertex("graph has no degree-1 vertex; constants are in the kernel")


def assemble_poisson_system(g: MetricGraph, rhs=-1) -> tuple[Matrix, list[Fraction]]:
    """Linear system for ``(alpha_0, beta_0, alpha_1, beta_1, ...)``.

    ``rhs`` is either one constant for all edges or, per edge, an ascending
    coefficient list (or EdgePolynomial) for ``f_e`` in ``u_e'' = f_e``.
    Rows: Dirichlet, continuity, Kirchhoff; vertices in id order.
    """
    _check_solvable(g)
    parts = [particular_solution(f) for f in _normalize_rhs(g, rhs)]
    n = 2 * g.n_edges
    rows: list[list[Fraction]] = []
    vec: list[Fraction] = []

    def value_row(eid, side):
        row = [Fraction(0)] * n
        if side == HEAD:
            l = g.edges[eid].length
            row[2 * eid] = l
            row[2 * eid + 1] = Fraction(1)
            return row, -EdgePolynomial(eid, parts[eid])(l)
        row[2 * eid + 1] = Fraction(1)
        return row, Fraction(0)

    for v in g.boundary_vertices:
        row, b = value_row(*g.incidences(v)[0])
        rows.append(row)
        vec.append(b)
    for v in g.interior_vertices:
        ref, *rest = g.incidences(v)
        r0, b0 = value_row(*ref)
        for inc in rest:
            r1, b1 = value_row(*inc)
            rows.append([x - y for x, y in zip(r1, r0)])
            vec.append(b1 - b0)
    for v in g.interior_vertices:
        row = [Fraction(0)] * n
        b = Fraction(0)
        for eid, side in g.incidences(v):
            if side == TAIL:
                row[2 * eid] -= 1
            else:
                row[2 * eid] += 1
                b -= EdgePolynomial(eid, parts[eid]).derivative()(g.edges[eid].length)
        rows.append(row)
        vec.append(b)
    return Matrix(rows), vec


def solve_poisson(g: MetricGraph, rhs=-1, order: int = 1, _inverse: Matrix | None = None) -> PoissonSolution:
    parts = [particular_solution(f) for f in _normalize_rhs(g, rhs)]
    m, v = assemble_poisson_system(g, rhs)
    x = solve_linear(m, v) if _inverse is None else _inverse @ v
    polys = []
    for eid, p in enumerate(parts):
        c = list(p)
        c[0] += x[2 * eid + 1]
        c[1] += x[2 * eid]
        polys.append(EdgePolynomial(eid, tuple(c)))
    return PoissonSolution(g, tuple(polys), order)


def solve_torsion(g: MetricGraph) -> PoissonSolution:
    """Solution of ``u'' = -1`` with value zero at the degree-1 vertices."""
    return solve_poisson(g, -1, order=1)


def torsional_rigidity(g: MetricGraph) -> Fraction:
    """Integral of the torsion function over the graph, exact.

    >>> from qgt.graph import interval
    >>> torsional_rigidity(interval(2))
    Fraction(2, 3)
    """
    return solve_torsion(g).integral()


def moment_solutions(g: MetricGraph, K: int) -> list[PoissonSolution]:
    """Solutions ``u_1..u_K`` of ``u_k'' = -k u_{k-1}`` with ``u_0 = 1``."""
    if K < 1:
        raise ValueError("K must be positive")
    _check_solvable(g)
    # the matrix does not depend on the right-hand side
    minv = inverse(assemble_poisson_system(g)[0])
    prev = [(Fraction(1),)] * g.n_edges
    out = []
    for k in range(1, K + 1):
        rhs = [tuple(-k * c for c in coeffs) for coeffs in prev]
        sol = solve_poisson(g, rhs, order=k, _inverse=minv)
        out.append(sol)
        prev = [p.coeffs for p in sol.edges]
    return out


def moment_hierarchy(g: MetricGraph, K: int) -> MomentSequence:
    """Exact ``A_1..A_K`` where ``A_k = k * int t^(k-1) q(t) dt``."""
    return MomentSequence(tuple(sol.integral() for sol in moment_solutions(g, K)))
