"""Exact H-polytopes over the nonnegative orthant.

Vertices come from the double description method run on the homogenized
cone ``{(t, x) : t >= 0, x >= 0, b t - A x >= 0}`` in integer arithmetic.
The orthant rows make the starting cone the identity, so no initial basis
search is needed, and the cone stays pointed throughout. Rays with ``t > 0``
are vertices; a surviving ray with ``t = 0`` is a recession direction.

``enumerate_vertices_bruteforce`` solves every square subsystem instead; it
is exponential in the dimension and kept as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from . import lp
from .bounds import BoundSet, Inequality
from .errors import PreconditionError, UnboundedRegionError
from .exact import integer_row, primitive, rank, solve

MAX_DIM = 6
MAX_CONSTRAINTS = 200

Point = tuple[Fraction, ...]


@dataclass(frozen=True)
class HPolytope:
    """``{d >= 0 : q.coeffs . d <= q.rhs for q in inequalities}``."""

    dim: int
    inequalities: tuple[Inequality, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be at least 1")
        for q in self.inequalities:
            if q.dim != self.dim:
                raise ValueError(f"{q.tag or q}: expected {self.dim} coefficients")
        object.__setattr__(self, "inequalities", tuple(self.inequalities))

    @classmethod
    def from_bounds(cls, *sets: BoundSet) -> "HPolytope":
        dims = {s.users for s in sets}
        if len(dims) != 1:
            raise ValueError("bound sets disagree on dimension")
        return cls(dims.pop(), tuple(q for s in sets for q in s))

    @classmethod
    def from_rows(cls, dim: int, rows: Iterable[tuple[Sequence, object]]) -> "HPolytope":
        ineqs = tuple(Inequality(tuple(c), r, f"r{i}") for i, (c, r) in enumerate(rows))
        return cls(dim, ineqs)

    def contains(self, point: Sequence) -> bool:
        if len(point) != self.dim:
            raise PreconditionError(f"point has {len(point)} coordinates, region has {self.dim}")
        pt = [Fraction(x) for x in point]
        return all(x >= 0 for x in pt) and all(q.holds(pt) for q in self.inequalities)

    def tight(self, point: Sequence) -> list[Inequality]:
        return [q for q in self.inequalities if q.is_tight(point)]


@dataclass(frozen=True)
class VertexSet:
    dim: int
    points: tuple[Point, ...]

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __contains__(self, point):
        return tuple(Fraction(x) for x in point) in self.points


def _vertex_set(dim: int, points: Iterable[Sequence]) -> VertexSet:
    uniq = {tuple(Fraction(x) for x in p) for p in points}
    return VertexSet(dim, tuple(sorted(uniq)))


def _check_size(h: HPolytope) -> None:
    if h.dim > MAX_DIM:
        raise PreconditionError(f"vertex enumeration supports dimension <= {MAX_DIM}, got {h.dim}")
    if len(h.inequalities) > MAX_CONSTRAINTS:
        raise PreconditionError(
            f"vertex enumeration supports <= {MAX_CONSTRAINTS} constraints, got {len(h.inequalities)}"
        )


def _cone_rows(h: HPolytope) -> list[list[int]]:
    rows = []
    for q in h.inequalities:
        scaled = integer_row(list(q.coeffs) + [q.rhs])
        rows.append([scaled[-1]] + [-c for c in scaled[:-1]])
    return rows


def enumerate_vertices(h: HPolytope) -> VertexSet:
    _check_size(h)
    d = h.dim
    width = d + 1
    rays: list[list[int]] = [[int(i == j) for i in range(width)] for j in range(width)]
    # zero set of ray j among the orthant rows processed so far
    zeros: list[int] = [((1 << width) - 1) ^ (1 << j) for j in range(width)]

    for k, row in enumerate(_cone_rows(h), start=width):
        bit = 1 << k
        vals = [sum(a * b for a, b in zip(row, r)) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        if not neg:
            for i, v in enumerate(vals):
                if v == 0:
                    zeros[i] |= bit
            continue
        new_rays, new_zeros = [], []
        for i in pos:
            for j in neg:
                common = zeros[i] & zeros[j]
                if common.bit_count() < d - 1:
                    continue
                if any((zeros[m] & common) == common for m in range(len(rays)) if m != i and m != j):
                    continue
                vi, vj = vals[i], -vals[j]
                new_rays.append(primitive([vi * b + vj * a for a, b in zip(rays[i], rays[j])]))
                new_zeros.append(common | bit)
        keep_rays, keep_zeros = [], []
        for i, v in enumerate(vals):
            if v > 0:
                keep_rays.append(rays[i])
                keep_zeros.append(zeros[i])
            elif v == 0:
                keep_rays.append(rays[i])
                keep_zeros.append(zeros[i] | bit)
        rays = keep_rays + new_rays
        zeros = keep_zeros + new_zeros

    points = [tuple(Fraction(x, r[0]) for x in r[1:]) for r in rays if r[0] > 0]
    recession = [r[1:] for r in rays if r[0] == 0 and any(r[1:])]
    if points and recession:
        raise UnboundedRegionError(recession[0])
    return _vertex_set(d, points)


def enumerate_vertices_bruteforce(h: HPolytope) -> VertexSet:
    """Solve every ``dim``-subset of constraints (orthant rows included)."""
    d = h.dim
    rows = [(list(q.coeffs), q.rhs) for q in h.inequalities]
    rows += [([Fraction(-int(i == j)) for i in range(d)], Fraction(0)) for j in range(d)]
    found = []
    for combo in combinations(rows, d):
        x = solve([a for a, _ in combo], [b for _, b in combo])
        if x is not None and h.contains(x):
            found.append(x)
    return _vertex_set(d, found)


def max_weighted(h: HPolytope, weights: Sequence) -> tuple[Fraction, Point]:
    w = [Fraction(x) for x in weights]
    if len(w) != h.dim:
        raise PreconditionError(f"{len(w)} weights for a {h.dim}-dimensional region")
    verts = enumerate_vertices(h)
    if not verts.points:
        raise PreconditionError("region is empty")
    best = None
    for v in verts:  # canonical order, so the first maximizer wins ties
        val = sum((a * b for a, b in zip(w, v)), Fraction(0))
        if best is None or val > best[0]:
            best = (val, v)
    return best


def max_weighted_lp(h: HPolytope, weights: Sequence) -> Fraction:
    """Same optimum as :func:`max_weighted`, computed by simplex on the H-description."""
    res = lp.linprog_max(
        weights,
        [q.coeffs for q in h.inequalities],
        [q.rhs for q in h.inequalities],
    )
    if res.status == lp.UNBOUNDED:
        raise UnboundedRegionError([0] * h.dim)
    if res.status != lp.OPTIMAL:
        raise PreconditionError("region is empty")
    return res.value


def _affine_rank(points: Sequence[Point]) -> int:
    if not points:
        return 0
    return rank([list(p) + [1] for p in points])


def remove_redundant(h: HPolytope) -> HPolytope:
    """Keep exactly one inequality per facet that is not an orthant facet.

    In a full-dimensional polytope an inequality is irredundant iff its tight
    vertices span a hyperplane. Lower-dimensional regions fall back to
    dropping inequalities one at a time while the vertex set is unchanged.
    """
    verts = enumerate_vertices(h)
    pts = list(verts.points)
    d = h.dim
    if _affine_rank(pts) < d + 1:
        return _remove_redundant_slow(h, verts)

    def tight_set(pred):
        return frozenset(i for i, p in enumerate(pts) if pred(p))

    seen = {tight_set(lambda p, j=j: p[j] == 0) for j in range(d)}
    kept = []
    for q in h.inequalities:
        ts = tight_set(q.is_tight)
        if ts in seen:
            continue
        if _affine_rank([pts[i] for i in ts]) == d:
            seen.add(ts)
            kept.append(q)
    return HPolytope(d, tuple(kept))


def _remove_redundant_slow(h: HPolytope, verts: VertexSet) -> HPolytope:
    kept = list(h.inequalities)
    i = 0
    while i < len(kept):
        trial = HPolytope(h.dim, tuple(kept[:i] + kept[i + 1 :]))
        try:
            same = enumerate_vertices(trial).points == verts.points
        except UnboundedRegionError:
            same = False
        if same:
            kept = kept[:i] + kept[i + 1 :]
        else:
            i += 1
    return HPolytope(h.dim, tuple(kept))


def region_equal(a: HPolytope, b: HPolytope) -> bool:
    if a.dim != b.dim:
        raise PreconditionError("regions differ in dimension")
    return all(b.contains(v) for v in enumerate_vertices(a)) and all(
        a.contains(v) for v in enumerate_vertices(b)
    )


def hull_contains(points: Iterable[Sequence], target: Sequence) -> bool:
    """Is ``target`` dominated componentwise by a convex combination of ``points``?"""
    pts = [[Fraction(x) for x in p] for p in points]
    goal = [max(Fraction(x), Fraction(0)) for x in target]
    if not pts:
        return False
    k = len(goal)
    m = len(pts)
    # variables: lambda_1..m, surplus_1..k
    a_eq = [[pts[j][i] for j in range(m)] + [Fraction(-int(r == i)) for r in range(k)] for i in range(k)]
    a_eq.append([Fraction(1)] * m + [Fraction(0)] * k)
    return lp.is_feasible(a_eq, goal + [Fraction(1)])


def vertex_rows(verts: VertexSet) -> list[list[Fraction]]:
    return [list(v) for v in verts]
