"""Small exact linear programs: two-phase tableau simplex with Bland's rule.

Solves ``max c.x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0`` over
``Fraction``. Bland's rule rules out cycling, so degenerate problems (which
DoF regions are, heavily) terminate without perturbation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None


def _pivot(tab: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    row = tab[r]
    inv = 1 / row[c]
    row = [v * inv for v in row]
    tab[r] = row
    for i, other in enumerate(tab):
        if i != r and other[c] != 0:
            f = other[c]
            tab[i] = [a - f * b for a, b in zip(other, row)]
    basis[r] = c


def _run(tab, basis, cost, allowed) -> str:
    """Maximize ``cost`` over the current tableau, entering only ``allowed`` columns."""
    ncols = len(tab[0]) - 1 if tab else len(cost)
    while True:
        enter = None
        for j in range(ncols):
            if not allowed[j] or j in basis:
                continue
            reduced = cost[j] - sum((cost[basis[i]] * tab[i][j] for i in range(len(tab))), Fraction(0))
            if reduced > 0:
                enter = j
                break
        if enter is None:
            return OPTIMAL
        leave = None
        best = None
        for i, row in enumerate(tab):
            if row[enter] > 0:
                ratio = row[-1] / row[enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return UNBOUNDED
        _pivot(tab, basis, leave, enter)


def linprog_max(
    c: Sequence,
    a_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
) -> LPResult:
    n = len(c)
    c = [Fraction(v) for v in c]
    rows: list[tuple[list[Fraction], Fraction, bool]] = []
    for a, b in zip(a_ub, b_ub):
        rows.append(([Fraction(v) for v in a], Fraction(b), True))
    for a, b in zip(a_eq, b_eq):
        rows.append(([Fraction(v) for v in a], Fraction(b), False))

    n_slack = sum(1 for _, _, ub in rows if ub)
    # column layout: x (n) | slacks | artificials
    tab: list[list[Fraction]] = []
    basis: list[int] = []
    needs_art: list[int] = []
    s = 0
    for i, (a, b, ub) in enumerate(rows):
        slack = [Fraction(0)] * n_slack
        if ub:
            slack[s] = Fraction(1)
            slack_col = n + s
            s += 1
        sign = -1 if b < 0 else 1
        row = [sign * v for v in a] + [sign * v for v in slack]
        tab.append(row + [sign * b])
        if ub and sign > 0:
            basis.append(slack_col)
        else:
            basis.append(-1)
            needs_art.append(i)

    n_art = len(needs_art)
    width = n + n_slack + n_art
    for i, row in enumerate(tab):
        rhs = row.pop()
        row.extend([Fraction(0)] * n_art)
        row.append(rhs)
    for k, i in enumerate(needs_art):
        tab[i][n + n_slack + k] = Fraction(1)
        basis[i] = n + n_slack + k

    if n_art:
        phase1 = [Fraction(0)] * (n + n_slack) + [Fraction(-1)] * n_art
        _run(tab, basis, phase1, [True] * width)
        if sum((tab[i][-1] for i, b in enumerate(basis) if b >= n + n_slack), Fraction(0)) != 0:
            return LPResult(INFEASIBLE)
        # drive zero-level artificials out of the basis; drop redundant rows
        for i in reversed(range(len(tab))):
            if basis[i] < n + n_slack:
                continue
            col = next((j for j in range(n + n_slack) if tab[i][j] != 0), None)
            if col is None:
                del tab[i]
                del basis[i]
            else:
                _pivot(tab, basis, i, col)

    cost = c + [Fraction(0)] * (n_slack + n_art)
    allowed = [True] * (n + n_slack) + [False] * n_art
    status = _run(tab, basis, cost, allowed)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * width
    for i, b in enumerate(basis):
        x[b] = tab[i][-1]
    xs = tuple(x[:n])
    value = sum((ci * xi for ci, xi in zip(c, xs)), Fraction(0))
    return LPResult(OPTIMAL, value, xs)


def is_feasible(a_eq: Sequence[Sequence], b_eq: Sequence, a_ub: Sequence[Sequence] = (), b_ub: Sequence = ()) -> bool:
    n = len(a_eq[0]) if a_eq else len(a_ub[0])
    return linprog_max([0] * n, a_ub, b_ub, a_eq, b_eq).status == OPTIMAL
