"""Outer-bound inequality families for the DoF region.

Every generator returns a :class:`BoundSet`: linear constraints
``coeffs . d <= rhs`` over the per-user DoF vector ``d`` (nonnegativity is
implicit). Tags name the family and the user ordering or subset, e.g.
``T1w:3>1>2`` (weighted bound, users taken in order 3, 1, 2), ``T1s:1+2``
(sum bound over users 1 and 2), ``T2:1+2+3/w3`` (weak user 3), ``T3:ant``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .csit import (
    JointCsitDistribution,
    Marginals,
    collapse_delay_to_perfect,
    marginals_from_joint,
    pairwise_perfect,
)
from .errors import PreconditionError, UnsupportedCaseError

MAX_USERS = 8


@dataclass(frozen=True)
class Inequality:
    coeffs: tuple[Fraction, ...]
    rhs: Fraction
    tag: str = ""

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if not any(coeffs):
            raise ValueError("inequality needs a nonzero coefficient")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "rhs", Fraction(self.rhs))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def lhs(self, point: Sequence) -> Fraction:
        return sum((c * x for c, x in zip(self.coeffs, point)), Fraction(0))

    def holds(self, point: Sequence) -> bool:
        return self.lhs(point) <= self.rhs

    def is_tight(self, point: Sequence) -> bool:
        return self.lhs(point) == self.rhs

    def canonical(self) -> tuple[tuple[Fraction, ...], Fraction]:
        """Scale so the leading nonzero coefficient has magnitude one."""
        lead = abs(next(c for c in self.coeffs if c))
        return tuple(c / lead for c in self.coeffs), self.rhs / lead

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs, start=1):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = f"d{i}" if mag == 1 else f"{mag}*d{i}"
            terms.append((sign, body))
        text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        text += "".join(f" {s} {b}" for s, b in terms[1:])
        return f"{text} <= {self.rhs}"


@dataclass(frozen=True)
class BoundSet:
    users: int
    inequalities: tuple[Inequality, ...] = field(default_factory=tuple)

    def __iter__(self):
        return iter(self.inequalities)

    def __len__(self):
        return len(self.inequalities)

    def by_tag(self, tag: str) -> Inequality:
        for ineq in self.inequalities:
            if ineq.tag == tag:
                return ineq
        raise KeyError(tag)

    def find(self, coeffs: Sequence) -> list[Inequality]:
        coeffs = tuple(Fraction(c) for c in coeffs)
        return [q for q in self.inequalities if q.coeffs == coeffs]


def make_bound_set(users: int, inequalities: Iterable[Inequality]) -> BoundSet:
    """Sort by tag and drop inequalities equal to an earlier one up to positive scaling."""
    seen = set()
    kept = []
    for ineq in sorted(inequalities, key=lambda q: q.tag):
        if ineq.dim != users:
            raise ValueError(f"{ineq.tag}: {ineq.dim} coefficients for {users} users")
        key = ineq.canonical()
        if key in seen:
            continue
        seen.add(key)
        kept.append(ineq)
    return BoundSet(users, tuple(kept))


def merge(*sets: BoundSet) -> BoundSet:
    users = {s.users for s in sets}
    if len(users) != 1:
        raise ValueError("cannot merge bound sets of different dimension")
    return make_bound_set(users.pop(), (q for s in sets for q in s))


def _check_users(k: int) -> None:
    if not 1 <= k <= MAX_USERS:
        raise PreconditionError(f"bound generation supports 1..{MAX_USERS} users, got {k}")


def theorem1_weighted(marginals: Marginals) -> BoundSet:
    k = marginals.users
    _check_users(k)
    lam = marginals.p
    out = []
    for j in range(1, k + 1):
        for perm in permutations(range(k), j):
            coeffs = [Fraction(0)] * k
            for i, user in enumerate(perm, start=1):
                coeffs[user] = Fraction(1, i)
            rhs = Fraction(1)
            prefix = Fraction(0)
            for i in range(2, j + 1):
                prefix += lam[perm[i - 2]]
                rhs += prefix / (i * (i - 1))
            tag = "T1w:" + ">".join(str(u + 1) for u in perm)
            out.append(Inequality(tuple(coeffs), rhs, tag))
    return make_bound_set(k, out)


def theorem1_sum(marginals: Marginals) -> BoundSet:
    k = marginals.users
    _check_users(k)
    pd = marginals.pd()
    out = []
    for j in range(2, k + 1):
        for subset in combinations(range(k), j):
            # the best enhancement order drops the user with the largest P+D mass
            smallest = sorted(pd[u] for u in subset)[: j - 1]
            coeffs = tuple(Fraction(int(u in subset)) for u in range(k))
            tag = "T1s:" + "+".join(str(u + 1) for u in subset)
            out.append(Inequality(coeffs, 1 + sum(smallest, Fraction(0)), tag))
    return make_bound_set(k, out)


def theorem1(marginals: Marginals) -> BoundSet:
    return merge(theorem1_weighted(marginals), theorem1_sum(marginals))


def theorem2(joint: JointCsitDistribution) -> BoundSet:
    """Joint-distribution bounds ``2 * sum_{S - w} d + d_w <= rhs`` for subsets of size >= 3.

    Delayed CSIT is first promoted to perfect. Subsets of four or more users
    need equal perfect-CSIT marginals inside the subset.
    """
    k = joint.users
    _check_users(k)
    collapsed = collapse_delay_to_perfect(joint)
    lam = marginals_from_joint(collapsed).p
    pair = {}
    for a, b in combinations(range(1, k + 1), 2):
        pair[a, b] = pairwise_perfect(collapsed, a, b)

    out = []
    for j in range(3, k + 1):
        for subset in combinations(range(1, k + 1), j):
            if j >= 4 and len({lam[u - 1] for u in subset}) > 1:
                shown = ", ".join(f"{lam[u - 1]}" for u in subset)
                raise UnsupportedCaseError(
                    f"joint-CSIT bound for users {subset} needs equal perfect-CSIT marginals "
                    f"(got {shown}); the asymmetric form is only available for three users"
                )
            for w in subset:
                strong = [u for u in subset if u != w]
                coeffs = [Fraction(0)] * k
                for u in strong:
                    coeffs[u - 1] = Fraction(2)
                coeffs[w - 1] = Fraction(1)
                if j == 3:
                    a, b = strong
                    rhs = 2 + lam[a - 1] + lam[b - 1] + pair[a, b]
                else:
                    rhs = 2 + 2 * (j - 2) * lam[subset[0] - 1] + min(pair[p] for p in combinations(strong, 2))
                tag = "T2:" + "+".join(map(str, subset)) + f"/w{w}"
                out.append(Inequality(tuple(coeffs), rhs, tag))
    return make_bound_set(k, out)


def theorem3_mimo(n1: int, n2: int, joint: JointCsitDistribution, caps: bool = True) -> BoundSet:
    if joint.users != 2:
        raise PreconditionError("the MIMO bound is for two users")
    if n2 < 1 or n1 < n2:
        raise PreconditionError(f"need N1 >= N2 >= 1 (got N1={n1}, N2={n2}); swap the users first")
    if "D" in joint.states:
        raise PreconditionError("the MIMO bound covers P/N CSIT only; joint has delayed states")
    m = marginals_from_joint(joint)
    lam1, lam2 = m.p
    out = [
        Inequality((Fraction(1, n1), Fraction(1, n2)), 1 + lam2, "T3:ant"),
        Inequality((Fraction(1), Fraction(1)), n1 + n2 * lam1, "T3:sum"),
    ]
    if caps:
        out += [
            Inequality((Fraction(1), Fraction(0)), Fraction(n1), "cap:d1"),
            Inequality((Fraction(0), Fraction(1)), Fraction(n2), "cap:d2"),
        ]
    return make_bound_set(2, out)
