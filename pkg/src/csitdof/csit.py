"""CSIT states, space-time patterns and joint/marginal probabilities.

A joint CSIT state of K users is written as a K-character string over
``P``, ``D``, ``N`` (``"PNN"`` means user 1 perfect, users 2 and 3 unknown).
All probabilities are ``Fraction`` and every identity below holds exactly.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping

from .errors import PreconditionError

WILDCARD = "-"


class CsitState(str, Enum):
    P = "P"
    D = "D"
    N = "N"

    @property
    def rank(self) -> int:
        """Display order only: P > D > N."""
        return {"P": 2, "D": 1, "N": 0}[self.value]


STATES = tuple(s.value for s in CsitState)


def _check_state_string(s: str, k: int | None = None) -> str:
    if not isinstance(s, str) or not s or any(ch not in STATES for ch in s):
        raise ValueError(f"invalid CSIT state string {s!r}; expected characters from P, D, N")
    if k is not None and len(s) != k:
        raise ValueError(f"state {s!r} has {len(s)} users, expected {k}")
    return s


@dataclass(frozen=True)
class CsitPattern:
    """K x T matrix of CSIT states, stored row-per-user."""

    grid: tuple[str, ...]

    def __post_init__(self):
        if not self.grid:
            raise ValueError("pattern needs at least one user")
        t = len(self.grid[0])
        if t == 0:
            raise ValueError("pattern needs at least one slot")
        for row in self.grid:
            _check_state_string(row, t)

    @classmethod
    def from_columns(cls, columns: Iterable[str]) -> "CsitPattern":
        cols = list(columns)
        if not cols:
            raise ValueError("pattern needs at least one slot")
        k = len(cols[0])
        for c in cols:
            _check_state_string(c, k)
        return cls(tuple("".join(c[i] for c in cols) for i in range(k)))

    @property
    def users(self) -> int:
        return len(self.grid)

    @property
    def slots(self) -> int:
        return len(self.grid[0])

    def column(self, t: int) -> str:
        return "".join(row[t] for row in self.grid)

    def columns(self) -> list[str]:
        return [self.column(t) for t in range(self.slots)]


@dataclass(frozen=True)
class JointCsitDistribution:
    users: int
    mass: Mapping[str, Fraction]

    def __post_init__(self):
        if self.users < 1:
            raise ValueError("need at least one user")
        clean = {}
        for state, p in self.mass.items():
            _check_state_string(state, self.users)
            p = Fraction(p)
            if p < 0:
                raise ValueError(f"negative probability for {state}")
            if p:
                clean[state] = clean.get(state, Fraction(0)) + p
        if sum(clean.values(), Fraction(0)) != 1:
            raise ValueError(f"probabilities sum to {sum(clean.values(), Fraction(0))}, not 1")
        object.__setattr__(self, "mass", dict(sorted(clean.items())))

    def prob(self, state: str) -> Fraction:
        return self.mass.get(state, Fraction(0))

    @property
    def states(self) -> set[str]:
        return {ch for s in self.mass for ch in s}

    def __hash__(self):
        return hash((self.users, tuple(self.mass.items())))


@dataclass(frozen=True)
class Marginals:
    p: tuple[Fraction, ...]
    d: tuple[Fraction, ...]
    n: tuple[Fraction, ...]

    def __post_init__(self):
        if not (len(self.p) == len(self.d) == len(self.n)):
            raise ValueError("marginal vectors differ in length")
        for i, (a, b, c) in enumerate(zip(self.p, self.d, self.n)):
            if min(a, b, c) < 0 or a + b + c != 1:
                raise ValueError(f"user {i + 1}: marginals {a}, {b}, {c} are not a distribution")

    @classmethod
    def symmetric(cls, k: int, p, d=0) -> "Marginals":
        p, d = Fraction(p), Fraction(d)
        return cls((p,) * k, (d,) * k, (1 - p - d,) * k)

    @property
    def users(self) -> int:
        return len(self.p)

    def of(self, state: str, user: int) -> Fraction:
        """Marginal of ``state`` for 1-based ``user``."""
        return {"P": self.p, "D": self.d, "N": self.n}[state][user - 1]

    def pd(self) -> tuple[Fraction, ...]:
        return tuple(a + b for a, b in zip(self.p, self.d))


def joint_from_pattern(pattern: CsitPattern) -> JointCsitDistribution:
    counts = Counter(pattern.columns())
    t = pattern.slots
    return JointCsitDistribution(pattern.users, {s: Fraction(c, t) for s, c in counts.items()})


def joint_from_columns(columns: Iterable[str]) -> JointCsitDistribution:
    return joint_from_pattern(CsitPattern.from_columns(columns))


def marginals_from_joint(joint: JointCsitDistribution) -> Marginals:
    k = joint.users
    acc = {q: [Fraction(0)] * k for q in STATES}
    for state, p in joint.mass.items():
        for i, ch in enumerate(state):
            acc[ch][i] += p
    return Marginals(tuple(acc["P"]), tuple(acc["D"]), tuple(acc["N"]))


def wildcard_prob(joint: JointCsitDistribution, template: str) -> Fraction:
    """Total mass of states matching ``template``; ``-`` matches any state."""
    if len(template) != joint.users or any(ch not in STATES + (WILDCARD,) for ch in template):
        raise ValueError(f"template {template!r} does not fit {joint.users} users")
    return sum(
        (p for s, p in joint.mass.items() if all(t == WILDCARD or t == ch for t, ch in zip(template, s))),
        Fraction(0),
    )


def pairwise_perfect(joint: JointCsitDistribution, a: int, b: int) -> Fraction:
    """Probability that users ``a`` and ``b`` (1-based) both have perfect CSIT."""
    k = joint.users
    if a == b:
        raise PreconditionError("pairwise probability needs two distinct users")
    if not (1 <= a <= k and 1 <= b <= k):
        raise PreconditionError(f"users ({a}, {b}) out of range 1..{k}")
    template = [WILDCARD] * k
    template[a - 1] = template[b - 1] = "P"
    return wildcard_prob(joint, "".join(template))


def is_symmetric(marginals: Marginals) -> bool:
    return all(len(set(vec)) <= 1 for vec in (marginals.p, marginals.d, marginals.n))


def collapse_delay_to_perfect(joint: JointCsitDistribution) -> JointCsitDistribution:
    merged: dict[str, Fraction] = {}
    for state, p in joint.mass.items():
        key = state.replace("D", "P")
        merged[key] = merged.get(key, Fraction(0)) + p
    return JointCsitDistribution(joint.users, merged)


def all_states(k: int) -> list[str]:
    return ["".join(s) for s in product(STATES, repeat=k)]
