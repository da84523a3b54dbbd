"""Achievable corner points, the delayed-CSIT budget and tightness checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Sequence

from .bounds import Inequality, make_bound_set
from .csit import JointCsitDistribution, marginals_from_joint
from .errors import PreconditionError
from .polytope import HPolytope, enumerate_vertices, hull_contains

MIMO_LABELS = ("A1", "A2", "B1", "B2", "B3", "C1", "C2", "C3")


@dataclass(frozen=True)
class CornerPoint:
    coords: tuple[Fraction, ...]
    label: str
    params: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        coords = tuple(Fraction(c) for c in self.coords)
        if any(c < 0 for c in coords):
            raise ValueError(f"{self.label}: negative coordinate in {coords}")
        object.__setattr__(self, "coords", coords)


def harmonic(a: int, b: int) -> Fraction:
    """``sum_{i=a}^{b} 1/i``; zero for an empty range."""
    return sum((Fraction(1, i) for i in range(a, b + 1)), Fraction(0))


def _check_order(k: int, j: int) -> None:
    if not 1 <= j <= k:
        raise PreconditionError(f"need 1 <= j <= K, got K={k}, j={j}")


def lambda_d_min(k: int, j: int) -> Fraction:
    _check_order(k, j)
    return 1 - Fraction(k - j + 1) / (k * harmonic(j, k))


def lambda_d_min_oracle(k: int, j: int) -> Fraction:
    """Count slots and delayed feedbacks of MAT phases ``j..K`` directly.

    Phase ``i`` is repeated ``(i-1)!(K-i)! K`` times so every phase produces
    whole messages; each repetition uses ``C(K, i)`` slots, and each of those
    slots needs delayed CSIT from the ``K - i`` users not served in it.
    """
    _check_order(k, j)
    if k > 10:
        raise PreconditionError("oracle is limited to K <= 10")
    slots = 0
    feedbacks = 0
    for i in range(j, k + 1):
        reps = factorial(i - 1) * factorial(k - i) * k
        slots += reps * comb(k, i)
        feedbacks += reps * comb(k, i) * (k - i)
    return Fraction(feedbacks, k * slots)


def _prob(x, name: str) -> Fraction:
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise PreconditionError(f"{name}={x} is not in [0, 1]")
    return x


def case_a_corners(k: int, lam_p) -> list[CornerPoint]:
    lam_p = _prob(lam_p, "lambda_P")
    out, seen = [], set()
    for i in range(k):
        coords = tuple(Fraction(1) if u == i else lam_p for u in range(k))
        if coords in seen:
            continue
        seen.add(coords)
        out.append(CornerPoint(coords, f"caseA:{i + 1}", {"user": i + 1}))
    return out


def case_b_threshold(k: int, lam_d) -> Fraction:
    """Largest lambda_N for which the ZFBF + MAT scheme covers all subsets."""
    h = harmonic(2, k)
    return Fraction(lam_d) / h if h else Fraction(1)


def _check_case_b(k: int, lam_p, lam_d, lam_n) -> tuple[Fraction, Fraction, Fraction]:
    lam_p, lam_d, lam_n = _prob(lam_p, "lambda_P"), _prob(lam_d, "lambda_D"), _prob(lam_n, "lambda_N")
    if lam_p + lam_d + lam_n != 1:
        raise PreconditionError(f"lambda_P + lambda_D + lambda_N = {lam_p + lam_d + lam_n}, not 1")
    limit = case_b_threshold(k, lam_d)
    if lam_n > limit:
        raise PreconditionError(f"lambda_N={lam_n} exceeds the threshold lambda_D / sum_{{i=2}}^{k} 1/i = {limit}")
    return lam_p, lam_d, lam_n


def case_b_value(j: int, lam_p) -> Fraction:
    return (1 + Fraction(lam_p) * harmonic(2, j)) / harmonic(1, j)


def case_b_corners(k: int, lam_p, lam_d, lam_n) -> list[CornerPoint]:
    lam_p, _, _ = _check_case_b(k, lam_p, lam_d, lam_n)
    out = []
    for j in range(1, k + 1):
        on = case_b_value(j, lam_p)
        for subset in combinations(range(k), j):
            coords = tuple(on if u in subset else lam_p for u in range(k))
            label = "caseB:" + "+".join(str(u + 1) for u in subset)
            out.append(CornerPoint(coords, label, {"subset": tuple(u + 1 for u in subset)}))
    return out


@dataclass(frozen=True)
class MimoScenario:
    n1: int
    n2: int
    joint: JointCsitDistribution

    def __post_init__(self):
        if self.joint.users != 2:
            raise PreconditionError("MIMO scenarios have exactly two users")
        if self.n2 < 1 or self.n1 < self.n2:
            raise PreconditionError(f"need N1 >= N2 >= 1, got N1={self.n1}, N2={self.n2}")
        if "D" in self.joint.states:
            raise PreconditionError("MIMO scenarios use P/N CSIT only")

    @property
    def pp(self) -> Fraction:
        return self.joint.prob("PP")

    @property
    def pn(self) -> Fraction:
        return self.joint.prob("PN")

    @property
    def np_(self) -> Fraction:
        return self.joint.prob("NP")

    @property
    def nn(self) -> Fraction:
        return self.joint.prob("NN")

    @property
    def lam1(self) -> Fraction:
        return marginals_from_joint(self.joint).p[0]

    @property
    def lam2(self) -> Fraction:
        return marginals_from_joint(self.joint).p[1]

    def branch(self) -> str:
        if self.n1 * self.pn <= self.n2 * self.np_:
            if self.n1 - self.n2 + self.n2 * self.lam1 <= self.n1 * self.lam2:
                return "A"
            return "B"
        return "C"


def mimo_corners(s: MimoScenario) -> list[CornerPoint]:
    n1, n2 = Fraction(s.n1), Fraction(s.n2)
    l1, l2 = s.lam1, s.lam2
    b = s.branch()
    if b == "A":
        pts = {"A1": (n1, n2 * l1), "A2": (n1 - n2 + n2 * l1, n2)}
    elif b == "B":
        # N1 == N2 makes the B condition read lambda_P^1 > lambda_P^2, which
        # contradicts lambda_PN <= lambda_NP; so the divisor is never zero here.
        if n1 == n2:
            raise PreconditionError("inconsistent scenario: B branch with N1 == N2")
        gap = n1 - n2
        pts = {
            "B1": (n1, n2 * l1),
            "B2": (n1 * l2, n2),
            "B3": (n1 - n1 * n2 * (l2 - l1) / gap, (n1 * n2 * l2 - n2 * n2 * l1) / gap),
        }
    else:
        pts = {
            "C1": (n1, n2 * s.pp + n2 * n2 / n1 * s.np_),
            "C2": (n1 * l2, n2),
            "C3": (n1 - n2 * s.np_, n2 * l2 + n2 * n2 / n1 * s.np_),
        }
    return [CornerPoint(c, "mimo:" + lab, {"branch": b}) for lab, c in pts.items()]


def mimo_corner(s: MimoScenario, label: str) -> CornerPoint:
    for c in mimo_corners(s):
        if c.label == "mimo:" + label:
            return c
    raise PreconditionError(f"corner {label} does not belong to branch {s.branch()} of this scenario")


def mimo_inner_bound(s: MimoScenario) -> HPolytope:
    n1, n2 = Fraction(s.n1), Fraction(s.n2)
    sum_rhs = n1 + n2 * (s.pp + min(s.pn, n2 / n1 * s.np_))
    rows = [
        Inequality((1 / n1, 1 / n2), 1 + s.lam2, "in:ant"),
        Inequality((Fraction(1), Fraction(1)), sum_rhs, "in:sum"),
        Inequality((Fraction(1), Fraction(0)), n1, "cap:d1"),
        Inequality((Fraction(0), Fraction(1)), n2, "cap:d2"),
    ]
    return HPolytope.from_bounds(make_bound_set(2, rows))


@dataclass(frozen=True)
class TightnessReport:
    vertices: tuple[tuple[Fraction, ...], ...]
    achieved: tuple[bool, ...]

    @property
    def verdict(self) -> str:
        return "tight" if all(self.achieved) else "not tight"

    @property
    def unachieved(self) -> list[tuple[Fraction, ...]]:
        return [v for v, ok in zip(self.vertices, self.achieved) if not ok]

    def render(self) -> str:
        lines = []
        for v, ok in zip(self.vertices, self.achieved):
            coords = ",".join(str(x) for x in v)
            lines.append(f"vertex ({coords}): {'achievable' if ok else 'NOT achieved'}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines) + "\n"


def tightness_report(outer: HPolytope, corners: Sequence[CornerPoint]) -> TightnessReport:
    pts = [c.coords for c in corners]
    for p in pts:
        if len(p) != outer.dim:
            raise PreconditionError(f"corner of dimension {len(p)} against a {outer.dim}-dimensional region")
    verts = enumerate_vertices(outer).points
    flags = tuple(hull_contains(pts, v) for v in verts)
    return TightnessReport(verts, flags)
