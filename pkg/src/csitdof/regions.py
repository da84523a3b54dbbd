"""Glue between scenarios, bound families and achievability cases."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .achievability import (
    CornerPoint,
    MimoScenario,
    case_a_corners,
    case_b_corners,
    case_b_threshold,
    mimo_corners,
)
from .bounds import BoundSet, Inequality, make_bound_set, merge, theorem1, theorem2, theorem3_mimo
from .csit import is_symmetric, marginals_from_joint
from .errors import PreconditionError, UnsupportedCaseError
from .polytope import HPolytope
from .scenario import Scenario

THEOREMS = ("1", "2", "3", "all")


def unit_caps(k: int) -> BoundSet:
    rows = [Inequality(tuple(Fraction(int(i == j)) for i in range(k)), 1, f"cap:d{j + 1}") for j in range(k)]
    return make_bound_set(k, rows)


def bound_set(sc: Scenario, theorem: str) -> BoundSet:
    if theorem not in THEOREMS:
        raise PreconditionError(f"unknown theorem selector {theorem!r}")
    if sc.kind == "mimo2":
        if theorem in ("1", "2"):
            raise PreconditionError(f"theorem {theorem} bounds are for MISO scenarios; use 3 for mimo2")
        n1, n2 = sc.antennas
        return theorem3_mimo(n1, n2, sc.joint)
    if theorem == "3":
        raise PreconditionError("theorem 3 is the two-user MIMO bound; scenario kind is miso")
    if theorem == "1":
        return theorem1(marginals_from_joint(sc.joint))
    if theorem == "2":
        return theorem2(sc.joint)
    return merge(theorem1(marginals_from_joint(sc.joint)), theorem2(sc.joint))


def outer_region(sc: Scenario, theorem: str = "all") -> HPolytope:
    bounds = bound_set(sc, theorem)
    if sc.kind == "miso" and theorem == "2":
        # the joint-CSIT family alone leaves single-user directions open
        bounds = merge(bounds, unit_caps(sc.users))
    return HPolytope.from_bounds(bounds)


@dataclass(frozen=True)
class Achievability:
    case: str  # "A", "B" or "mimo"
    corners: list[CornerPoint]
    outer: HPolytope


def achievability_case(sc: Scenario) -> Achievability:
    """Corner points of the scheme covering ``sc`` and the outer region they are compared to."""
    if sc.kind == "mimo2":
        n1, n2 = sc.antennas
        s = MimoScenario(n1, n2, sc.joint)
        return Achievability("mimo", mimo_corners(s), outer_region(sc, "3"))
    k = sc.users
    m = marginals_from_joint(sc.joint)
    if not is_symmetric(m):
        raise UnsupportedCaseError("corner schemes need symmetric marginals across users")
    lam_p, lam_d, lam_n = m.p[0], m.d[0], m.n[0]
    aligned = sc.joint.prob("P" * k)
    if aligned != lam_p:
        raise UnsupportedCaseError(
            f"perfect CSIT is not aligned across users (P^K has mass {aligned}, lambda_P = {lam_p}); "
            "zero-forcing corners need all users perfect in the same slots"
        )
    outer = outer_region(sc, "1")
    if lam_d == 0:
        return Achievability("A", case_a_corners(k, lam_p), outer)
    limit = case_b_threshold(k, lam_d)
    if lam_n > limit:
        raise UnsupportedCaseError(
            f"lambda_N={lam_n} exceeds lambda_D / sum_{{i=2}}^{k} 1/i = {limit}; no corner scheme in scope"
        )
    return Achievability("B", case_b_corners(k, lam_p, lam_d, lam_n), outer)
