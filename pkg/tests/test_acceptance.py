"""The nine acceptance criteria, all with exact rational comparisons.

Each test records PASS/FAIL under its criterion number; the summary lines
are printed at the end of the pytest run (see ``conftest.py``).
"""

import random
from contextlib import contextmanager
from fractions import Fraction

from csitdof.achievability import (
    MimoScenario,
    case_a_corners,
    case_b_corners,
    lambda_d_min,
    lambda_d_min_oracle,
    mimo_corner,
    mimo_inner_bound,
    tightness_report,
)
from csitdof.bounds import Inequality, theorem1, theorem1_sum, theorem1_weighted, theorem2, theorem3_mimo
from csitdof.csit import JointCsitDistribution, Marginals, all_states, marginals_from_joint, pairwise_perfect
from csitdof.polytope import (
    HPolytope,
    enumerate_vertices,
    max_weighted,
    max_weighted_lp,
    region_equal,
)
from csitdof.regions import outer_region
from csitdof.scenario import load_scenario
from csitdof.sim.builders import (
    build_mat2_schedule,
    build_mimo_schedule,
    build_zfbf_caseA_schedule,
    case_b_accounting,
    minimal_block_length,
)
from csitdof.sim.channels import generate_channels, scale_channels
from csitdof.sim.decode import simulate_decode, zf_residuals

from conftest import SCENARIOS

F = Fraction
RESULTS: dict[int, tuple[bool, str]] = {}


@contextmanager
def criterion(n: int, title: str):
    RESULTS[n] = (False, title)
    yield
    RESULTS[n] = (True, title)


def scenario(name):
    return load_scenario(SCENARIOS / f"{name}.json")


def joint2(pn=0, pp=0, np_=0, nn=0):
    return JointCsitDistribution(2, {"PN": F(pn), "PP": F(pp), "NP": F(np_), "NN": F(nn)})


def test_criterion_1_delayed_reduction():
    with criterion(1, "K=2 delayed CSIT: vertex (2/3,2/3), max sum-DoF 4/3"):
        m = Marginals((F(0), F(0)), (F(1), F(1)), (F(0), F(0)))
        h = HPolytope.from_bounds(theorem1(m))
        assert (F(2, 3), F(2, 3)) in enumerate_vertices(h)
        assert max_weighted(h, [1, 1])[0] == F(4, 3)


def test_criterion_2_marginals_are_not_enough():
    with criterion(2, "cyclic PNN joint bounds give 8/5; same-marginal {PPP,NNN,NNN} reaches 5/3; regions differ"):
        cyclic = scenario("cyclic_pnn")
        t2 = theorem2(cyclic.joint)
        assert {(q.coeffs, q.rhs) for q in t2} == {
            ((F(2), F(2), F(1)), F(8, 3)),
            ((F(2), F(1), F(2)), F(8, 3)),
            ((F(1), F(2), F(2)), F(8, 3)),
        }
        r3 = outer_region(cyclic)
        assert max_weighted(r3, [1, 1, 1])[0] == F(8, 5)

        other = scenario("ppp_nnn")
        assert marginals_from_joint(other.joint) == marginals_from_joint(cyclic.joint)
        r_other = outer_region(other)
        achievable = max(sum(simulate_decode(s, generate_channels(s, 0)).dof)
                         for s in (build_zfbf_caseA_schedule(3, F(1, 3), u) for u in (1, 2, 3)))
        assert achievable == F(5, 3)
        assert max_weighted(r_other, [1, 1, 1])[0] >= achievable
        assert not region_equal(r3, r_other)


def test_criterion_3_four_user_inequality():
    with criterion(3, "cyclic 4-user pattern: 2d1+2d2+2d3+d4 <= 3"):
        t2 = theorem2(scenario("cyclic_pnnn").joint)
        assert Inequality((2, 2, 2, 1), 3).canonical() in {q.canonical() for q in t2}
        assert [q.rhs for q in t2.find((2, 2, 2, 1))] == [3]


def test_criterion_4_lambda_d_min():
    with criterion(4, "lambda_D_min closed form equals the phase-counting oracle for 1<=j<=K<=10"):
        for k in range(1, 11):
            for j in range(1, k + 1):
                assert lambda_d_min(k, j) == lambda_d_min_oracle(k, j)
        assert lambda_d_min(2, 1) == F(1, 3)


def test_criterion_5_case_a_tightness():
    with criterion(5, "case A (lambda_D=0): outer region tight for K in 2..4, ZF schedules hit every corner"):
        for k in (2, 3, 4):
            for p in (F(0), F(1, 4), F(1, 3), F(1, 2), F(1)):
                outer = HPolytope.from_bounds(theorem1(Marginals.symmetric(k, p)))
                corners = case_a_corners(k, p)
                assert tightness_report(outer, corners).verdict == "tight"
                for target in range(1, k + 1):
                    sch = build_zfbf_caseA_schedule(k, p, target)
                    led = simulate_decode(sch, generate_channels(sch, target))
                    expected = tuple(F(1) if u == target else p for u in range(1, k + 1))
                    assert led.dof == expected
                    assert expected in {c.coords for c in corners}


def test_criterion_6_case_b_tightness():
    with criterion(6, "case B K=3, lambda_P=1/3, lambda_D=2/3: 7 corners incl. 23/33, tight, budget certified"):
        p, d, n = F(1, 3), F(2, 3), F(0)
        corners = case_b_corners(3, p, d, n)
        assert len(corners) == 7
        assert (F(23, 33),) * 3 in {c.coords for c in corners}
        outer = HPolytope.from_bounds(theorem1(Marginals.symmetric(3, p, d)))
        assert tightness_report(outer, corners).verdict == "tight"
        for c in corners:
            subset = c.params["subset"]
            assert case_b_accounting(3, len(subset), p, d, n, subset) == c.coords


def test_criterion_7_mimo_three_by_two():
    with criterion(7, "3x2 MIMO: B3=(2,5/3), n=12 schedule decodes (24,20) on 20 seeds, both outer rows tight"):
        s = MimoScenario(3, 2, joint2(F(1, 6), F(1, 6), F(1, 3), F(1, 3)))
        b3 = mimo_corner(s, "B3").coords
        assert b3 == (F(2), F(5, 3))
        sch = build_mimo_schedule(s, "B3", 12)
        counts = {simulate_decode(sch, generate_channels(sch, seed)).decodable for seed in range(1000, 1020)}
        assert counts == {(24, 20)}
        outer = theorem3_mimo(3, 2, s.joint)
        assert outer.by_tag("T3:ant").is_tight(b3) and outer.by_tag("T3:sum").is_tight(b3)


COINCIDE = [
    MimoScenario(3, 2, joint2(F(1, 6), F(1, 6), F(1, 3), F(1, 3))),
    MimoScenario(2, 1, joint2(F(1, 8), F(1, 8), F(1, 2), F(1, 4))),
    MimoScenario(3, 1, joint2(F(1, 10), F(1, 5), F(1, 2), F(1, 5))),
    MimoScenario(2, 2, joint2(F(1, 4), F(1, 4), F(1, 4), F(1, 4))),
    MimoScenario(4, 3, joint2(F(0), F(1, 2), F(1, 4), F(1, 4))),
]
STRICT = [
    MimoScenario(2, 1, joint2(F(1, 2), F(0), F(1, 2), F(0))),
    MimoScenario(3, 2, joint2(F(1, 2), F(1, 6), F(1, 6), F(1, 6))),
    MimoScenario(4, 1, joint2(F(1, 3), F(0), F(1, 3), F(1, 3))),
]


def test_criterion_8_mimo_inner_outer():
    with criterion(8, "MIMO inner bound equals outer on 5 scenarios, strictly inside on 3"):
        for s in COINCIDE:
            assert s.pn <= F(s.n2, s.n1) * s.np_
            outer = HPolytope.from_bounds(theorem3_mimo(s.n1, s.n2, s.joint))
            assert region_equal(outer, mimo_inner_bound(s))
        for s in STRICT:
            assert s.pn > F(s.n2, s.n1) * s.np_
            outer = HPolytope.from_bounds(theorem3_mimo(s.n1, s.n2, s.joint))
            inner = mimo_inner_bound(s)
            assert all(outer.contains(v) for v in enumerate_vertices(inner))
            assert not region_equal(outer, inner)


def random_joint(rng, k, states="PDN"):
    support = [s for s in all_states(k) if set(s) <= set(states)]
    chosen = rng.sample(support, rng.randint(1, min(6, len(support))))
    w = [rng.randint(1, 9) for _ in chosen]
    return JointCsitDistribution(k, {s: F(x, sum(w)) for s, x in zip(chosen, w)})


def promote(rng, j):
    cands = [(s, i) for s in j.mass for i, ch in enumerate(s) if ch == "N"]
    if not cands:
        return j
    s, i = rng.choice(cands)
    moved = j.mass[s] * F(rng.randint(1, 4), 4)
    mass = dict(j.mass)
    mass[s] -= moved
    t = s[:i] + "P" + s[i + 1 :]
    mass[t] = mass.get(t, F(0)) + moved
    return JointCsitDistribution(j.users, mass)


def test_criterion_9_property_suite():
    with criterion(9, "properties: monotonicity, Frechet, support function, scale invariance, ZF residuals"):
        rng = random.Random(2024)

        # bound monotonicity when mass moves from N to P
        for i in range(100):
            if i % 2:
                j = random_joint(rng, 3)
                k = promote(rng, j)
                for gen in (theorem1_weighted, theorem1_sum):
                    old = {q.coeffs: q.rhs for q in gen(marginals_from_joint(j))}
                    new = {q.coeffs: q.rhs for q in gen(marginals_from_joint(k))}
                    assert all(new[c] >= old[c] for c in old)
            else:
                j = random_joint(rng, 2, "PN")
                k = promote(rng, j)
                n2 = rng.randint(1, 3)
                n1 = n2 + rng.randint(0, 2)
                old = {q.tag: q.rhs for q in theorem3_mimo(n1, n2, j)}
                new = {q.tag: q.rhs for q in theorem3_mimo(n1, n2, k)}
                assert all(new[t] >= old[t] for t in old.keys() & new.keys())

        # Frechet bound on pairwise perfect-CSIT probability
        for _ in range(100):
            j = random_joint(rng, 3)
            m = marginals_from_joint(j)
            for a, b in ((1, 2), (1, 3), (2, 3)):
                assert pairwise_perfect(j, a, b) <= min(m.p[a - 1], m.p[b - 1])

        # support function: vertex scan against exact simplex on the H-description
        regions = [outer_region(scenario(n)) for n in ("mixed_dpp", "aligned_pdd", "cyclic_pnn", "ppp_nnn", "k2_delayed", "mimo_3x2")]
        for h in regions:
            verts = enumerate_vertices(h).points
            for _ in range(100):
                w = [F(rng.randint(-4, 6), rng.randint(1, 5)) for _ in range(h.dim)]
                scan = max(sum(a * b for a, b in zip(w, v)) for v in verts)
                assert scan == max_weighted(h, w)[0] == max_weighted_lp(h, w)

        # ledgers ignore nonzero per-slot, per-user channel scalings
        mimo32 = MimoScenario(3, 2, joint2(F(1, 6), F(1, 6), F(1, 3), F(1, 3)))
        sch = build_mimo_schedule(mimo32, "B3", 12)
        real = generate_channels(sch, 77)
        base = simulate_decode(sch, real).decodable
        for _ in range(20):
            factors = {
                (t, u): F(rng.choice([-1, 1]) * rng.randint(1, 50), rng.randint(1, 50))
                for t in range(len(sch.slots))
                for u in range(2)
            }
            assert simulate_decode(sch, scale_channels(real, factors)).decodable == base

        # zero-forcing leaves exactly zero at the protected receivers
        schedules = [build_mat2_schedule()]
        schedules += [build_zfbf_caseA_schedule(k, p, 1) for k in (2, 3, 4) for p in (F(1, 4), F(1, 2), F(1))]
        for s in COINCIDE + STRICT:
            for lab in ("A1", "A2", "B1", "B2", "B3", "C1", "C2", "C3"):
                try:
                    mimo_corner(s, lab)
                except ValueError:
                    continue
                schedules.append(build_mimo_schedule(s, lab, minimal_block_length(s, lab)))
        for s in schedules:
            assert all(r == 0 for r in zf_residuals(s, generate_channels(s, 3)))


if __name__ == "__main__":
    import sys

    import pytest

    sys.exit(pytest.main([__file__, "-q"]))
