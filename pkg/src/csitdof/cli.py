"""Command-line front end.

Exit codes: 0 success, 1 scenario error, 2 precondition or unsupported case,
3 internal error. Data goes to stdout (or ``--out``), explanations to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import formats
from .achievability import MimoScenario, tightness_report
from .errors import PreconditionError, ScenarioError
from .polytope import enumerate_vertices, max_weighted
from .regions import THEOREMS, achievability_case, bound_set, outer_region
from .scenario import Scenario, load_scenario, parse_probability
from .sim.builders import (
    build_mat2_schedule,
    build_mimo_schedule,
    build_zfbf_caseA_schedule,
    minimal_block_length,
)
from .sim.channels import generate_channels
from .sim.decode import DecodeLedger, simulate_decode
from .sim.schedule import Schedule, load_schedule


class InternalError(Exception):
    pass


def _weights(text: str | None, k: int) -> list[Fraction]:
    if text is None:
        return [Fraction(1)] * k
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != k:
        raise PreconditionError(f"--weights has {len(parts)} entries for {k} users")
    return [parse_probability(p, "--weights") for p in parts]


def cmd_bounds(sc: Scenario, args) -> str:
    return formats.bounds_csv(bound_set(sc, args.theorem), args.decimals)


def cmd_vertices(sc: Scenario, args) -> str:
    return formats.vertices_csv(enumerate_vertices(outer_region(sc, args.theorem)), args.decimals)


def cmd_sumdof(sc: Scenario, args) -> str:
    value, _ = max_weighted(outer_region(sc, args.theorem), _weights(args.weights, sc.users))
    places = 6 if args.decimals is None else args.decimals
    return f"{formats.fmt(value)}\n{formats.fmt_decimal(value, places)}\n"


def cmd_corners(sc: Scenario, args) -> str:
    return formats.corners_csv(achievability_case(sc).corners, args.decimals)


def cmd_tightness(sc: Scenario, args) -> str:
    ach = achievability_case(sc)
    report = tightness_report(ach.outer, ach.corners)
    return formats.corners_csv(ach.corners, args.decimals) + "\n" + report.render()


def _schedule_for(sc: Scenario, args) -> Schedule:
    scheme = args.scheme
    if scheme is None:
        raise PreconditionError("--scheme is required for simulate")
    if scheme.startswith("zf:"):
        if sc.kind != "miso":
            raise PreconditionError("zf schemes need a miso scenario")
        try:
            target = int(scheme[3:])
        except ValueError as exc:
            raise PreconditionError(f"bad target user in {scheme!r}") from exc
        lam = sc.joint.prob("P" * sc.users)
        return build_zfbf_caseA_schedule(sc.users, lam, target, args.n)
    if scheme == "mat2":
        if sc.users != 2 or sc.kind != "miso":
            raise PreconditionError("mat2 needs a two-user miso scenario")
        return build_mat2_schedule()
    if scheme.startswith("mimo:"):
        if sc.kind != "mimo2":
            raise PreconditionError("mimo schemes need a mimo2 scenario")
        n1, n2 = sc.antennas
        s = MimoScenario(n1, n2, sc.joint)
        label = scheme[5:]
        n = args.n if args.n is not None else minimal_block_length(s, label)
        return build_mimo_schedule(s, label, n)
    if os.path.exists(scheme):
        sch = load_schedule(scheme)
        if sch.users != sc.users:
            raise PreconditionError(f"schedule has {sch.users} users, scenario has {sc.users}")
        return sch
    raise PreconditionError(f"unknown scheme {scheme!r}; use zf:K, mat2, mimo:LABEL or a schedule file")


def cmd_simulate(sc: Scenario, args) -> str:
    schedule = _schedule_for(sc, args)
    repeats = max(1, args.repeats)
    first: DecodeLedger | None = None
    for r in range(repeats):
        seed = (args.seed + r) % 2**64
        ledger = simulate_decode(schedule, generate_channels(schedule, seed))
        if first is None:
            first = ledger
        elif ledger.decodable != first.decodable:
            raise InternalError(
                f"decodable counts differ between seed {args.seed} {first.decodable} and seed {seed} {ledger.decodable}"
            )
    return formats.ledger_csv(first, args.decimals)


COMMANDS = {
    "bounds": cmd_bounds,
    "vertices": cmd_vertices,
    "sumdof": cmd_sumdof,
    "corners": cmd_corners,
    "tightness": cmd_tightness,
    "simulate": cmd_simulate,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="csitdof", description="DoF regions of broadcast channels with hybrid CSIT.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        c = sub.add_parser(name)
        c.add_argument("--scenario", required=True, help="scenario JSON file")
        c.add_argument("--theorem", choices=THEOREMS, default="all")
        c.add_argument("--weights", help="comma-separated rationals, default all ones")
        c.add_argument("--scheme", help="zf:K | mat2 | mimo:LABEL | schedule JSON path")
        c.add_argument("--n", type=int, help="block length (slots)")
        c.add_argument("--seed", type=int, default=0)
        c.add_argument("--repeats", type=int, default=1)
        c.add_argument("--out", help="write output here instead of stdout")
        c.add_argument("--decimals", type=int, help="add decimal display columns")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sc = load_scenario(args.scenario)
        text = COMMANDS[args.command](sc, args)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
