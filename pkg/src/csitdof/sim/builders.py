"""Schedules for the ZFBF, two-user MAT and two-user MIMO schemes.

MIMO schedules use ``M = N1 + N2`` transmit antennas. Symbols that a user
must later cancel are queued when they first interfere and resent verbatim
(by symbol id) in a later phase; those retransmission streams carry a note
naming the phase they serve, so a generated schedule can be audited by eye.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from math import lcm

from ..achievability import (
    MimoScenario,
    _check_case_b,
    harmonic,
    lambda_d_min,
    mimo_corner,
)
from ..errors import PreconditionError
from .schedule import Overheard, Schedule, Slot, Stream

MAX_BLOCK = 10**4


def build_zfbf_caseA_schedule(k: int, lam_p, target: int, slots: int | None = None) -> Schedule:
    """``lam_p * T`` all-P slots of K zero-forced streams, then single-user slots for ``target``."""
    lam_p = Fraction(lam_p)
    if not 0 <= lam_p <= 1:
        raise PreconditionError(f"lambda_P={lam_p} is not in [0, 1]")
    if not 1 <= target <= k:
        raise PreconditionError(f"target user {target} out of range 1..{k}")
    t = lam_p.denominator if slots is None else slots
    if t < 1 or (lam_p * t).denominator != 1:
        raise PreconditionError(f"lambda_P={lam_p} is not a multiple of 1/{t}")
    t_p = int(lam_p * t)
    everyone = set(range(1, k + 1))
    zf = Slot("P" * k, tuple(Stream(u, 1, (), everyone - {u}) for u in range(1, k + 1)), "zf")
    solo = Slot("N" * k, (Stream(target, 1),), f"single:{target}")
    return Schedule(k, k, (1,) * k, (zf,) * t_p + (solo,) * (t - t_p))


def build_mat2_schedule() -> Schedule:
    """Three slots, two symbols per user, one order-2 symbol sent last."""
    order2 = (Overheard(2, 1), Overheard(1, 2))
    slots = (
        Slot("DD", (Stream(1, 2),), "phase1:user1"),
        Slot("DD", (Stream(2, 2),), "phase1:user2"),
        Slot("DD", (Stream(1, 0, (order2,), note="sum of overheard observations"),), "phase2"),
    )
    return Schedule(2, 2, (1, 1), slots)


def _phase_counts(s: MimoScenario, label: str) -> dict[str, Fraction]:
    """Slot counts per unit block length (multiply by n)."""
    n1, n2 = Fraction(s.n1), Fraction(s.n2)
    c = {"PN": s.pn, "PP": s.pp, "NP": s.np_, "NN": s.nn}
    if label in ("A1", "B1"):
        c["x"] = n1 / n2 * s.pn
    elif label == "A2":
        c["x"] = n1 / n2 * s.pn
        c["y"] = s.nn * (n1 - n2) / n2
    elif label in ("B2", "B3"):
        c["x"] = n1 / n2 * s.pn
        c["z"] = (n2 * s.np_ - n1 * s.pn) / (n1 - n2)
    elif label in ("C1", "C2", "C3"):
        c["x"] = n2 / n1 * s.np_
    return c


def minimal_block_length(s: MimoScenario, label: str) -> int:
    mimo_corner(s, label)
    n = 1
    for q in _phase_counts(s, label).values():
        n = lcm(n, q.denominator)
    if n > MAX_BLOCK:
        raise PreconditionError(f"smallest valid block length {n} exceeds {MAX_BLOCK}")
    return n


class _Builder:
    def __init__(self, s: MimoScenario):
        self.n1, self.n2 = s.n1, s.n2
        self.slots: list[Slot] = []
        self.next_id = 1

    def fresh(self, owner: int, count: int, orth=()) -> tuple[Stream, list[int]]:
        ids = list(range(self.next_id, self.next_id + count))
        self.next_id += count
        return Stream(owner, count, (), frozenset(orth)), ids

    def add(self, csit: str, label: str, *streams: Stream) -> None:
        self.slots.append(Slot(csit, tuple(x for x in streams if x.dims), label))


def build_mimo_schedule(s: MimoScenario, label: str, n: int) -> Schedule:
    mimo_corner(s, label)
    counts = _phase_counts(s, label)
    scaled = {key: q * n for key, q in counts.items()}
    if n < 1 or any(v.denominator != 1 for v in scaled.values()):
        raise PreconditionError(
            f"block length n={n} leaves fractional slot counts for {label}; "
            f"smallest valid n is {minimal_block_length(s, label)}"
        )
    c = {key: int(v) for key, v in scaled.items()}
    n1, n2 = s.n1, s.n2
    b = _Builder(s)
    queue: deque[int] = deque()

    def resend(owner: int, count: int, why: str) -> Stream:
        ids = tuple(queue.popleft() for _ in range(count))
        return Stream(owner, 0, ids, note=why)

    def pp_phase():
        for _ in range(c["PP"]):
            b.add("PP", "zf", b.fresh(1, n1, {2})[0], b.fresh(2, n2, {1})[0])

    if label in ("A1", "B1"):
        for _ in range(c["PN"]):
            u, ids = b.fresh(1, n1)
            b.add("PN", "p1", u, b.fresh(2, n2, {1})[0])
            queue.extend(ids)
        for _ in range(c["x"]):
            b.add("NP", "p2", resend(2, n2, "phase-1 interference at user 2"), b.fresh(1, n1, {2})[0])
        for _ in range(c["NP"] - c["x"]):
            b.add("NP", "p3", b.fresh(1, n1)[0])
        for _ in range(c["NN"]):
            b.add("NN", "p3", b.fresh(1, n1)[0])
        pp_phase()
    elif label in ("A2", "B2", "B3"):
        for _ in range(c["x"]):
            v, ids = b.fresh(2, n2)
            b.add("NP", "p1", v, b.fresh(1, n1, {2})[0])
            queue.extend(ids)
        for _ in range(c["PN"]):
            b.add("PN", "p2", resend(1, n1, "phase-1 interference at user 1"), b.fresh(2, n2, {1})[0])
        third = c["y"] if label == "A2" else c["NP"] - c["x"]
        for _ in range(third):
            v, ids = b.fresh(2, n2)
            b.add("NP", "p3", v, b.fresh(1, n1, {2})[0])
            queue.extend(ids)
        fourth = c["NN"] if label == "A2" else c["z"]
        for _ in range(fourth):
            b.add("NN", "p4", b.fresh(2, n2)[0], resend(1, n1 - n2, "phase-3 interference at user 1"))
        if label == "A2":
            for _ in range(c["NP"] - c["x"] - c["y"]):
                b.add("NP", "p5", b.fresh(2, n2)[0], b.fresh(1, n1 - n2, {2})[0])
        else:
            for _ in range(c["NN"] - c["z"]):
                if label == "B2":
                    b.add("NN", "p5", b.fresh(2, n2)[0])
                else:
                    b.add("NN", "p5", b.fresh(1, n1)[0])
        pp_phase()
    elif label == "C1":
        for _ in range(c["x"]):
            u, ids = b.fresh(1, n1)
            b.add("PN", "p1", u, b.fresh(2, n2, {1})[0])
            queue.extend(ids)
        for _ in range(c["NP"]):
            b.add("NP", "p2", resend(2, n2, "phase-1 interference at user 2"), b.fresh(1, n1, {2})[0])
        for _ in range(c["PN"] - c["x"]):
            b.add("PN", "p3", b.fresh(1, n1)[0])
        for _ in range(c["NN"]):
            b.add("NN", "p3", b.fresh(1, n1)[0])
        pp_phase()
    else:  # C2, C3
        for _ in range(c["NP"]):
            v, ids = b.fresh(2, n2)
            b.add("NP", "p1", v, b.fresh(1, n1, {2})[0])
            queue.extend(ids)
        for _ in range(c["x"]):
            b.add("PN", "p2", resend(1, n1, "phase-1 interference at user 1"), b.fresh(2, n2, {1})[0])
        rest = [("PN", c["PN"] - c["x"]), ("NN", c["NN"])]
        for csit, cnt in rest:
            for _ in range(cnt):
                if label == "C2":
                    b.add(csit, "p3", b.fresh(2, n2)[0])
                else:
                    b.add(csit, "p3", b.fresh(1, n1)[0])
        pp_phase()

    if queue:
        raise AssertionError(f"{len(queue)} queued symbols were never resent")
    return Schedule(2, n1 + n2, (n1, n2), tuple(b.slots))


def case_b_accounting(k: int, j: int, lam_p, lam_d, lam_n, subset=None) -> tuple[Fraction, ...]:
    """Per-user DoF of time sharing ZFBF (all-P slots) with j-user MAT on the rest.

    The MAT part runs on the ``1 - lambda_P`` share of slots and needs a
    delayed-CSIT share of at least ``lambda_D_min(j, 1)`` of that share.
    """
    lam_p, lam_d, lam_n = _check_case_b(k, lam_p, lam_d, lam_n)
    if not 1 <= j <= k:
        raise PreconditionError(f"need 1 <= j <= K, got K={k}, j={j}")
    members = tuple(range(1, j + 1)) if subset is None else tuple(subset)
    if len(members) != j or not all(1 <= u <= k for u in members):
        raise PreconditionError(f"subset {members} is not a {j}-subset of 1..{k}")
    need = lambda_d_min(j, 1) * (1 - lam_p)
    if lam_d < need:
        raise PreconditionError(
            f"delayed-CSIT budget lambda_D={lam_d} below {need}; "
            f"requires lambda_N <= lambda_D / sum_{{i=2}}^{j} 1/i"
        )
    mat = (1 - lam_p) / harmonic(1, j)
    return tuple(lam_p + (mat if u in members else 0) for u in range(1, k + 1))
