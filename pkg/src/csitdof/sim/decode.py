"""Run a schedule over a channel realization and count decodable symbols.

Signals are tracked symbolically: the transmit signal of a slot is an
``M x S`` matrix mapping the ``S`` fresh symbols of the whole schedule to
antennas, and an observation is a length-``S`` coefficient row. User ``k``
decodes ``rank([A | B]) - rank(B)`` of its symbols, where ``A`` and ``B``
are the columns of its own and of everyone else's symbols in its stacked
observations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import ScheduleError
from ..exact import dot, nullspace, rank
from .channels import ChannelRealization
from .schedule import Overheard, Schedule, validate_schedule

Row = list[Fraction]


@dataclass(frozen=True)
class DecodeLedger:
    intended: tuple[int, ...]
    decodable: tuple[int, ...]
    slots: int

    @property
    def dof(self) -> tuple[Fraction, ...]:
        if self.slots == 0:
            return tuple(Fraction(0) for _ in self.decodable)
        return tuple(Fraction(d, self.slots) for d in self.decodable)


@dataclass(frozen=True)
class Trace:
    """Per-slot precoders and observations, kept for residual checks."""

    precoders: tuple  # precoders[t] = list of (stream index, M-vector)
    observations: tuple  # observations[t][user] = list of rows


def _precoders(schedule: Schedule, real: ChannelRealization, t: int) -> list[tuple[int, Row]]:
    slot = schedule.slots[t]
    m = schedule.tx_antennas
    mix = real.mixing[t]
    out = []
    col = 0
    for i, s in enumerate(slot.streams):
        if s.orthogonal_to:
            rows = [list(r) for u in sorted(s.orthogonal_to) for r in real.h[t][u - 1]]
            basis = nullspace(rows, m)
            r = len(basis)
        for _ in range(s.dims):
            if s.orthogonal_to:
                coeff = [mix[j][col] for j in range(r)]
                vec = [sum((coeff[j] * basis[j][a] for j in range(r)), Fraction(0)) for a in range(m)]
            else:
                vec = [mix[a][col] for a in range(m)]
            out.append((i, vec))
            col += 1
    return out


def run(schedule: Schedule, real: ChannelRealization) -> Trace:
    problems = validate_schedule(schedule)
    if problems:
        raise ScheduleError(problems)
    n_sym = sum(1 for _ in schedule.fresh_symbols())
    zero = Fraction(0)
    next_id = 0
    precs, obs = [], []
    for t, slot in enumerate(schedule.slots):
        pre = _precoders(schedule, real, t)
        x = [[zero] * n_sym for _ in range(schedule.tx_antennas)]
        per_stream = {}
        for i, vec in pre:
            per_stream.setdefault(i, []).append(vec)
        for i, s in enumerate(slot.streams):
            payloads: list[Row] = []
            if s.fresh:
                for _ in range(s.fresh):
                    unit = [zero] * n_sym
                    unit[next_id] = Fraction(1)
                    next_id += 1
                    payloads.append(unit)
            else:
                payloads = [_payload(item, n_sym, obs) for item in s.retransmit]
            for vec, pay in zip(per_stream.get(i, []), payloads):
                for a, va in enumerate(vec):
                    if va:
                        xa = x[a]
                        for c, pc in enumerate(pay):
                            if pc:
                                xa[c] += va * pc
        cols = list(zip(*x)) if n_sym else []
        slot_obs = []
        for mat in real.h[t]:
            slot_obs.append([[dot(hrow, col) for col in cols] for hrow in mat])
        precs.append(pre)
        obs.append(slot_obs)
    return Trace(tuple(precs), tuple(obs))


def _payload(item, n_sym: int, obs) -> Row:
    if isinstance(item, int):
        row = [Fraction(0)] * n_sym
        row[item - 1] = Fraction(1)
        return row
    if isinstance(item, Overheard):
        return list(obs[item.slot - 1][item.observer - 1][item.antenna - 1])
    acc = [Fraction(0)] * n_sym
    for sub in item:
        acc = [a + b for a, b in zip(acc, _payload(sub, n_sym, obs))]
    return acc


def simulate_decode(schedule: Schedule, real: ChannelRealization) -> DecodeLedger:
    trace = run(schedule, real)
    owners = schedule.symbol_owners()
    intended, decodable = [], []
    for k in range(1, schedule.users + 1):
        mine = [c for c, o in enumerate(owners) if o == k]
        others = [c for c, o in enumerate(owners) if o != k]
        rows = [row for slot_obs in trace.observations for row in slot_obs[k - 1]]
        intended.append(len(mine))
        if not mine or not rows:
            decodable.append(0)
            continue
        full = rank(rows)
        interf = rank([[r[c] for c in others] for r in rows]) if others else 0
        decodable.append(full - interf)
    return DecodeLedger(tuple(intended), tuple(decodable), len(schedule.slots))


def zf_residuals(schedule: Schedule, real: ChannelRealization) -> list[Fraction]:
    """``H_u @ v`` for every zero-forced precoder ``v`` and every listed user ``u``."""
    trace = run(schedule, real)
    out = []
    for t, pre in enumerate(trace.precoders):
        streams = schedule.slots[t].streams
        for i, vec in pre:
            for u in streams[i].orthogonal_to:
                for hrow in real.h[t][u - 1]:
                    out.append(dot(hrow, vec))
    return out
