"""Seeded random channels with exact rational entries.

Every entry is ``k / 10**6`` with ``k`` uniform on ``[-10**6, 10**6]``.
Each slot also gets an ``M x M`` mixing matrix whose columns become the
generic precoding directions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from ..exact import rank
from .schedule import Schedule

SCALE = 10**6

Matrix = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class ChannelRealization:
    seed: int
    h: tuple[tuple[Matrix, ...], ...]  # h[slot][user] is N_user x M
    mixing: tuple[Matrix, ...]
    redraws: int = 0


def _draw(rng: np.random.Generator, rows: int, cols: int) -> Matrix:
    raw = rng.integers(-SCALE, SCALE, size=(rows, cols), endpoint=True)
    return tuple(tuple(Fraction(int(x), SCALE) for x in row) for row in raw)


def generate_channels(schedule: Schedule, seed: int) -> ChannelRealization:
    rng = np.random.default_rng(seed)
    m = schedule.tx_antennas
    ants = schedule.antennas
    need = min(sum(ants), m)
    hs, mixes, redraws = [], [], 0
    for _ in schedule.slots:
        while True:
            per_user = tuple(_draw(rng, n, m) for n in ants)
            mix = _draw(rng, m, m)
            stacked = [row for mat in per_user for row in mat]
            if rank(stacked) == need and rank(mix) == m:
                break
            redraws += 1
        hs.append(per_user)
        mixes.append(mix)
    return ChannelRealization(seed, tuple(hs), tuple(mixes), redraws)


def scale_channels(real: ChannelRealization, factors: Mapping[tuple[int, int], Fraction]) -> ChannelRealization:
    """Multiply ``h[slot][user]`` by ``factors[(slot, user)]`` (0-based keys)."""
    hs = []
    for t, per_user in enumerate(real.h):
        row = []
        for u, mat in enumerate(per_user):
            f = Fraction(factors.get((t, u), 1))
            if f == 0:
                raise ValueError("scaling factor must be nonzero")
            row.append(tuple(tuple(f * x for x in r) for r in mat))
        hs.append(tuple(row))
    return ChannelRealization(real.seed, tuple(hs), real.mixing, real.redraws)
