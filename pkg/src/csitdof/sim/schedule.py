"""Transmission schedules: slots, streams and the legality rules they obey.

A stream occupies one transmit dimension per payload item. Its payload is
either ``fresh`` new symbols for ``owner`` or a ``retransmit`` list whose
items are

* an ``int``: a previously sent symbol id (ids are 1-based, assigned in
  order of first transmission),
* an :class:`Overheard`: what ``observer`` received on ``antenna`` in an
  earlier ``slot``; the transmitter can only rebuild it if it learned that
  channel, i.e. the observer's state there was P or D,
* a tuple of items: their sum, sent in a single dimension.

``orthogonal_to`` zero-forces the stream at the listed users, which needs
their instantaneous channel (state P) in that slot.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterator, Union

from ..csit import STATES
from ..errors import ScenarioError


@dataclass(frozen=True)
class Overheard:
    observer: int
    slot: int
    antenna: int = 1


Item = Union[int, Overheard, tuple]


@dataclass(frozen=True)
class Stream:
    owner: int
    fresh: int = 0
    retransmit: tuple = ()
    orthogonal_to: frozenset = frozenset()
    note: str = ""

    def __post_init__(self):
        object.__setattr__(self, "orthogonal_to", frozenset(self.orthogonal_to))
        object.__setattr__(self, "retransmit", tuple(self.retransmit))

    @property
    def dims(self) -> int:
        return self.fresh if self.fresh else len(self.retransmit)


@dataclass(frozen=True)
class Slot:
    csit: str
    streams: tuple[Stream, ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "streams", tuple(self.streams))


@dataclass(frozen=True)
class Schedule:
    users: int
    tx_antennas: int
    antennas: tuple[int, ...] = ()
    slots: tuple[Slot, ...] = field(default_factory=tuple)

    def __post_init__(self):
        ants = tuple(self.antennas) or (1,) * self.users
        object.__setattr__(self, "antennas", ants)
        object.__setattr__(self, "slots", tuple(self.slots))

    def fresh_symbols(self) -> Iterator[tuple[int, int, int]]:
        """Yield ``(symbol_id, slot_index, owner)`` in id order (slot index 0-based)."""
        sid = 0
        for t, slot in enumerate(self.slots):
            for s in slot.streams:
                for _ in range(s.fresh):
                    sid += 1
                    yield sid, t, s.owner

    def symbol_owners(self) -> list[int]:
        return [owner for _, _, owner in self.fresh_symbols()]


def _flatten(item) -> Iterator:
    if isinstance(item, (tuple, list)):
        for sub in item:
            yield from _flatten(sub)
    else:
        yield item


def validate_schedule(schedule: Schedule) -> list[str]:
    """Every rule broken by ``schedule``, each prefixed by its 1-based slot."""
    out: list[str] = []
    k, m, ants = schedule.users, schedule.tx_antennas, schedule.antennas
    if len(ants) != k:
        out.append(f"schedule: {len(ants)} antenna counts for {k} users")
        return out
    first_slot = {sid: t for sid, t, _ in schedule.fresh_symbols()}

    for t, slot in enumerate(schedule.slots):
        where = f"slot {t + 1}"
        if len(slot.csit) != k or any(ch not in STATES for ch in slot.csit):
            out.append(f"{where}: csit {slot.csit!r} is not a {k}-user state")
            continue
        used = 0
        groups: dict[frozenset, int] = {}
        for s in slot.streams:
            if not 1 <= s.owner <= k:
                out.append(f"{where}: stream owner {s.owner} out of range")
            if s.fresh < 0:
                out.append(f"{where}: negative fresh count {s.fresh}")
            if s.fresh and s.retransmit:
                out.append(f"{where}: stream mixes fresh and retransmitted payload")
            if s.dims == 0:
                out.append(f"{where}: stream for user {s.owner} carries nothing")
            for u in sorted(s.orthogonal_to):
                if not 1 <= u <= k:
                    out.append(f"{where}: orthogonal_to user {u} out of range")
                elif slot.csit[u - 1] != "P":
                    out.append(f"{where}: zero-forcing at user {u} needs state P, found {slot.csit[u - 1]}")
                if u == s.owner:
                    out.append(f"{where}: stream for user {u} is zero-forced at its own receiver")
            used += s.dims
            if s.orthogonal_to:
                groups[s.orthogonal_to] = groups.get(s.orthogonal_to, 0) + s.dims
            for item in _flatten(s.retransmit):
                out.extend(_check_item(item, t, where, schedule, first_slot))
        if used > m:
            out.append(f"{where}: {used} dimensions exceed {m} transmit antennas")
        for group, dims in groups.items():
            if not all(1 <= u <= k for u in group):
                continue
            free = m - sum(ants[u - 1] for u in group)
            if dims > free:
                shown = ",".join(map(str, sorted(group)))
                out.append(f"{where}: {dims} dimensions orthogonal to users {{{shown}}} but null space has {max(free, 0)}")
    return out


def _check_item(item, t: int, where: str, schedule: Schedule, first_slot: dict) -> list[str]:
    if isinstance(item, bool):
        return [f"{where}: invalid retransmit item {item!r}"]
    if isinstance(item, int):
        if item not in first_slot:
            return [f"{where}: symbol {item} is never sent fresh"]
        if first_slot[item] >= t:
            return [f"{where}: symbol {item} is first sent in slot {first_slot[item] + 1}, not earlier"]
        return []
    if isinstance(item, Overheard):
        k = schedule.users
        if not 1 <= item.observer <= k:
            return [f"{where}: overheard observer {item.observer} out of range"]
        if not 1 <= item.slot <= t:
            return [f"{where}: overheard reference to slot {item.slot} is not strictly earlier"]
        state = schedule.slots[item.slot - 1].csit[item.observer - 1]
        if state not in ("P", "D"):
            return [f"{where}: user {item.observer} had state {state} in slot {item.slot}; its observation is unknown"]
        if not 1 <= item.antenna <= schedule.antennas[item.observer - 1]:
            return [f"{where}: user {item.observer} has no antenna {item.antenna}"]
        return []
    return [f"{where}: invalid retransmit item {item!r}"]


# JSON round trip


def _item_to_json(item) -> Any:
    if isinstance(item, Overheard):
        return {"observed_by": item.observer, "slot": item.slot, "antenna": item.antenna}
    if isinstance(item, tuple):
        return [_item_to_json(x) for x in item]
    return item


def _item_from_json(obj, where: str):
    if isinstance(obj, bool):
        raise ScenarioError(where, f"invalid retransmit item {obj!r}")
    if isinstance(obj, int):
        return obj
    if isinstance(obj, list):
        return tuple(_item_from_json(x, where) for x in obj)
    if isinstance(obj, dict):
        try:
            return Overheard(int(obj["observed_by"]), int(obj["slot"]), int(obj.get("antenna", 1)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(where, f"bad overheard reference {obj!r}") from exc
    raise ScenarioError(where, f"invalid retransmit item {obj!r}")


def schedule_to_json(schedule: Schedule) -> dict:
    slots = []
    for slot in schedule.slots:
        streams = []
        for s in slot.streams:
            d: dict[str, Any] = {"owner": s.owner}
            if s.fresh:
                d["fresh"] = s.fresh
            else:
                d["retransmit"] = [_item_to_json(x) for x in s.retransmit]
            d["precode"] = {"orthogonal_to": sorted(s.orthogonal_to)} if s.orthogonal_to else "generic"
            if s.note:
                d["note"] = s.note
            streams.append(d)
        entry: dict[str, Any] = {"csit": slot.csit, "streams": streams}
        if slot.label:
            entry["label"] = slot.label
        slots.append(entry)
    return {
        "users": schedule.users,
        "M": schedule.tx_antennas,
        "antennas": list(schedule.antennas),
        "slots": slots,
    }


def schedule_from_json(data: dict) -> Schedule:
    if not isinstance(data, dict):
        raise ScenarioError("schedule", "expected a JSON object")
    slots_raw = data.get("slots")
    if not isinstance(slots_raw, list):
        raise ScenarioError("slots", "expected a list of slots")
    slots = []
    for t, raw in enumerate(slots_raw, start=1):
        where = f"slots[{t}]"
        if not isinstance(raw, dict) or not isinstance(raw.get("csit"), str):
            raise ScenarioError(where, "each slot needs a csit string")
        streams = []
        for i, sr in enumerate(raw.get("streams", []), start=1):
            sw = f"{where}.streams[{i}]"
            if not isinstance(sr, dict) or "owner" not in sr:
                raise ScenarioError(sw, "stream needs an owner")
            precode = sr.get("precode", "generic")
            if precode == "generic" or precode is None:
                orth = frozenset()
            elif isinstance(precode, dict) and isinstance(precode.get("orthogonal_to"), list):
                orth = frozenset(int(u) for u in precode["orthogonal_to"])
            else:
                raise ScenarioError(f"{sw}.precode", "expected \"generic\" or {\"orthogonal_to\": [...]}")
            retrans = tuple(_item_from_json(x, f"{sw}.retransmit") for x in sr.get("retransmit", []))
            streams.append(
                Stream(int(sr["owner"]), int(sr.get("fresh", 0)), retrans, orth, str(sr.get("note", "")))
            )
        slots.append(Slot(raw["csit"], tuple(streams), str(raw.get("label", ""))))
    users = data.get("users")
    if users is None:
        users = len(slots[0].csit) if slots else 0
    m = data.get("M", data.get("tx_antennas"))
    if not isinstance(users, int) or users < 1:
        raise ScenarioError("users", "expected a positive integer")
    if not isinstance(m, int) or m < 1:
        raise ScenarioError("M", "expected a positive number of transmit antennas")
    ants = tuple(data.get("antennas") or (1,) * users)
    return Schedule(users, m, ants, tuple(slots))


def load_schedule(path) -> Schedule:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError("schedule", f"not valid JSON: {exc}") from exc
    return schedule_from_json(data)


def dump_schedule(schedule: Schedule, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(schedule_to_json(schedule), fh, indent=2)
        fh.write("\n")
