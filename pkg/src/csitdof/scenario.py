"""Scenario files (JSON).

```
{"kind": "miso", "K": 3, "pattern": ["PNN", "NPN", "NNP"]}
{"kind": "mimo2", "K": 2, "antennas": [3, 2],
 "joint": [{"state": "PN", "prob": "1/6"}, ...]}
```

Probabilities are strings ``"p/q"`` or ``"p"`` (integers are accepted too);
floats are rejected so that every scenario stays exact.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction

from .csit import CsitPattern, JointCsitDistribution, joint_from_pattern
from .errors import ScenarioError

KINDS = ("miso", "mimo2")
_RATIONAL = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")


@dataclass(frozen=True)
class Scenario:
    kind: str
    users: int
    tx_antennas: int
    antennas: tuple[int, ...]
    joint: JointCsitDistribution
    pattern: CsitPattern | None = None


def parse_probability(value, field: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ScenarioError(field, f"probability {value!r} must be an exact rational string such as \"1/3\"")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str) or not _RATIONAL.match(value):
        raise ScenarioError(field, f"probability {value!r} must look like \"p/q\" or \"p\"")
    try:
        return Fraction(value.replace(" ", ""))
    except ZeroDivisionError as exc:
        raise ScenarioError(field, "zero denominator") from exc


def _positive_int(data: dict, key: str) -> int:
    v = data.get(key)
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise ScenarioError(key, f"expected a positive integer, got {v!r}")
    return v


def parse_scenario(data) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("scenario", "expected a JSON object")
    kind = data.get("kind")
    if kind not in KINDS:
        raise ScenarioError("kind", f"expected one of {', '.join(KINDS)}, got {kind!r}")
    k = _positive_int(data, "K")

    if kind == "mimo2":
        if k != 2:
            raise ScenarioError("K", "mimo2 scenarios have exactly two users")
        ants = data.get("antennas")
        if (
            not isinstance(ants, list)
            or len(ants) != 2
            or not all(isinstance(a, int) and not isinstance(a, bool) and a >= 1 for a in ants)
        ):
            raise ScenarioError("antennas", f"expected [N1, N2] with positive integers, got {ants!r}")
        antennas = tuple(ants)
    else:
        if "antennas" in data and data["antennas"] not in (None, [1] * k):
            raise ScenarioError("antennas", "miso receivers have one antenna each")
        antennas = (1,) * k
    m = data.get("M", sum(antennas) if kind == "mimo2" else k)
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise ScenarioError("M", f"expected a positive integer, got {m!r}")

    has_pattern, has_joint = "pattern" in data, "joint" in data
    if has_pattern == has_joint:
        raise ScenarioError("pattern/joint", "give exactly one of pattern or joint")
    pattern = None
    if has_pattern:
        cols = data["pattern"]
        if not isinstance(cols, list) or not cols or not all(isinstance(c, str) for c in cols):
            raise ScenarioError("pattern", "expected a nonempty list of state strings")
        for i, c in enumerate(cols):
            if len(c) != k:
                raise ScenarioError(f"pattern[{i}]", f"{c!r} has {len(c)} users, expected {k}")
        try:
            pattern = CsitPattern.from_columns(cols)
        except ValueError as exc:
            raise ScenarioError("pattern", str(exc)) from exc
        joint = joint_from_pattern(pattern)
    else:
        entries = data["joint"]
        if not isinstance(entries, list) or not entries:
            raise ScenarioError("joint", "expected a nonempty list of {state, prob} entries")
        mass: dict[str, Fraction] = {}
        for i, e in enumerate(entries):
            where = f"joint[{i}]"
            if not isinstance(e, dict) or "state" not in e or "prob" not in e:
                raise ScenarioError(where, "expected an object with state and prob")
            state = e["state"]
            if not isinstance(state, str) or len(state) != k:
                raise ScenarioError(f"{where}.state", f"{state!r} is not a {k}-user state")
            if state in mass:
                raise ScenarioError(f"{where}.state", f"state {state} listed twice")
            mass[state] = parse_probability(e["prob"], f"{where}.prob")
        try:
            joint = JointCsitDistribution(k, mass)
        except ValueError as exc:
            raise ScenarioError("joint", str(exc)) from exc
    if kind == "mimo2" and "D" in joint.states:
        raise ScenarioError("joint" if has_joint else "pattern", "mimo2 scenarios use P/N states only")
    return Scenario(kind, k, m, antennas, joint, pattern)


def load_scenario(path) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ScenarioError("scenario", f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError("scenario", f"not valid JSON: {exc}") from exc
    return parse_scenario(data)
