"""CSV rendering. Rationals are written as ``p/q`` (or ``p`` when whole)."""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from typing import Iterable, Sequence

from .bounds import BoundSet
from .polytope import VertexSet


def fmt(q) -> str:
    return str(Fraction(q))


def fmt_decimal(q, places: int) -> str:
    """Round exactly (half to even) and print with ``places`` decimals."""
    q = Fraction(q)
    scaled = round(q * 10**places)
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def _table(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _with_decimals(header, rows, cols, places):
    if places is None:
        return header, rows
    header = list(header) + [f"{header[c]}_dec" for c in cols]
    rows = [list(r) + [fmt_decimal(Fraction(r[c]), places) for c in cols] for r in rows]
    return header, rows


def bounds_csv(bounds: BoundSet, decimals: int | None = None) -> str:
    k = bounds.users
    header = ["tag"] + [f"c_{i}" for i in range(1, k + 1)] + ["rhs"]
    rows = [[q.tag] + [fmt(c) for c in q.coeffs] + [fmt(q.rhs)] for q in bounds]
    header, rows = _with_decimals(header, rows, [k + 1], decimals)
    return _table(header, rows)


def vertices_csv(verts: VertexSet, decimals: int | None = None) -> str:
    k = verts.dim
    header = [f"v_{i}" for i in range(1, k + 1)]
    rows = [[fmt(x) for x in v] for v in verts]
    header, rows = _with_decimals(header, rows, list(range(k)), decimals)
    return _table(header, rows)


def corners_csv(corners, decimals: int | None = None) -> str:
    k = len(corners[0].coords) if corners else 0
    header = ["label"] + [f"d_{i}" for i in range(1, k + 1)]
    rows = [[c.label] + [fmt(x) for x in c.coords] for c in corners]
    header, rows = _with_decimals(header, rows, list(range(1, k + 1)), decimals)
    return _table(header, rows)


def ledger_csv(ledger, decimals: int | None = None) -> str:
    header = ["user", "intended", "decodable", "dof"]
    rows = [
        [str(u), str(i), str(d), fmt(f)]
        for u, (i, d, f) in enumerate(zip(ledger.intended, ledger.decodable, ledger.dof), start=1)
    ]
    header, rows = _with_decimals(header, rows, [3], decimals)
    return _table(header, rows)
