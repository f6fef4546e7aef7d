"""Plain-text packing files.

    # optional comment lines anywhere
    <k> <l>
    <x> <y>
    ...

Coordinates are integers or ``p/q`` fractions.  Serialization is canonical:
reduced fractions, one offset per line, no comments.
"""
from __future__ import annotations

import re
from pathlib import Path

from .geom import Point, Q, fmt
from .packing import PackingInstance

_HEADER = re.compile(r"^([1-9]\d*) ([1-9]\d*)$")
_NUM = re.compile(r"^-?\d+(?:/\d+)?$")


class ParseError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


def parse_rational(tok: str):
    if not _NUM.match(tok):
        raise ValueError(f"not a rational: {tok!r}")
    if "/" in tok and int(tok.split("/")[1]) == 0:
        raise ValueError(f"zero denominator: {tok!r}")
    return Q(tok)


def parse_packing(text: str) -> PackingInstance:
    header = None
    offsets: list[Point] = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            m = _HEADER.match(line)
            if not m:
                raise ParseError(no, f"expected '<k> <l>' header, got {raw!r}")
            header = (int(m.group(1)), int(m.group(2)))
            continue
        toks = line.split()
        if len(toks) != 2:
            raise ParseError(no, f"expected '<x> <y>', got {raw!r}")
        try:
            x, y = parse_rational(toks[0]), parse_rational(toks[1])
        except ValueError as e:
            raise ParseError(no, str(e)) from None
        k, l = header
        if not (0 <= x and 0 <= y and x + 1 <= l and y + 1 <= l):
            raise ParseError(no, f"offset {fmt(x)} {fmt(y)} puts the triangle outside [0,{l}]^2")
        offsets.append(Point(x, y))
    if header is None:
        raise ParseError(1, "missing '<k> <l>' header")
    return PackingInstance(header[0], header[1], tuple(offsets))


def serialize_packing(p: PackingInstance) -> str:
    lines = [f"{p.k} {p.l}"]
    lines += [f"{fmt(o.x)} {fmt(o.y)}" for o in p.offsets]
    return "\n".join(lines) + "\n"


def read_packing(path) -> PackingInstance:
    return parse_packing(Path(path).read_text(encoding="utf-8"))


def write_packing(p: PackingInstance, path) -> None:
    Path(path).write_text(serialize_packing(p), encoding="utf-8")
