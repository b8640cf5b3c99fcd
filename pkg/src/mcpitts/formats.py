"""Text formats: system files (JSON), trace files and labelled point files.

System file::

    {"n": 2, "units": [{"weights": ["1", "-1/2"], "theta": "1"}, ...]}

Trace file, one pair per line, x then y, first bit leftmost::

    # comment
    0110 1011

Point file, one point per line with an optional ``+``/``-`` label::

    011 +
    100 -
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Iterable

from .model import BitVec, Dichotomy, MPSystem, ThresholdUnit, Trace


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def fmt_rational(v: Fraction) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def parse_rational(text) -> Fraction:
    if isinstance(text, bool):
        raise FormatError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise FormatError(f"rationals are written as strings 'p/q', got {text!r}")
    m = _RATIONAL.match(text)
    if not m or (m.group(2) is not None and int(m.group(2)) == 0):
        raise FormatError(f"not a rational: {text!r}")
    return Fraction(int(m.group(1)), int(m.group(2) or 1))


def system_to_dict(phi: MPSystem) -> dict:
    return {
        "n": phi.n,
        "units": [
            {"weights": [fmt_rational(w) for w in u.weights], "theta": fmt_rational(u.theta)}
            for u in phi.units
        ],
    }


def system_from_dict(data: dict) -> MPSystem:
    try:
        n = data["n"]
        units = data["units"]
    except (KeyError, TypeError) as e:
        raise FormatError(f"system file needs 'n' and 'units': {e}") from None
    if not isinstance(n, int) or n < 1:
        raise FormatError(f"'n' must be a positive integer, got {n!r}")
    if len(units) != n:
        raise FormatError(f"expected {n} units, found {len(units)}")
    out = []
    for j, u in enumerate(units, 1):
        try:
            weights = [parse_rational(w) for w in u["weights"]]
            theta = parse_rational(u["theta"])
        except (KeyError, TypeError):
            raise FormatError(f"unit {j} needs 'weights' and 'theta'") from None
        if len(weights) != n:
            raise FormatError(f"unit {j} has {len(weights)} weights, expected {n}")
        out.append(ThresholdUnit(tuple(weights), theta))
    return MPSystem(tuple(out))


def dump_system(phi: MPSystem) -> str:
    return json.dumps(system_to_dict(phi), indent=2) + "\n"


def load_system(text: str) -> MPSystem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON: {e.msg}", e.lineno) from None
    return system_from_dict(data)


def _content_lines(text: str) -> Iterable[tuple[int, str]]:
    for no, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if line:
            yield no, line


def _bits(token: str, no: int) -> BitVec:
    try:
        return BitVec.from_str(token)
    except ValueError:
        raise FormatError(f"not a bit string: {token!r}", no) from None


def dump_trace(t: Trace) -> str:
    return "".join(f"{x} {y}\n" for x, y in t)


def load_trace(text: str) -> Trace:
    pairs = []
    width = None
    for no, line in _content_lines(text):
        parts = line.split()
        if len(parts) != 2:
            raise FormatError("expected '<x bits> <y bits>'", no)
        x, y = _bits(parts[0], no), _bits(parts[1], no)
        if width is None:
            width = len(x)
        if len(x) != width or len(y) != width:
            raise FormatError(f"width mismatch, expected {width} bits", no)
        pairs.append((x, y))
    if not pairs:
        raise FormatError("trace file contains no pairs")
    return Trace(tuple(pairs))


def load_points(text: str, require_labels: bool = False) -> list[tuple[BitVec, int | None]]:
    """Points with labels 1 (``+``), 0 (``-``) or None (unlabelled)."""
    out = []
    width = None
    for no, line in _content_lines(text):
        parts = line.split()
        if len(parts) > 2:
            raise FormatError("expected '<bits> [+|-]'", no)
        p = _bits(parts[0], no)
        if width is None:
            width = len(p)
        if len(p) != width:
            raise FormatError(f"width mismatch, expected {width} bits", no)
        label = None
        if len(parts) == 2:
            if parts[1] not in ("+", "-"):
                raise FormatError(f"label must be '+' or '-', got {parts[1]!r}", no)
            label = 1 if parts[1] == "+" else 0
        elif require_labels:
            raise FormatError("missing '+'/'-' label", no)
        out.append((p, label))
    return out


def dichotomy_from_points(points: list[tuple[BitVec, int | None]]) -> Dichotomy:
    if not points:
        raise FormatError("point file contains no points")
    return Dichotomy.from_points(
        [p for p, lab in points if lab], [p for p, lab in points if not lab], len(points[0][0])
    )


def dump_points(d: Dichotomy) -> str:
    lines = [f"{p} +" for p in sorted(d.positives)] + [f"{p} -" for p in sorted(d.negatives)]
    return "".join(line + "\n" for line in lines)
