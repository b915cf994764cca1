"""Text formats for orientations (``USO 1``) and LCP data (``LCP 1``).

USO file::

    USO 1
    <n>
    <2^n decimal outmap masks in vertex order>

LCP file::

    LCP 1
    <n>
    <n lines of n rationals: the rows of M>
    <one line of n rationals: q>

Rationals are written ``a`` or ``a/b``.
"""
from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from .cube import OutMap, is_orientation
from .errors import FormatError
from .lcp import Matrix, Vector

_RATIONAL = re.compile(r"[+-]?\d+(?:/\d+)?\Z")


def _lines(text: str) -> list[tuple[int, str]]:
    return [(k + 1, line.strip()) for k, line in enumerate(text.splitlines()) if line.strip()]


def _header(lines, magic: str) -> int:
    if not lines or lines[0][1] != f"{magic} 1":
        raise FormatError(f"expected header '{magic} 1'", lines[0][0] if lines else 1)
    if len(lines) < 2:
        raise FormatError("missing dimension line", lines[0][0] + 1)
    lineno, text = lines[1]
    if not text.isdigit():
        raise FormatError(f"dimension must be a nonnegative integer, got {text!r}", lineno)
    return int(text)


def parse_uso(text: str, validate: bool = True) -> OutMap:
    lines = _lines(text)
    n = _header(lines, "USO")
    if len(lines) != 3:
        raise FormatError("expected exactly one line of outmap masks", lines[-1][0])
    lineno, body = lines[2]
    tokens = body.split()
    if len(tokens) != 1 << n:
        raise FormatError(f"expected {1 << n} masks, got {len(tokens)}", lineno)
    values = []
    for tok in tokens:
        if not tok.isdigit():
            raise FormatError(f"bad mask {tok!r}", lineno)
        value = int(tok)
        if value >> n:
            raise FormatError(f"mask {value} is not below 2^{n}", lineno)
        values.append(value)
    o = OutMap(n, values)
    if validate and not is_orientation(o):
        raise FormatError("table is not a consistent orientation", lineno)
    return o


def format_uso(o: OutMap) -> str:
    return f"USO 1\n{o.n}\n{' '.join(str(x) for x in o.table)}\n"


def read_uso(path, validate: bool = True) -> OutMap:
    return parse_uso(Path(path).read_text(), validate)


def write_uso(path, o: OutMap) -> None:
    Path(path).write_text(format_uso(o))


def _rationals(lineno: int, text: str, n: int) -> list[Fraction]:
    tokens = text.split()
    if len(tokens) != n:
        raise FormatError(f"expected {n} rationals, got {len(tokens)}", lineno)
    out = []
    for tok in tokens:
        if not _RATIONAL.match(tok):
            raise FormatError(f"bad rational {tok!r}", lineno)
        try:
            out.append(Fraction(tok))
        except ZeroDivisionError:
            raise FormatError(f"zero denominator in {tok!r}", lineno) from None
    return out


def parse_lcp(text: str) -> tuple[Matrix, Vector]:
    lines = _lines(text)
    n = _header(lines, "LCP")
    if len(lines) != n + 3:
        raise FormatError(f"expected {n} matrix rows and one q line", lines[-1][0])
    m = [_rationals(lineno, body, n) for lineno, body in lines[2:2 + n]]
    q = _rationals(*lines[2 + n], n)
    return m, q


def format_lcp(m: Matrix, q: Vector) -> str:
    rows = "".join(" ".join(str(Fraction(x)) for x in row) + "\n" for row in m)
    return f"LCP 1\n{len(q)}\n{rows}{' '.join(str(Fraction(x)) for x in q)}\n"


def read_lcp(path) -> tuple[Matrix, Vector]:
    return parse_lcp(Path(path).read_text())


def write_lcp(path, m: Matrix, q: Vector) -> None:
    Path(path).write_text(format_lcp(m, q))
