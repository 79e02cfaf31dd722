"""Plain-text matrix files.

Dense format::

    3
    2.0 0.5 0.0
    0.5 1.0 0.0
    0.0 0.0 1.5

Spectrum-only format (builds a diagonal matrix)::

    SPECTRUM
    3.0 2.0 1.0

Blank lines and ``#`` comments are ignored. An optional count may follow
``SPECTRUM`` on the header line.
"""

from __future__ import annotations

import os
from typing import Union

import numpy as np

from .errors import UsageError
from .linalg import SpdMatrix, make_spd

PathLike = Union[str, os.PathLike]


def _tokens(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.extend(line.split())
    return out


def parse_matrix(text: str, *, strict: bool = False) -> SpdMatrix:
    toks = _tokens(text)
    if not toks:
        raise UsageError("empty matrix file")
    if toks[0].upper() == "SPECTRUM":
        vals = toks[1:]
        if len(vals) >= 2 and vals[0].isdigit() and int(vals[0]) == len(vals) - 1:
            vals = vals[1:]
        try:
            ev = np.array([float(v) for v in vals])
        except ValueError as exc:
            raise UsageError(f"bad eigenvalue: {exc}") from None
        if ev.size == 0:
            raise UsageError("SPECTRUM header with no eigenvalues")
        return make_spd(np.diag(ev))
    try:
        n = int(toks[0])
    except ValueError:
        raise UsageError(f"first token must be the dimension, got {toks[0]!r}") from None
    body = toks[1:]
    if n < 1 or len(body) != n * n:
        raise UsageError(f"expected {n}x{n} = {n * n} entries, found {len(body)}")
    try:
        a = np.array([float(v) for v in body]).reshape(n, n)
    except ValueError as exc:
        raise UsageError(f"bad matrix entry: {exc}") from None
    return make_spd(a, strict=strict)


def read_matrix(path: PathLike, *, strict: bool = False) -> SpdMatrix:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read(), strict=strict)


def format_matrix(m: SpdMatrix | np.ndarray) -> str:
    a = np.asarray(m, dtype=float)
    lines = [str(a.shape[0])]
    lines += [" ".join(repr(float(x)) for x in row) for row in a]
    return "\n".join(lines) + "\n"


def write_matrix(path: PathLike, m: SpdMatrix | np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_matrix(m))
