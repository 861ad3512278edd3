"""Text file format for upper triangular matrices.

A file holds one header line with the order n, then n rows of n
whitespace-separated complex entries written as ``(<re>,<im>)``.  Lines
starting with ``#`` are comments; blank lines are skipped.  Writing uses
the shortest decimal representation that round-trips a double, so
``read_matrix(write_matrix(T))`` reproduces T bit-exactly.
"""

from __future__ import annotations

import re

import numpy as np

from .triangular import validate_triangular

__all__ = ["MatrixFileError", "read_matrix", "write_matrix", "format_matrix", "parse_matrix"]

_ENTRY_RE = re.compile(r"^\(([^,()]+),([^,()]+)\)$")


class MatrixFileError(ValueError):
    """Malformed matrix file; the message carries the offending line number."""


def _fmt(x: float) -> str:
    return repr(float(x))


def format_matrix(T) -> str:
    """Render a validated matrix in the file format."""
    T = validate_triangular(T)
    n = T.shape[0]
    lines = [str(n)]
    for i in range(n):
        lines.append(" ".join(f"({_fmt(z.real)},{_fmt(z.imag)})" for z in T[i]))
    return "\n".join(lines) + "\n"


def write_matrix(T, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_matrix(T))


def _parse_entry(token: str, lineno: int):
    m = _ENTRY_RE.match(token)
    if m is None:
        raise MatrixFileError(f"line {lineno}: malformed entry {token!r}")
    try:
        re_part, im_part = float(m.group(1)), float(m.group(2))
    except ValueError:
        raise MatrixFileError(f"line {lineno}: malformed entry {token!r}") from None
    if not (np.isfinite(re_part) and np.isfinite(im_part)):
        raise MatrixFileError(f"line {lineno}: non-finite entry {token!r}")
    return complex(re_part, im_part)


def parse_matrix(text: str) -> np.ndarray:
    """Parse the file format from a string; errors carry line numbers."""
    rows = []
    n = None
    row_lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if n is None:
            try:
                n = int(line)
            except ValueError:
                raise MatrixFileError(f"line {lineno}: expected the order, got {line!r}") from None
            if n < 1:
                raise MatrixFileError(f"line {lineno}: order must be at least 1")
            continue
        if len(rows) == n:
            raise MatrixFileError(f"line {lineno}: more than {n} matrix rows")
        tokens = line.split()
        if len(tokens) != n:
            raise MatrixFileError(
                f"line {lineno}: dimension mismatch, expected {n} entries, got {len(tokens)}"
            )
        row = [_parse_entry(tok, lineno) for tok in tokens]
        i = len(rows)
        for j in range(i):
            if row[j] != 0:
                raise MatrixFileError(
                    f"line {lineno}: non-triangular content at ({i + 1},{j + 1})"
                )
        rows.append(row)
        row_lines.append(lineno)
    if n is None:
        raise MatrixFileError("empty file: missing order header")
    if len(rows) != n:
        raise MatrixFileError(f"dimension mismatch: expected {n} rows, found {len(rows)}")
    return validate_triangular(np.array(rows, dtype=np.complex128))


def read_matrix(path) -> np.ndarray:
    with open(path) as fh:
        return parse_matrix(fh.read())
