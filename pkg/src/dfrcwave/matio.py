"""Text formats: complex matrices and CSV tables.

Matrix format: first line "rows cols", then one line per row with
entries "re:im" separated by single spaces, 17 significant digits.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np


def write_matrix(path, m: np.ndarray) -> None:
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    rows, cols = m.shape
    lines = [f"{rows} {cols}"]
    for i in range(rows):
        lines.append(" ".join(f"{v.real:.17g}:{v.imag:.17g}" for v in m[i]))
    Path(path).write_text("\n".join(lines) + "\n")


def read_matrix(path) -> np.ndarray:
    text = Path(path).read_text().strip().splitlines()
    if not text:
        raise ValueError(f"{path}: empty matrix file")
    try:
        rows, cols = (int(tok) for tok in text[0].split())
    except ValueError as exc:
        raise ValueError(f"{path}: malformed header {text[0]!r}") from exc
    if len(text) - 1 != rows:
        raise ValueError(f"{path}: expected {rows} rows, found {len(text) - 1}")
    out = np.empty((rows, cols), dtype=complex)
    for i, line in enumerate(text[1:]):
        entries = line.split()
        if len(entries) != cols:
            raise ValueError(f"{path}: row {i} has {len(entries)} entries, expected {cols}")
        for j, tok in enumerate(entries):
            re_s, _, im_s = tok.partition(":")
            if not _:
                raise ValueError(f"{path}: malformed entry {tok!r}")
            out[i, j] = complex(float(re_s), float(im_s))
    return out


def write_csv(path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format(v) for v in row])


def _format(v):
    # np.float64 subclasses float, so coerce before repr to keep plain digits
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (np.integer,)):
        return int(v)
    return v
