"""Reading and writing numeric series files.

Two input layouts are accepted:

* plain text, one decimal value per line (the Bonn segment layout);
* CSV with a single header row and one series per column.

Blank lines are ignored. Anything else that does not parse as a finite
decimal number is an error carrying the line number.
"""

import csv
import math
from pathlib import Path
from typing import List, Sequence, Tuple

import numpy as np

from .errors import InputFormatError


def _parse(token: str, path, line: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise InputFormatError(f"not a decimal number: {token!r}", path, line) from None
    if not math.isfinite(value):
        raise InputFormatError(f"non-finite value {token!r}", path, line)
    return value


def _is_csv(path: Path, lines: Sequence[str]) -> bool:
    if path.suffix.lower() == ".csv":
        return True
    first = next((ln for ln in lines if ln.strip()), "")
    return "," in first


def read_series_file(path) -> List[Tuple[str, np.ndarray]]:
    """Return ``(name, samples)`` for every series stored in ``path``.

    Plain-text files yield one series named after the file stem; CSV files
    yield one series per column, named ``<stem>:<header>``.
    """
    path = Path(path)
    text = path.read_text()
    lines = text.splitlines()
    if not _is_csv(path, lines):
        values = []
        for no, raw in enumerate(lines, start=1):
            tok = raw.strip()
            if not tok:
                continue
            if len(tok.split()) != 1:
                raise InputFormatError(f"expected one value per line, got {tok!r}", path, no)
            values.append(_parse(tok, path, no))
        if not values:
            raise InputFormatError("file contains no values", path, 1)
        return [(path.stem, np.array(values))]

    rows = [(no, row) for no, row in enumerate(csv.reader(lines), start=1) if any(c.strip() for c in row)]
    if not rows:
        raise InputFormatError("file contains no values", path, 1)
    (_, header), body = rows[0], rows[1:]
    header = [h.strip() for h in header]
    columns: List[List[float]] = [[] for _ in header]
    for no, row in body:
        if len(row) != len(header):
            raise InputFormatError(f"expected {len(header)} columns, got {len(row)}", path, no)
        for col, cell in zip(columns, row):
            col.append(_parse(cell.strip(), path, no))
    if not body:
        raise InputFormatError("CSV has a header but no data rows", path, rows[0][0])
    return [(f"{path.stem}:{h}", np.array(col)) for h, col in zip(header, columns)]


def write_series_file(path, samples: Sequence[float]):
    """One value per line, with full double precision (round-trips exactly)."""
    with open(path, "w") as fh:
        for v in samples:
            fh.write(repr(float(v)) + "\n")


def write_csv(path, header: Sequence[str], rows: Sequence[Sequence]):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
