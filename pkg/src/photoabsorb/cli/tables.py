"""Deterministic CSV output with a ``key = value`` sidecar."""

import csv
import io
import math
from numbers import Integral, Real

from ..errors import PhotoAbsorbError


class OutputError(PhotoAbsorbError, ValueError):
    pass


def format_cell(value):
    """Render one cell; floats get 12 significant digits."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, Integral):
        return str(int(value))
    if isinstance(value, Real):
        v = float(value)
        if not math.isfinite(v):
            raise OutputError(f"refusing to write non-finite value {v!r}")
        if v == 0:
            v = 0.0  # drop the sign of negative zero
        return format(v, ".12g")
    return str(value)


def render_table(rows, columns):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        if len(row) != len(columns):
            raise OutputError(f"row has {len(row)} cells, expected {len(columns)}")
        writer.writerow([format_cell(v) for v in row])
    return buf.getvalue()


def write_table(rows, columns, path, metadata=None):
    """Write ``rows`` as UTF-8 CSV with LF endings.

    The whole table is rendered before anything touches the disk, so a
    non-finite value leaves no partial file behind. ``metadata`` pairs go to
    ``<path>.meta``.
    """
    text = render_table(rows, columns)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    if metadata is not None:
        write_sidecar(metadata, sidecar_path(path))
    return text


def sidecar_path(path):
    return f"{path}.meta"


def write_sidecar(pairs, path):
    lines = [f"{k} = {v}\n" for k, v in pairs]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.writelines(lines)
