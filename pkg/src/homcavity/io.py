"""CSV and JSON artifacts written by the command-line tool."""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .series import CoincidenceCurve

SIG_DIGITS = 12
CURVE_HEADER = ("delay_ps", "rate")


def fmt(x: float) -> str:
    return f"{float(x):.{SIG_DIGITS}g}"


def table_csv(header: tuple[str, str], xs, ys) -> str:
    lines = [",".join(header)]
    lines.extend(f"{fmt(x)},{fmt(y)}" for x, y in zip(xs, ys))
    return "\n".join(lines) + "\n"


def curve_csv(curve: CoincidenceCurve) -> str:
    return table_csv(CURVE_HEADER, curve.delays * 1e12, curve.rates)


def read_curve_csv(text: str) -> CoincidenceCurve:
    """Parse ``delay_ps,rate`` CSV back into a curve (delays in seconds)."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CURVE_HEADER:
        raise ValueError(f"expected header {','.join(CURVE_HEADER)!r}")
    data = np.array([[float(a), float(b)] for a, b in rows[1:]], dtype=float).reshape(-1, 2)
    return CoincidenceCurve(data[:, 0] * 1e-12, data[:, 1])


def _round(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if not math.isfinite(x) else float(fmt(x))
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def to_json(obj) -> str:
    """Stable JSON: alphabetical keys, floats rounded to 12 significant digits."""
    return json.dumps(_round(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
