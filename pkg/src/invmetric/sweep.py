"""Parameter sweeps and bit-stable CSV/JSON emission."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bergman import (
    BasisCoefficients,
    ball_metric,
    normal_metric_ring,
    tangential_metric_ring,
)
from .covering import kobayashi_punctured_disk
from .modular import CUSP_THRESHOLD, TruncationPolicy, kobayashi_c_minus_two_points

log = logging.getLogger(__name__)

QUANTITIES = (
    "kobayashi_punctured_disk",
    "kobayashi_punctured_plane",
    "bergman_ring_T",
    "bergman_ring_N",
    "bergman_ball",
)
COLUMNS = ("domain", "param1", "param2", "dir", "value", "error_bound")


class SweepError(ValueError):
    """Invalid sweep specification."""


class EmissionError(OSError):
    pass


def parse_grid(text: str) -> list[float]:
    """``"a,b,c"``, ``"log:start:stop:n"`` or ``"lin:start:stop:n"`` (inclusive ends)."""
    text = text.strip()
    try:
        if text.startswith(("log:", "lin:")):
            kind, start, stop, n = text.split(":")
            start, stop, n = float(start), float(stop), int(n)
            if n < 1:
                raise SweepError("grid needs at least one point")
            if kind == "log":
                if start <= 0 or stop <= 0:
                    raise SweepError("log grid endpoints must be positive")
                return [float(v) for v in np.geomspace(start, stop, n)]
            return [float(v) for v in np.linspace(start, stop, n)]
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        if isinstance(exc, SweepError):
            raise
        raise SweepError(f"cannot parse grid {text!r}: {exc}") from None


def parse_direction(text: str):
    """``N``, ``T``, or comma-separated components ``re,im[,re,im]``.

    Returns ``(label, vector)``; vector is a complex scalar for two
    components and a complex 2-vector for four.
    """
    text = text.strip()
    if text in ("N", "T"):
        return text, np.array([1, 0] if text == "N" else [0, 1], dtype=complex)
    body = text[len("custom"):].lstrip(" :=") if text.startswith("custom") else text
    try:
        parts = [float(v) for v in body.split(",")]
    except ValueError:
        raise SweepError(f"cannot parse direction {text!r}") from None
    if len(parts) == 2:
        return ",".join(repr(v) for v in parts), complex(parts[0], parts[1])
    if len(parts) == 4:
        vec = np.array([complex(parts[0], parts[1]), complex(parts[2], parts[3])])
        return ",".join(repr(v) for v in parts), vec
    raise SweepError(f"direction {text!r} needs 2 or 4 real components")


@dataclass
class SweepSpec:
    quantity: str
    grid: list
    r: float | None = None
    directions: list = field(default_factory=list)
    tol: float = 1e-12
    max_index: int | None = None

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise SweepError(f"unknown quantity {self.quantity!r}; choose from {QUANTITIES}")
        if not self.grid:
            raise SweepError("empty parameter grid")
        if any(not math.isfinite(v) for v in self.grid):
            raise SweepError("grid values must be finite")
        q = self.quantity
        if q == "kobayashi_punctured_disk" and not all(0 < v < 1 for v in self.grid):
            raise SweepError("punctured-disk grid must lie in (0, 1)")
        if q == "kobayashi_punctured_plane" and not all(0 < v <= CUSP_THRESHOLD for v in self.grid):
            raise SweepError(f"punctured-plane grid must lie in (0, {CUSP_THRESHOLD}]")
        if q.startswith("bergman_ring"):
            if self.r is None or not 0 < self.r < 1:
                raise SweepError("ring sweeps need --r in (0, 1)")
            if not all(self.r < v < 1 for v in self.grid):
                raise SweepError(f"ring grid must lie in ({self.r}, 1)")
        if q == "bergman_ball" and not all(0 <= v < 1 for v in self.grid):
            raise SweepError("ball grid must lie in [0, 1)")
        if q.startswith("bergman_ring"):
            # direction is part of the quantity
            self.directions = [(q[-1], None)]
        elif not self.directions:
            self.directions = [parse_direction("N" if q.startswith("bergman") else "1,0")]
        if q == "bergman_ball" and any(np.ndim(v) != 1 for _, v in self.directions):
            raise SweepError("ball directions need N, T or four components")
        if q.startswith("kobayashi") and any(np.ndim(v) != 0 for _, v in self.directions):
            raise SweepError("Kobayashi directions are complex scalars: re,im")

    def policy(self):
        return TruncationPolicy(max_index=self.max_index)


def _row(domain, p1, p2, label, value, err):
    return {"domain": domain, "param1": p1, "param2": p2, "dir": label,
            "value": value, "error_bound": err}


def run_sweep(spec: SweepSpec) -> list[dict]:
    """One record per (grid value, direction), grid-major.

    Evaluation failures become rows with ``value`` and ``error_bound``
    set to ``None`` and an ``error`` message.
    """
    q = spec.quantity
    coeffs = None
    if q.startswith("bergman_ring"):
        coeffs = BasisCoefficients.build(spec.r, x_max=max(spec.grid))
    rows = []
    for v in spec.grid:
        for label, xi in spec.directions:
            try:
                if q == "kobayashi_punctured_disk":
                    s = kobayashi_punctured_disk(v, xi)
                    row = _row("D-{0}", v, None, label, s.value, s.error_bound)
                elif q == "kobayashi_punctured_plane":
                    s = kobayashi_c_minus_two_points(v, xi, spec.tol, spec.policy())
                    row = _row("C-{0,1}", v, None, label, s.value, s.error_bound)
                elif q == "bergman_ring_T":
                    s = tangential_metric_ring(v, coeffs)
                    row = _row("ring", v, spec.r, label, s.value, s.error_bound)
                elif q == "bergman_ring_N":
                    s = normal_metric_ring(v, coeffs)
                    row = _row("ring", v, spec.r, label, s.value, s.error_bound)
                else:
                    row = _row("ball", v, None, label, ball_metric((v, 0), xi), 0.0)
            except (ArithmeticError, ValueError) as exc:
                msg = f"{type(exc).__name__}: {exc}"
                log.warning("%s at %r (%s): %s", q, v, label, msg)
                row = _row(q, v, spec.r if q.startswith("bergman_ring") else None, label,
                           None, None)
                row["error"] = msg
            rows.append(row)
    return rows


# -- emission ------------------------------------------------------------------

def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in rows:
        w.writerow([_fmt(_plain(row[c])) for c in COLUMNS])
    return buf.getvalue()


def _plain(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def to_json(rows) -> str:
    clean = [{k: _plain(v) for k, v in row.items()} for row in rows]
    return json.dumps(clean, indent=2) + "\n"


def render(rows, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(rows)
    if fmt == "json":
        return to_json(rows)
    raise ValueError(f"unknown format {fmt!r}")


def emit(rows, fmt: str, destination) -> Path:
    """Write rows to ``destination`` with LF line endings."""
    path = Path(destination)
    text = render(rows, fmt)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise EmissionError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def read_csv(text: str) -> list[dict]:
    """Parse emitted CSV back to records (floats restored, blanks to None)."""
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        row = {}
        for k in COLUMNS:
            v = rec[k]
            if k in ("param1", "param2", "value", "error_bound"):
                row[k] = float(v) if v != "" else None
            else:
                row[k] = v
        rows.append(row)
    return rows
