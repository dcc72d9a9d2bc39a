"""Trace files: CSV (columns only) and JSON (metadata header plus rows).

CSV columns, in order: ``n, lambda, eps, x[0..d), xbar[0..d), eps_u_norm,
dist_to_solution``; reals use 17 significant digits and an unknown
distance is an empty field. JSON holds ``{"metadata": {...}, "rows":
[...]}`` with one object per row using the same names (``x`` and ``xbar``
as lists, a missing distance as ``null``).
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from ..core import ConvergenceTrace
from ..errors import ExtsumError

__all__ = ["TraceFormatError", "csv_header", "write_trace", "read_trace", "dumps_csv", "dumps_json"]


class TraceFormatError(ExtsumError, ValueError):
    pass


def _fmt(v):
    return format(float(v), ".17g")


def csv_header(dim):
    return (["n", "lambda", "eps"]
            + [f"x[{i}]" for i in range(dim)]
            + [f"xbar[{i}]" for i in range(dim)]
            + ["eps_u_norm", "dist_to_solution"])


def dumps_csv(trace):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(csv_header(trace.dim))
    for i in range(len(trace)):
        d = trace.dist[i]
        w.writerow(
            [str(int(trace.n[i])), _fmt(trace.lam[i]), _fmt(trace.eps[i])]
            + [_fmt(v) for v in trace.x[i]]
            + [_fmt(v) for v in trace.xbar[i]]
            + [_fmt(trace.eps_u_norm[i]), "" if math.isnan(d) else _fmt(d)]
        )
    return buf.getvalue()


def trace_metadata(trace, extra=None):
    meta = {
        "dim": trace.dim,
        "rows": len(trace),
        "record_every": trace.record_every,
        "schedule_valid": trace.schedule_valid,
        "unsafe_schedule": trace.unsafe,
        "h1_sup": trace.h1_sup,
        "error": trace.error,
        "error_n": trace.error_n,
    }
    meta.update(extra or {})
    return meta


def dumps_json(trace, metadata=None):
    lines = ['{"metadata": ' + json.dumps(trace_metadata(trace, metadata)) + ",", ' "rows": [']
    m = len(trace)
    for i in range(m):
        d = float(trace.dist[i])
        row = {
            "n": int(trace.n[i]),
            "lambda": float(trace.lam[i]),
            "eps": float(trace.eps[i]),
            "x": [float(v) for v in trace.x[i]],
            "xbar": [float(v) for v in trace.xbar[i]],
            "eps_u_norm": float(trace.eps_u_norm[i]),
            "dist_to_solution": None if math.isnan(d) else d,
        }
        lines.append("  " + json.dumps(row) + ("," if i < m - 1 else ""))
    lines.append(" ]}")
    return "\n".join(lines) + "\n"


def write_trace(trace, path, fmt=None, metadata=None):
    """Write `trace` to `path` as ``"csv"`` or ``"json"`` (default: by suffix)."""
    path = Path(path)
    fmt = fmt or ("json" if path.suffix.lower() == ".json" else "csv")
    text = dumps_json(trace, metadata) if fmt == "json" else dumps_csv(trace)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def _from_columns(n, lam, eps, x, xbar, enorm, dist, meta):
    trace = ConvergenceTrace(
        n=np.asarray(n, dtype=np.int64),
        lam=np.asarray(lam, dtype=float),
        eps=np.asarray(eps, dtype=float),
        x=np.asarray(x, dtype=float),
        xbar=np.asarray(xbar, dtype=float),
        eps_u_norm=np.asarray(enorm, dtype=float),
        dist=np.asarray(dist, dtype=float),
        h1_sup=float(meta.get("h1_sup", max(enorm) if len(enorm) else 0.0)),
        record_every=int(meta.get("record_every", 1)),
        schedule_valid=meta.get("schedule_valid"),
        unsafe=bool(meta.get("unsafe_schedule", False)),
        error=meta.get("error"),
        error_n=meta.get("error_n"),
        meta=dict(meta),
    )
    if len(trace) and np.any(np.diff(trace.n) <= 0):
        raise TraceFormatError("rows are not strictly ordered by n")
    if np.any(trace.eps_u_norm < 0):
        raise TraceFormatError("negative eps_u_norm")
    return trace


def _parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise TraceFormatError("empty trace file")
    header, body = rows[0], rows[1:]
    if len(header) < 7 or (len(header) - 5) % 2:
        raise TraceFormatError(f"unexpected CSV header {header}")
    dim = (len(header) - 5) // 2
    if header != csv_header(dim):
        raise TraceFormatError(f"unexpected CSV header {header}")
    n, lam, eps, x, xbar, enorm, dist = ([] for _ in range(7))
    for k, r in enumerate(body, start=2):
        if len(r) != len(header):
            raise TraceFormatError(f"line {k}: expected {len(header)} fields, got {len(r)}")
        try:
            n.append(int(r[0]))
            lam.append(float(r[1]))
            eps.append(float(r[2]))
            x.append([float(v) for v in r[3:3 + dim]])
            xbar.append([float(v) for v in r[3 + dim:3 + 2 * dim]])
            enorm.append(float(r[-2]))
            dist.append(float(r[-1]) if r[-1] != "" else math.nan)
        except ValueError as exc:
            raise TraceFormatError(f"line {k}: {exc}") from None
    x = np.array(x, dtype=float).reshape(len(body), dim)
    xbar = np.array(xbar, dtype=float).reshape(len(body), dim)
    return _from_columns(n, lam, eps, x, xbar, enorm, dist, {"dim": dim})


def _parse_json(text):
    try:
        doc = json.loads(text)
        meta = doc.get("metadata", {})
        rows = doc["rows"]
        dim = int(meta.get("dim") or (len(rows[0]["x"]) if rows else 1))
        cols = (
            [int(r["n"]) for r in rows],
            [float(r["lambda"]) for r in rows],
            [float(r["eps"]) for r in rows],
            np.array([r["x"] for r in rows], dtype=float).reshape(len(rows), dim),
            np.array([r["xbar"] for r in rows], dtype=float).reshape(len(rows), dim),
            [float(r["eps_u_norm"]) for r in rows],
            [math.nan if r["dist_to_solution"] is None else float(r["dist_to_solution"])
             for r in rows],
        )
    except (ValueError, KeyError, TypeError, AttributeError, IndexError) as exc:
        raise TraceFormatError(f"malformed JSON trace: {exc}") from None
    return _from_columns(*cols, meta)


def read_trace(path):
    """Parse a trace file written by `write_trace` (format sniffed from content)."""
    text = Path(path).read_text(encoding="utf-8")
    if not text.strip():
        raise TraceFormatError(f"{path}: empty trace file")
    if text.lstrip().startswith("{"):
        return _parse_json(text)
    return _parse_csv(text)
