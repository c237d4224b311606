"""JSON and CSV records for radial and spectral functions.

Floats are written with repr, the shortest decimal that round-trips, so
repeated runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
import sys

import numpy as np

from .lattice import RadialFunction
from .qcore import DomainError, QContext
from .spherical import SpectralFunction

__all__ = [
    "SchemaError",
    "radial_to_record",
    "record_to_radial",
    "spectral_to_record",
    "record_to_spectral",
    "load_record",
    "dump_json",
    "write_csv",
    "format_float",
]


class SchemaError(ValueError):
    """A record does not have the expected shape; the message starts with the field path."""

    def __init__(self, path: str, msg: str):
        super().__init__(f"{path}: {msg}")
        self.path = path


def format_float(x) -> str:
    return repr(float(x))


def _ctx_fields(ctx: QContext) -> dict:
    return {"q": ctx.q, "n": ctx.n, "K": ctx.K, "M": ctx.M, "N_inf": ctx.N_inf, "eps_tail": ctx.eps_tail}


def radial_to_record(f: RadialFunction) -> dict:
    return {"kind": "radial", "q": f.ctx.q, "n": f.ctx.n, "K": f.K,
            "coeffs": [float(c) for c in f.coeffs], "context": _ctx_fields(f.ctx)}


def spectral_to_record(F: SpectralFunction) -> dict:
    return {"kind": "spectral", "q": F.ctx.q, "n": F.ctx.n, "h": F.ctx.h, "M": F.M,
            "values": [float(v) for v in F.values], "context": _ctx_fields(F.ctx)}


def _field(rec, key, kind, path):
    if not isinstance(rec, dict):
        raise SchemaError(path, "expected an object")
    if key not in rec:
        raise SchemaError(f"{path}.{key}", "missing")
    v = rec[key]
    p = f"{path}.{key}"
    if kind is int:
        if isinstance(v, bool) or not isinstance(v, int):
            raise SchemaError(p, f"expected an integer, got {type(v).__name__}")
    elif kind is float:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise SchemaError(p, f"expected a number, got {type(v).__name__}")
        if not math.isfinite(v):
            raise SchemaError(p, "must be finite")
        v = float(v)
    elif kind is list:
        if not isinstance(v, list):
            raise SchemaError(p, f"expected an array, got {type(v).__name__}")
        for i, x in enumerate(v):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise SchemaError(f"{p}[{i}]", f"expected a number, got {type(x).__name__}")
            if not math.isfinite(x):
                raise SchemaError(f"{p}[{i}]", "must be finite")
        v = [float(x) for x in v]
    return v


def _context(rec, path) -> QContext:
    q = _field(rec, "q", float, path)
    n = _field(rec, "n", int, path)
    extra = {}
    ctx = rec.get("context")
    if ctx is not None:
        cp = f"{path}.context"
        for key, kind in (("K", int), ("M", int), ("N_inf", int), ("eps_tail", float)):
            if key in ctx:
                extra[key] = _field(ctx, key, kind, cp)
    try:
        return QContext(q, n, **extra)
    except DomainError as e:
        raise SchemaError(path, str(e)) from None


def record_to_radial(rec, path: str = "$") -> RadialFunction:
    """Parse {q, n, K, coeffs[]}; K must equal len(coeffs)."""
    ctx = _context(rec, path)
    K = _field(rec, "K", int, path)
    coeffs = _field(rec, "coeffs", list, path)
    if K != len(coeffs):
        raise SchemaError(f"{path}.K", f"is {K} but coeffs has {len(coeffs)} entries")
    if K < 1:
        raise SchemaError(f"{path}.coeffs", "must not be empty")
    return RadialFunction(ctx, np.array(coeffs))


def record_to_spectral(rec, path: str = "$") -> SpectralFunction:
    """Parse {q, n, h, M, values[]}; h must match q and len(values) must be M+1."""
    ctx = _context(rec, path)
    h = _field(rec, "h", float, path)
    if abs(h - ctx.h) > 1e-12 * ctx.h:
        raise SchemaError(f"{path}.h", f"is {h} but q={ctx.q} gives {ctx.h}")
    M = _field(rec, "M", int, path)
    vals = _field(rec, "values", list, path)
    if len(vals) != M + 1:
        raise SchemaError(f"{path}.values", f"expected {M + 1} entries, got {len(vals)}")
    return SpectralFunction(ctx, np.array(vals), M)


def load_record(path: str):
    """Read a radial or spectral record from a JSON file (kind inferred from its fields)."""
    with open(path) as fh:
        try:
            rec = json.load(fh)
        except json.JSONDecodeError as e:
            raise SchemaError("$", f"not valid JSON ({e.msg} at line {e.lineno})") from None
    if isinstance(rec, dict) and "values" in rec:
        return record_to_spectral(rec)
    return record_to_radial(rec)


def _open_out(path):
    return open(path, "w", newline="") if path and path != "-" else None


def dump_json(obj, path: str | None = None) -> None:
    text = json.dumps(obj, indent=1, sort_keys=True) + "\n"
    fh = _open_out(path)
    if fh is None:
        sys.stdout.write(text)
        return
    with fh:
        fh.write(text)


def write_csv(header, rows, path: str | None = None) -> None:
    fh = _open_out(path)
    out = fh if fh is not None else sys.stdout
    wr = csv.writer(out, lineterminator="\n")
    wr.writerow(header)
    for row in rows:
        wr.writerow([format_float(v) if isinstance(v, (float, np.floating)) else v for v in row])
    if fh is not None:
        fh.close()
