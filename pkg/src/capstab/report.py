"""End-to-end analysis of one surface and deterministic serialization."""
from __future__ import annotations

import enum
import json
import math

import numpy as np

from . import stability as st
from . import verify as vf

SWEEP_HEADER = "n,H,F,kind,theta,lambda_min,trace,centroid_norm,verdict"


def analyze(surf, tol_centroid: float = 1e-6, tol_eig: float | None = None, certify: bool = True,
            levels: int = 3, q_scale: float = 1.0, residuals: bool = True) -> st.StabilityReport:
    """Stability form, verdict and (optionally) the residual block for ``surf``."""
    form = st.q_form(surf, certify=certify)
    report = st.verdict(surf, form, tol_centroid=tol_centroid, tol_eig=tol_eig)
    if residuals:
        report.residuals.update(vf.residual_block(surf, levels=levels, q_scale=q_scale))
    return report


def _plain(obj):
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _emit(obj, indent, level, out):
    pad = " " * (indent * (level + 1))
    close = " " * (indent * level)
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append("null" if not math.isfinite(obj) else format(obj, ".17g"))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            out.append(f"{pad}{json.dumps(k)}: ")
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(close + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        if all(not isinstance(v, (dict, list)) for v in obj):
            parts = []
            for v in obj:
                _emit(v, indent, level + 1, parts)
            out.append("[" + ", ".join(parts) + "]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad)
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(close + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON with floats at 17 significant digits and non-finite values as null.

    Key order is insertion order, so equal inputs give byte-identical text.
    """
    out: list[str] = []
    _emit(_plain(obj), indent, 0, out)
    return "".join(out) + "\n"


def report_json(report: st.StabilityReport) -> str:
    return dumps(report.to_dict())


def sweep_row(report: st.StabilityReport) -> str:
    s = report.surface
    fields = [s["n"], s["H"], s["F"], s["kind"], s["theta"], report.lambda_min, report.trace,
              float(np.linalg.norm(report.centroid)), report.verdict.value]
    return ",".join(_csv_field(v) for v in fields)


def _csv_field(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g") if math.isfinite(v) else "nan"
    return str(v)
