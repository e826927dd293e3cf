"""Flat-file emission: trace CSV, JSON records, reference tables, SVG polylines."""

from __future__ import annotations

import io
import json
from importlib import resources

import numpy as np

SCHEMA_VERSION = "1"


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def trace_to_csv(header: list[str], data: np.ndarray) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in data:
        buf.write(",".join(format_float(x) for x in row) + "\n")
    return buf.getvalue()


def csv_to_trace(text: str) -> tuple[list[str], np.ndarray]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    header = lines[0].split(",")
    data = np.array([[float(x) for x in line.split(",")] for line in lines[1:]], dtype=float)
    return header, data.reshape(-1, len(header))


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def dumps(record: dict) -> str:
    return json.dumps(record, indent=2, allow_nan=True) + "\n"


def load_reference() -> dict:
    text = resources.files("aqc_entangle").joinpath("data/reference_runtimes.json").read_text("utf-8")
    return json.loads(text)


def reference_for(algorithm: str, n_qubits: int) -> dict | None:
    return load_reference()["tables"].get(f"{algorithm}/{n_qubits}")


def within_tolerance(value: float, expected: float, rel: float = 0.02, absolute: float = 2.0) -> bool:
    """±rel relative or ±absolute, whichever is larger."""
    return abs(value - expected) <= max(rel * abs(expected), absolute)


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf")


def svg_polylines(x: np.ndarray, series: dict[str, np.ndarray], width: int = 640, height: int = 400,
                  max_points: int = 2000) -> str:
    """Minimal static line plot; each series is scaled to its own [min, max]."""
    pad = 40
    step = max(1, x.size // max_points)
    idx = np.arange(0, x.size, step)
    if idx[-1] != x.size - 1:
        idx = np.append(idx, x.size - 1)
    xs = x[idx]
    x0, x1 = float(xs.min()), float(xs.max())
    xspan = (x1 - x0) or 1.0
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="{pad}" y="{pad}" width="{width - 2 * pad}" height="{height - 2 * pad}" '
        'fill="none" stroke="#888"/>',
    ]
    for k, (name, y) in enumerate(series.items()):
        ys = np.asarray(y, dtype=float)[idx]
        y0, y1 = float(np.min(ys)), float(np.max(ys))
        yspan = (y1 - y0) or 1.0
        px = pad + (xs - x0) / xspan * (width - 2 * pad)
        py = height - pad - (ys - y0) / yspan * (height - 2 * pad)
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
        color = _PALETTE[k % len(_PALETTE)]
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        parts.append(
            f'<text x="{pad + 6}" y="{pad + 16 + 14 * k}" font-size="12" fill="{color}">'
            f"{name} [{y0:.4g}, {y1:.4g}]</text>"
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
