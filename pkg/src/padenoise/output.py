"""Result files: CSV tables, JSON manifests and a minimal SVG scatter writer.

Everything written here is deterministic (no timestamps, fixed float
formatting), so rerunning a manifest reproduces files byte for byte.
"""

from __future__ import annotations

import json
import math
import os
from pathlib import Path

OUT_ENV = "PADENOISE_OUT"


def default_out_dir() -> Path:
    return Path(os.environ.get(OUT_ENV, "padenoise-out"))


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    try:
        return repr(float(v)) if not isinstance(v, str) else v
    except (TypeError, ValueError):
        return str(v)


def write_csv(path, header, rows, meta: dict | None = None) -> Path:
    """CSV with optional ``# key: value`` header lines (seeds, config)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    for k, v in (meta or {}).items():
        lines.append(f"# {k}: {v}")
    lines.append(",".join(header))
    for r in rows:
        lines.append(",".join(fmt(v) for v in r))
    path.write_text("\n".join(lines) + "\n")
    return path


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    lines = [l for l in Path(path).read_text().splitlines() if l and not l.startswith("#")]
    header = lines[0].split(",")
    return header, [l.split(",") for l in lines[1:]]


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (str, int, bool)) or obj is None:
        return obj
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else str(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    try:
        return float(obj)
    except (TypeError, ValueError):
        return str(obj)


def write_json(path, data) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n")
    return path


def write_svg_scatter(path, series: dict, title: str = "", xlabel: str = "", ylabel: str = "",
                      lines: dict | None = None, size: tuple[int, int] = (480, 480), equal_aspect: bool = False) -> Path:
    """Scatter plot of ``{label: [(x, y), ...]}`` with optional polylines."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    W, H = size
    pad = 50
    pts = [p for v in series.values() for p in v] + [p for v in (lines or {}).values() for p in v]
    pts = [(float(x), float(y)) for x, y in pts if math.isfinite(x) and math.isfinite(y)]
    if not pts:
        pts = [(0.0, 0.0), (1.0, 1.0)]
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    if equal_aspect:
        span = max(x1 - x0, y1 - y0)
        cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
        x0, x1, y0, y1 = cx - span / 2, cx + span / 2, cy - span / 2, cy + span / 2

    def X(x):
        return pad + (x - x0) / (x1 - x0) * (W - 2 * pad)

    def Y(y):
        return H - pad - (y - y0) / (y1 - y0) * (H - 2 * pad)

    palette = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
           f'<rect width="{W}" height="{H}" fill="white"/>',
           f'<line x1="{pad}" y1="{H - pad}" x2="{W - pad}" y2="{H - pad}" stroke="black"/>',
           f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{H - pad}" stroke="black"/>',
           f'<text x="{W / 2:.1f}" y="20" text-anchor="middle" font-size="14">{title}</text>',
           f'<text x="{W / 2:.1f}" y="{H - 10}" text-anchor="middle" font-size="12">{xlabel}</text>',
           f'<text x="14" y="{H / 2:.1f}" text-anchor="middle" font-size="12" '
           f'transform="rotate(-90 14 {H / 2:.1f})">{ylabel}</text>',
           f'<text x="{pad}" y="{H - pad + 15}" font-size="10">{x0:.4g}</text>',
           f'<text x="{W - pad}" y="{H - pad + 15}" font-size="10" text-anchor="end">{x1:.4g}</text>',
           f'<text x="{pad - 4}" y="{H - pad}" font-size="10" text-anchor="end">{y0:.4g}</text>',
           f'<text x="{pad - 4}" y="{pad + 4}" font-size="10" text-anchor="end">{y1:.4g}</text>']
    for i, (label, line) in enumerate((lines or {}).items()):
        col = palette[(i + len(series)) % len(palette)]
        d = " ".join(f"{X(float(x)):.2f},{Y(float(y)):.2f}" for x, y in line)
        out.append(f'<polyline points="{d}" fill="none" stroke="{col}"><title>{label}</title></polyline>')
    for i, (label, ps) in enumerate(series.items()):
        col = palette[i % len(palette)]
        out.append(f'<g fill="{col}"><title>{label}</title>')
        for x, y in ps:
            x, y = float(x), float(y)
            if x0 <= x <= x1 and y0 <= y <= y1:
                out.append(f'<circle cx="{X(x):.2f}" cy="{Y(y):.2f}" r="2.5"/>')
        out.append("</g>")
        out.append(f'<text x="{W - pad}" y="{pad + 14 * i}" font-size="11" fill="{col}" text-anchor="end">{label}</text>')
    out.append("</svg>")
    path.write_text("\n".join(out) + "\n")
    return path
