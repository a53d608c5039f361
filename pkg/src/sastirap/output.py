"""
CSV and SVG writers for traces, sweeps, grids and pulse previews.

CSV is the data contract: header row, comma separator, LF line endings,
floats with 12 significant digits, frequencies as Omega/2pi in MHz.
Every data file gets a JSON sidecar holding the resolved configuration.
File names carry the scenario kind and a hash of the CSV content, so
re-emitting the same record rewrites the same bytes to the same path.
"""

import csv
import hashlib
import io
import json
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from . import __version__
from .config import angular_to_mhz
from .experiments import PreviewTable, SweepRecord
from .propagator import TraceRecord

__all__ = ["TRACE_COLUMNS", "PREVIEW_COLUMNS", "table_for", "format_csv",
           "read_csv", "emit_csv", "emit_plot", "render_svg"]

TRACE_COLUMNS = ("t_us", "pop_0", "pop_m1", "pop_p1")
PREVIEW_COLUMNS = ("t_us", "omega_s_mhz_over_2pi", "omega_p_mhz_over_2pi",
                   "abs_omega_a_mhz_over_2pi")


def _fmt(v):
    if isinstance(v, str):
        return v
    return format(float(v), ".12g")


def table_for(record):
    """Header and rows for any record type."""
    if isinstance(record, TraceRecord):
        rows = [(t, *p) for t, p in zip(record.times, record.populations)]
        return "trace", TRACE_COLUMNS, rows
    if isinstance(record, PreviewTable):
        cols = [record.t] + [angular_to_mhz(np.asarray(c)) for c in
                             (record.omega_s, record.omega_p,
                              record.abs_omega_a)]
        return "pulses", PREVIEW_COLUMNS, list(zip(*cols))
    if isinstance(record, SweepRecord):
        axes = dict(record.axes)
        protos = axes.pop("protocol")
        rows = []
        if list(axes) == ["T_us"]:
            header = ("protocol", "T_us", "efficiency", "max_intermediate")
            for i, p in enumerate(protos):
                for j, T in enumerate(axes["T_us"]):
                    rows.append((str(p), T, record.efficiencies[i, j],
                                 record.max_intermediate[i, j]))
            return "sweep", header, rows
        header = ("protocol", "sigma_us", "delta_t_us", "T_us", "efficiency",
                  "max_intermediate")
        sig = axes["sigma_us"]
        dts, Ts = record.coords["delta_t_us"], record.coords["T_us"]
        for i, p in enumerate(protos):
            for a in range(dts.shape[0]):
                for b in range(dts.shape[1]):
                    rows.append((str(p), sig[a], dts[a, b], Ts[a, b],
                                 record.efficiencies[i, a, b],
                                 record.max_intermediate[i, a, b]))
        return "grid", header, rows
    raise TypeError(f"cannot tabulate {type(record).__name__}")


def format_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def read_csv(path):
    """Header and rows; numeric cells become floats."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        rows = []
        for r in reader:
            out = []
            for cell in r:
                try:
                    out.append(float(cell))
                except ValueError:
                    out.append(cell)
            rows.append(tuple(out))
    return header, rows


def _metadata(record):
    if isinstance(record, TraceRecord):
        return record.meta or {}
    return record.metadata


def _write(path, text):
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return Path(path)


def _sidecar(path, record, config):
    meta = {"software": "sastirap", "version": __version__,
            "config": config.resolved,
            "record": _json_safe(_metadata(record))}
    return _write(path, json.dumps(meta, indent=2, sort_keys=True) + "\n")


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _json_safe(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def emit_csv(record, config):
    """Write ``<kind>-<hash>.csv`` and its ``.json`` sidecar.

    Returns the CSV path.
    """
    kind, header, rows = table_for(record)
    text = format_csv(header, rows)
    digest = hashlib.sha256(text.encode()).hexdigest()[:12]
    out = Path(config.output_dir)
    path = _write(out / f"{kind}-{digest}.csv", text)
    _sidecar(out / f"{kind}-{digest}.json", record, config)
    return path


# --- SVG -------------------------------------------------------------------

_W, _H = 640, 400
_M = dict(left=70, right=20, top=30, bottom=55)
_COLORS = ("#d62728", "#1f77b4", "#000000", "#2ca02c", "#ff7f0e")


class _Axes:
    def __init__(self, x0, y0, w, h, xlim, ylim):
        self.x0, self.y0, self.w, self.h = x0, y0, w, h
        self.xlim, self.ylim = xlim, ylim

    def px(self, x):
        a, b = self.xlim
        return self.x0 + (np.asarray(x) - a) / ((b - a) or 1) * self.w

    def py(self, y):
        a, b = self.ylim
        return self.y0 + self.h - (np.asarray(y) - a) / ((b - a) or 1) * self.h

    def frame(self, xlabel, ylabel, nticks=5):
        parts = [f'<rect class="frame" x="{self.x0:.2f}" y="{self.y0:.2f}" '
                 f'width="{self.w:.2f}" height="{self.h:.2f}" fill="none" '
                 f'stroke="#444"/>']
        for v in np.linspace(*self.xlim, nticks):
            parts.append(f'<text x="{self.px(v):.2f}" y="{self.y0 + self.h + 16:.2f}" '
                         f'font-size="11" text-anchor="middle">{v:.3g}</text>')
        for v in np.linspace(*self.ylim, nticks):
            parts.append(f'<text x="{self.x0 - 6:.2f}" y="{self.py(v) + 4:.2f}" '
                         f'font-size="11" text-anchor="end">{v:.3g}</text>')
        parts.append(f'<text x="{self.x0 + self.w / 2:.2f}" '
                     f'y="{self.y0 + self.h + 38:.2f}" font-size="13" '
                     f'text-anchor="middle">{escape(xlabel)}</text>')
        cx, cy = self.x0 - 48, self.y0 + self.h / 2
        parts.append(f'<text x="{cx:.2f}" y="{cy:.2f}" font-size="13" '
                     f'text-anchor="middle" transform="rotate(-90 {cx:.2f} '
                     f'{cy:.2f})">{escape(ylabel)}</text>')
        return parts

    def polyline(self, x, y, color, label):
        pts = " ".join(f"{a:.3f},{b:.3f}" for a, b in zip(self.px(x), self.py(y)))
        return (f'<polyline class="curve" data-label="{escape(label)}" '
                f'fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')


def _legend(labels, x, y):
    out = []
    for k, lab in enumerate(labels):
        c = _COLORS[k % len(_COLORS)]
        out.append(f'<text x="{x}" y="{y + 14 * k}" font-size="11" '
                   f'fill="{c}">{escape(lab)}</text>')
    return out


def _doc(body, width=_W, height=_H):
    return ('<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}">\n'
            + "\n".join(body) + "\n</svg>\n")


def _curves_svg(x, ys, labels, xlabel, ylabel, ylim):
    ax = _Axes(_M["left"], _M["top"], _W - _M["left"] - _M["right"],
               _H - _M["top"] - _M["bottom"], (float(x[0]), float(x[-1])), ylim)
    body = ax.frame(xlabel, ylabel)
    for k, (y, lab) in enumerate(zip(ys, labels)):
        y = np.clip(y, *ylim)
        body.append(ax.polyline(x, y, _COLORS[k % len(_COLORS)], lab))
    body += _legend(labels, ax.x0 + ax.w - 110, ax.y0 + 14)
    return _doc(body)


def _gray(v):
    g = int(round(255 * float(np.clip(v, 0, 1))))
    return f"#{g:02x}{g:02x}{g:02x}"


def _grid_svg(record):
    protos = list(record.axes["protocol"])
    sig = np.asarray(record.axes["sigma_us"])
    ratio = np.asarray(record.axes["delta_t_over_sigma"])
    dmax = float(np.max(record.coords["delta_t_us"])) or 1.0
    pw, ph = 300, 300
    width = _M["left"] + len(protos) * (pw + _M["left"]) + _M["right"]
    height = ph + _M["top"] + _M["bottom"] + 10
    body = []
    ds = (sig[-1] - sig[0]) / max(len(sig) - 1, 1) if len(sig) > 1 else sig[0]
    for k, p in enumerate(protos):
        x0 = _M["left"] + k * (pw + _M["left"])
        ax = _Axes(x0, _M["top"], pw, ph,
                   (float(sig[0] - ds / 2), float(sig[-1] + ds / 2)),
                   (0.0, dmax * (1 + 0.5 / max(len(ratio) - 1, 1))))
        cells = []
        for a, s in enumerate(sig):
            for b in range(len(ratio)):
                dt = record.coords["delta_t_us"][a, b]
                hh = s * (ratio[1] - ratio[0]) if len(ratio) > 1 else ax.ylim[1]
                xa, xb = ax.px(s - ds / 2), ax.px(s + ds / 2)
                ya, yb = ax.py(dt + hh / 2), ax.py(max(dt - hh / 2, 0))
                eff = record.efficiencies[k, a, b]
                cells.append(f'<rect class="cell" x="{xa:.2f}" y="{ya:.2f}" '
                             f'width="{xb - xa:.2f}" height="{yb - ya:.2f}" '
                             f'fill="{_gray(eff)}" data-efficiency="{eff:.6f}"/>')
        body.append(f'<g class="panel" data-protocol="{escape(str(p))}">')
        body += cells
        body += ax.frame("sigma (us)", "delta_t (us)")
        body.append(f'<text x="{x0 + pw / 2}" y="{_M["top"] - 10}" font-size="13" '
                    f'text-anchor="middle">{escape(str(p))}: efficiency</text>')
        body.append("</g>")
    return _doc(body, width, height)


def render_svg(record):
    """SVG text for a record."""
    if isinstance(record, TraceRecord):
        return _curves_svg(record.times, record.populations.T,
                           ["|0>", "|-1>", "|+1>"], "t (us)", "population",
                           (0.0, 1.0))
    if isinstance(record, PreviewTable):
        ys = [angular_to_mhz(np.asarray(c)) for c in
              (record.omega_s, record.omega_p, record.abs_omega_a)]
        top = float(max(np.max(y) for y in ys)) * 1.05 or 1.0
        return _curves_svg(record.t, ys, ["Omega_S", "Omega_P", "|Omega_a|"],
                           "t (us)", "Rabi frequency / 2pi (MHz)", (0.0, top))
    if isinstance(record, SweepRecord):
        if "T_us" in record.axes:
            return _curves_svg(np.asarray(record.axes["T_us"]),
                               record.efficiencies,
                               [str(p) for p in record.axes["protocol"]],
                               "T (us)", "transfer efficiency", (0.0, 1.0))
        return _grid_svg(record)
    raise TypeError(f"cannot plot {type(record).__name__}")


def emit_plot(record, config):
    """Write ``<kind>-<hash>.svg`` next to the CSV output; returns the path."""
    kind, header, rows = table_for(record)
    digest = hashlib.sha256(format_csv(header, rows).encode()).hexdigest()[:12]
    return _write(Path(config.output_dir) / f"{kind}-{digest}.svg",
                  render_svg(record))
