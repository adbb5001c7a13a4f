"""Report, curve and plot files written by the CLI."""

from __future__ import annotations

import csv
import math
from collections.abc import Sequence
from pathlib import Path
from xml.etree.ElementTree import Element, SubElement, tostring

from src.detmetrics.curves import OperatingPoint, lamr
from src.detmetrics.evaluate import EvalReport
from src.salmetrics.evaluate import SaliencyScores
from src.utils.errors import EmptyCurve, FormatError, IoError

CURVE_HEADER = "threshold,fppi,miss_rate"
DETECTION_HEADER = ["method", "condition", "frames", "ground_truth", "map", "lamr"]
SALIENCY_HEADER = ["method", "f_beta", "mae"]

SVG_WIDTH = 640
SVG_HEIGHT = 480
PLOT_LEFT, PLOT_TOP, PLOT_RIGHT, PLOT_BOTTOM = 70, 30, 600, 420
FPPI_RANGE = (-3.0, 1.0)
MISS_RANGE = (-2.0, 0.0)
MISS_TICKS = (0.01, 0.05, 0.1, 0.2, 0.5, 1.0)
PALETTE = ("#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf")


def _write_text(path: str | Path, text: str) -> None:
    file_path = Path(path)
    try:
        file_path.write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise IoError(f"{file_path}: {exc}") from exc


def _read_text(path: str | Path) -> str:
    file_path = Path(path)
    try:
        return file_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"{file_path}: {exc}") from exc


def write_curve_csv(curve: Sequence[OperatingPoint], path: str | Path) -> None:
    rows = [CURVE_HEADER]
    rows.extend(f"{p.threshold:.6f},{p.fppi:.6f},{p.miss_rate:.6f}" for p in curve)
    _write_text(path, "\n".join(rows) + "\n")


def read_curve_csv(path: str | Path) -> list[OperatingPoint]:
    lines = _read_text(path).splitlines()
    if not lines or lines[0].strip() != CURVE_HEADER:
        raise FormatError(f"{path}: line 1: expected header {CURVE_HEADER!r}")
    out: list[OperatingPoint] = []
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise FormatError(f"{path}: line {line_no}: expected 3 columns")
        try:
            threshold, fppi, miss = (float(part) for part in parts)
            out.append(OperatingPoint(threshold=threshold, fppi=fppi, miss_rate=miss))
        except ValueError as exc:
            raise FormatError(f"{path}: line {line_no}: {exc}") from exc
    return out


def _x_pos(fppi: float) -> float:
    lo, hi = FPPI_RANGE
    value = min(max(math.log10(max(fppi, 10.0**lo)), lo), hi)
    return PLOT_LEFT + (value - lo) / (hi - lo) * (PLOT_RIGHT - PLOT_LEFT)


def _y_pos(miss: float) -> float:
    lo, hi = MISS_RANGE
    value = min(max(math.log10(max(miss, 10.0**lo)), lo), hi)
    return PLOT_BOTTOM - (value - lo) / (hi - lo) * (PLOT_BOTTOM - PLOT_TOP)


def _staircase(curve: Sequence[OperatingPoint]) -> str:
    coords: list[tuple[float, float]] = []
    prev_miss: float | None = None
    for point in curve:
        if prev_miss is not None:
            coords.append((_x_pos(point.fppi), _y_pos(prev_miss)))
        coords.append((_x_pos(point.fppi), _y_pos(point.miss_rate)))
        prev_miss = point.miss_rate
    # extend the last level to the right edge of the plot
    coords.append((float(PLOT_RIGHT), coords[-1][1]))
    return " ".join(f"{x:.2f},{y:.2f}" for x, y in coords)


def _text(parent: Element, x: float, y: float, body: str, **attrs: str) -> None:
    node = SubElement(parent, "text", {"x": f"{x:.2f}", "y": f"{y:.2f}", **attrs})
    node.text = body


def _tick(parent: Element, x1: float, y1: float, x2: float, y2: float) -> None:
    SubElement(
        parent, "line", {"x1": f"{x1:.2f}", "y1": f"{y1:.2f}", "x2": f"{x2:.2f}", "y2": f"{y2:.2f}"}
    )


def _axes(svg: Element) -> None:
    axes = SubElement(svg, "g", {"stroke": "#000000", "stroke-width": "1"})
    SubElement(
        axes,
        "rect",
        {
            "x": str(PLOT_LEFT),
            "y": str(PLOT_TOP),
            "width": str(PLOT_RIGHT - PLOT_LEFT),
            "height": str(PLOT_BOTTOM - PLOT_TOP),
            "fill": "none",
        },
    )
    labels = SubElement(svg, "g", {"font-family": "sans-serif", "font-size": "12"})
    for exponent in range(int(FPPI_RANGE[0]), int(FPPI_RANGE[1]) + 1):
        x = _x_pos(10.0**exponent)
        _tick(axes, x, PLOT_BOTTOM, x, PLOT_BOTTOM + 5)
        _text(labels, x, PLOT_BOTTOM + 20, f"1e{exponent}", **{"text-anchor": "middle"})
    for tick in MISS_TICKS:
        y = _y_pos(tick)
        _tick(axes, PLOT_LEFT - 5, y, PLOT_LEFT, y)
        _text(labels, PLOT_LEFT - 8, y + 4, f"{tick:g}", **{"text-anchor": "end"})
    mid_x = (PLOT_LEFT + PLOT_RIGHT) / 2
    mid_y = (PLOT_TOP + PLOT_BOTTOM) / 2
    _text(labels, mid_x, SVG_HEIGHT - 15, "false positives per image", **{"text-anchor": "middle"})
    _text(
        labels,
        15,
        mid_y,
        "miss rate",
        **{"text-anchor": "middle", "transform": f"rotate(-90 15 {mid_y:.2f})"},
    )


def write_curve_svg(
    curves: Sequence[tuple[str, Sequence[OperatingPoint]]], path: str | Path
) -> None:
    """Log-log miss rate vs FPPI plot, one polyline and one legend entry per method."""
    if not curves:
        raise EmptyCurve("no curves to plot")
    for name, curve in curves:
        if not curve:
            raise EmptyCurve(f"curve {name!r} has no operating points")

    svg = Element(
        "svg",
        {
            "xmlns": "http://www.w3.org/2000/svg",
            "width": str(SVG_WIDTH),
            "height": str(SVG_HEIGHT),
            "viewBox": f"0 0 {SVG_WIDTH} {SVG_HEIGHT}",
        },
    )
    _axes(svg)
    legend = SubElement(svg, "g", {"font-family": "sans-serif", "font-size": "12"})
    for pos, (name, curve) in enumerate(curves):
        color = PALETTE[pos % len(PALETTE)]
        SubElement(
            svg,
            "polyline",
            {"points": _staircase(curve), "fill": "none", "stroke": color, "stroke-width": "2"},
        )
        y = PLOT_BOTTOM - 15 - 18 * (len(curves) - 1 - pos)
        SubElement(
            legend,
            "rect",
            {
                "x": str(PLOT_RIGHT - 190),
                "y": f"{y - 9:.2f}",
                "width": "12",
                "height": "12",
                "fill": color,
            },
        )
        _text(legend, PLOT_RIGHT - 172, y + 1, f"{lamr(curve) * 100:.2f}% {name}")
    body = tostring(svg, encoding="unicode")
    _write_text(path, '<?xml version="1.0" encoding="utf-8"?>\n' + body + "\n")


def _write_csv(path: str | Path, header: list[str], rows: list[list[str]]) -> None:
    file_path = Path(path)
    try:
        with file_path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise IoError(f"{file_path}: {exc}") from exc


def write_detection_report(reports: Sequence[EvalReport], path: str | Path) -> None:
    rows = [
        [
            r.method,
            r.condition,
            str(r.frame_count),
            str(r.gt_count),
            f"{r.map:.6f}",
            f"{r.lamr:.6f}",
        ]
        for r in reports
    ]
    _write_csv(path, DETECTION_HEADER, rows)


def format_detection_table(reports: Sequence[EvalReport], baseline: str | None = None) -> str:
    """Conditions as row groups, methods as columns; deltas are absolute changes vs the baseline."""
    methods = list(dict.fromkeys(r.method for r in reports))
    conditions = list(dict.fromkeys(r.condition for r in reports))
    cell = {(r.method, r.condition): r for r in reports}
    width = max([16, *(len(m) + 2 for m in methods)])
    lines = ["Condition  Metric" + "".join(m.rjust(width) for m in methods)]
    for condition in conditions:
        for metric in ("map", "lamr"):
            row = f"{condition:<10} {metric.upper():<6}"
            for method in methods:
                report = cell.get((method, condition))
                if report is None:
                    row += "-".rjust(width)
                    continue
                value = getattr(report, metric)
                text = f"{value:.3f}"
                base = cell.get((baseline, condition)) if baseline else None
                if base is not None and method != baseline:
                    text += f" ({value - getattr(base, metric):+.3f})"
                row += text.rjust(width)
            lines.append(row)
    return "\n".join(lines) + "\n"


def write_saliency_report(scores: Sequence[SaliencyScores], path: str | Path) -> None:
    rows = [[s.method, f"{s.f_beta:.6f}", f"{s.mae:.6f}"] for s in scores]
    _write_csv(path, SALIENCY_HEADER, rows)


def format_saliency_table(scores: Sequence[SaliencyScores]) -> str:
    width = max([10, *(len(s.method) + 2 for s in scores)])
    lines = ["Method".ljust(width) + "F_beta".rjust(10) + "MAE".rjust(10)]
    lines.extend(s.method.ljust(width) + f"{s.f_beta:10.4f}" + f"{s.mae:10.4f}" for s in scores)
    return "\n".join(lines) + "\n"
