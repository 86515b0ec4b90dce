"""Deterministic SVG drawings of wind-tree trajectories and cocycle boxes."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from .billiard import CSV_COLUMNS

BOX_STYLES = ("#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2")
MAX_SCATTERERS = 40_000


class CsvFormatError(ValueError):
    """A trajectory CSV that does not follow the expected columns."""


@dataclass(frozen=True)
class TrajectoryPoint:
    n: int
    t: float
    x: float
    y: float
    event_type: str
    cell_i: int
    cell_j: int
    letter: str
    kappa: str


def read_trajectory_csv(text: str) -> List[TrajectoryPoint]:
    """Parse trajectory CSV text, reporting the first malformed line.

    Leading ``#`` lines are metadata and are skipped.
    """
    lines = text.splitlines()
    head = 0
    while head < len(lines) and lines[head].startswith("#"):
        head += 1
    if head == len(lines):
        return []
    if tuple(next(csv.reader([lines[head]]))) != CSV_COLUMNS:
        raise CsvFormatError("line %d: expected header %s" % (head + 1, ",".join(CSV_COLUMNS)))
    out = []
    for lineno, row in enumerate(csv.reader(lines[head + 1 :]), start=head + 2):
        if not row:
            continue
        if len(row) != len(CSV_COLUMNS):
            raise CsvFormatError("line %d: expected %d columns, got %d" % (lineno, len(CSV_COLUMNS), len(row)))
        try:
            out.append(
                TrajectoryPoint(
                    int(row[0]), float(row[1]), float(row[2]), float(row[3]),
                    row[4], int(row[5]), int(row[6]), row[7], row[8],
                )
            )
        except ValueError as exc:
            raise CsvFormatError("line %d: %s" % (lineno, exc)) from exc
    return out


def write_trajectory_csv(rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _fmt(v: float) -> str:
    s = "%.4f" % v
    return "0.0000" if s == "-0.0000" else s


def render_svg(
    points: Sequence[Tuple[float, float]],
    a: float,
    b: float,
    boxes: Sequence[Tuple[int, Tuple[float, float, float, float]]] = (),
    window: Optional[Tuple[float, float, float, float]] = None,
    size: int = 800,
    header: Optional[str] = None,
) -> str:
    """SVG with scatterers, the trajectory polyline and labelled boxes.

    ``boxes`` holds ``(level, (xmin, ymin, xmax, ymax))`` in table
    coordinates.  ``window`` defaults to the bounding box of everything drawn.
    """
    if window is None:
        xs = [p[0] for p in points] + [c for _, bx in boxes for c in (bx[0], bx[2])]
        ys = [p[1] for p in points] + [c for _, bx in boxes for c in (bx[1], bx[3])]
        if not xs:
            xs, ys = [0.0], [0.0]
        window = (min(xs) - 1, min(ys) - 1, max(xs) + 1, max(ys) + 1)
    x0, y0, x1, y1 = window
    span = max(x1 - x0, y1 - y0, 1e-9)
    scale = size / span
    width, height = (x1 - x0) * scale, (y1 - y0) * scale

    def sx(x: float) -> str:
        return _fmt((x - x0) * scale)

    def sy(y: float) -> str:
        return _fmt((y1 - y) * scale)

    out = ['<?xml version="1.0" encoding="UTF-8"?>']
    if header:
        out.append("<!-- %s -->" % header.replace("--", "-"))
    out.append(
        '<svg xmlns="http://www.w3.org/2000/svg" width="%s" height="%s" viewBox="0 0 %s %s">'
        % (_fmt(width), _fmt(height), _fmt(width), _fmt(height))
    )
    out.append('<rect x="0" y="0" width="%s" height="%s" fill="white"/>' % (_fmt(width), _fmt(height)))

    i_lo, i_hi = math.floor(x0) - 1, math.ceil(x1) + 1
    j_lo, j_hi = math.floor(y0) - 1, math.ceil(y1) + 1
    if (i_hi - i_lo + 1) * (j_hi - j_lo + 1) <= MAX_SCATTERERS:
        out.append('<g id="scatterers" fill="#444444">')
        for i in range(i_lo, i_hi + 1):
            for j in range(j_lo, j_hi + 1):
                out.append(
                    '<rect x="%s" y="%s" width="%s" height="%s"/>'
                    % (sx(i - a / 2), sy(j + b / 2), _fmt(a * scale), _fmt(b * scale))
                )
        out.append("</g>")

    for idx, (level, (bx0, by0, bx1, by1)) in enumerate(sorted(boxes)):
        color = BOX_STYLES[idx % len(BOX_STYLES)]
        out.append(
            '<rect class="box" data-level="%d" x="%s" y="%s" width="%s" height="%s" '
            'fill="none" stroke="%s" stroke-width="%s" stroke-dasharray="%d,3"/>'
            % (level, sx(bx0), sy(by1), _fmt((bx1 - bx0) * scale), _fmt((by1 - by0) * scale),
               color, _fmt(1.0 + 0.5 * idx), 4 + 2 * idx)
        )

    if len(points) >= 2:
        coords = " ".join("%s,%s" % (sx(x), sy(y)) for x, y in points)
        out.append('<polyline id="trajectory" fill="none" stroke="#1f77b4" stroke-width="1" points="%s"/>' % coords)
    out.append("</svg>")
    return "\n".join(out) + "\n"


def box_rectangles(
    levels: Sequence[int],
    level_boxes: Sequence[Tuple[int, int, int, int]],
    anchor: Tuple[int, int],
) -> List[Tuple[int, Tuple[float, float, float, float]]]:
    """Cell boxes turned into table rectangles around the anchor junction.

    Cell ``(i, j)`` of a box covers the unit square ``[i, i+1] x [j, j+1]``
    shifted by the anchor.
    """
    ax, ay = anchor
    out = []
    for level, (xmin, ymin, xmax, ymax) in zip(levels, level_boxes):
        out.append(
            (level, (ax + xmin, ay + ymin, ax + xmax + 1.0, ay + ymax + 1.0))
        )
    return out
