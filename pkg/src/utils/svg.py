"""Static SVG pictures of ``conv(A)`` for ell in {1, 2}."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from collections import Counter
from pathlib import Path
from typing import List, Sequence, Tuple

from ..action import WeightMatrix
from ..errors import RefusedError

SIZE = 400
MARGIN = 40
SVG_NS = "http://www.w3.org/2000/svg"

Point = Tuple[int, int]


def _cross(o: Point, a: Point, b: Point) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Sequence[Point]) -> List[Point]:
    """Monotone chain hull, counter-clockwise, collinear points dropped."""

    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: List[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def render_svg(weights: WeightMatrix) -> str:
    if weights.ell not in (1, 2):
        raise RefusedError(f"図の出力は ell = 1, 2 のみ対応しています（ell={weights.ell}）。")

    if weights.ell == 1:
        points = [(a, 0) for a in weights.entries[0]]
    else:
        points = [tuple(c) for c in weights.columns()]  # type: ignore[misc]
    extent = max([1] + [max(abs(x), abs(y)) for x, y in points])
    scale = (SIZE / 2 - MARGIN) / extent
    centre = SIZE / 2

    def project(p: Point) -> Tuple[str, str]:
        return _fmt(centre + p[0] * scale), _fmt(centre - p[1] * scale)

    root = ET.Element(
        "svg",
        {
            "xmlns": SVG_NS,
            "width": str(SIZE),
            "height": str(SIZE),
            "viewBox": f"0 0 {SIZE} {SIZE}",
        },
    )
    ET.SubElement(root, "title").text = f"conv(A), ell={weights.ell}, n={weights.n}"

    hull = convex_hull(points)
    if len(hull) == 2 or weights.ell == 1:
        (x1, y1), (x2, y2) = project(hull[0]), project(hull[-1])
        ET.SubElement(
            root,
            "line",
            {"x1": x1, "y1": y1, "x2": x2, "y2": y2, "stroke": "black", "stroke-width": "2"},
        )
    elif len(hull) > 2:
        ET.SubElement(
            root,
            "polygon",
            {
                "points": " ".join(",".join(project(p)) for p in hull),
                "fill": "#dde8f5",
                "stroke": "black",
                "stroke-width": "2",
            },
        )

    ox, oy = project((0, 0))
    ET.SubElement(root, "circle", {"cx": ox, "cy": oy, "r": "4", "fill": "red", "class": "origin"})
    ET.SubElement(root, "text", {"x": _fmt(centre + 6), "y": _fmt(centre + 16), "font-size": "12"}).text = "0"

    multiplicity = Counter(points)
    for p in sorted(multiplicity):
        x, y = project(p)
        ET.SubElement(root, "circle", {"cx": x, "cy": y, "r": "5", "fill": "black", "class": "weight"})
        label = f"({p[0]})" if weights.ell == 1 else f"({p[0]},{p[1]})"
        if multiplicity[p] > 1:
            label += f" n={multiplicity[p]}"
        ET.SubElement(
            root,
            "text",
            {"x": _fmt(float(x) + 8), "y": _fmt(float(y) - 8), "font-size": "12"},
        ).text = label

    return ET.tostring(root, encoding="unicode") + "\n"


def emit_svg(weights: WeightMatrix, path: Path | str) -> Path:
    target = Path(path)
    target.write_text(render_svg(weights), encoding="utf-8")
    return target
