"""SVG documents, ASCII previews and contact sheets.

Output is byte-deterministic: every number goes through ``fmt`` (fixed four
decimals, negative zero folded) and all iteration orders are fixed.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .errors import KolamError
from .geometry import (
    Arc,
    ClosedPath,
    FaceSet,
    Piece,
    RenderParams,
    Segment,
    check_dot_radius,
    faces,
    offset_path,
    offset_piece,
    piece_bounds,
    smooth_path,
)
from .grid import GridSpec
from .mapping import HATCH_SPACING, FillKind, LineType, RenderPlan, rgb_hex
from .trace import GateConfig, trace

BACKGROUND = "#2e2622"
CAPTION_HEIGHT = 28.0
REGION_CLASSES = ("all", "dots", "corridors")


def fmt(v: float) -> str:
    s = f"{v:.4f}"
    return "0.0000" if s == "-0.0000" else s


@dataclass(frozen=True)
class Scene:
    grid: GridSpec
    centerline: tuple[ClosedPath, ...]
    offsets: tuple[ClosedPath, ...]  # both sides of every loop; empty for single lines
    regions: FaceSet
    filled: tuple[int, ...]  # indices into regions.interior that receive the fill
    plan: RenderPlan
    params: RenderParams


def build_scene(config: GateConfig, plan: RenderPlan, params: RenderParams | None = None,
                region_class: str = "all") -> Scene:
    params = params or RenderParams()
    check_dot_radius(plan.dot_radius, params.stroke_width, params.half_gap)
    if region_class not in REGION_CLASSES:
        raise ValueError(f"region class must be one of {', '.join(REGION_CLASSES)}")
    paths = tuple(smooth_path(trace(config), config.grid))
    offsets: tuple[ClosedPath, ...] = ()
    if plan.line_type is not LineType.SINGLE:
        offsets = tuple(
            offset_path(p, d) for p in paths for d in (params.half_gap, -params.half_gap)
        )
    fs = faces(config)
    filled: tuple[int, ...] = ()
    if plan.fill.kind is not FillKind.EMPTY:
        filled = tuple(
            k for k in range(len(fs.interior))
            if region_class == "all" or (fs.region_kind(k) == "dot") == (region_class == "dots")
        )
    return Scene(config.grid, paths, offsets, fs, filled, plan, params)


class _Canvas:
    """Canvas units (y up) to SVG pixels (y down)."""

    def __init__(self, grid: GridSpec, params: RenderParams):
        self.ppu = params.pixels_per_unit
        self.margin = params.margin
        self.height_units = grid.canvas_height
        self.width_px = (grid.canvas_width + 2 * params.margin) * self.ppu
        self.height_px = (grid.canvas_height + 2 * params.margin) * self.ppu

    def x(self, x: float) -> str:
        return fmt((self.margin + x) * self.ppu)

    def y(self, y: float) -> str:
        return fmt((self.margin + self.height_units - y) * self.ppu)

    def pt(self, p) -> str:
        return f"{self.x(p[0])} {self.y(p[1])}"

    def length(self, v: float) -> str:
        return fmt(v * self.ppu)


def _piece_cmd(cv: _Canvas, piece: Piece) -> str:
    if isinstance(piece, Segment):
        return f"L {cv.pt(piece.end)}"
    r = cv.length(piece.radius)
    large = 1 if abs(piece.sweep) > math.pi else 0
    sweep = 0 if piece.ccw else 1  # the y flip turns canvas-ccw into SVG negative-angle
    return f"A {r} {r} 0 {large} {sweep} {cv.pt(piece.end)}"


def path_data(cv: _Canvas, paths) -> str:
    parts = []
    for path in paths:
        cmds = [f"M {cv.pt(path.pieces[0].start)}"]
        cmds.extend(_piece_cmd(cv, p) for p in path.pieces)
        cmds.append("Z")
        parts.append(" ".join(cmds))
    return " ".join(parts)


def _band_piece(cv: _Canvas, piece: Piece, delta: float) -> str:
    """Closed outline of the strip of half-width delta around one piece."""
    left = offset_piece(piece, delta)
    right = offset_piece(piece, -delta)
    back = _reversed(right)
    return (
        f"M {cv.pt(left.start)} {_piece_cmd(cv, left)} L {cv.pt(back.start)} {_piece_cmd(cv, back)} Z"
    )


def _reversed(piece: Piece) -> Piece:
    if isinstance(piece, Segment):
        return Segment(piece.end, piece.start)
    return Arc(piece.center, piece.radius, piece.end_angle, piece.start_angle, not piece.ccw)


def _region_bounds(paths) -> tuple[float, float, float, float]:
    boxes = [piece_bounds(p) for path in paths for p in path.pieces]
    return (
        min(b[0] for b in boxes), min(b[1] for b in boxes),
        max(b[2] for b in boxes), max(b[3] for b in boxes),
    )


def _hatch(cv: _Canvas, kind: FillKind, spacing: float, bounds, color: str, width: str) -> list[str]:
    x0, y0, x1, y1 = bounds
    out = []
    line = f'stroke="{color}" stroke-width="{width}"'
    if kind is FillKind.HATCH_H:
        for k in range(math.floor(y0 / spacing), math.ceil(y1 / spacing) + 1):
            y = k * spacing
            out.append(f'<line x1="{cv.x(x0)}" y1="{cv.y(y)}" x2="{cv.x(x1)}" y2="{cv.y(y)}" {line}/>')
    elif kind is FillKind.HATCH_V:
        for k in range(math.floor(x0 / spacing), math.ceil(x1 / spacing) + 1):
            x = k * spacing
            out.append(f'<line x1="{cv.x(x)}" y1="{cv.y(y0)}" x2="{cv.x(x)}" y2="{cv.y(y1)}" {line}/>')
    elif kind is FillKind.HATCH_D:
        step = spacing * math.sqrt(2)  # perpendicular spacing between lines x - y = c
        for k in range(math.floor((x0 - y1) / step), math.ceil((x1 - y0) / step) + 1):
            c = k * step
            out.append(
                f'<line x1="{cv.x(y0 + c)}" y1="{cv.y(y0)}" x2="{cv.x(y1 + c)}" y2="{cv.y(y1)}" {line}/>'
            )
    elif kind is FillKind.CHECKER:
        for i in range(math.floor(x0 / spacing), math.ceil(x1 / spacing)):
            for j in range(math.floor(y0 / spacing), math.ceil(y1 / spacing)):
                if (i + j) % 2:
                    continue
                out.append(
                    f'<rect x="{cv.x(i * spacing)}" y="{cv.y((j + 1) * spacing)}" '
                    f'width="{cv.length(spacing)}" height="{cv.length(spacing)}" fill="{color}"/>'
                )
    elif kind is FillKind.DOTS:
        r = cv.length(spacing * 0.18)
        for i in range(math.floor(x0 / spacing), math.ceil(x1 / spacing)):
            for j in range(math.floor(y0 / spacing), math.ceil(y1 / spacing)):
                cx, cy = (i + 0.5) * spacing, (j + 0.5) * spacing
                out.append(f'<circle cx="{cv.x(cx)}" cy="{cv.y(cy)}" r="{r}" fill="{color}"/>')
    return out


def _inset(path: ClosedPath, d: float):
    """Pieces of a region boundary pushed d to the left (into the region)."""
    pieces = []
    for piece in path.pieces:
        if isinstance(piece, Arc) and piece.ccw and piece.radius - d <= 0:
            continue
        pieces.append(offset_piece(piece, d))
    return pieces


def _concentric_paths(cv: _Canvas, boundary, spacing: float, bounds, line: str) -> list[str]:
    x0, y0, x1, y1 = bounds
    reach = max(x1 - x0, y1 - y0) / 2
    out = []
    for k in range(1, int(reach / spacing) + 1):
        d = k * spacing
        cmds = []
        for path in boundary:
            pieces = _inset(path, d)
            if not pieces:
                continue
            cmds.append(f"M {cv.pt(pieces[0].start)}")
            for p in pieces:
                cmds.append(f"L {cv.pt(p.start)}")
                cmds.append(_piece_cmd(cv, p))
            cmds.append("Z")
        if cmds:
            out.append(f'<path d="{" ".join(cmds)}" fill="none" {line}/>')
    return out


def render_svg(config: GateConfig, plan: RenderPlan, params: RenderParams | None = None,
               region_class: str = "all", id_prefix: str = "k") -> str:
    scene = build_scene(config, plan, params, region_class)
    return scene_svg(scene, id_prefix)


def scene_svg(scene: Scene, id_prefix: str = "k") -> str:
    params, plan = scene.params, scene.plan
    cv = _Canvas(scene.grid, params)
    color = rgb_hex(plan.color)
    stroke = cv.length(params.stroke_width)
    w, h = fmt(cv.width_px), fmt(cv.height_px)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect x="0.0000" y="0.0000" width="{w}" height="{h}" fill="{BACKGROUND}"/>',
    ]

    if scene.filled:
        out.append("<defs>")
        for k in scene.filled:
            boundary = scene.regions.interior[k].boundary
            out.append(
                f'<clipPath id="{id_prefix}-region-{k}"><path d="{path_data(cv, boundary)}" '
                f'clip-rule="evenodd"/></clipPath>'
            )
        out.append("</defs>")
        spacing = HATCH_SPACING[plan.fill.density]
        hatch_width = cv.length(params.stroke_width * 0.5)
        line = f'stroke="{color}" stroke-width="{hatch_width}"'
        out.append(f'<g id="{id_prefix}-fills" fill="none">')
        for k in scene.filled:
            boundary = scene.regions.interior[k].boundary
            bounds = _region_bounds(boundary)
            out.append(
                f'<g clip-path="url(#{id_prefix}-region-{k})" data-region="{k}" '
                f'data-fill="{plan.fill.kind.value}" data-density="{plan.fill.density.value}">'
            )
            if plan.fill.kind is FillKind.CONCENTRIC:
                out.extend(_concentric_paths(cv, boundary, spacing, bounds, line))
            else:
                out.extend(_hatch(cv, plan.fill.kind, spacing, bounds, color, hatch_width))
            out.append("</g>")
        out.append("</g>")

    if plan.line_type is LineType.DOUBLE_FILLED:
        out.append(f'<g id="{id_prefix}-band" fill="{color}" fill-opacity="0.85" stroke="none">')
        for path in scene.centerline:
            for piece in path.pieces:
                out.append(f'<path d="{_band_piece(cv, piece, params.half_gap)}"/>')
        out.append("</g>")

    strokes = scene.centerline if plan.line_type is LineType.SINGLE else scene.offsets
    out.append(
        f'<g id="{id_prefix}-line" data-line-type="{plan.line_type.value}" data-pigment="{escape(plan.pigment)}" '
        f'fill="none" stroke="{color}" stroke-width="{stroke}" stroke-linejoin="round">'
    )
    for path in strokes:
        out.append(f'<path d="{path_data(cv, [path])}"/>')
    out.append("</g>")

    r = cv.length(plan.dot_radius)
    out.append(f'<g id="{id_prefix}-dots" fill="{color}">')
    for x, y in scene.grid.dots:
        out.append(f'<circle cx="{cv.x(x)}" cy="{cv.y(y)}" r="{r}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_ascii(config: GateConfig) -> str:
    """Character map of the canvas, top row (largest y) first."""
    grid = config.grid
    rows = []
    for y in range(grid.canvas_height, -1, -1):
        row = []
        for x in range(grid.canvas_width + 1):
            if x % 2 == 1 and y % 2 == 1:
                row.append("o")
            elif (x + y) % 2 == 0:
                row.append(" ")
            elif grid.is_wall(x, y):
                row.append("#")
            elif not config.is_closed(x, y):
                row.append(".")
            else:
                row.append("-" if x % 2 == 1 else "|")
        rows.append("".join(row) + "\n")
    return "".join(rows)


_SIZE_RE = re.compile(r'<svg [^>]*?width="([0-9.]+)" height="([0-9.]+)"')


def _doc_size(doc: str) -> tuple[float, float]:
    m = _SIZE_RE.search(doc)
    if m is None:
        raise KolamError("document has no width/height on its <svg> element")
    return float(m.group(1)), float(m.group(2))


def _embed(doc: str, prefix: str) -> str:
    body = re.sub(r"<\?xml[^>]*\?>\s*", "", doc)
    body = re.sub(r'id="([^"]+)"', lambda m: f'id="{prefix}{m.group(1)}"', body)
    body = re.sub(r"url\(#([^)]+)\)", lambda m: f"url(#{prefix}{m.group(1)})", body)
    return body.strip()


def contact_sheet(documents: list[str], columns: int, captions: list[str] | None = None) -> str:
    """Lay documents out left-to-right, top-to-bottom, each with a caption below."""
    if not documents:
        raise KolamError("contact sheet needs at least one document")
    if columns < 1:
        raise ValueError("columns must be at least 1")
    if captions is not None and len(captions) != len(documents):
        raise ValueError("need one caption per document")
    sizes = [_doc_size(d) for d in documents]
    cell_w = max(s[0] for s in sizes)
    cell_h = max(s[1] for s in sizes)
    ncols = min(columns, len(documents))
    nrows = -(-len(documents) // columns)
    width = ncols * cell_w
    height = nrows * (cell_h + CAPTION_HEIGHT)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{fmt(width)}" height="{fmt(height)}" '
        f'viewBox="0 0 {fmt(width)} {fmt(height)}">',
        f'<rect x="0.0000" y="0.0000" width="{fmt(width)}" height="{fmt(height)}" fill="{BACKGROUND}"/>',
    ]
    for k, doc in enumerate(documents):
        row, col = divmod(k, columns)
        x = col * cell_w
        y = row * (cell_h + CAPTION_HEIGHT)
        w, h = sizes[k]
        inner = _embed(doc, f"c{k}-")
        inner = inner.replace("<svg ", f'<svg x="{fmt(x + (cell_w - w) / 2)}" y="{fmt(y + (cell_h - h) / 2)}" ', 1)
        out.append(f'<g data-cell="{k}">')
        out.append(inner)
        caption = captions[k] if captions is not None else str(k + 1)
        out.append(
            f'<text x="{fmt(x + cell_w / 2)}" y="{fmt(y + cell_h + CAPTION_HEIGHT * 0.7)}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="16" fill="#e8e2d6">{escape(caption)}</text>'
        )
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
