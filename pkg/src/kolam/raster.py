"""Bitmap cross-check for enclosed regions.

Strokes the paths into a boolean barrier image and labels the free pixels.
Components touching the image border form the exterior.  Used as an
independent oracle for the combinatorial face extraction; the production
fills never depend on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .geometry import ClosedPath, Piece, distance_field, piece_bounds
from .grid import GridSpec

RASTER_PPU = 64


@dataclass(frozen=True)
class RasterRegions:
    labels: np.ndarray  # 0 on the stroke barrier
    exterior_labels: frozenset[int]
    ppu: int

    def label_at(self, point: tuple[float, float]) -> int:
        i = min(int(math.floor(point[1] * self.ppu)), self.labels.shape[0] - 1)
        j = min(int(math.floor(point[0] * self.ppu)), self.labels.shape[1] - 1)
        return int(self.labels[i, j])

    def is_exterior(self, point: tuple[float, float]) -> bool:
        return self.label_at(point) in self.exterior_labels

    @property
    def interior_count(self) -> int:
        present = set(np.unique(self.labels).tolist()) - {0}
        return len(present - self.exterior_labels)


def stroke_mask(grid: GridSpec, pieces: list[Piece], stroke_width: float, ppu: int = RASTER_PPU,
                cache: dict | None = None) -> np.ndarray:
    """Pixels whose center lies within stroke_width/2 of any piece."""
    rows, cols = grid.canvas_height * ppu, grid.canvas_width * ppu
    mask = np.zeros((rows, cols), dtype=bool)
    half = stroke_width / 2
    for piece in pieces:
        key = (piece, stroke_width, ppu)
        hit = cache.get(key) if cache is not None else None
        if hit is None:
            x0, y0, x1, y1 = piece_bounds(piece)
            j0 = max(int(math.floor((x0 - half) * ppu)) - 1, 0)
            j1 = min(int(math.ceil((x1 + half) * ppu)) + 1, cols)
            i0 = max(int(math.floor((y0 - half) * ppu)) - 1, 0)
            i1 = min(int(math.ceil((y1 + half) * ppu)) + 1, rows)
            xs = (np.arange(j0, j1) + 0.5) / ppu
            ys = (np.arange(i0, i1) + 0.5) / ppu
            gx, gy = np.meshgrid(xs, ys)
            local = distance_field(piece, gx, gy) <= half
            hit = (i0, i1, j0, j1, local)
            if cache is not None:
                cache[key] = hit
        i0, i1, j0, j1, local = hit
        mask[i0:i1, j0:j1] |= local
    return mask


def raster_regions(grid: GridSpec, paths: list[ClosedPath], stroke_width: float,
                   ppu: int = RASTER_PPU, cache: dict | None = None) -> RasterRegions:
    pieces = [p for path in paths for p in path.pieces]
    barrier = stroke_mask(grid, pieces, stroke_width, ppu, cache)
    labels, _ = ndimage.label(~barrier)
    border = np.concatenate([labels[0, :], labels[-1, :], labels[:, 0], labels[:, -1]])
    exterior = frozenset(int(v) for v in np.unique(border) if v != 0)
    return RasterRegions(labels, exterior, ppu)
