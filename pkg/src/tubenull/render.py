"""Rasters, SVG drawings and box counts of carpets and homogeneous IFSs.

A pixel belongs to a shape when its centre does; boxes are half-open. Both
rules are exact for carpets (integer arithmetic), so renders are reproducible
byte for byte.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from . import _accel
from .core import CarpetSpec, HomIfsSpec, check_budget, word_translation
from .cover import TubeCover
from .projection import ProjectedIfs, scaled_levels

BACKGROUND = (255, 255, 255)
INK = (0, 0, 0)
SLAB_TINT = (255, 214, 214)
INK_IN_SLAB = (150, 0, 0)


@dataclass(frozen=True)
class RenderConfig:
    resolution: int  # pixels per unit length
    depth: int
    out: str | None = None
    overlay: TubeCover | None = None
    ink: tuple = INK
    background: tuple = BACKGROUND
    slab_tint: tuple = SLAB_TINT
    ink_in_slab: tuple = INK_IN_SLAB

    def __post_init__(self):
        if self.resolution < 1:
            raise ValueError("resolution must be >= 1")
        if self.depth < 0:
            raise ValueError("depth must be >= 0")


# --- geometry ----------------------------------------------------------------

def _convex_hull(points: list) -> list:
    """Counter-clockwise hull of exact 2-D points (monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def attractor_hull(ifs: HomIfsSpec) -> list:
    """Convex hull of the attractor: hull of the fixed points t_i / (1 - r)."""
    if ifs.dim != 2:
        raise ValueError("polygon hulls are only drawn in the plane")
    s = 1 - ifs.ratio
    return _convex_hull([tuple(c / s for c in t) for t in ifs.translations])


def _view(system) -> tuple:
    """(lo, hi) of the drawn region as exact 2-vectors."""
    if isinstance(system, CarpetSpec):
        return (Fraction(0),) * 2, (Fraction(1),) * 2
    box = system.hull_box()
    return box.lo, box.hi


def _pixel_centres(system, res: int):
    lo, hi = _view(system)
    w = max(1, math.ceil((hi[0] - lo[0]) * res))
    h = max(1, math.ceil((hi[1] - lo[1]) * res))
    xs = float(lo[0]) + (np.arange(w) + 0.5) / res
    ys = float(lo[1]) + (np.arange(h)[::-1] + 0.5) / res  # row 0 is the top edge
    return xs, ys


def _carpet_mask(spec: CarpetSpec, res: int, depth: int, budget) -> np.ndarray:
    if spec.dim != 2:
        raise ValueError("only planar carpets are rendered")
    check_budget(spec.size**depth, budget)
    side = spec.base**depth
    cells = np.zeros((side, side), dtype=bool)
    if depth == 0:
        cells[:] = True
    else:
        sums = _accel.word_sums(np.array(spec.digits), [spec.base ** (depth - 1 - k) for k in range(depth)])
        sums = np.asarray(sums, dtype=np.int64)
        cells[sums[:, 0], sums[:, 1]] = True
    # pixel i has centre (2i + 1) / (2 res); its cell is floor((2i + 1) side / (2 res))
    idx = ((2 * np.arange(res) + 1) * side) // (2 * res)
    mask = cells[np.ix_(idx, idx)]  # [x, y]
    return mask.T[::-1]  # rows are y, top first


def _ifs_mask(ifs: HomIfsSpec, res: int, depth: int, budget) -> np.ndarray:
    check_budget(ifs.size**depth, budget)
    xs, ys = _pixel_centres(ifs, res)
    X, Y = np.meshgrid(xs, ys)
    mask = np.zeros(X.shape, dtype=bool)
    hull = attractor_hull(ifs)
    scale = ifs.ratio**depth
    words = np.ndindex(*(ifs.size,) * depth) if depth else [()]
    for word in words:
        t = word_translation(ifs, word)
        poly = [(float(t[0] + scale * p[0]), float(t[1] + scale * p[1])) for p in hull]
        mask |= _inside_polygon(X, Y, poly)
    return mask


def _inside_polygon(X, Y, poly) -> np.ndarray:
    if len(poly) == 1:
        return (np.abs(X - poly[0][0]) < 1e-12) & (np.abs(Y - poly[0][1]) < 1e-12)
    inside = np.ones(X.shape, dtype=bool)
    for (x0, y0), (x1, y1) in zip(poly, poly[1:] + poly[:1]):
        inside &= (x1 - x0) * (Y - y0) - (y1 - y0) * (X - x0) >= -1e-12
    return inside


def _slab_mask(system, res: int, cover: TubeCover) -> np.ndarray:
    xs, ys = _pixel_centres(system, res)
    X, Y = np.meshgrid(xs, ys)
    mask = np.zeros(X.shape, dtype=bool)
    for sl in cover.slabs:
        v = sl.direction.v
        proj = v[0] * X + v[1] * Y
        mask |= (proj >= float(sl.a) - 1e-9) & (proj <= float(sl.b) + 1e-9)
    return mask


def raster(system, config: RenderConfig, budget: int | None = None) -> np.ndarray:
    """RGB uint8 array of the depth-n cylinders, with the optional slab overlay."""
    if isinstance(system, CarpetSpec):
        ink = _carpet_mask(system, config.resolution, config.depth, budget)
    elif isinstance(system, HomIfsSpec):
        ink = _ifs_mask(system, config.resolution, config.depth, budget)
    else:
        raise TypeError("expected a CarpetSpec or HomIfsSpec")
    img = np.empty(ink.shape + (3,), dtype=np.uint8)
    img[:] = config.background
    if config.overlay is not None:
        slab = _slab_mask(system, config.resolution, config.overlay)
        img[slab] = config.slab_tint
        img[ink & ~slab] = config.ink
        img[ink & slab] = config.ink_in_slab
    else:
        img[ink] = config.ink
    return img


# --- SVG ---------------------------------------------------------------------

def _fmt(x) -> str:
    return f"{float(x):.6f}"


def _clip(poly: list, a: float, b: float, c: float) -> list:
    """Keep the part of a polygon with a x + b y <= c (Sutherland-Hodgman step)."""
    out = []
    for (x0, y0), (x1, y1) in zip(poly, poly[1:] + poly[:1]):
        f0, f1 = a * x0 + b * y0 - c, a * x1 + b * y1 - c
        if f0 <= 0:
            out.append((x0, y0))
        if (f0 < 0 < f1) or (f1 < 0 < f0):
            t = f0 / (f0 - f1)
            out.append((x0 + t * (x1 - x0), y0 + t * (y1 - y0)))
    return out


def svg(system, config: RenderConfig, budget: int | None = None) -> str:
    lo, hi = _view(system)
    res = config.resolution
    x0, y0, x1, y1 = (float(v) for v in (lo[0], lo[1], hi[0], hi[1]))
    W, H = (x1 - x0) * res, (y1 - y0) * res

    def pt(x, y):
        return f"{_fmt((x - x0) * res)},{_fmt((y1 - y) * res)}"

    def colour(c):
        return "#%02x%02x%02x" % tuple(c)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(W)}" height="{_fmt(H)}" '
        f'viewBox="0 0 {_fmt(W)} {_fmt(H)}">',
        f'<rect x="0" y="0" width="{_fmt(W)}" height="{_fmt(H)}" fill="{colour(config.background)}"/>',
    ]
    if config.overlay is not None:
        view = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
        for sl in config.overlay.slabs:
            a, b = sl.direction.v
            poly = _clip(_clip(view, a, b, float(sl.b)), -a, -b, -float(sl.a))
            if len(poly) >= 3:
                pts = " ".join(pt(x, y) for x, y in poly)
                parts.append(f'<polygon points="{pts}" fill="{colour(config.slab_tint)}" fill-opacity="0.6"/>')
    if isinstance(system, CarpetSpec):
        if system.dim != 2:
            raise ValueError("only planar carpets are drawn")
        check_budget(system.size**config.depth, budget)
        side = system.base**config.depth
        if config.depth:
            sums = _accel.word_sums(np.array(system.digits),
                                    [system.base ** (config.depth - 1 - k) for k in range(config.depth)])
            cells = sorted(tuple(int(c) for c in row) for row in sums)
        else:
            cells = [(0, 0)]
        for cx, cy in cells:
            parts.append(f'<rect x="{_fmt(cx / side * res)}" y="{_fmt((side - cy - 1) / side * res)}" '
                         f'width="{_fmt(res / side)}" height="{_fmt(res / side)}" fill="{colour(config.ink)}"/>')
    else:
        check_budget(system.size**config.depth, budget)
        hull = attractor_hull(system)
        scale = system.ratio**config.depth
        words = np.ndindex(*(system.size,) * config.depth) if config.depth else [()]
        for word in words:
            t = word_translation(system, word)
            pts = " ".join(pt(float(t[0] + scale * p[0]), float(t[1] + scale * p[1])) for p in hull)
            parts.append(f'<polygon points="{pts}" fill="{colour(config.ink)}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render(system, config: RenderConfig, budget: int | None = None) -> Path:
    """Write a PNG or SVG (chosen by the suffix of ``config.out``)."""
    if not config.out:
        raise ValueError("config.out is required")
    path = Path(config.out)
    if path.suffix.lower() == ".svg":
        path.write_text(svg(system, config, budget))
    else:
        from PIL import Image

        Image.fromarray(raster(system, config, budget), "RGB").save(path, format="PNG")
    return path


# --- box counting ------------------------------------------------------------

@dataclass(frozen=True)
class BoxCountReport:
    target: str  # "K" or "P_v(K)" with the direction
    rows: tuple  # (n, occupied dyadic cells of side 2^-n)
    slope: float
    intercept: float
    method: str


def _min_level(p: int, q: int, n: int) -> int:
    """Least h with (q/p)^h >= 2^n, i.e. cylinders no longer than the dyadic cells."""
    h = 0
    while q**h < 2**n * p**h:
        h += 1
    return h


def _fit(rows) -> tuple:
    ns = np.array([n for n, _ in rows], dtype=float)
    ls = np.log2(np.array([c for _, c in rows], dtype=float))
    if len(rows) == 1:
        return float(ls[0] / ns[0]) if ns[0] else 0.0, 0.0
    slope, intercept = np.polyfit(ns, ls, 1)
    return float(slope), float(intercept)


def _carpet_counts(spec: CarpetSpec, n: int, budget, use_ext) -> int:
    h = _min_level(1, spec.base, n)
    check_budget(spec.size**h, budget)
    check_budget(2 ** (n * spec.dim), budget, "cells")
    grid = np.zeros((2**n,) * spec.dim, dtype=np.uint8)
    if h == 0:
        grid[:] = 1
        return int(grid.size)
    weights = [spec.base ** (h - 1 - k) for k in range(h)]
    return _accel.mark_cells(np.array(spec.digits), weights, [0] * spec.dim, [1] * spec.dim,
                             spec.base**h, 2**n, grid, use_ext=use_ext)


def _projected_counts(pifs: ProjectedIfs, n: int, budget) -> int:
    p, q, den, a = pifs.integer_model()
    h = _min_level(p, q, n)
    vals, _, _ = scaled_levels(pifs, h, budget=budget)
    # everything times D q^h (q - p): f_k(I_v) = [q((q-p) S + p^h a_min), ... + q p^h (a_max - a_min)]
    big = den * q**h * (q - p)
    length = q * p**h * (max(a) - min(a))
    cells = set()
    for s in vals:
        x = q * ((q - p) * int(s) + p**h * min(a))
        k0 = (x * 2**n) // big
        k1 = max(k0, -((-(x + length) * 2**n) // big) - 1)
        cells.update(range(k0, k1 + 1))
    return len(cells)


def box_count(system, n_range: Sequence[int], budget: int | None = None, use_ext=None) -> BoxCountReport:
    """Occupied dyadic cells at scales 2^-n, counted from cylinders no longer than 2^-n."""
    n_range = [int(n) for n in n_range]
    if not n_range or n_range != sorted(n_range) or n_range[0] < 0:
        raise ValueError("n_range must be nonempty, ascending and >= 0")
    if isinstance(system, CarpetSpec):
        rows = tuple((n, _carpet_counts(system, n, budget, use_ext)) for n in n_range)
        target = "K"
    elif isinstance(system, ProjectedIfs):
        rows = tuple((n, _projected_counts(system, n, budget)) for n in n_range)
        target = f"P_{system.direction}(K)"
    else:
        raise TypeError("box_count takes a CarpetSpec or a ProjectedIfs")
    slope, intercept = _fit(rows)
    method = ("half-open depth-h cylinder boxes with h minimal such that a cylinder is no longer "
              "than a dyadic cell; each cylinder meets at most 2 cells per axis")
    return BoxCountReport(target, rows, slope, intercept, method)


__all__ = [
    "RenderConfig", "BoxCountReport", "attractor_hull", "raster", "svg", "render", "box_count",
]
