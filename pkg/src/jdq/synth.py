"""Synthetic planar meshes and mask pairs with closed-form expected values.

Every geometric and metric claim in the test suite rests on these
generators: grid meshes whose damaged-patch area is known exactly by
construction, and mask pairs whose TP/FP/FN follow from rectangle
intersection arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .damage import DamageLabeling, face_areas
from .mesh import TriMesh
from .metrics import SegMetrics


@dataclass(frozen=True)
class PatchSpec:
    """Axis-aligned damage patch in cell coordinates, half-open ranges:
    cells x0 <= cx < x1, y0 <= cy < y1 are covered."""

    x0: int
    y0: int
    x1: int
    y1: int
    red: int

    @property
    def cell_count(self) -> int:
        return (self.x1 - self.x0) * (self.y1 - self.y0)


@dataclass(frozen=True)
class GradientSpec:
    """Linear red ramp across the grid along one axis."""

    axis: str
    red_start: int
    red_end: int


@dataclass
class SynthMeshSpec:
    """Planar grid mesh recipe: nx x ny square cells of cell_size (mm),
    each split into two triangles along the lower-left to upper-right
    diagonal.  Vertices inside a patch rectangle take the patch red;
    elsewhere the background red or the optional gradient applies."""

    grid_nx: int
    grid_ny: int
    cell_size: float
    patches: list[PatchSpec] = field(default_factory=list)
    background_red: int = 40
    green: int = 80
    blue: int = 80
    gradient: GradientSpec | None = None
    noise_seed: int = 0
    noise_amplitude: int = 0

    def __post_init__(self):
        if self.grid_nx < 1 or self.grid_ny < 1:
            raise ValueError("grid_nx and grid_ny must be >= 1")
        if self.cell_size <= 0:
            raise ValueError("cell_size must be positive")
        for name in ("background_red", "green", "blue"):
            v = getattr(self, name)
            if not 0 <= v <= 255:
                raise ValueError(f"{name} must be in 0..255")
        if self.noise_amplitude < 0:
            raise ValueError("noise_amplitude must be >= 0")
        if self.gradient is not None:
            g = self.gradient
            if g.axis not in ("x", "y"):
                raise ValueError("gradient axis must be 'x' or 'y'")
            if not (0 <= g.red_start <= 255 and 0 <= g.red_end <= 255):
                raise ValueError("gradient reds must be in 0..255")
        for p in self.patches:
            if not (0 <= p.x0 < p.x1 <= self.grid_nx and 0 <= p.y0 < p.y1 <= self.grid_ny):
                raise ValueError(f"patch {p} outside grid bounds or empty")
            if not 0 <= p.red <= 255:
                raise ValueError("patch red must be in 0..255")
        for i, a in enumerate(self.patches):
            for b in self.patches[i + 1:]:
                # Closed vertex rectangles: adjacent patches share vertices.
                touches = (a.x0 <= b.x1 and b.x0 <= a.x1
                           and a.y0 <= b.y1 and b.y0 <= a.y1)
                if touches and a.red != b.red:
                    raise ValueError(
                        f"patches {a} and {b} overlap with conflicting red intensities")

    @classmethod
    def from_dict(cls, d: dict) -> "SynthMeshSpec":
        d = dict(d)
        d.pop("kind", None)
        patches = [PatchSpec(**p) for p in d.pop("patches", [])]
        grad = d.pop("gradient", None)
        gradient = GradientSpec(**grad) if grad else None
        noise = d.pop("noise", None) or {}
        spec = cls(
            grid_nx=d.pop("grid_nx"),
            grid_ny=d.pop("grid_ny"),
            cell_size=d.pop("cell_size_mm"),
            patches=patches,
            background_red=d.pop("background_red", 40),
            green=d.pop("green", 80),
            blue=d.pop("blue", 80),
            gradient=gradient,
            noise_seed=noise.get("seed", 0),
            noise_amplitude=noise.get("amplitude", 0),
        )
        if d:
            raise ValueError(f"unknown mesh spec keys: {sorted(d)}")
        return spec


def generate_plane_mesh(spec: SynthMeshSpec) -> tuple[TriMesh, DamageLabeling, float]:
    """Build the grid mesh; returns (mesh, ground truth, exact patch area).

    The ground truth lists exactly the faces whose three vertices lie
    inside a patch, which for separated patches is two triangles per
    covered cell; the exact area is covered-cell count x cell_size**2.
    Patches placed so close together that extra faces would qualify are
    rejected, keeping the closed-form area exact.
    """
    nx, ny, cell = spec.grid_nx, spec.grid_ny, spec.cell_size

    ix = np.tile(np.arange(nx + 1, dtype=np.int64), ny + 1)
    iy = np.repeat(np.arange(ny + 1, dtype=np.int64), nx + 1)
    positions = np.column_stack([ix * cell, iy * cell, np.zeros(len(ix))])

    cx = np.tile(np.arange(nx, dtype=np.int64), ny)
    cy = np.repeat(np.arange(ny, dtype=np.int64), nx)
    v00 = cy * (nx + 1) + cx
    v10 = v00 + 1
    v01 = v00 + (nx + 1)
    v11 = v01 + 1
    faces = np.empty((2 * nx * ny, 3), dtype=np.int64)
    faces[0::2] = np.column_stack([v00, v10, v11])
    faces[1::2] = np.column_stack([v00, v11, v01])

    if spec.gradient is not None:
        g = spec.gradient
        along = ix if g.axis == "x" else iy
        span = nx if g.axis == "x" else ny
        t = along.astype(np.float64) / span
        red = np.rint(g.red_start + (g.red_end - g.red_start) * t).astype(np.int64)
    else:
        red = np.full(len(ix), spec.background_red, dtype=np.int64)

    in_patch = np.zeros(len(ix), dtype=bool)
    covered = np.zeros((ny, nx), dtype=bool)
    for p in spec.patches:
        vmask = (ix >= p.x0) & (ix <= p.x1) & (iy >= p.y0) & (iy <= p.y1)
        red[vmask] = p.red
        in_patch |= vmask
        covered[p.y0:p.y1, p.x0:p.x1] = True

    if spec.noise_amplitude > 0:
        rng = np.random.default_rng(spec.noise_seed)
        delta = rng.integers(-spec.noise_amplitude, spec.noise_amplitude + 1, size=len(red))
        red = np.clip(red + delta, 0, 255)

    colors = np.column_stack([
        red,
        np.full(len(red), spec.green, dtype=np.int64),
        np.full(len(red), spec.blue, dtype=np.int64),
    ])
    mesh = TriMesh(positions, faces, colors)

    gt_ids = np.flatnonzero(in_patch[faces].all(axis=1)).astype(np.int64)
    covered_cells = int(covered.sum())
    if len(gt_ids) != 2 * covered_cells:
        raise ValueError(
            "patches are too close together: faces outside the declared cells "
            "would classify as damage, breaking the exact-area guarantee")
    gt = DamageLabeling(mesh, gt_ids, face_areas(mesh, gt_ids))
    exact_patch_area = covered_cells * cell * cell
    return mesh, gt, exact_patch_area


@dataclass(frozen=True)
class RectSpec:
    """Pixel rectangle: x..x+w, y..y+h, half-open."""

    x: int
    y: int
    w: int
    h: int

    @property
    def area(self) -> int:
        return self.w * self.h


@dataclass(frozen=True)
class SynthMaskSpec:
    width: int
    height: int
    gt: RectSpec
    pred: RectSpec

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("mask dimensions must be >= 1")
        for name in ("gt", "pred"):
            r = getattr(self, name)
            if r.w < 0 or r.h < 0 or r.x < 0 or r.y < 0:
                raise ValueError(f"{name} rectangle has negative extent or origin")
            if r.x + r.w > self.width or r.y + r.h > self.height:
                raise ValueError(f"{name} rectangle exceeds mask bounds")

    @classmethod
    def from_dict(cls, d: dict) -> "SynthMaskSpec":
        d = dict(d)
        d.pop("kind", None)
        spec = cls(
            width=d.pop("width"),
            height=d.pop("height"),
            gt=RectSpec(**d.pop("gt")),
            pred=RectSpec(**d.pop("pred")),
        )
        if d:
            raise ValueError(f"unknown mask spec keys: {sorted(d)}")
        return spec


def _fill(mask: np.ndarray, r: RectSpec) -> None:
    mask[r.y:r.y + r.h, r.x:r.x + r.w] = True


def generate_mask_pair(spec: SynthMaskSpec) -> tuple[np.ndarray, np.ndarray, SegMetrics]:
    """Build (pred, gt) masks plus their exact expected metrics.

    TP/FP/FN come from rectangle intersection arithmetic, so
    ``metrics_2d(pred, gt)`` must reproduce them exactly.
    """
    gt = np.zeros((spec.height, spec.width), dtype=bool)
    pred = np.zeros((spec.height, spec.width), dtype=bool)
    _fill(gt, spec.gt)
    _fill(pred, spec.pred)

    iw = max(0, min(spec.gt.x + spec.gt.w, spec.pred.x + spec.pred.w) - max(spec.gt.x, spec.pred.x))
    ih = max(0, min(spec.gt.y + spec.gt.h, spec.pred.y + spec.pred.h) - max(spec.gt.y, spec.pred.y))
    tp = iw * ih
    expected = SegMetrics(tp, spec.pred.area - tp, spec.gt.area - tp)
    return pred, gt, expected
