"""Red-threshold damage classification, face areas, and the damage index.

A face is counted as damaged when the red channel of all three of its
vertices is strictly greater than the threshold.  Damaged area is the sum
of triangle areas (half cross-product magnitude), and the joint damage
index normalizes that area by a fixed reference band: 3 x sawcut length x
maximum aggregate size, expressed in percent.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .mesh import ColorlessMeshError, TriMesh
from .metrics import SegMetrics

DEFAULT_THRESHOLD = 230


@dataclass(frozen=True)
class JdiParams:
    """Parameters of the damage index computation.

    sawcut_length and d_max are in millimetres; coordinate_scale converts
    mesh length units to millimetres (1.0 means the mesh is already in
    mm).  threshold is the red-channel cut used for classification.
    """

    sawcut_length: float = 500.0
    d_max: float = 25.0
    coordinate_scale: float = 1.0
    threshold: int = DEFAULT_THRESHOLD

    def __post_init__(self):
        if self.sawcut_length <= 0 or self.d_max <= 0 or self.coordinate_scale <= 0:
            raise ValueError("sawcut_length, d_max, and coordinate_scale must be positive")
        _check_threshold(self.threshold)

    @property
    def denominator(self) -> float:
        """Reference area in mm**2: 3 x sawcut_length x d_max."""
        return 3.0 * self.sawcut_length * self.d_max


@dataclass(frozen=True)
class JdiReport:
    """Damage area, reference denominator, and the index in percent."""

    damage_area: float
    denominator: float
    jdi: float
    params: JdiParams
    damaged_face_count: int


@dataclass(frozen=True)
class SweepRow:
    threshold: int
    recall: float | None
    error: float | None
    jdi: float


@dataclass
class DamageLabeling:
    """A set of damaged faces of one mesh with their surface areas.

    face_ids are sorted, unique indices into ``mesh.faces``; face_areas
    are the matching triangle areas in mesh length units squared (no
    coordinate scaling applied -- compute_jdi applies it).
    """

    mesh: TriMesh
    face_ids: np.ndarray
    face_areas: np.ndarray

    def __post_init__(self):
        ids = np.asarray(self.face_ids, dtype=np.int64).reshape(-1)
        areas = np.asarray(self.face_areas, dtype=np.float64).reshape(-1)
        if len(areas) != len(ids):
            raise ValueError("face_areas length must match face_ids")
        if ids.size:
            if ids.min() < 0 or ids.max() >= self.mesh.n_faces:
                raise ValueError("labeling face id out of range for its mesh")
            if (np.diff(ids) <= 0).any():
                order = np.argsort(ids, kind="stable")
                ids = ids[order]
                areas = areas[order]
                if (np.diff(ids) == 0).any():
                    raise ValueError("labeling face ids must be unique")
            if areas.min() < 0:
                raise ValueError("face areas must be non-negative")
        self.face_ids = ids
        self.face_areas = areas

    @classmethod
    def from_face_ids(cls, mesh: TriMesh, face_ids) -> "DamageLabeling":
        ids = np.unique(np.asarray(face_ids, dtype=np.int64).reshape(-1))
        if ids.size and (ids.min() < 0 or ids.max() >= mesh.n_faces):
            raise ValueError("face id out of range for this mesh")
        return cls(mesh, ids, face_areas(mesh, ids))

    @property
    def count(self) -> int:
        return len(self.face_ids)

    @property
    def total_area(self) -> float:
        """Sum of face areas in mesh units squared (pairwise summation)."""
        return float(np.sum(self.face_areas))

    def __repr__(self):
        return f"DamageLabeling(count={self.count}, total_area={self.total_area:.6g})"


def _check_threshold(threshold) -> int:
    t = int(threshold)
    if t != threshold or not 0 <= t <= 255:
        raise ValueError(f"threshold must be an integer in 0..255, got {threshold!r}")
    return t


def face_areas(mesh: TriMesh, face_ids=None, scale: float = 1.0) -> np.ndarray:
    """Triangle areas (half cross-product magnitude) times scale**2.

    With ``face_ids`` None, returns areas for every face in order.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    if face_ids is None:
        faces = mesh.faces
    else:
        ids = np.asarray(face_ids, dtype=np.int64).reshape(-1)
        if ids.size and (ids.min() < 0 or ids.max() >= mesh.n_faces):
            raise ValueError("face index out of range")
        faces = mesh.faces[ids]
    if len(faces) == 0:
        return np.zeros(0, dtype=np.float64)
    v = mesh.vertices
    e1 = v[faces[:, 1]] - v[faces[:, 0]]
    e2 = v[faces[:, 2]] - v[faces[:, 0]]
    cross = np.cross(e1, e2)
    return 0.5 * np.linalg.norm(cross, axis=1) * (scale * scale)


def face_area(mesh: TriMesh, face_index: int, scale: float = 1.0) -> float:
    """Area of a single face; raises ValueError on a bad index."""
    if not 0 <= face_index < mesh.n_faces:
        raise ValueError(f"face index {face_index} out of range")
    return float(face_areas(mesh, [face_index], scale=scale)[0])


def _damaged_vertices(mesh: TriMesh, threshold: int, red_dominance: bool) -> np.ndarray:
    if mesh.colors is None:
        raise ColorlessMeshError("mesh has no vertex colors; cannot classify damage")
    colors = mesh.colors
    ok = colors[:, 0].astype(np.int64) > threshold
    if red_dominance:
        red = colors[:, 0]
        ok &= (red > colors[:, 1]) & (red > colors[:, 2])
    return ok


def classify_damage(mesh: TriMesh, threshold: int = DEFAULT_THRESHOLD,
                    red_dominance: bool = False) -> DamageLabeling:
    """Label faces whose three vertex reds all exceed ``threshold``.

    The comparison is strict, so threshold 255 can never match.  With
    ``red_dominance`` the red channel must additionally exceed green and
    blue at every vertex (off by default).  The result is deterministic
    and independent of face order.
    """
    threshold = _check_threshold(threshold)
    ok = _damaged_vertices(mesh, threshold, red_dominance)
    if mesh.n_faces == 0:
        ids = np.zeros(0, dtype=np.int64)
    else:
        ids = np.flatnonzero(ok[mesh.faces].all(axis=1)).astype(np.int64)
    return DamageLabeling(mesh, ids, face_areas(mesh, ids))


def ground_truth_from_color(mesh: TriMesh, gt_color, tolerance: int = 0) -> DamageLabeling:
    """Faces whose three vertices all match ``gt_color`` within a
    per-channel tolerance; used to lift a manually recolored mesh into a
    ground-truth labeling."""
    if mesh.colors is None:
        raise ColorlessMeshError("mesh has no vertex colors; cannot extract ground truth")
    target = np.asarray(gt_color, dtype=np.int64).reshape(3)
    if target.min() < 0 or target.max() > 255:
        raise ValueError("gt_color channels must be in 0..255")
    tol = int(tolerance)
    if tol != tolerance or not 0 <= tol <= 255:
        raise ValueError("tolerance must be an integer in 0..255")
    ok = (np.abs(mesh.colors.astype(np.int64) - target) <= tol).all(axis=1)
    if mesh.n_faces == 0:
        ids = np.zeros(0, dtype=np.int64)
    else:
        ids = np.flatnonzero(ok[mesh.faces].all(axis=1)).astype(np.int64)
    return DamageLabeling(mesh, ids, face_areas(mesh, ids))


def compute_jdi(labeling: DamageLabeling, params: JdiParams | None = None) -> JdiReport:
    """Damage index in percent: 100 x damaged area / reference area.

    The labeling's areas (mesh units squared) are converted to mm**2 with
    params.coordinate_scale before normalizing.  An empty labeling yields
    0%.
    """
    params = params if params is not None else JdiParams()
    area_mm2 = labeling.total_area * params.coordinate_scale ** 2
    denominator = params.denominator
    jdi = 100.0 * area_mm2 / denominator
    return JdiReport(area_mm2, denominator, jdi, params, labeling.count)


def metrics_3d(pred: DamageLabeling, gt: DamageLabeling,
               mesh: TriMesh | None = None) -> SegMetrics:
    """Area-weighted recall/error of a predicted labeling against ground
    truth on the same mesh.

    tp is the area of faces in both labelings, fp the predicted-only
    area, fn the ground-truth-only area.  With empty ground truth the
    returned metrics have recall is None and error is None.
    """
    ref = mesh if mesh is not None else pred.mesh
    if pred.mesh is not ref or gt.mesh is not ref:
        raise ValueError("pred and gt must reference the same mesh object")
    in_gt = np.isin(pred.face_ids, gt.face_ids, assume_unique=True)
    in_pred = np.isin(gt.face_ids, pred.face_ids, assume_unique=True)
    tp = float(np.sum(gt.face_areas[in_pred]))
    fp = float(np.sum(pred.face_areas[~in_gt]))
    fn = float(np.sum(gt.face_areas[~in_pred]))
    return SegMetrics(tp, fp, fn)


def threshold_sweep(mesh: TriMesh, gt: DamageLabeling, thresholds,
                    params: JdiParams | None = None,
                    red_dominance: bool = False) -> list[SweepRow]:
    """Classify/evaluate at each threshold; rows come back sorted by
    threshold, one per requested value."""
    ts = sorted(_check_threshold(t) for t in thresholds)
    if not ts:
        raise ValueError("thresholds must be non-empty")
    params = params if params is not None else JdiParams()
    rows = []
    for t in ts:
        labeling = classify_damage(mesh, t, red_dominance=red_dominance)
        m = metrics_3d(labeling, gt, mesh)
        report = compute_jdi(labeling, replace(params, threshold=t))
        rows.append(SweepRow(t, m.recall, m.error, report.jdi))
    return rows


def quantify(mesh: TriMesh, params: JdiParams | None = None,
             red_dominance: bool = False) -> tuple[JdiReport, DamageLabeling]:
    """End-to-end: classify at params.threshold, then compute the index."""
    params = params if params is not None else JdiParams()
    labeling = classify_damage(mesh, params.threshold, red_dominance=red_dominance)
    return compute_jdi(labeling, params), labeling


def read_face_list(text: str) -> np.ndarray:
    """Parse a ground-truth face list: one face index per line, ``#``
    comments and blank lines ignored."""
    ids = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            idx = int(line)
        except ValueError:
            raise ValueError(f"face list line {lineno}: expected an integer, got {line!r}") from None
        if idx < 0:
            raise ValueError(f"face list line {lineno}: negative face index")
        ids.append(idx)
    return np.asarray(sorted(set(ids)), dtype=np.int64)


def format_face_list(face_ids) -> str:
    ids = np.asarray(face_ids, dtype=np.int64).reshape(-1)
    return "".join(f"{i}\n" for i in ids)


def load_face_list(path, mesh: TriMesh) -> DamageLabeling:
    ids = read_face_list(Path(path).read_text(encoding="utf-8"))
    return DamageLabeling.from_face_ids(mesh, ids)
