"""Joint damage quantification for concrete pavement sawcuts.

Classify damaged faces on vertex-colored photogrammetry meshes by red
thresholding, measure damaged surface area, normalize it to the joint
damage index, and evaluate 2D/3D predictions against ground truth.
"""

from .damage import (
    DEFAULT_THRESHOLD,
    DamageLabeling,
    JdiParams,
    JdiReport,
    SweepRow,
    classify_damage,
    compute_jdi,
    face_area,
    face_areas,
    format_face_list,
    ground_truth_from_color,
    load_face_list,
    metrics_3d,
    quantify,
    read_face_list,
    threshold_sweep,
)
from .image2d import (
    AUGMENT_OPS,
    adjust_brightness,
    apply_color_mask,
    augment_batch,
    flip_h,
    flip_v,
    gaussian_blur,
    gaussian_kernel,
    load_image,
    load_mask,
    metrics_2d,
    save_image,
    save_mask,
)
from .mesh import (
    ColorlessMeshError,
    MeshError,
    MeshParseError,
    TriMesh,
    load_mesh,
    mesh_equal,
    parse_obj,
    parse_ply,
    save_ply,
    write_ply,
)
from .metrics import SegMetrics
from .synth import (
    GradientSpec,
    PatchSpec,
    RectSpec,
    SynthMaskSpec,
    SynthMeshSpec,
    generate_mask_pair,
    generate_plane_mesh,
)

__version__ = "0.1.0"

__all__ = [
    "AUGMENT_OPS",
    "ColorlessMeshError",
    "DEFAULT_THRESHOLD",
    "DamageLabeling",
    "GradientSpec",
    "JdiParams",
    "JdiReport",
    "MeshError",
    "MeshParseError",
    "PatchSpec",
    "RectSpec",
    "SegMetrics",
    "SweepRow",
    "SynthMaskSpec",
    "SynthMeshSpec",
    "TriMesh",
    "adjust_brightness",
    "apply_color_mask",
    "augment_batch",
    "classify_damage",
    "compute_jdi",
    "face_area",
    "face_areas",
    "flip_h",
    "flip_v",
    "format_face_list",
    "gaussian_blur",
    "gaussian_kernel",
    "generate_mask_pair",
    "generate_plane_mesh",
    "ground_truth_from_color",
    "load_face_list",
    "load_image",
    "load_mask",
    "load_mesh",
    "mesh_equal",
    "metrics_2d",
    "metrics_3d",
    "parse_obj",
    "parse_ply",
    "quantify",
    "read_face_list",
    "save_image",
    "save_mask",
    "save_ply",
    "threshold_sweep",
    "write_ply",
]
