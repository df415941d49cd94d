"""2D raster side of the pipeline: mask overlays, pixel metrics, and the
augmentation operators with deterministic seeding.

Images are (height, width, 3) uint8 arrays; binary masks are
(height, width) bool arrays with True marking damage.  PNG is the
interchange format; masks load from grayscale PNGs with nonzero = damage.
"""

from __future__ import annotations

import math
import random
from pathlib import Path

import numpy as np
from PIL import Image

from .metrics import SegMetrics

AUGMENT_OPS = ("blur", "brighten", "darken", "flip_h", "flip_v", "none")

DEFAULT_BLUR_SIGMA = 0.25
DEFAULT_BRIGHTEN = 1.25
DEFAULT_DARKEN = 0.75


def _as_image(image) -> np.ndarray:
    arr = np.asarray(image)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"image must have shape (h, w, 3), got {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError("image must be at least 1x1")
    if arr.dtype != np.uint8:
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError(f"image dtype must be integer, got {arr.dtype}")
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise ValueError("image channels must be in 0..255")
        arr = arr.astype(np.uint8)
    return arr


def _as_mask(mask) -> np.ndarray:
    arr = np.asarray(mask)
    if arr.ndim != 2:
        raise ValueError(f"mask must have shape (h, w), got {arr.shape}")
    return arr.astype(bool)


def apply_color_mask(image, mask, color=(255, 0, 0)) -> np.ndarray:
    """Replace masked pixels with ``color``; everything else is untouched."""
    img = _as_image(image)
    m = _as_mask(mask)
    if m.shape != img.shape[:2]:
        raise ValueError(f"mask shape {m.shape} does not match image {img.shape[:2]}")
    rgb = np.asarray(color)
    if rgb.shape != (3,) or rgb.min() < 0 or rgb.max() > 255:
        raise ValueError("color must be three channels in 0..255")
    out = img.copy()
    out[m] = rgb.astype(np.uint8)
    return out


def metrics_2d(pred, gt) -> SegMetrics:
    """Pixel-count recall/error of a predicted mask against ground truth."""
    p = _as_mask(pred)
    g = _as_mask(gt)
    if p.shape != g.shape:
        raise ValueError(f"mask shapes differ: {p.shape} vs {g.shape}")
    tp = int(np.count_nonzero(p & g))
    fp = int(np.count_nonzero(p & ~g))
    fn = int(np.count_nonzero(~p & g))
    return SegMetrics(tp, fp, fn)


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Normalized 1D Gaussian with radius ceil(3*sigma); sums to 1."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    radius = math.ceil(3.0 * sigma)
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum()


def gaussian_blur(image, sigma: float) -> np.ndarray:
    """Separable Gaussian convolution with mirror edge handling.

    The kernel radius is ceil(3*sigma); output dimensions match the
    input.  A constant image is a fixed point.
    """
    img = _as_image(image).astype(np.float64)
    k = gaussian_kernel(sigma)
    r = (len(k) - 1) // 2
    h, w = img.shape[:2]
    out = img
    if r > 0:
        pad = np.pad(out, ((r, r), (0, 0), (0, 0)), mode="reflect")
        out = np.zeros_like(img)
        for i, weight in enumerate(k):
            out += weight * pad[i:i + h]
        pad = np.pad(out, ((0, 0), (r, r), (0, 0)), mode="reflect")
        out = np.zeros_like(img)
        for i, weight in enumerate(k):
            out += weight * pad[:, i:i + w]
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def adjust_brightness(image, factor: float) -> np.ndarray:
    """Scale every channel by ``factor``, rounding and clamping to 0..255."""
    if factor <= 0:
        raise ValueError("brightness factor must be positive")
    img = _as_image(image).astype(np.float64)
    return np.clip(np.rint(img * factor), 0, 255).astype(np.uint8)


def flip_h(arr) -> np.ndarray:
    """Mirror an image or mask left-right."""
    a = np.asarray(arr)
    if a.ndim not in (2, 3):
        raise ValueError("expected an image (h, w, 3) or mask (h, w)")
    return np.ascontiguousarray(a[:, ::-1])


def flip_v(arr) -> np.ndarray:
    """Mirror an image or mask top-bottom."""
    a = np.asarray(arr)
    if a.ndim not in (2, 3):
        raise ValueError("expected an image (h, w, 3) or mask (h, w)")
    return np.ascontiguousarray(a[::-1])


def _apply_op(img: np.ndarray, op: str, blur_sigma, brighten, darken) -> np.ndarray:
    if op == "blur":
        return gaussian_blur(img, blur_sigma)
    if op == "brighten":
        return adjust_brightness(img, brighten)
    if op == "darken":
        return adjust_brightness(img, darken)
    if op == "flip_h":
        return flip_h(img)
    if op == "flip_v":
        return flip_v(img)
    if op == "none":
        return img.copy()
    raise ValueError(f"unknown augmentation op {op!r}")


def augment_batch(images, seed: int, ops_per_image: int,
                  blur_sigma: float = DEFAULT_BLUR_SIGMA,
                  brighten: float = DEFAULT_BRIGHTEN,
                  darken: float = DEFAULT_DARKEN) -> list[np.ndarray]:
    """Expand a batch with randomly chosen augmentation variants.

    Each input contributes itself plus ``ops_per_image`` variants whose
    ops are drawn uniformly from AUGMENT_OPS with a seeded stdlib
    generator, so the output is a pure function of (images, seed,
    ops_per_image): len(out) == len(images) * (1 + ops_per_image), in
    input order.
    """
    if ops_per_image < 0:
        raise ValueError("ops_per_image must be >= 0")
    rng = random.Random(seed)
    out = []
    for image in images:
        img = _as_image(image)
        out.append(img.copy())
        for _ in range(ops_per_image):
            op = AUGMENT_OPS[rng.randrange(len(AUGMENT_OPS))]
            out.append(_apply_op(img, op, blur_sigma, brighten, darken))
    return out


def load_image(path) -> np.ndarray:
    with Image.open(path) as im:
        return np.asarray(im.convert("RGB"))


def save_image(path, image) -> None:
    Image.fromarray(_as_image(image), mode="RGB").save(Path(path), format="PNG")


def load_mask(path) -> np.ndarray:
    """Read a grayscale PNG as a binary mask; nonzero pixels are damage."""
    with Image.open(path) as im:
        return np.asarray(im.convert("L")) != 0


def save_mask(path, mask) -> None:
    m = _as_mask(mask)
    Image.fromarray(np.where(m, 255, 0).astype(np.uint8), mode="L").save(Path(path), format="PNG")
