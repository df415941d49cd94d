"""Acceptance suite: the oracle/property criteria the build must meet.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS/FAIL
line per criterion.  Every tolerance is pinned here, not configurable.
"""

import json
import time
import warnings
from contextlib import contextmanager

import numpy as np

from jdq import (
    DamageLabeling,
    GradientSpec,
    JdiParams,
    MeshError,
    PatchSpec,
    RectSpec,
    SynthMaskSpec,
    SynthMeshSpec,
    TriMesh,
    classify_damage,
    compute_jdi,
    flip_h,
    flip_v,
    gaussian_blur,
    gaussian_kernel,
    generate_mask_pair,
    generate_plane_mesh,
    mesh_equal,
    metrics_2d,
    parse_ply,
    quantify,
    threshold_sweep,
    write_ply,
)
from jdq.cli import main as cli_main
from helpers import build_ascii_ply, build_binary_ply, naive_classify, random_mesh


@contextmanager
def criterion(number, label):
    try:
        yield
    except BaseException:
        print(f"\n[acceptance] criterion {number} ({label}): FAIL")
        raise
    print(f"\n[acceptance] criterion {number} ({label}): PASS")


def test_criterion_1_jdi_closed_form():
    with criterion(1, "JDI closed form on a 500 mm x 75 mm fully-red band"):
        start = time.perf_counter()
        spec = SynthMeshSpec(20, 3, 25.0, patches=[PatchSpec(0, 0, 20, 3, 255)])
        mesh, gt, exact_area = generate_plane_mesh(spec)
        report, labeling = quantify(mesh, JdiParams(threshold=230))
        elapsed = time.perf_counter() - start
        assert exact_area == 37500.0
        assert abs(report.damage_area - 37500.0) <= 1e-9 * 37500.0
        assert abs(report.jdi - 100.0) <= 1e-9 * 100.0
        assert labeling.count == mesh.n_faces
        assert elapsed < 1.0


def test_criterion_2_eq_arithmetic_single_face():
    with criterion(2, "single 375 mm^2 face gives JDI exactly 1.0%"):
        mesh = TriMesh(np.array([(0, 0, 0), (30, 0, 0), (0, 25, 0)], float),
                       [[0, 1, 2]], [(255, 0, 0)] * 3)
        report, labeling = quantify(mesh, JdiParams())
        assert labeling.total_area == 375.0
        assert report.denominator == 37500.0  # 3 x 500 x 25
        assert report.jdi == 1.0


def test_criterion_3_monotone_sweep():
    with criterion(3, "sweep on a red gradient is strictly decreasing"):
        spec = SynthMeshSpec(24, 8, 10.0, gradient=GradientSpec("x", 150, 255))
        mesh, _, _ = generate_plane_mesh(spec)
        reds = mesh.colors[:, 0].astype(int)
        gt_ids = [i for i, f in enumerate(mesh.faces.tolist())
                  if (i // 48) % 2 == 0 and min(reds[v] for v in f) > 170]
        gt = DamageLabeling.from_face_ids(mesh, gt_ids)
        rows = threshold_sweep(mesh, gt, [190, 210, 230, 250])
        assert [r.threshold for r in rows] == [190, 210, 230, 250]
        for prev, cur in zip(rows, rows[1:]):
            assert cur.recall is not None and prev.recall is not None
            assert cur.recall < prev.recall
            assert cur.error < prev.error
            assert cur.jdi < prev.jdi


def test_criterion_4_bruteforce_equivalence():
    with criterion(4, "classifier equals naive triple-check, thresholds 0..255"):
        start = time.perf_counter()
        base = SynthMeshSpec(100, 50, 1.0)  # 10,000 faces
        grid, _, _ = generate_plane_mesh(base)
        rng = np.random.default_rng(2024)
        mesh = TriMesh(grid.vertices, grid.faces,
                       rng.integers(0, 256, size=(grid.n_vertices, 3)))
        assert mesh.n_faces == 10_000
        face_reds = [(reds[0], reds[1], reds[2]) for reds in
                     mesh.colors[:, 0][mesh.faces].tolist()]
        for t in range(256):
            expected = [i for i, (r0, r1, r2) in enumerate(face_reds)
                        if r0 > t and r1 > t and r2 > t]
            got = classify_damage(mesh, t).face_ids
            assert got.tolist() == expected
        assert time.perf_counter() - start < 30.0


def test_criterion_5_metric_identities():
    with criterion(5, "metric identities over 1,000 random mask pairs"):
        rng = np.random.default_rng(99)
        checked = 0
        for _ in range(600):
            h, w = int(rng.integers(2, 24)), int(rng.integers(2, 24))
            pred = rng.random((h, w)) < rng.uniform(0.1, 0.9)
            gt = rng.random((h, w)) < rng.uniform(0.1, 0.9)
            m = metrics_2d(pred, gt)
            assert m.tp + m.fn == int(np.count_nonzero(gt))
            assert m.tp + m.fp == int(np.count_nonzero(pred))
            if m.defined:
                assert 0.0 <= m.recall <= 1.0
                assert m.error >= 0.0
            for op in (flip_h, flip_v):
                f = metrics_2d(op(pred), op(gt))
                assert (f.tp, f.fp, f.fn) == (m.tp, m.fp, m.fn)
            if gt.any():
                perfect = metrics_2d(gt, gt)
                assert perfect.recall == 1.0 and perfect.error == 0.0
            checked += 1
        for _ in range(400):
            w, h = int(rng.integers(4, 40)), int(rng.integers(4, 40))

            def rect():
                x, y = int(rng.integers(0, w)), int(rng.integers(0, h))
                return RectSpec(x, y, int(rng.integers(0, w - x + 1)),
                                int(rng.integers(0, h - y + 1)))

            pred, gt, expected = generate_mask_pair(SynthMaskSpec(w, h, gt=rect(), pred=rect()))
            m = metrics_2d(pred, gt)
            assert (m.tp, m.fp, m.fn) == (expected.tp, expected.fp, expected.fn)
            checked += 1
        assert checked == 1000


def test_criterion_6_roundtrip_and_fuzz():
    with criterion(6, "1,000 mesh round trips bit-exact; 100,000 fuzz inputs"):
        rng = np.random.default_rng(7)
        for i in range(1000):
            mesh = random_mesh(rng, n_vertices=int(rng.integers(3, 14)),
                               n_faces=int(rng.integers(0, 10)))
            first = parse_ply(write_ply(mesh, encoding="binary"))
            second = parse_ply(write_ply(first, encoding="binary"))
            assert mesh_equal(mesh, first)
            assert mesh_equal(first, second)
            if i % 5 == 0:
                ascii_back = parse_ply(write_ply(mesh, encoding="ascii"))
                assert mesh_equal(mesh, ascii_back, pos_tol=1e-6)

        fixtures = [
            build_ascii_ply([(0, 0, 0), (1, 0, 0), (0, 1, 0)], [(255, 0, 0)] * 3, [(0, 1, 2)]),
            build_binary_ply([(0, 0, 0), (1, 0, 0), (0, 1, 0)], [(255, 0, 0)] * 3, [(0, 1, 2)]),
        ]
        crashes = 0
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            for trial in range(100_000):
                kind = trial % 10
                if kind < 3:
                    data = rng.integers(0, 256, size=int(rng.integers(0, 80)),
                                        dtype=np.uint8).tobytes()
                else:
                    data = bytearray(fixtures[trial % 2])
                    for _ in range(int(rng.integers(1, 6))):
                        data[int(rng.integers(0, len(data)))] = int(rng.integers(0, 256))
                    if kind < 6:
                        data = data[:int(rng.integers(0, len(data)))]
                    data = bytes(data)
                try:
                    parse_ply(data)
                except MeshError:
                    pass
                except Exception:
                    crashes += 1
        assert crashes == 0


def test_criterion_7_augmentation_expansion(tmp_path):
    with criterion(7, "263 inputs x (1 + 5 ops) = 1578 outputs, reruns byte-identical"):
        rng = np.random.default_rng(31)
        in_dir = tmp_path / "train"
        in_dir.mkdir()
        from jdq import save_image
        for i in range(263):
            img = rng.integers(0, 200, size=(6, 8, 3))
            img += np.arange(8)[None, :, None] * 7  # asymmetry: flips change bytes
            save_image(in_dir / f"joint_{i:03d}.png", np.clip(img, 0, 255).astype(np.uint8))
        out_a = tmp_path / "aug_a"
        out_b = tmp_path / "aug_b"
        for out in (out_a, out_b):
            rc = cli_main(["augment", str(in_dir), str(out),
                           "--seed", "12", "--ops-per-image", "5", "--quiet"])
            assert rc == 0
        files_a = sorted(out_a.glob("*.png"))
        files_b = sorted(out_b.glob("*.png"))
        assert len(files_a) == 1578
        assert [f.name for f in files_a] == [f.name for f in files_b]
        for fa, fb in zip(files_a, files_b):
            assert fa.read_bytes() == fb.read_bytes()


def test_criterion_8_throughput_million_faces():
    with criterion(8, "classify + area + JDI on a 1e6-face mesh in < 10 s"):
        spec = SynthMeshSpec(708, 707, 1.0, patches=[PatchSpec(100, 100, 600, 600, 255)])
        mesh, gt, exact = generate_plane_mesh(spec)
        assert mesh.n_faces >= 1_000_000
        start = time.perf_counter()
        labeling = classify_damage(mesh, 230)
        report = compute_jdi(labeling, JdiParams())
        elapsed = time.perf_counter() - start
        assert elapsed < 10.0
        assert labeling.count == gt.count
        assert abs(report.damage_area - exact) <= 1e-9 * exact


def test_criterion_9_blur_conservation():
    with criterion(9, "Gaussian kernel sums to 1; constant fixed point; mean kept"):
        for sigma in (0.25, 0.6, 1.0, 2.0, 4.5):
            assert abs(gaussian_kernel(sigma).sum() - 1.0) < 1e-12
        rng = np.random.default_rng(55)
        constant = np.full((16, 12, 3), 99, dtype=np.uint8)
        for sigma in (0.25, 1.0, 3.0):
            assert np.array_equal(gaussian_blur(constant, sigma), constant)
        for sigma in (0.25, 1.0, 2.0):
            img = rng.integers(0, 256, size=(32, 48, 3), dtype=np.uint8)
            out = gaussian_blur(img, sigma)
            assert abs(float(out.mean()) - float(img.mean())) <= 0.5


def test_reference_defaults_documented():
    # the shipped defaults: threshold 230, sawcut 500 mm, d_max 25 mm
    params = JdiParams()
    assert params.threshold == 230
    assert params.sawcut_length == 500.0
    assert params.d_max == 25.0
    assert params.coordinate_scale == 1.0
    assert params.denominator == 37500.0
