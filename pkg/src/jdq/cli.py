"""Command-line front end: quantify | sweep | eval2d | eval3d | mask | augment | synth.

Commands are deterministic given their arguments (seeds included), so
rerunning a command overwrites its outputs byte-identically.  Wall-clock
stage timings are observational and therefore go to stderr (and
optionally a --timing-out JSON file), never into the report artifacts.
Exit codes: 0 success, 1 I/O failure, 2 validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import damage, image2d, report, synth
from .mesh import MeshError, load_mesh, save_ply, write_ply
from .metrics import SegMetrics


def _parse_rgb(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"expected a color as R,G,B, got {text!r}")
    rgb = tuple(int(p) for p in parts)
    if any(not 0 <= c <= 255 for c in rgb):
        raise ValueError("color channels must be in 0..255")
    return rgb


def _parse_thresholds(text: str) -> list[int]:
    return [int(p) for p in text.split(",") if p.strip()]


def _emit(doc_text: str, out_path: str | None) -> None:
    if out_path:
        Path(out_path).write_text(doc_text, encoding="utf-8")
    else:
        sys.stdout.write(doc_text)


def _jdi_params(args) -> damage.JdiParams:
    return damage.JdiParams(
        sawcut_length=args.sawcut_length_mm,
        d_max=args.dmax_mm,
        coordinate_scale=args.scale,
        threshold=getattr(args, "threshold", damage.DEFAULT_THRESHOLD),
    )


def _resolve_gt(args, mesh, run) -> damage.DamageLabeling:
    """Ground truth from a face-list file or a color key on a companion mesh."""
    if bool(args.gt_faces) == bool(args.gt_color):
        raise ValueError("provide exactly one of --gt-faces or --gt-color")
    if args.gt_faces:
        with run.stage("load_gt"):
            run.inputs["gt_faces"] = args.gt_faces
            return damage.load_face_list(args.gt_faces, mesh)
    with run.stage("load_gt"):
        gt_mesh = mesh
        if args.gt_mesh:
            run.inputs["gt_mesh"] = args.gt_mesh
            gt_mesh = load_mesh(args.gt_mesh)
            if gt_mesh.n_faces != mesh.n_faces or gt_mesh.n_vertices != mesh.n_vertices:
                raise ValueError("ground-truth mesh does not match the input mesh structure")
            if not np.allclose(gt_mesh.vertices, mesh.vertices, rtol=0.0, atol=1e-6):
                raise ValueError("ground-truth mesh geometry differs from the input mesh")
        color = _parse_rgb(args.gt_color)
        labeling = damage.ground_truth_from_color(gt_mesh, color, tolerance=args.gt_tolerance)
        return damage.DamageLabeling.from_face_ids(mesh, labeling.face_ids)


def cmd_quantify(args, run: report.RunReport) -> int:
    run.inputs["mesh"] = args.mesh
    with run.stage("read_mesh"):
        mesh = load_mesh(args.mesh)
    params = _jdi_params(args)
    with run.stage("classify"):
        labeling = damage.classify_damage(mesh, params.threshold,
                                          red_dominance=args.red_dominance)
    with run.stage("quantify"):
        jdi = damage.compute_jdi(labeling, params)
    with run.stage("report"):
        _emit(report.dump_json(report.jdi_report_dict(jdi)), args.out)
        if args.out:
            run.outputs.append(args.out)
    if args.recolor:
        with run.stage("write_recolored"):
            save_ply(mesh, args.recolor, labeling=labeling, encoding=args.encoding)
            run.outputs.append(args.recolor)
    return 0


def cmd_sweep(args, run: report.RunReport) -> int:
    run.inputs["mesh"] = args.mesh
    with run.stage("read_mesh"):
        mesh = load_mesh(args.mesh)
    gt = _resolve_gt(args, mesh, run)
    thresholds = _parse_thresholds(args.thresholds)
    params = damage.JdiParams(sawcut_length=args.sawcut_length_mm, d_max=args.dmax_mm,
                              coordinate_scale=args.scale)
    with run.stage("sweep"):
        rows = damage.threshold_sweep(mesh, gt, thresholds, params=params,
                                      red_dominance=args.red_dominance)
    with run.stage("report"):
        _emit(report.format_sweep_csv(rows), args.out_csv)
        if args.out_csv:
            run.outputs.append(args.out_csv)
    if args.plot:
        with run.stage("render_plot"):
            report.render_sweep_figure(rows, args.plot)
            run.outputs.append(args.plot)
    return 0


def cmd_eval3d(args, run: report.RunReport) -> int:
    run.inputs["mesh"] = args.mesh
    with run.stage("read_mesh"):
        mesh = load_mesh(args.mesh)
    if (args.pred_faces is None) == (args.threshold is None):
        raise ValueError("provide exactly one of --pred-faces or --threshold")
    if args.pred_faces:
        run.inputs["pred_faces"] = args.pred_faces
        with run.stage("load_pred"):
            pred = damage.load_face_list(args.pred_faces, mesh)
    else:
        with run.stage("classify"):
            pred = damage.classify_damage(mesh, args.threshold,
                                          red_dominance=args.red_dominance)
    gt = _resolve_gt(args, mesh, run)
    with run.stage("evaluate"):
        m = damage.metrics_3d(pred, gt, mesh)
        s2 = args.scale * args.scale
        m = SegMetrics(m.tp * s2, m.fp * s2, m.fn * s2)
    with run.stage("report"):
        _emit(report.dump_json(report.seg_metrics_dict(m)), args.out)
        if args.out:
            run.outputs.append(args.out)
    return 0


def cmd_eval2d(args, run: report.RunReport) -> int:
    run.inputs.update({"pred": args.pred, "gt": args.gt})
    with run.stage("read_masks"):
        pred = image2d.load_mask(args.pred)
        gt = image2d.load_mask(args.gt)
    with run.stage("evaluate"):
        m = image2d.metrics_2d(pred, gt)
    with run.stage("report"):
        _emit(report.dump_json(report.seg_metrics_dict(m)), args.out)
        if args.out:
            run.outputs.append(args.out)
    return 0


def cmd_mask(args, run: report.RunReport) -> int:
    run.inputs.update({"image": args.image, "mask": args.mask})
    with run.stage("read_inputs"):
        img = image2d.load_image(args.image)
        mask = image2d.load_mask(args.mask)
    with run.stage("apply_mask"):
        out = image2d.apply_color_mask(img, mask, _parse_rgb(args.color))
    with run.stage("write_outputs"):
        image2d.save_image(args.out, out)
        run.outputs.append(args.out)
    return 0


def cmd_augment(args, run: report.RunReport) -> int:
    in_dir = Path(args.input_dir)
    out_dir = Path(args.out_dir)
    run.inputs["input_dir"] = str(in_dir)
    with run.stage("read_images"):
        paths = sorted(in_dir.glob("*.png"))
        if not paths:
            raise ValueError(f"no .png images found in {in_dir}")
        images = [image2d.load_image(p) for p in paths]
    with run.stage("augment"):
        variants = image2d.augment_batch(
            images, seed=args.seed, ops_per_image=args.ops_per_image,
            blur_sigma=args.blur_sigma, brighten=args.brighten, darken=args.darken)
    with run.stage("write_outputs"):
        out_dir.mkdir(parents=True, exist_ok=True)
        per_image = 1 + args.ops_per_image
        for i, path in enumerate(paths):
            for j in range(per_image):
                out_path = out_dir / f"{path.stem}_v{j:02d}.png"
                image2d.save_image(out_path, variants[i * per_image + j])
        run.outputs.append(str(out_dir))
    sys.stdout.write(report.dump_json({
        "schema": report.SCHEMA_VERSION,
        "inputs": len(paths),
        "outputs": len(variants),
    }))
    return 0


def cmd_synth(args, run: report.RunReport) -> int:
    run.inputs["spec"] = args.spec
    with run.stage("read_spec"):
        doc = json.loads(Path(args.spec).read_text(encoding="utf-8"))
        kind = doc.get("kind", "mesh")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if kind == "mesh":
        spec = synth.SynthMeshSpec.from_dict(doc)
        with run.stage("generate"):
            mesh, gt, exact_area = synth.generate_plane_mesh(spec)
        with run.stage("write_outputs"):
            mesh_path = out_dir / "mesh.ply"
            mesh_path.write_bytes(write_ply(mesh, encoding=args.encoding))
            gt_path = out_dir / "gt_faces.txt"
            gt_path.write_text(damage.format_face_list(gt.face_ids), encoding="utf-8")
            expected = {
                "schema": report.SCHEMA_VERSION,
                "kind": "mesh",
                "exact_patch_area": exact_area,
                "gt_face_count": gt.count,
                "total_mesh_area": spec.grid_nx * spec.grid_ny * spec.cell_size ** 2,
            }
            (out_dir / "expected.json").write_text(report.dump_json(expected), encoding="utf-8")
            run.outputs += [str(mesh_path), str(gt_path), str(out_dir / "expected.json")]
    elif kind == "mask":
        spec = synth.SynthMaskSpec.from_dict(doc)
        with run.stage("generate"):
            pred, gt_mask, expected_metrics = synth.generate_mask_pair(spec)
        with run.stage("write_outputs"):
            image2d.save_mask(out_dir / "pred.png", pred)
            image2d.save_mask(out_dir / "gt.png", gt_mask)
            expected = {"schema": report.SCHEMA_VERSION, "kind": "mask",
                        **expected_metrics.to_dict()}
            (out_dir / "expected.json").write_text(report.dump_json(expected), encoding="utf-8")
            run.outputs += [str(out_dir / "pred.png"), str(out_dir / "gt.png"),
                            str(out_dir / "expected.json")]
    else:
        raise ValueError(f"unknown synth spec kind {kind!r} (expected 'mesh' or 'mask')")
    return 0


def _add_jdi_flags(p: argparse.ArgumentParser, with_threshold: bool = True):
    if with_threshold:
        p.add_argument("--threshold", type=int, default=damage.DEFAULT_THRESHOLD,
                       help="red channel threshold, 0..255 (default %(default)s)")
    p.add_argument("--scale", type=float, default=1.0,
                   help="mesh units to mm multiplier (default %(default)s)")
    p.add_argument("--sawcut-length-mm", type=float, default=500.0,
                   help="observed sawcut length in mm (default %(default)s)")
    p.add_argument("--dmax-mm", type=float, default=25.0,
                   help="maximum aggregate size in mm (default %(default)s)")
    p.add_argument("--red-dominance", action="store_true",
                   help="require red > green and red > blue at every vertex")


def _add_gt_flags(p: argparse.ArgumentParser):
    p.add_argument("--gt-faces", help="ground-truth face list file (one index per line)")
    p.add_argument("--gt-color", help="ground-truth color key R,G,B on the mesh")
    p.add_argument("--gt-tolerance", type=int, default=0,
                   help="per-channel tolerance for --gt-color (default %(default)s)")
    p.add_argument("--gt-mesh", help="companion mesh to extract --gt-color from "
                                     "(defaults to the input mesh)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jdq",
        description="Quantify sawcut joint damage on vertex-colored meshes and 2D masks.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--timing-out", help="write the stage timing report to a JSON file")
    common.add_argument("--quiet", action="store_true", help="suppress stderr timing lines")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("quantify", parents=[common],
                       help="classify damage on a mesh and report the damage index")
    p.add_argument("mesh", help="input mesh (.ply or .obj)")
    _add_jdi_flags(p)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--recolor", help="write a PLY with damaged faces painted green")
    p.add_argument("--encoding", choices=("binary", "ascii"), default="binary")
    p.set_defaults(func=cmd_quantify)

    p = sub.add_parser("sweep", parents=[common],
                       help="classify and evaluate across several thresholds")
    p.add_argument("mesh")
    _add_gt_flags(p)
    p.add_argument("--thresholds", default="190,210,230,250",
                   help="comma-separated thresholds (default %(default)s)")
    _add_jdi_flags(p, with_threshold=False)
    p.add_argument("--out-csv", help="write the sweep CSV here instead of stdout")
    p.add_argument("--plot", help="also render the sweep curves to this PNG")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("eval3d", parents=[common],
                       help="recall/error of predicted damage against 3D ground truth")
    p.add_argument("mesh")
    p.add_argument("--pred-faces", help="predicted face list file")
    p.add_argument("--threshold", type=int,
                   help="classify the prediction at this red threshold")
    _add_jdi_flags(p, with_threshold=False)
    _add_gt_flags(p)
    p.add_argument("--out", help="write the JSON metrics here instead of stdout")
    p.set_defaults(func=cmd_eval3d)

    p = sub.add_parser("eval2d", parents=[common],
                       help="recall/error of a predicted 2D mask against ground truth")
    p.add_argument("pred", help="predicted mask PNG (nonzero = damage)")
    p.add_argument("gt", help="ground-truth mask PNG")
    p.add_argument("--out", help="write the JSON metrics here instead of stdout")
    p.set_defaults(func=cmd_eval2d)

    p = sub.add_parser("mask", parents=[common],
                       help="paint masked pixels of an image with a solid color")
    p.add_argument("image")
    p.add_argument("mask")
    p.add_argument("--color", default="255,0,0", help="overlay color (default %(default)s)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_mask)

    p = sub.add_parser("augment", parents=[common],
                       help="expand a directory of PNGs with seeded random augmentations")
    p.add_argument("input_dir")
    p.add_argument("out_dir")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ops-per-image", type=int, default=5)
    p.add_argument("--blur-sigma", type=float, default=image2d.DEFAULT_BLUR_SIGMA)
    p.add_argument("--brighten", type=float, default=image2d.DEFAULT_BRIGHTEN)
    p.add_argument("--darken", type=float, default=image2d.DEFAULT_DARKEN)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("synth", parents=[common],
                       help="generate synthetic mesh or mask fixtures from a JSON spec")
    p.add_argument("spec", help="fixture spec JSON")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--encoding", choices=("binary", "ascii"), default="binary")
    p.set_defaults(func=cmd_synth)
    return parser


def _error_doc(exc: BaseException) -> str:
    if isinstance(exc, KeyError) and exc.args:
        message = f"missing required key {exc.args[0]!r}"
    else:
        message = str(exc)
    return json.dumps({"error": type(exc).__name__, "message": message})


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    run = report.RunReport(command=args.command)
    try:
        rc = args.func(args, run)
    except (MeshError, ValueError, TypeError, KeyError, json.JSONDecodeError) as exc:
        print(_error_doc(exc), file=sys.stderr)
        rc = 2
    except OSError as exc:
        print(_error_doc(exc), file=sys.stderr)
        rc = 1
    if not args.quiet:
        for line in run.lines():
            print(line, file=sys.stderr)
    if args.timing_out:
        Path(args.timing_out).write_text(report.dump_json(run.to_dict()), encoding="utf-8")
    return rc


if __name__ == "__main__":
    sys.exit(main())
