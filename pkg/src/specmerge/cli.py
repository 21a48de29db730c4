"""Command-line front end.

Subcommands: merge (manifest-driven), shift, spectrum, demo, bench, serve.
Reports go to standard output, diagnostics to standard error; failures exit
nonzero with a single ``error: <TypeName>: <message>`` line.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .bench import run_bench
from .demos import DEFAULT_SEED, DEMOS
from .image import align, decode_pgm, encode_pgm, normalize, quantize
from .manifest import Manifest, load_manifest
from .merging import Layer, MergeSpec, merge_frequency, merge_spatial
from .shifting import Shift, frequency_shift, spatial_shift
from .spectral import fft2d, log_magnitude, spectral_metrics, top_magnitude_bins

EQUIVALENCE_TOL = 1e-9

SHIFT_MODES = ("spatial:reflect", "spatial:wrap", "spatial:zero", "frequency")


def _seed() -> int:
    return int(os.environ.get("SPECMERGE_SEED", DEFAULT_SEED))


def _read_image(path: Path) -> bytes:
    if not path.is_file():
        raise FileNotFoundError(f"file not found: {path}")
    return path.read_bytes()


def _build_merge_spec(manifest: Manifest) -> MergeSpec:
    raws = [decode_pgm(_read_image(entry.path)) for entry in manifest.layers]
    floats = [normalize(raw, manifest.normalize) for raw in raws]
    aligned = align(floats, manifest.align)
    layers = tuple(
        Layer(img, shift=entry.shift, coefficient=entry.coefficient, boundary=entry.boundary)
        for img, entry in zip(aligned, manifest.layers)
    )
    return MergeSpec(layers, output_policy=manifest.output.policy)


def _engine_path(base: Path, engine: str) -> Path:
    return base.parent / f"{base.stem}.{engine}.pgm"


def cmd_merge(args) -> int:
    manifest = load_manifest(args.manifest)
    spec = _build_merge_spec(manifest)

    engines = ("spatial", "frequency") if manifest.engine == "both" else (manifest.engine,)
    results = {}
    for engine in engines:
        fn = merge_spatial if engine == "spatial" else merge_frequency
        result = fn(spec)
        out_path = (
            _engine_path(manifest.output.path, engine)
            if manifest.engine == "both"
            else manifest.output.path
        )
        raw, _ = quantize(result.image, manifest.output.maxval)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_bytes(encode_pgm(raw, binary=True))
        print(
            f"{engine}: wrote {out_path} "
            f"imag_residue={result.imag_residue:.3e} "
            f"clamped_fraction={result.clamped_fraction:.6f}",
            file=sys.stderr,
        )
        results[engine] = result

    if manifest.engine == "both":
        diff = float(
            np.abs(results["spatial"].pre_policy - results["frequency"].pre_policy).max()
        )
        print(f"max_abs_diff {diff:.6e}")
        if spec_has_integer_shifts(spec) and diff >= EQUIVALENCE_TOL:
            print(
                f"error: MergeEquivalenceError: engines disagree by {diff:.3e}",
                file=sys.stderr,
            )
            return 1
    return 0


def spec_has_integer_shifts(spec: MergeSpec) -> bool:
    return all(layer.shift.is_integer for layer in spec.layers)


def cmd_shift(args) -> int:
    raw = decode_pgm(_read_image(Path(args.input)))
    img = normalize(raw, "maxval")
    shift = Shift(args.sx, args.sy)
    if args.mode == "frequency":
        out = frequency_shift(img, shift)
    else:
        out = spatial_shift(img, shift, args.mode.split(":", 1)[1])
    out_raw, clamped = quantize(out, raw.maxval)
    out_path = Path(args.output)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_bytes(encode_pgm(out_raw, binary=True))
    print(f"wrote {out_path} clamped_pixels={clamped}", file=sys.stderr)
    return 0


def cmd_spectrum(args) -> int:
    raw = decode_pgm(_read_image(Path(args.input)))
    img = normalize(raw, "maxval")
    coeffs = fft2d(img)

    magnitude = np.fft.fftshift(log_magnitude(coeffs))
    lo, hi = magnitude.min(), magnitude.max()
    display = (magnitude - lo) / (hi - lo) if hi > lo else np.zeros_like(magnitude)
    out_raw, _ = quantize(display, 255)
    out_path = Path(args.output)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_bytes(encode_pgm(out_raw, binary=True))
    print(f"wrote {out_path}", file=sys.stderr)

    rows, cols = img.shape
    for u, v, mag in top_magnitude_bins(coeffs, args.top_k):
        m = spectral_metrics(rows, cols, u, v)
        print(
            f"u={u} v={v} magnitude={mag:.6e} "
            f"lambda_u={m.lambda_u:g} lambda_v={m.lambda_v:g} lambda_wf={m.lambda_wf:g} "
            f"omega_u={m.omega_u:g} omega_v={m.omega_v:g} omega_wf={m.omega_wf:g} "
            f"theta_wf={m.theta_wf:g}"
        )
    return 0


def cmd_demo(args) -> int:
    report = DEMOS[args.name](Path(args.outdir), seed=_seed())
    for path in report.files:
        print(f"wrote {path}", file=sys.stderr)
    if report.max_abs_diff is not None:
        print(f"{report.name} max_abs_diff {report.max_abs_diff:.6e}")
        if report.max_abs_diff >= EQUIVALENCE_TOL:
            print(
                f"error: MergeEquivalenceError: engines disagree by {report.max_abs_diff:.3e}",
                file=sys.stderr,
            )
            return 1
    print(f"{report.name} done in {report.elapsed_s:.3f}s")
    return 0


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    report = run_bench(sizes, layers=args.layers, reps=args.reps, seed=_seed())
    print(report.to_json())
    worst = max(row.max_abs_diff for row in report.rows)
    if worst >= EQUIVALENCE_TOL:
        print(
            f"error: MergeEquivalenceError: engines disagree by {worst:.3e}",
            file=sys.stderr,
        )
        return 1
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(static_root=args.root)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specmerge",
        description="Compose grayscale images in the spatial or frequency domain.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("merge", help="merge layers per a JSON manifest")
    p.add_argument("--manifest", required=True, help="path to the manifest file")
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("shift", help="translate one image")
    p.add_argument("--in", dest="input", required=True, help="input PGM")
    p.add_argument("--sx", type=float, required=True, help="row displacement, pixels")
    p.add_argument("--sy", type=float, required=True, help="column displacement, pixels")
    p.add_argument("--mode", choices=SHIFT_MODES, default="frequency")
    p.add_argument("--out", dest="output", required=True, help="output PGM")
    p.set_defaults(func=cmd_shift)

    p = sub.add_parser("spectrum", help="export a log-magnitude spectrum image")
    p.add_argument("--in", dest="input", required=True, help="input PGM")
    p.add_argument("--out", dest="output", required=True, help="output PGM")
    p.add_argument("--top-k", type=int, default=5, help="bins to describe on stdout")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("demo", help="generate and merge a bundled synthetic scene")
    p.add_argument("name", choices=sorted(DEMOS))
    p.add_argument("--outdir", required=True, help="directory for generated files")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("bench", help="time both engines on seeded random stacks")
    p.add_argument("--sizes", default="64,128", help="comma-separated square sizes")
    p.add_argument("--layers", type=int, default=3)
    p.add_argument("--reps", type=int, default=5)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("serve", help="run the interactive tuning server")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--root", default=None, help="directory with the static UI bundle")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
