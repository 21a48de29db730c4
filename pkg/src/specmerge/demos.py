"""Synthetic scenes for the bundled demos.

Three scenarios ship with the CLI:

* ``fig2`` -- five images, each holding one object on an empty background,
  with all supports disjoint; merging them shows both engines agree and the
  spatial path reduces to plain summation.
* ``fig3`` -- a faint wide disk overlapped by a text-like texture; merging
  at unit coefficients keeps both visible.
* ``fig4`` -- a fixed pair merged under a grid of prominence coefficients,
  one output per setting.

Geometry is fixed; the seed only jitters object intensities, so supports
stay disjoint for every seed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .image import encode_pgm, quantize
from .merging import Layer, MergeSpec, merge_frequency, merge_spatial

DEFAULT_SEED = 1729
FIG4_COEFFICIENTS = ((1.0, 1.0), (1.0, 0.5), (0.5, 1.0), (0.2, 1.0))

SIZE = 128


def _canvas() -> np.ndarray:
    return np.zeros((SIZE, SIZE), dtype=np.float64)


def _grid() -> tuple[np.ndarray, np.ndarray]:
    x = np.arange(SIZE)[:, None]
    y = np.arange(SIZE)[None, :]
    return x, y


def _disk(cx: int, cy: int, radius: int, value: float) -> np.ndarray:
    img = _canvas()
    x, y = _grid()
    img[(x - cx) ** 2 + (y - cy) ** 2 <= radius**2] = value
    return img


def _square(r0: int, r1: int, c0: int, c1: int, value: float) -> np.ndarray:
    img = _canvas()
    img[r0:r1, c0:c1] = value
    return img


def _ring(cx: int, cy: int, r_out: int, r_in: int, value: float) -> np.ndarray:
    img = _canvas()
    x, y = _grid()
    d2 = (x - cx) ** 2 + (y - cy) ** 2
    img[(d2 <= r_out**2) & (d2 >= r_in**2)] = value
    return img


def _cross(cx: int, cy: int, arm: int, thick: int, value: float) -> np.ndarray:
    img = _canvas()
    img[cx - thick : cx + thick, cy - arm : cy + arm] = value
    img[cx - arm : cx + arm, cy - thick : cy + thick] = value
    return img


def _diamond(cx: int, cy: int, radius: int, value: float) -> np.ndarray:
    img = _canvas()
    x, y = _grid()
    img[np.abs(x - cx) + np.abs(y - cy) <= radius] = value
    return img


def make_fig2_layers(seed: int = DEFAULT_SEED) -> list[np.ndarray]:
    """Five 128x128 images with pairwise disjoint object supports."""
    rng = np.random.default_rng(seed)
    v = rng.uniform(0.6, 1.0, size=5)
    return [
        _disk(24, 24, 14, v[0]),
        _square(12, 40, 80, 116, v[1]),
        _ring(92, 28, 16, 9, v[2]),
        _cross(90, 94, 16, 4, v[3]),
        _diamond(58, 62, 12, v[4]),
    ]


def make_fig3_layers(seed: int = DEFAULT_SEED) -> tuple[np.ndarray, np.ndarray]:
    """A faint soft-edged disk and an overlapping text-like block texture."""
    rng = np.random.default_rng(seed)
    x, y = _grid()
    d = np.hypot(x - 64, y - 64)
    faint_disk = 0.3 * np.clip((46.0 - d) / 8.0, 0.0, 1.0)

    texture = _canvas()
    for row in range(16, 116, 10):
        col = 16
        while col < 112:
            width = int(rng.integers(4, 14))
            if rng.random() < 0.62:
                texture[row : row + 5, col : col + width] = rng.uniform(0.55, 0.9)
            col += width + 3
    return faint_disk, texture


def make_fig4_layers(seed: int = DEFAULT_SEED) -> tuple[np.ndarray, np.ndarray]:
    """A fixed pair for the prominence sweep: bright disk vs diagonal grating."""
    rng = np.random.default_rng(seed)
    x, y = _grid()
    disk = _disk(64, 64, 36, float(rng.uniform(0.7, 0.9)))
    grating = 0.5 + 0.35 * np.sin(2.0 * np.pi * (x + y) / 16.0)
    return disk, grating


def _write_pgm(path: Path, img: np.ndarray, maxval: int = 255):
    raw, _ = quantize(img, maxval)
    path.write_bytes(encode_pgm(raw, binary=True))


@dataclass(frozen=True)
class DemoReport:
    name: str
    files: tuple[Path, ...]
    max_abs_diff: float | None
    elapsed_s: float


def run_fig2(outdir: Path, seed: int = DEFAULT_SEED) -> DemoReport:
    """Generate the 5-object scene, merge via both engines, compare them."""
    start = time.perf_counter()
    outdir.mkdir(parents=True, exist_ok=True)
    images = make_fig2_layers(seed)
    files = []
    for i, img in enumerate(images, start=1):
        path = outdir / f"fig2_input_{i}.pgm"
        _write_pgm(path, img)
        files.append(path)

    spec = MergeSpec(tuple(Layer(img) for img in images))
    spatial = merge_spatial(spec)
    frequency = merge_frequency(spec)
    diff = float(np.abs(spatial.pre_policy - frequency.pre_policy).max())

    for name, result in (("spatial", spatial), ("frequency", frequency)):
        path = outdir / f"fig2_merged.{name}.pgm"
        _write_pgm(path, result.image)
        files.append(path)
    return DemoReport("fig2", tuple(files), diff, time.perf_counter() - start)


def run_fig3(outdir: Path, seed: int = DEFAULT_SEED) -> DemoReport:
    """Merge the overlapping faint-disk / texture pair at unit coefficients."""
    start = time.perf_counter()
    outdir.mkdir(parents=True, exist_ok=True)
    first, second = make_fig3_layers(seed)
    files = []
    for i, img in enumerate((first, second), start=1):
        path = outdir / f"fig3_input_{i}.pgm"
        _write_pgm(path, img)
        files.append(path)

    spec = MergeSpec((Layer(first), Layer(second)))
    result = merge_frequency(spec)
    path = outdir / "fig3_merged.pgm"
    _write_pgm(path, result.image)
    files.append(path)
    return DemoReport("fig3", tuple(files), None, time.perf_counter() - start)


def run_fig4(outdir: Path, seed: int = DEFAULT_SEED) -> DemoReport:
    """Merge a fixed pair under the prominence-coefficient grid."""
    start = time.perf_counter()
    outdir.mkdir(parents=True, exist_ok=True)
    first, second = make_fig4_layers(seed)
    files = []
    for i, img in enumerate((first, second), start=1):
        path = outdir / f"fig4_input_{i}.pgm"
        _write_pgm(path, img)
        files.append(path)

    for a1, a2 in FIG4_COEFFICIENTS:
        spec = MergeSpec((Layer(first, coefficient=a1), Layer(second, coefficient=a2)))
        result = merge_frequency(spec)
        path = outdir / f"fig4_merged_{a1:.2f}_{a2:.2f}.pgm"
        _write_pgm(path, result.image)
        files.append(path)
    return DemoReport("fig4", tuple(files), None, time.perf_counter() - start)


DEMOS = {"fig2": run_fig2, "fig3": run_fig3, "fig4": run_fig4}
