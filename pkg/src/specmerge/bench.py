"""Timing comparison of the two merge engines on seeded random stacks.

Inputs are deterministic for a given seed, every timed pair is also checked
for numerical agreement, and medians over repetitions keep single-run noise
out of the report.
"""

from __future__ import annotations

import json
import statistics
import time
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from .merging import Layer, MergeSpec, MergeResult, merge_frequency, merge_spatial
from .shifting import Shift

MIN_SIZE = 16


@dataclass(frozen=True)
class BenchRow:
    rows: int
    cols: int
    layers: int
    spatial_ms: float
    frequency_ms: float
    max_abs_diff: float


@dataclass(frozen=True)
class BenchReport:
    seed: int
    reps: int
    rows: tuple[BenchRow, ...]

    def to_json(self) -> str:
        return json.dumps(
            {"seed": self.seed, "reps": self.reps, "rows": [asdict(r) for r in self.rows]},
            indent=2,
        )


def _random_spec(size: int, layers: int, rng: np.random.Generator) -> MergeSpec:
    images = rng.random((layers, size, size))
    shifts = rng.integers(-4, 5, size=(layers, 2))
    coeffs = rng.uniform(0.2, 1.0, size=layers)
    return MergeSpec(
        tuple(
            Layer(
                images[k],
                shift=Shift(int(shifts[k, 0]), int(shifts[k, 1])),
                coefficient=float(coeffs[k]),
                boundary="wrap",
            )
            for k in range(layers)
        )
    )


def _median_ms(fn: Callable[[], MergeResult], reps: int) -> tuple[float, MergeResult]:
    times = []
    result = None
    for _ in range(reps):
        t0 = time.perf_counter()
        result = fn()
        times.append((time.perf_counter() - t0) * 1e3)
    return statistics.median(times), result


def run_bench(
    sizes: Sequence[int],
    layers: int = 3,
    reps: int = 5,
    seed: int = 1729,
) -> BenchReport:
    if not sizes:
        raise ValueError("at least one size is required")
    if any(s < MIN_SIZE for s in sizes):
        raise ValueError(f"sizes must be >= {MIN_SIZE}, got {list(sizes)}")
    if layers < 1 or reps < 1:
        raise ValueError("layers and reps must be positive")

    rows = []
    for size in sizes:
        rng = np.random.default_rng(seed + size)
        spec = _random_spec(size, layers, rng)
        spatial_ms, spatial = _median_ms(lambda: merge_spatial(spec), reps)
        frequency_ms, frequency = _median_ms(lambda: merge_frequency(spec), reps)
        diff = float(np.abs(spatial.pre_policy - frequency.pre_policy).max())
        rows.append(
            BenchRow(
                rows=size,
                cols=size,
                layers=layers,
                spatial_ms=spatial_ms,
                frequency_ms=frequency_ms,
                max_abs_diff=diff,
            )
        )
    return BenchReport(seed=seed, reps=reps, rows=tuple(rows))
