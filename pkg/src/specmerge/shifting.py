"""Image translation in the pixel and frequency domains.

Both routes use the pull convention: out(x, y) = img(x + sx, y + sy), so a
positive sx moves content toward smaller row indices.  ``spatial_shift``
handles integer displacements with a choice of boundary fill;
``frequency_shift`` multiplies the spectrum by a unit-modulus phase ramp and
therefore supports real (subpixel) displacements with wrap-around semantics.
For integer shifts the two agree within 1e-9 per pixel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import fft2d, ifft2d

BOUNDARY_MODES = ("reflect", "wrap", "zero")


class NonIntegerShiftError(ValueError):
    """A pixel-domain shift needs integer components."""


class ShiftRangeError(ValueError):
    """A shift magnitude reaches or exceeds the image dimension."""


@dataclass(frozen=True)
class Shift:
    """Displacement in pixels: sx along rows, sy along columns."""

    sx: float
    sy: float

    def __post_init__(self):
        if not (math.isfinite(self.sx) and math.isfinite(self.sy)):
            raise ValueError(f"shift must be finite, got ({self.sx}, {self.sy})")

    @property
    def is_integer(self) -> bool:
        return float(self.sx).is_integer() and float(self.sy).is_integer()

    def as_integers(self) -> tuple[int, int]:
        if not self.is_integer:
            raise NonIntegerShiftError(
                f"shift ({self.sx}, {self.sy}) has non-integer components"
            )
        return int(self.sx), int(self.sy)


def signed_freq_vector(n: int) -> np.ndarray:
    """DFT bin frequencies [0, 1/n, ..., floor((n-1)/2)/n, -ceil((n-1)/2)/n, ..., -1/n]."""
    if n < 1:
        raise ValueError(f"length must be positive, got {n}")
    k = np.arange(n)
    return np.where(k <= (n - 1) // 2, k, k - n) / n


def phase_ramp(rows: int, cols: int, shift: Shift) -> np.ndarray:
    """Unit-modulus spectrum multiplier that pulls an image by ``shift``.

    ramp(u, v) = exp(+j*2*pi*(w_r(u)*sx + w_c(v)*sy)); the positive sign
    matches the pull convention used by ``spatial_shift``.
    """
    if rows < 1 or cols < 1:
        raise ValueError(f"grid must be positive, got {rows}x{cols}")
    w_r = signed_freq_vector(rows)[:, None]
    w_c = signed_freq_vector(cols)[None, :]
    return np.exp(2j * np.pi * (w_r * shift.sx + w_c * shift.sy))


def spatial_shift(img: np.ndarray, shift: Shift, mode: str = "wrap") -> np.ndarray:
    """Translate by whole pixels: out(x, y) = img(x + sx, y + sy).

    Cells whose source falls outside the image are filled per ``mode``:
    ``wrap`` reads the source modulo the image size, ``zero`` writes 0, and
    ``reflect`` writes the 180-degree-rotated pixel img(R-1-x, C-1-y).
    """
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2 or img.size == 0:
        raise ValueError(f"expected a nonempty 2D array, got shape {img.shape}")
    if mode not in BOUNDARY_MODES:
        raise ValueError(f"mode must be one of {BOUNDARY_MODES}, got {mode!r}")
    sx, sy = shift.as_integers()
    rows, cols = img.shape
    if abs(sx) >= rows or abs(sy) >= cols:
        raise ShiftRangeError(
            f"shift ({sx}, {sy}) out of range for a {rows}x{cols} image"
        )

    x = np.arange(rows)[:, None] + sx
    y = np.arange(cols)[None, :] + sy
    pulled = img[np.mod(x, rows), np.mod(y, cols)]
    if mode == "wrap":
        return pulled
    inside = (x >= 0) & (x < rows) & (y >= 0) & (y < cols)
    if mode == "zero":
        return np.where(inside, pulled, 0.0)
    return np.where(inside, pulled, img[::-1, ::-1])


def frequency_shift(img: np.ndarray, shift: Shift) -> np.ndarray:
    """Translate via the shift theorem; wraps circularly, accepts subpixel shifts.

    The result is the real part of the inverse transform; for non-integer
    shifts it may slightly leave [0, 1] (ringing) and is not clamped here.
    """
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2 or img.size == 0:
        raise ValueError(f"expected a nonempty 2D array, got shape {img.shape}")
    rows, cols = img.shape
    ramp = phase_ramp(rows, cols, shift)
    out, _ = ifft2d(fft2d(img) * ramp)
    return out
