"""2D discrete Fourier transforms and spectral-plane analytics.

The transform convention is unscaled forward / (1/(rows*cols)) inverse:

    coeff(u, v) = sum_x sum_y img(x, y) * exp(-j*2*pi*(u*x/rows + v*y/cols))

``fft2d``/``ifft2d`` compute it via the FFT; ``naive_dft2d``/``naive_idft2d``
evaluate the defining double sums term by term and exist as an independent
cross-check, so they must stay free of any FFT call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# The naive transforms are O((rows*cols)^2); cap them to keep checks fast.
NAIVE_PIXEL_LIMIT = 4096


def fft2d(img: np.ndarray) -> np.ndarray:
    """Forward 2D DFT, unscaled."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2 or img.size == 0:
        raise ValueError(f"expected a nonempty 2D array, got shape {img.shape}")
    return np.fft.fft2(img)


def ifft2d(coeffs: np.ndarray) -> tuple[np.ndarray, float]:
    """Inverse 2D DFT with the 1/(rows*cols) factor.

    Returns the real part together with the largest absolute imaginary
    component, which measures how far the coefficients were from describing
    a real image.
    """
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    if coeffs.ndim != 2 or coeffs.size == 0:
        raise ValueError(f"expected a nonempty 2D array, got shape {coeffs.shape}")
    full = np.fft.ifft2(coeffs)
    residue = float(np.abs(full.imag).max())
    return full.real, residue


def _check_naive_size(rows: int, cols: int):
    if rows * cols > NAIVE_PIXEL_LIMIT:
        raise ValueError(
            f"naive transform limited to {NAIVE_PIXEL_LIMIT} pixels, got {rows * cols}"
        )


def naive_dft2d(img: np.ndarray) -> np.ndarray:
    """Forward 2D DFT evaluated from its defining sums.

    Each coefficient is accumulated as a real (cosine) and imaginary
    (negative sine) part over every pixel.
    """
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2 or img.size == 0:
        raise ValueError(f"expected a nonempty 2D array, got shape {img.shape}")
    rows, cols = img.shape
    _check_naive_size(rows, cols)
    x = np.arange(rows)[:, None]
    y = np.arange(cols)[None, :]
    out = np.empty((rows, cols), dtype=np.complex128)
    for u in range(rows):
        for v in range(cols):
            angle = 2.0 * np.pi * (u * x / rows + v * y / cols)
            re = np.sum(img * np.cos(angle))
            im = -np.sum(img * np.sin(angle))
            out[u, v] = complex(re, im)
    return out


def naive_idft2d(coeffs: np.ndarray) -> np.ndarray:
    """Inverse 2D DFT from its defining sums; returns the complex result."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    if coeffs.ndim != 2 or coeffs.size == 0:
        raise ValueError(f"expected a nonempty 2D array, got shape {coeffs.shape}")
    rows, cols = coeffs.shape
    _check_naive_size(rows, cols)
    u = np.arange(rows)[:, None]
    v = np.arange(cols)[None, :]
    out = np.empty((rows, cols), dtype=np.complex128)
    for x in range(rows):
        for y in range(cols):
            angle = 2.0 * np.pi * (u * x / rows + v * y / cols)
            out[x, y] = np.sum(coeffs * (np.cos(angle) + 1j * np.sin(angle)))
    return out / (rows * cols)


@dataclass(frozen=True)
class SpectralMetrics:
    """Wavelengths, frequencies and wavefront angle of one spectral bin."""

    u: int
    v: int
    lambda_u: float  # horizontal wavelength, pixels
    lambda_v: float  # vertical wavelength, pixels
    lambda_wf: float  # wavefront wavelength, pixels
    omega_u: float  # horizontal frequency, cycles per pixel
    omega_v: float  # vertical frequency, cycles per pixel
    omega_wf: float  # wavefront frequency, cycles per pixel
    theta_wf: float  # wavefront angle, degrees from the horizontal


def spectral_metrics(rows: int, cols: int, u: int, v: int) -> SpectralMetrics:
    """Describe the plane wave of bin (u, v) on a rows x cols grid.

    ``u`` counts cycles along the vertical axis (rows), ``v`` along the
    horizontal axis (cols).  Zero indices give infinite wavelengths; the
    DC bin has zero frequency and zero angle by convention, while a purely
    vertical wave (u > 0, v = 0) is at 90 degrees.
    """
    if rows < 1 or cols < 1:
        raise ValueError(f"grid must be positive, got {rows}x{cols}")
    if not 0 <= u < rows or not 0 <= v < cols:
        raise ValueError(f"bin ({u}, {v}) outside grid {rows}x{cols}")

    lambda_u = cols / u if u else math.inf
    lambda_v = rows / v if v else math.inf
    # One zero index already blows up the root-sum-square, so the wavefront
    # wavelength is finite only for bins oblique to both axes.
    lambda_wf = math.hypot(cols / u, rows / v) if (u and v) else math.inf

    if u == 0 and v == 0:
        theta_wf = 0.0
    else:
        theta_wf = math.degrees(math.atan2(v * cols, u * rows))

    omega_u = u / cols
    omega_v = v / rows
    omega_wf = 0.0 if math.isinf(lambda_wf) else 1.0 / lambda_wf

    return SpectralMetrics(
        u=u,
        v=v,
        lambda_u=lambda_u,
        lambda_v=lambda_v,
        lambda_wf=lambda_wf,
        omega_u=omega_u,
        omega_v=omega_v,
        omega_wf=omega_wf,
        theta_wf=theta_wf,
    )


def log_magnitude(coeffs: np.ndarray) -> np.ndarray:
    """log(1 + |coeff|) of each bin, a display-friendly magnitude map."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    return np.log1p(np.abs(coeffs))


def top_magnitude_bins(coeffs: np.ndarray, k: int) -> list[tuple[int, int, float]]:
    """The k bins of largest magnitude, as (u, v, magnitude) tuples.

    Ties break deterministically on (u, v) row-major order; the DC bin
    competes like any other.
    """
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    if coeffs.ndim != 2 or coeffs.size == 0:
        raise ValueError(f"expected a nonempty 2D array, got shape {coeffs.shape}")
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    rows, cols = coeffs.shape
    mags = np.abs(coeffs).ravel()
    flat = np.arange(mags.size)
    # Sort by descending magnitude, then ascending flat index for stable ties.
    order = np.lexsort((flat, -mags))
    out = []
    for idx in order[: min(k, mags.size)]:
        u, v = divmod(int(idx), cols)
        out.append((u, v, float(mags[idx])))
    return out
