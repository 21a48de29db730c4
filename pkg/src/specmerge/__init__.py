"""specmerge: grayscale image compositing in the spatial and frequency domains.

Layers are translated, weighted by per-layer prominence coefficients, and
summed, either directly on pixels or on their 2D Fourier coefficients; the
two routes agree for integer shifts with wrap-around boundaries.
"""

from .image import (
    DimensionMismatchError,
    MalformedHeaderError,
    PgmError,
    RawImage,
    SampleRangeError,
    TruncatedPayloadError,
    align,
    decode_pgm,
    decode_png,
    encode_pgm,
    encode_png,
    normalize,
    quantize,
)
from .merging import (
    CoefficientError,
    Layer,
    MergeResult,
    MergeSpec,
    merge_frequency,
    merge_spatial,
)
from .shifting import (
    BOUNDARY_MODES,
    NonIntegerShiftError,
    Shift,
    frequency_shift,
    phase_ramp,
    signed_freq_vector,
    spatial_shift,
)
from .spectral import (
    SpectralMetrics,
    fft2d,
    ifft2d,
    log_magnitude,
    naive_dft2d,
    naive_idft2d,
    spectral_metrics,
    top_magnitude_bins,
)

__version__ = "0.1.0"

__all__ = [
    "RawImage",
    "PgmError",
    "MalformedHeaderError",
    "SampleRangeError",
    "TruncatedPayloadError",
    "DimensionMismatchError",
    "decode_pgm",
    "encode_pgm",
    "decode_png",
    "encode_png",
    "normalize",
    "quantize",
    "align",
    "fft2d",
    "ifft2d",
    "naive_dft2d",
    "naive_idft2d",
    "SpectralMetrics",
    "spectral_metrics",
    "log_magnitude",
    "top_magnitude_bins",
    "Shift",
    "BOUNDARY_MODES",
    "NonIntegerShiftError",
    "signed_freq_vector",
    "phase_ramp",
    "spatial_shift",
    "frequency_shift",
    "Layer",
    "MergeSpec",
    "MergeResult",
    "CoefficientError",
    "merge_spatial",
    "merge_frequency",
    "__version__",
]
