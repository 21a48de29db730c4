"""Grayscale image plumbing: PGM codec, normalization, quantization, alignment.

Two representations are used throughout the package:

* ``RawImage`` -- integer samples as read from / written to disk.
* a plain ``(rows, cols)`` float64 ndarray of intensities, nominally in
  [0, 1] after ``normalize``.  All pipeline math operates on these arrays.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

MAX_MAXVAL = 65535


class PgmError(ValueError):
    """Base class for PGM codec failures."""


class MalformedHeaderError(PgmError):
    """Magic number, dimensions or maxval could not be parsed."""


class SampleRangeError(PgmError):
    """A sample value lies outside [0, maxval]."""


class TruncatedPayloadError(PgmError):
    """The raster ends before rows*cols samples were read."""


class DimensionMismatchError(ValueError):
    """Images that must share a shape do not."""


@dataclass(frozen=True)
class RawImage:
    """Integer samples plus the codec maximum they are scaled against."""

    samples: np.ndarray  # (rows, cols), integer dtype
    maxval: int

    def __post_init__(self):
        samples = np.asarray(self.samples)
        if samples.ndim != 2 or samples.size == 0:
            raise ValueError(f"samples must be a nonempty 2D array, got shape {samples.shape}")
        if not np.issubdtype(samples.dtype, np.integer):
            raise ValueError(f"samples must be integers, got {samples.dtype}")
        if not 1 <= self.maxval <= MAX_MAXVAL:
            raise ValueError(f"maxval must be in [1, {MAX_MAXVAL}], got {self.maxval}")
        if samples.min() < 0 or samples.max() > self.maxval:
            raise SampleRangeError(
                f"samples must lie in [0, {self.maxval}], "
                f"got range [{samples.min()}, {samples.max()}]"
            )
        object.__setattr__(self, "samples", samples)

    @property
    def rows(self) -> int:
        return self.samples.shape[0]

    @property
    def cols(self) -> int:
        return self.samples.shape[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RawImage):
            return NotImplemented
        return self.maxval == other.maxval and np.array_equal(self.samples, other.samples)


_WHITESPACE = b" \t\r\n\v\f"


def _header_tokens(data: bytes, start: int, count: int) -> tuple[list[int], int]:
    """Read ``count`` decimal tokens, skipping whitespace and # comments."""
    tokens: list[int] = []
    i = start
    n = len(data)
    while len(tokens) < count:
        while i < n and data[i : i + 1] in _WHITESPACE:
            i += 1
        if i < n and data[i : i + 1] == b"#":
            while i < n and data[i : i + 1] != b"\n":
                i += 1
            continue
        if i >= n:
            raise MalformedHeaderError("header ended before all fields were read")
        j = i
        while j < n and data[j : j + 1] not in _WHITESPACE and data[j : j + 1] != b"#":
            j += 1
        token = data[i:j]
        if not token.isdigit():
            raise MalformedHeaderError(f"expected decimal header field, got {token!r}")
        tokens.append(int(token))
        i = j
    return tokens, i


def decode_pgm(data: bytes) -> RawImage:
    """Decode a P2 (ASCII) or P5 (binary) PGM stream.

    Comments (``#`` to end of line) are accepted after the magic number,
    in both the header and a P2 raster.
    """
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise MalformedHeaderError(f"not a PGM stream (magic {magic!r})")
    (width, height, maxval), pos = _header_tokens(data, 2, 3)
    if width < 1 or height < 1:
        raise MalformedHeaderError(f"dimensions must be positive, got {width}x{height}")
    if not 1 <= maxval <= MAX_MAXVAL:
        raise MalformedHeaderError(f"maxval must be in [1, {MAX_MAXVAL}], got {maxval}")

    if magic == b"P5":
        if pos >= len(data) or data[pos : pos + 1] not in _WHITESPACE:
            raise MalformedHeaderError("missing whitespace after maxval")
        pos += 1
        bytes_per = 1 if maxval < 256 else 2
        need = width * height * bytes_per
        raster = data[pos : pos + need]
        if len(raster) < need:
            raise TruncatedPayloadError(
                f"raster holds {len(raster)} bytes, expected {need}"
            )
        dtype = np.dtype(">u1") if bytes_per == 1 else np.dtype(">u2")
        samples = np.frombuffer(raster, dtype=dtype).astype(np.int64)
    else:
        samples_list: list[int] = []
        i = pos
        n = len(data)
        while len(samples_list) < width * height:
            while i < n and data[i : i + 1] in _WHITESPACE:
                i += 1
            if i < n and data[i : i + 1] == b"#":
                while i < n and data[i : i + 1] != b"\n":
                    i += 1
                continue
            if i >= n:
                raise TruncatedPayloadError(
                    f"raster holds {len(samples_list)} samples, expected {width * height}"
                )
            j = i
            while j < n and data[j : j + 1] not in _WHITESPACE and data[j : j + 1] != b"#":
                j += 1
            token = data[i:j]
            if not token.isdigit():
                raise PgmError(f"invalid decimal sample {token!r}")
            samples_list.append(int(token))
            i = j
        samples = np.asarray(samples_list, dtype=np.int64)

    if samples.max(initial=0) > maxval:
        raise SampleRangeError(
            f"sample {samples.max()} exceeds maxval {maxval}"
        )
    return RawImage(samples.reshape(height, width), maxval)


def encode_pgm(img: RawImage, binary: bool = True) -> bytes:
    """Encode a RawImage as canonical P5 (binary) or P2 (ASCII) bytes.

    ``decode_pgm(encode_pgm(x)) == x`` holds bit-exactly at the sample level.
    """
    header = f"{'P5' if binary else 'P2'}\n{img.cols} {img.rows}\n{img.maxval}\n".encode("ascii")
    if binary:
        dtype = np.dtype(">u1") if img.maxval < 256 else np.dtype(">u2")
        return header + img.samples.astype(dtype).tobytes()
    body = "\n".join(" ".join(str(int(s)) for s in row) for row in img.samples)
    return header + body.encode("ascii") + b"\n"


def normalize(raw: RawImage, mode: str = "maxval") -> np.ndarray:
    """Map integer samples to float intensities in [0, 1].

    ``maxval`` divides by the codec maximum; ``minmax`` rescales the observed
    range, with a constant image mapping to all zeros.
    """
    samples = raw.samples.astype(np.float64)
    if mode == "maxval":
        return samples / raw.maxval
    if mode == "minmax":
        lo, hi = samples.min(), samples.max()
        if hi == lo:
            return np.zeros_like(samples)
        return (samples - lo) / (hi - lo)
    raise ValueError(f"unknown normalize mode {mode!r}")


def quantize(img: np.ndarray, maxval: int = 255) -> tuple[RawImage, int]:
    """Clamp intensities to [0, 1] and round (half-up) to integer samples.

    Returns the RawImage and the number of pixels that required clamping.
    """
    img = np.asarray(img, dtype=np.float64)
    if not np.all(np.isfinite(img)):
        raise ValueError("pixels must be finite")
    clamped = int(np.count_nonzero((img < 0.0) | (img > 1.0)))
    clipped = np.clip(img, 0.0, 1.0)
    samples = np.floor(clipped * maxval + 0.5).astype(np.int64)
    dtype = np.uint8 if maxval < 256 else np.uint16
    return RawImage(samples.astype(dtype), maxval), clamped


def align(images: Sequence[np.ndarray], policy: str = "strict") -> list[np.ndarray]:
    """Bring images to a common shape.

    ``strict`` demands equal shapes; ``pad_zero`` zero-pads each image at the
    bottom/right to the elementwise maximum shape, anchoring content top-left.
    """
    if len(images) == 0:
        raise ValueError("align requires at least one image")
    arrays = [np.asarray(img, dtype=np.float64) for img in images]
    shapes = {a.shape for a in arrays}
    if policy == "strict":
        if len(shapes) > 1:
            raise DimensionMismatchError(f"images differ in shape: {sorted(shapes)}")
        return arrays
    if policy == "pad_zero":
        rows = max(a.shape[0] for a in arrays)
        cols = max(a.shape[1] for a in arrays)
        out = []
        for a in arrays:
            if a.shape == (rows, cols):
                out.append(a)
            else:
                padded = np.zeros((rows, cols), dtype=np.float64)
                padded[: a.shape[0], : a.shape[1]] = a
                out.append(padded)
        return out
    raise ValueError(f"unknown align policy {policy!r}")


# --- optional PNG adapter (not covered by the bit-exactness guarantees) ---

def decode_png(data: bytes) -> RawImage:
    from PIL import Image as PilImage

    with PilImage.open(io.BytesIO(data)) as pil:
        if pil.mode in ("I;16", "I;16B", "I"):
            arr = np.asarray(pil.convert("I"), dtype=np.int64)
            return RawImage(np.clip(arr, 0, MAX_MAXVAL).astype(np.uint16), MAX_MAXVAL)
        arr = np.asarray(pil.convert("L"), dtype=np.uint8)
        return RawImage(arr, 255)


def encode_png(img: RawImage) -> bytes:
    from PIL import Image as PilImage

    if img.maxval == 255:
        pil = PilImage.fromarray(img.samples.astype(np.uint8), mode="L")
    elif img.maxval == MAX_MAXVAL:
        pil = PilImage.frombytes(
            "I;16", (img.cols, img.rows), img.samples.astype("<u2").tobytes()
        )
    else:
        rescaled = np.floor(img.samples.astype(np.float64) * 255 / img.maxval + 0.5)
        pil = PilImage.fromarray(rescaled.astype(np.uint8), mode="L")
    buf = io.BytesIO()
    pil.save(buf, format="PNG")
    return buf.getvalue()
