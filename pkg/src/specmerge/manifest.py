"""Merge manifests: a small JSON schema describing a whole merge run.

Example:

    {
      "layers": [
        {"path": "a.pgm"},
        {"path": "b.pgm", "coefficient": 0.3, "shift": [3, -2], "boundary": "wrap"}
      ],
      "normalize": "maxval",
      "align": "strict",
      "engine": "frequency",
      "output": {"path": "merged.pgm", "policy": "clamp", "maxval": 255}
    }

Unknown keys anywhere are rejected, so typos fail fast instead of being
silently ignored.  Relative paths resolve against the manifest's directory.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .shifting import Shift

NORMALIZE_MODES = ("maxval", "minmax")
ALIGN_POLICIES = ("strict", "pad_zero")
ENGINES = ("spatial", "frequency", "both")
OUTPUT_POLICIES = ("clamp", "rescale")


class ManifestError(ValueError):
    """The manifest file is structurally or semantically invalid."""


@dataclass(frozen=True)
class LayerEntry:
    path: Path
    coefficient: float = 1.0
    shift: Shift = Shift(0.0, 0.0)
    boundary: str = "wrap"


@dataclass(frozen=True)
class OutputSpec:
    path: Path
    policy: str = "clamp"
    maxval: int = 255


@dataclass(frozen=True)
class Manifest:
    layers: tuple[LayerEntry, ...]
    output: OutputSpec
    normalize: str = "maxval"
    align: str = "strict"
    engine: str = "frequency"


def _require_keys(obj: dict, allowed: set[str], where: str):
    unknown = set(obj) - allowed
    if unknown:
        raise ManifestError(f"unknown key(s) {sorted(unknown)} in {where}")


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ManifestError(f"{where} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ManifestError(f"{where} must be finite, got {value!r}")
    return float(value)


def _choice(value, options: tuple[str, ...], where: str) -> str:
    if value not in options:
        raise ManifestError(f"{where} must be one of {options}, got {value!r}")
    return value


def _parse_layer(obj, index: int, base: Path) -> LayerEntry:
    where = f"layers[{index}]"
    if not isinstance(obj, dict):
        raise ManifestError(f"{where} must be an object, got {type(obj).__name__}")
    _require_keys(obj, {"path", "coefficient", "shift", "boundary"}, where)
    if "path" not in obj or not isinstance(obj["path"], str) or not obj["path"]:
        raise ManifestError(f"{where} needs a nonempty string path")
    coefficient = _number(obj.get("coefficient", 1.0), f"{where}.coefficient")
    if coefficient < 0:
        raise ManifestError(f"{where}.coefficient must be >= 0, got {coefficient}")
    raw_shift = obj.get("shift", [0, 0])
    if not isinstance(raw_shift, list) or len(raw_shift) != 2:
        raise ManifestError(f"{where}.shift must be a [sx, sy] pair, got {raw_shift!r}")
    sx = _number(raw_shift[0], f"{where}.shift[0]")
    sy = _number(raw_shift[1], f"{where}.shift[1]")
    boundary = _choice(obj.get("boundary", "wrap"), ("reflect", "wrap", "zero"), f"{where}.boundary")
    return LayerEntry(
        path=(base / obj["path"]).resolve(),
        coefficient=coefficient,
        shift=Shift(sx, sy),
        boundary=boundary,
    )


def _parse_output(obj, base: Path) -> OutputSpec:
    if not isinstance(obj, dict):
        raise ManifestError(f"output must be an object, got {type(obj).__name__}")
    _require_keys(obj, {"path", "policy", "maxval"}, "output")
    if "path" not in obj or not isinstance(obj["path"], str) or not obj["path"]:
        raise ManifestError("output needs a nonempty string path")
    policy = _choice(obj.get("policy", "clamp"), OUTPUT_POLICIES, "output.policy")
    maxval = obj.get("maxval", 255)
    if isinstance(maxval, bool) or not isinstance(maxval, int) or not 1 <= maxval <= 65535:
        raise ManifestError(f"output.maxval must be an integer in [1, 65535], got {maxval!r}")
    return OutputSpec(path=(base / obj["path"]).resolve(), policy=policy, maxval=maxval)


def parse_manifest(text: str, base_dir: Path) -> Manifest:
    """Parse manifest JSON text, resolving paths against ``base_dir``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ManifestError(f"manifest root must be an object, got {type(doc).__name__}")
    _require_keys(doc, {"layers", "normalize", "align", "engine", "output"}, "manifest")

    raw_layers = doc.get("layers")
    if not isinstance(raw_layers, list) or len(raw_layers) < 1:
        raise ManifestError("manifest needs a nonempty layers list")
    layers = tuple(_parse_layer(entry, i, base_dir) for i, entry in enumerate(raw_layers))

    if "output" not in doc:
        raise ManifestError("manifest needs an output section")
    output = _parse_output(doc["output"], base_dir)

    normalize = _choice(doc.get("normalize", "maxval"), NORMALIZE_MODES, "normalize")
    align = _choice(doc.get("align", "strict"), ALIGN_POLICIES, "align")
    engine = _choice(doc.get("engine", "frequency"), ENGINES, "engine")

    if engine in ("spatial", "both"):
        for i, layer in enumerate(layers):
            if not layer.shift.is_integer:
                raise ManifestError(
                    f"layers[{i}].shift must be integer for the spatial engine, "
                    f"got ({layer.shift.sx}, {layer.shift.sy})"
                )
    return Manifest(layers=layers, output=output, normalize=normalize, align=align, engine=engine)


def load_manifest(path: str | Path) -> Manifest:
    path = Path(path)
    return parse_manifest(path.read_text(encoding="utf-8"), path.parent)
