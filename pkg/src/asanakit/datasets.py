"""Dataset schema, CSV load/save, seeded splitting and the synthetic mudra generator.

CSV schema: header line ``kind,<class list>``, then one row per sample:
``label_name,source_id,a1,...,aN`` with N=19 (hand) or 8 (body). UTF-8,
``.`` decimal separator, LF line endings. Angle values are quantized to 9
significant digits on ingestion so save/load round-trips exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ParseError, SchemaError, TooFewSamples
from .geometry import FeatureVector, extract_features
from .skeleton import Handedness, Kind, Landmark, LandmarkFrame, topology_for

FEATURE_LENGTH = {Kind.HAND: 19, Kind.BODY: 8}


def quantize(value: float) -> float:
    """Round to the 9 significant digits the CSV schema serializes."""
    return float(f"{value:.9g}")


@dataclass(frozen=True)
class LabeledSample:
    features: FeatureVector
    label: int
    label_name: str
    source_id: str


@dataclass
class Dataset:
    kind: Kind
    samples: list[LabeledSample]
    class_names: list[str]

    def __len__(self) -> int:
        return len(self.samples)

    def X(self) -> np.ndarray:
        return np.array([s.features.values for s in self.samples], dtype=np.float64).reshape(
            len(self.samples), FEATURE_LENGTH[self.kind]
        )

    def y(self) -> np.ndarray:
        return np.array([s.label for s in self.samples], dtype=np.int64)

    def restrict_to(self, label_name: str) -> "Dataset":
        kept = [s for s in self.samples if s.label_name == label_name]
        return Dataset(self.kind, kept, list(self.class_names))


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    seed: int = 0
    stratified: bool = True

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction {self.train_fraction} outside (0, 1)")


def _feature_vector(kind: Kind, values) -> FeatureVector:
    return FeatureVector(
        kind=kind,
        values=tuple(quantize(v) for v in values),
        layout_id=topology_for(kind).layout_id,
    )


def make_sample(kind: Kind, values, label: int, label_name: str, source_id: str) -> LabeledSample:
    return LabeledSample(_feature_vector(kind, values), label, label_name, source_id)


def load_dataset(path) -> Dataset:
    """Parse a dataset CSV; row order is preserved."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty file", line=1)
    header = lines[0].split(",")
    if len(header) < 2:
        raise ParseError("header needs a kind and at least one class name", line=1)
    try:
        kind = Kind.parse(header[0])
    except ValueError as exc:
        raise ParseError(str(exc), line=1, column=1) from None
    class_names = header[1:]
    if len(set(class_names)) != len(class_names) or any(not c for c in class_names):
        raise ParseError("class names must be unique and nonempty", line=1, column=2)
    width = FEATURE_LENGTH[kind]
    label_of = {name: i for i, name in enumerate(class_names)}

    samples = []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != 2 + width:
            raise SchemaError(
                f"expected {2 + width} columns for kind={kind.value}, got {len(cells)}",
                line=lineno,
            )
        label_name, source_id = cells[0], cells[1]
        if label_name not in label_of:
            raise ParseError(f"unknown label {label_name!r}", line=lineno, column=1)
        values = []
        for col, cell in enumerate(cells[2:], start=3):
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(f"bad number {cell!r}", line=lineno, column=col) from None
            if not math.isfinite(v) or not 0.0 <= v <= 180.0:
                raise ParseError(f"angle {cell!r} outside [0, 180]", line=lineno, column=col)
            values.append(v)
        samples.append(make_sample(kind, values, label_of[label_name], label_name, source_id))
    return Dataset(kind, samples, class_names)


def save_dataset(dataset: Dataset, path) -> None:
    """Write the CSV schema; load_dataset(save_dataset(d)) round-trips exactly."""
    for name in dataset.class_names:
        if "," in name or "\n" in name:
            raise ValueError(f"class name {name!r} cannot contain ',' or newlines")
    rows = [dataset.kind.value + "," + ",".join(dataset.class_names)]
    for s in dataset.samples:
        if "," in s.source_id or "\n" in s.source_id:
            raise ValueError(f"source_id {s.source_id!r} cannot contain ',' or newlines")
        cells = [s.label_name, s.source_id] + [f"{v:.9g}" for v in s.features.values]
        rows.append(",".join(cells))
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8", newline="\n")


def split(dataset: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset]:
    """Deterministic seeded split; stratified keeps per-class ratios within one sample."""
    n = len(dataset)
    rng = np.random.default_rng(spec.seed)
    if spec.stratified:
        train_idx: list[int] = []
        test_idx: list[int] = []
        labels = dataset.y()
        for label, name in enumerate(dataset.class_names):
            idx = np.flatnonzero(labels == label)
            if len(idx) == 0:
                continue
            if len(idx) < 2:
                raise TooFewSamples(
                    f"class {name!r} has {len(idx)} sample(s); need at least 2 to stratify",
                    class_name=name,
                )
            n_train = int(round(spec.train_fraction * len(idx)))
            n_train = min(max(n_train, 1), len(idx) - 1)
            perm = rng.permutation(idx)
            train_idx.extend(perm[:n_train].tolist())
            test_idx.extend(perm[n_train:].tolist())
    else:
        if n < 2:
            raise TooFewSamples(f"dataset has {n} sample(s); need at least 2 to split")
        n_train = min(max(int(round(spec.train_fraction * n)), 1), n - 1)
        perm = rng.permutation(n)
        train_idx = perm[:n_train].tolist()
        test_idx = perm[n_train:].tolist()
    train_idx.sort()
    test_idx.sort()
    pick = lambda idxs: Dataset(
        dataset.kind, [dataset.samples[i] for i in idxs], list(dataset.class_names)
    )
    return pick(train_idx), pick(test_idx)


# -- synthetic mudra data ----------------------------------------------------

# jitter scale: calibrated so the mean per-angle standard deviation is roughly
# noise_deg / 2 for the checked-in templates (short pinky bones run ~2x that)
_JITTER_CALIBRATION = 0.11


def load_mudra_templates() -> tuple[list[str], dict[str, np.ndarray]]:
    raw = json.loads(
        resources.files("asanakit").joinpath("data/mudra_templates.json").read_text()
    )
    templates = {
        name: np.asarray(points, dtype=np.float64) for name, points in raw["templates"].items()
    }
    return list(raw["class_order"]), templates


def synth_mudra_frames(
    per_class: int, noise_deg: float, seed: int
) -> list[tuple[str, LandmarkFrame]]:
    """Jittered template hands; odd sample indices are mirrored left hands."""
    if per_class < 2:
        raise ValueError("per_class must be at least 2")
    if noise_deg < 0:
        raise ValueError("noise_deg must be non-negative")
    class_order, templates = load_mudra_templates()
    rng = np.random.default_rng(seed)
    frames = []
    for name in class_order:
        base = templates[name]
        ref_len = float(np.hypot(*(base[9] - base[0])))
        sigma = math.radians(noise_deg) * ref_len * _JITTER_CALIBRATION
        for i in range(per_class):
            pts = base + rng.normal(0.0, sigma, size=base.shape) if sigma > 0 else base.copy()
            mirrored = i % 2 == 1
            if mirrored:
                pts = pts.copy()
                pts[:, 0] = 1.0 - pts[:, 0]
            frame = LandmarkFrame(
                Kind.HAND,
                Handedness.LEFT if mirrored else Handedness.RIGHT,
                tuple(Landmark(float(x), float(y), 1.0) for x, y in pts),
                timestamp_ms=33 * i,
            )
            frames.append((name, frame))
    return frames


def synth_mudra_dataset(per_class: int, noise_deg: float, seed: int) -> Dataset:
    """Synthetic stand-in for the mudra image corpus: 5 classes of jittered
    template hands (half mirrored), passed through extract_features."""
    class_order, _ = load_mudra_templates()
    label_of = {name: i for i, name in enumerate(class_order)}
    topo = topology_for(Kind.HAND)
    samples = []
    counters: dict[str, int] = {}
    for name, frame in synth_mudra_frames(per_class, noise_deg, seed):
        i = counters.get(name, 0)
        counters[name] = i + 1
        fv = extract_features(frame, topo, min_confidence=0.0)
        side = "L" if frame.handedness is Handedness.LEFT else "R"
        samples.append(
            make_sample(Kind.HAND, fv.values, label_of[name], name, f"synth:{name}:{i}:{side}")
        )
    return Dataset(Kind.HAND, samples, list(class_order))
