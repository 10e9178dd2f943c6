"""Posture correction: compare a frame's angles/slopes/distances against a
pose profile's predefined targets and emit directional text feedback.

Profiles are JSON documents (one per pose, ``profile_version: 1``) and can
also be derived from exemplar recordings via profile_from_samples.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .datasets import Dataset
from .errors import KindMismatch, ProfileError, TooFewSamples
from .geometry import EPS, angle_at, euclidean_distance, slope_deg
from .skeleton import Kind, LandmarkFrame, topology_for, validate_frame

PROFILE_VERSION = 1

# distances are normalized by a reference bone so profiles survive camera
# distance changes: shoulder width for the body, wrist-to-middle-base for
# the hand
REFERENCE_PAIR = {Kind.BODY: (5, 2), Kind.HAND: (0, 9)}


class Direction(enum.Enum):
    INCREASE = "increase"
    DECREASE = "decrease"


@dataclass(frozen=True)
class Constraint:
    name: str
    target: float
    tolerance: float


@dataclass(frozen=True)
class PoseProfile:
    pose_id: str
    kind: Kind
    angle_constraints: tuple[Constraint, ...] = ()
    slope_constraints: tuple[Constraint, ...] = ()
    distance_constraints: tuple[Constraint, ...] = ()


@dataclass(frozen=True)
class Deviation:
    constraint_name: str
    observed: float
    target: float
    excess: float
    direction: Direction
    message: str


@dataclass(frozen=True)
class CorrectionResult:
    pose_id: str
    deviations: tuple[Deviation, ...]
    correct: bool
    missing_joints: frozenset[int] = field(default_factory=frozenset)


def _round_half_even(v: float) -> int:
    return int(round(v))


def _fill(template: str, name: str, observed: float, target: float, excess: float) -> str:
    return template.format(
        name=name,
        observed=_round_half_even(observed),
        target=_round_half_even(target),
        excess=_round_half_even(excess),
    )


def _build_default_templates() -> dict:
    t = {}
    for side in ("left", "right"):
        t[f"{side}_elbow"] = {
            Direction.INCREASE: f"Straighten your {side} elbow ({{excess}}° to go)",
            Direction.DECREASE: f"Bend your {side} elbow ({{excess}}° to go)",
        }
        t[f"{side}_knee"] = {
            Direction.INCREASE: f"Straighten your {side} knee ({{excess}}° to go)",
            Direction.DECREASE: f"Bend your {side} knee ({{excess}}° to go)",
        }
        t[f"{side}_shoulder"] = {
            Direction.INCREASE: f"Raise your {side} arm ({{excess}}° to go)",
            Direction.DECREASE: f"Lower your {side} arm ({{excess}}° to go)",
        }
        t[f"{side}_hip"] = {
            Direction.INCREASE: f"Open up through your {side} hip ({{excess}}° to go)",
            Direction.DECREASE: f"Fold deeper at your {side} hip ({{excess}}° to go)",
        }
        t[f"{side}_arm_line"] = {
            Direction.INCREASE: f"Tilt your {side} arm up ({{excess}}° to go)",
            Direction.DECREASE: f"Tilt your {side} arm down ({{excess}}° to go)",
        }
    t["shoulder_line"] = {
        Direction.INCREASE: "Level your shoulders ({excess}° to go)",
        Direction.DECREASE: "Level your shoulders ({excess}° to go)",
    }
    t["hip_line"] = {
        Direction.INCREASE: "Level your hips ({excess}° to go)",
        Direction.DECREASE: "Level your hips ({excess}° to go)",
    }
    for finger in ("thumb", "index", "middle", "ring", "pinky"):
        for joint in ("base", "mid", "distal"):
            t[f"{finger}_{joint}"] = {
                Direction.INCREASE: f"Straighten your {finger} finger ({{excess}}° to go)",
                Direction.DECREASE: f"Curl your {finger} finger more ({{excess}}° to go)",
            }
    for a, b in (("thumb", "index"), ("index", "middle"), ("middle", "ring"), ("ring", "pinky")):
        t[f"{a}_{b}_spread"] = {
            Direction.INCREASE: f"Spread your {a} and {b} fingers apart ({{excess}}° to go)",
            Direction.DECREASE: f"Bring your {a} and {b} fingers together ({{excess}}° to go)",
        }
    return t


DEFAULT_TEMPLATES = _build_default_templates()
GENERIC_TEMPLATE = "Adjust {name} toward {target}°"


def feedback_text(deviation: Deviation, locale_table: dict = DEFAULT_TEMPLATES) -> str:
    """Deterministic message for a deviation; unknown constraint names fall
    back to a generic template rather than failing."""
    entry = locale_table.get(deviation.constraint_name)
    template = entry.get(deviation.direction) if entry else None
    if template is None:
        template = GENERIC_TEMPLATE
    return _fill(
        template,
        deviation.constraint_name,
        deviation.observed,
        deviation.target,
        deviation.excess,
    )


def _fold_slope_diff(diff: float) -> float:
    """Signed slope difference folded into (-90, 90]."""
    d = (diff + 90.0) % 180.0 - 90.0
    return 90.0 if d == -90.0 else d


def validate_profile(profile: PoseProfile) -> None:
    """Raise ProfileError unless every constraint is well-formed and every
    name exists in the kind's topology."""
    topo = topology_for(profile.kind)
    for c in profile.angle_constraints:
        if c.name not in topo.angle_by_name:
            raise ProfileError(f"unknown angle joint {c.name!r} for kind {profile.kind.value}")
        if not 0.0 <= c.target <= 180.0:
            raise ProfileError(f"angle target {c.target} for {c.name!r} outside [0, 180]")
        if c.tolerance <= 0:
            raise ProfileError(f"tolerance for {c.name!r} must be positive")
    for c in profile.slope_constraints:
        if c.name not in topo.pair_by_name:
            raise ProfileError(f"unknown point pair {c.name!r} for kind {profile.kind.value}")
        if not -90.0 < c.target <= 90.0:
            raise ProfileError(f"slope target {c.target} for {c.name!r} outside (-90, 90]")
        if c.tolerance <= 0:
            raise ProfileError(f"tolerance for {c.name!r} must be positive")
        # direction becomes ambiguous when the tolerance band straddles the
        # vertical fold
        if c.target + c.tolerance > 90.0 or c.target - c.tolerance <= -90.0:
            raise ProfileError(
                f"slope constraint {c.name!r}: target±tolerance crosses the ±90° fold"
            )
    for c in profile.distance_constraints:
        if c.name not in topo.pair_by_name:
            raise ProfileError(f"unknown point pair {c.name!r} for kind {profile.kind.value}")
        if c.target < 0:
            raise ProfileError(f"distance target for {c.name!r} must be >= 0")
        if c.tolerance <= 0:
            raise ProfileError(f"tolerance for {c.name!r} must be positive")


def evaluate_pose(
    frame: LandmarkFrame,
    profile: PoseProfile,
    min_confidence: float = 0.3,
    locale_table: dict = DEFAULT_TEMPLATES,
) -> CorrectionResult:
    """Compare the frame against the profile's targets.

    Constraints whose landmarks fall below min_confidence (or whose geometry
    degenerates) are skipped, with the offending indices collected in
    missing_joints. correct is true only with no deviations and nothing
    missing.
    """
    if frame.kind != profile.kind:
        raise KindMismatch(f"frame is {frame.kind.value}, profile is {profile.kind.value}")
    topo = topology_for(profile.kind)
    validate_frame(frame, 0.0)  # raises WrongCount on structural problems
    lms = frame.landmarks
    confident = [lm.confidence >= min_confidence for lm in lms]

    deviations: list[Deviation] = []
    missing: set[int] = set()

    def usable(indices) -> bool:
        bad = [i for i in indices if not confident[i]]
        if bad:
            missing.update(bad)
            return False
        return True

    def emit(name: str, observed: float, target: float, diff: float, tolerance: float):
        if abs(diff) <= tolerance:
            return
        direction = Direction.INCREASE if diff < 0 else Direction.DECREASE
        dev = Deviation(name, observed, target, abs(diff) - tolerance, direction, "")
        deviations.append(replace(dev, message=feedback_text(dev, locale_table)))

    for c in profile.angle_constraints:
        t = topo.angle_by_name[c.name]
        if not usable((t.a, t.b, t.c)):
            continue
        try:
            observed = angle_at(lms[t.a], lms[t.b], lms[t.c])
        except Exception:
            missing.update((t.a, t.b, t.c))
            continue
        emit(c.name, observed, c.target, observed - c.target, c.tolerance)

    for c in profile.slope_constraints:
        p = topo.pair_by_name[c.name]
        if not usable((p.p, p.q)):
            continue
        try:
            observed = slope_deg(lms[p.p], lms[p.q])
        except Exception:
            missing.update((p.p, p.q))
            continue
        emit(c.name, observed, c.target, _fold_slope_diff(observed - c.target), c.tolerance)

    ref_i, ref_j = REFERENCE_PAIR[profile.kind]
    for c in profile.distance_constraints:
        p = topo.pair_by_name[c.name]
        if not usable((p.p, p.q, ref_i, ref_j)):
            continue
        ref_len = euclidean_distance(lms[ref_i], lms[ref_j])
        if ref_len <= EPS:
            missing.update((ref_i, ref_j))
            continue
        observed = euclidean_distance(lms[p.p], lms[p.q]) / ref_len
        emit(c.name, observed, c.target, observed - c.target, c.tolerance)

    return CorrectionResult(
        pose_id=profile.pose_id,
        deviations=tuple(deviations),
        correct=not deviations and not missing,
        missing_joints=frozenset(missing),
    )


def profile_from_samples(
    dataset: Dataset,
    k_sigma: float = 2.0,
    floor_deg: float = 5.0,
    min_samples: int = 5,
) -> PoseProfile:
    """Derive angle constraints from exemplar recordings of one pose:
    target = mean, tolerance = max(k_sigma * std, floor_deg). Input values
    are clamped to [0, 180] first."""
    labels = {s.label_name for s in dataset.samples}
    if len(labels) != 1:
        raise ValueError(f"dataset must hold exactly one pose, found {sorted(labels)}")
    if len(dataset) < min_samples:
        raise TooFewSamples(
            f"need >= {min_samples} samples to derive a profile, got {len(dataset)}",
            class_name=next(iter(labels)),
        )
    X = np.clip(dataset.X(), 0.0, 180.0)
    means = X.mean(axis=0)
    tols = np.maximum(k_sigma * X.std(axis=0), floor_deg)
    topo = topology_for(dataset.kind)
    constraints = tuple(
        Constraint(t.name, float(m), float(tol))
        for t, m, tol in zip(topo.angle_joints, means, tols)
    )
    return PoseProfile(
        pose_id=next(iter(labels)), kind=dataset.kind, angle_constraints=constraints
    )


# -- profile files -----------------------------------------------------------


def profile_to_dict(profile: PoseProfile) -> dict:
    def enc(cs):
        return [{"name": c.name, "target": c.target, "tolerance": c.tolerance} for c in cs]

    return {
        "profile_version": PROFILE_VERSION,
        "pose_id": profile.pose_id,
        "kind": profile.kind.value,
        "angle_constraints": enc(profile.angle_constraints),
        "slope_constraints": enc(profile.slope_constraints),
        "distance_constraints": enc(profile.distance_constraints),
    }


def profile_from_dict(doc: dict) -> PoseProfile:
    try:
        version = int(doc["profile_version"])
        if version != PROFILE_VERSION:
            raise ProfileError(f"unsupported profile_version {version}")
        def dec(key):
            return tuple(
                Constraint(c["name"], float(c["target"]), float(c["tolerance"]))
                for c in doc.get(key, [])
            )
        profile = PoseProfile(
            pose_id=str(doc["pose_id"]),
            kind=Kind.parse(doc["kind"]),
            angle_constraints=dec("angle_constraints"),
            slope_constraints=dec("slope_constraints"),
            distance_constraints=dec("distance_constraints"),
        )
    except ProfileError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ProfileError(f"malformed profile document: {exc}") from None
    validate_profile(profile)
    return profile


def save_profile(profile: PoseProfile, path) -> None:
    validate_profile(profile)
    Path(path).write_text(json.dumps(profile_to_dict(profile), indent=1) + "\n")


def load_profile(path) -> PoseProfile:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ProfileError(f"not valid JSON: {exc}") from None
    return profile_from_dict(doc)


def load_profile_dir(path) -> dict[str, PoseProfile]:
    """All *.json profiles in a directory, keyed by pose_id."""
    out: dict[str, PoseProfile] = {}
    for p in sorted(Path(path).glob("*.json")):
        profile = load_profile(p)
        out[profile.pose_id] = profile
    return out
