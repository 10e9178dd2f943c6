"""Landmark topologies for the 21-point hand and the 18-point body.

Index tables are published in ``docs/topology.md``; the angle-joint order
defined here fixes the feature-vector layout used everywhere else.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import WrongCount

HAND_LANDMARK_COUNT = 21
BODY_LANDMARK_COUNT = 18


class Kind(enum.Enum):
    HAND = "hand"
    BODY = "body"

    @classmethod
    def parse(cls, token: str) -> "Kind":
        try:
            return cls(token.lower())
        except ValueError:
            raise ValueError(f"unknown frame kind {token!r}") from None


class Handedness(enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    NA = "na"

    @classmethod
    def parse(cls, token: str) -> "Handedness":
        try:
            return cls(token.lower())
        except ValueError:
            raise ValueError(f"unknown handedness {token!r}") from None


LANDMARK_COUNT = {Kind.HAND: HAND_LANDMARK_COUNT, Kind.BODY: BODY_LANDMARK_COUNT}

HAND_LANDMARK_NAMES = (
    "wrist",
    "thumb_base", "thumb_mid", "thumb_distal", "thumb_tip",
    "index_base", "index_mid", "index_distal", "index_tip",
    "middle_base", "middle_mid", "middle_distal", "middle_tip",
    "ring_base", "ring_mid", "ring_distal", "ring_tip",
    "pinky_base", "pinky_mid", "pinky_distal", "pinky_tip",
)

# COCO-18 order as emitted by the usual 2-D body-pose estimators.
BODY_LANDMARK_NAMES = (
    "nose", "neck",
    "right_shoulder", "right_elbow", "right_wrist",
    "left_shoulder", "left_elbow", "left_wrist",
    "right_hip", "right_knee", "right_ankle",
    "left_hip", "left_knee", "left_ankle",
    "right_eye", "left_eye", "right_ear", "left_ear",
)


@dataclass(frozen=True)
class Landmark:
    """A 2-D image point with a detection confidence.

    Coordinates are nominally normalized to [0, 1] but only finiteness is
    enforced; confidence must lie in [0, 1]. Any z coordinate supplied by an
    estimator is dropped before a Landmark is built.
    """

    x: float
    y: float
    confidence: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite landmark coordinates ({self.x}, {self.y})")
        if not (math.isfinite(self.confidence) and 0.0 <= self.confidence <= 1.0):
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")


@dataclass(frozen=True)
class LandmarkFrame:
    """One timestamped set of landmarks; 21 for Hand, 18 for Body."""

    kind: Kind
    handedness: Handedness
    landmarks: tuple[Landmark, ...]
    timestamp_ms: int = 0


@dataclass(frozen=True)
class JointTriple:
    """Named index triple (a, b, c); the angle is measured at b."""

    name: str
    a: int
    b: int
    c: int


@dataclass(frozen=True)
class PointPair:
    name: str
    p: int
    q: int


@dataclass(frozen=True)
class Topology:
    """Fixed skeleton layout: bones, angle joints and named point pairs."""

    kind: Kind
    layout_id: str
    edges: tuple[tuple[int, int], ...]
    angle_joints: tuple[JointTriple, ...]
    slope_pairs: tuple[PointPair, ...]
    angle_by_name: dict[str, JointTriple] = field(repr=False, default_factory=dict)
    pair_by_name: dict[str, PointPair] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        count = LANDMARK_COUNT[self.kind]
        for i, j in self.edges:
            assert 0 <= i < count and 0 <= j < count
        names = [t.name for t in self.angle_joints]
        assert len(names) == len(set(names)), "duplicate angle joint names"
        for t in self.angle_joints:
            assert len({t.a, t.b, t.c}) == 3 and max(t.a, t.b, t.c) < count
        object.__setattr__(self, "angle_by_name", {t.name: t for t in self.angle_joints})
        object.__setattr__(self, "pair_by_name", {p.name: p for p in self.slope_pairs})


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    missing: frozenset[int]


_FINGERS = ("thumb", "index", "middle", "ring", "pinky")


def build_hand_topology() -> Topology:
    """The 21-landmark hand: 20 bones, 15 flexion + 4 abduction angles.

    Flexion angles come in finger order (thumb..pinky), three per finger,
    measured at the base, mid and distal knuckle. Abduction angles are
    measured at the wrist between adjacent base knuckles.
    """
    edges = []
    triples = []
    for f, finger in enumerate(_FINGERS):
        base = 1 + 4 * f
        edges.append((0, base))
        edges.extend((base + k, base + k + 1) for k in range(3))
        triples.append(JointTriple(f"{finger}_base", 0, base, base + 1))
        triples.append(JointTriple(f"{finger}_mid", base, base + 1, base + 2))
        triples.append(JointTriple(f"{finger}_distal", base + 1, base + 2, base + 3))
    for f in range(4):
        a, b = 1 + 4 * f, 5 + 4 * f
        triples.append(JointTriple(f"{_FINGERS[f]}_{_FINGERS[f + 1]}_spread", a, 0, b))
    pairs = (
        PointPair("wrist_middle_base", 0, 9),
        PointPair("thumb_index_tips", 4, 8),
        PointPair("thumb_middle_tips", 4, 12),
        PointPair("thumb_ring_tips", 4, 16),
        PointPair("thumb_pinky_tips", 4, 20),
        PointPair("index_middle_tips", 8, 12),
    )
    return Topology(Kind.HAND, "hand19-v1", tuple(edges), tuple(triples), pairs)


def build_body_topology() -> Topology:
    """The COCO-18 body: 8 angle joints (elbows, shoulders, hips, knees)
    and 4 named limb lines for slope constraints."""
    triples = (
        JointTriple("left_elbow", 5, 6, 7),
        JointTriple("right_elbow", 2, 3, 4),
        JointTriple("left_shoulder", 6, 5, 11),
        JointTriple("right_shoulder", 3, 2, 8),
        JointTriple("left_hip", 5, 11, 12),
        JointTriple("right_hip", 2, 8, 9),
        JointTriple("left_knee", 11, 12, 13),
        JointTriple("right_knee", 8, 9, 10),
    )
    edges = (
        (0, 1),
        (1, 2), (2, 3), (3, 4),
        (1, 5), (5, 6), (6, 7),
        (1, 8), (8, 9), (9, 10),
        (1, 11), (11, 12), (12, 13),
        (0, 14), (14, 16), (0, 15), (15, 17),
    )
    pairs = (
        PointPair("shoulder_line", 5, 2),
        PointPair("hip_line", 11, 8),
        PointPair("left_arm_line", 5, 7),
        PointPair("right_arm_line", 2, 4),
    )
    return Topology(Kind.BODY, "body8-v1", edges, triples, pairs)


def topology_for(kind: Kind) -> Topology:
    return _TOPOLOGIES[kind]


def validate_frame(frame: LandmarkFrame, min_confidence: float = 0.3) -> ValidationResult:
    """Check landmark count for the frame kind and flag low-confidence points.

    Raises WrongCount if the landmark list length does not match the kind.
    """
    expected = LANDMARK_COUNT[frame.kind]
    if len(frame.landmarks) != expected:
        raise WrongCount(expected, len(frame.landmarks))
    missing = frozenset(
        i for i, lm in enumerate(frame.landmarks) if lm.confidence < min_confidence
    )
    return ValidationResult(ok=not missing, missing=missing)


_TOPOLOGIES = {Kind.HAND: build_hand_topology(), Kind.BODY: build_body_topology()}
