"""Distance, angle and slope primitives plus frame-to-feature extraction.

Angles are unsigned interior angles in degrees ([0, 180]); slopes are line
inclinations in degrees folded into (-90, 90].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePair, DegenerateTriple, MissingLandmarks
from .skeleton import Kind, Landmark, LandmarkFrame, Topology, validate_frame

EPS = 1e-9


@dataclass(frozen=True)
class FeatureVector:
    """Joint angles in degrees, ordered by a topology's angle_joints."""

    kind: Kind
    values: tuple[float, ...]
    layout_id: str

    def __len__(self) -> int:
        return len(self.values)


def euclidean_distance(p: Landmark, q: Landmark) -> float:
    """sqrt((px-qx)^2 + (py-qy)^2)."""
    return math.hypot(p.x - q.x, p.y - q.y)


def angle_at(a: Landmark, b: Landmark, c: Landmark) -> float:
    """Interior angle at vertex b, in degrees, via the law of cosines.

    cos(theta) = (|ba|^2 + |bc|^2 - |ac|^2) / (2 |ba| |bc|); the cosine is
    clamped to [-1, 1] to absorb fp drift on near-collinear triples.
    """
    ba = euclidean_distance(b, a)
    bc = euclidean_distance(b, c)
    if ba <= EPS or bc <= EPS:
        raise DegenerateTriple(f"arm length below {EPS} at vertex ({b.x}, {b.y})")
    ac = euclidean_distance(a, c)
    cos_theta = (ba * ba + bc * bc - ac * ac) / (2.0 * ba * bc)
    cos_theta = max(-1.0, min(1.0, cos_theta))
    return math.degrees(math.acos(cos_theta))


def slope_deg(p: Landmark, q: Landmark) -> float:
    """Inclination of the line through p and q against the horizontal axis.

    Folded into (-90, 90]; vertical lines return exactly 90.
    """
    if euclidean_distance(p, q) <= EPS:
        raise DegeneratePair(f"points coincide within {EPS}")
    theta = math.degrees(math.atan2(q.y - p.y, q.x - p.x))
    if theta > 90.0:
        theta -= 180.0
    elif theta <= -90.0:
        theta += 180.0
    return theta


def extract_features(
    frame: LandmarkFrame, topology: Topology, min_confidence: float = 0.3
) -> FeatureVector:
    """Angles for every triple in topology.angle_joints, in topology order.

    Raises MissingLandmarks (with the offending index set) when any required
    landmark falls below min_confidence; DegenerateTriple carries the name of
    the collapsing joint.
    """
    result = validate_frame(frame, min_confidence)
    if not result.ok:
        raise MissingLandmarks(result.missing)
    lms = frame.landmarks
    values = []
    for triple in topology.angle_joints:
        try:
            values.append(angle_at(lms[triple.a], lms[triple.b], lms[triple.c]))
        except DegenerateTriple as exc:
            raise DegenerateTriple(f"{triple.name}: {exc}") from None
    return FeatureVector(kind=frame.kind, values=tuple(values), layout_id=topology.layout_id)


def features_as_array(fv: FeatureVector) -> np.ndarray:
    return np.asarray(fv.values, dtype=np.float64)
