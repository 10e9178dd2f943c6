"""asanakit: joint-angle pose/mudra recognition with live correction."""

from .skeleton import (
    Kind,
    Handedness,
    Landmark,
    LandmarkFrame,
    Topology,
    build_body_topology,
    build_hand_topology,
    topology_for,
    validate_frame,
)
from .geometry import FeatureVector, angle_at, euclidean_distance, extract_features, slope_deg

__version__ = "0.1.0"

__all__ = [
    "Kind",
    "Handedness",
    "Landmark",
    "LandmarkFrame",
    "Topology",
    "build_body_topology",
    "build_hand_topology",
    "topology_for",
    "validate_frame",
    "FeatureVector",
    "angle_at",
    "euclidean_distance",
    "extract_features",
    "slope_deg",
]
