"""Regenerate src/asanakit/data/mudra_templates.json.

Each template is a 21-point hand built from a finger fan: per finger a base
direction from the wrist plus three bend angles (at the base, mid and distal
knuckle). Templates are tuned so every class pair differs by at least 25
degrees on some angle; run with --check to verify the margins.
"""

import argparse
import json
import math
from pathlib import Path

WRIST = (0.5, 0.15)

# palm direction (deg, CCW from +x, fingers pointing "up") and palm length per finger
PALM = {
    "thumb": (50.0, 0.15),
    "index": (76.0, 0.27),
    "middle": (88.0, 0.28),
    "ring": (100.0, 0.26),
    "pinky": (112.0, 0.23),
}
SEGMENTS = {
    "thumb": (0.11, 0.09, 0.07),
    "index": (0.12, 0.075, 0.06),
    "middle": (0.13, 0.08, 0.065),
    "ring": (0.12, 0.075, 0.06),
    "pinky": (0.09, 0.06, 0.05),
}
FINGERS = ("thumb", "index", "middle", "ring", "pinky")

# per mudra: {finger: (bend_base, bend_mid, bend_distal)}, optional direction overrides
STRAIGHT = (0.0, 0.0, 0.0)
MUDRAS = {
    "Pataaka": {
        "bends": {"thumb": (35.0, 30.0, 10.0)},
    },
    "Mudrakhya": {
        "bends": {
            "thumb": (5.0, 5.0, 5.0),
            "index": (70.0, 95.0, 40.0),
            "middle": (70.0, 95.0, 40.0),
            "ring": (70.0, 95.0, 40.0),
            "pinky": (70.0, 95.0, 40.0),
        },
    },
    "Prana": {
        "bends": {
            "thumb": (25.0, 40.0, 20.0),
            "ring": (55.0, 65.0, 30.0),
            "pinky": (55.0, 65.0, 30.0),
        },
        "directions": {"thumb": 48.0, "index": 70.0, "middle": 92.0},
    },
    "Pallava": {
        "bends": {"thumb": (0.0, 5.0, 5.0)},
        "directions": {
            "thumb": 38.0,
            "index": 68.0,
            "middle": 86.0,
            "ring": 104.0,
            "pinky": 122.0,
        },
    },
    "Tripataka": {
        "bends": {"thumb": (5.0, 10.0, 5.0), "ring": (10.0, 90.0, 25.0)},
    },
}
CLASS_ORDER = ["Pataaka", "Mudrakhya", "Prana", "Pallava", "Tripataka"]


def build_template(spec):
    bends = spec.get("bends", {})
    directions = spec.get("directions", {})
    lms = [WRIST]
    for finger in FINGERS:
        theta0, palm_len = PALM[finger]
        theta0 = directions.get(finger, theta0)
        b1, b2, b3 = bends.get(finger, STRAIGHT)
        # thumb curls across the palm, other fingers curl toward it
        sign = 1.0 if finger == "thumb" else -1.0
        x = WRIST[0] + palm_len * math.cos(math.radians(theta0))
        y = WRIST[1] + palm_len * math.sin(math.radians(theta0))
        lms.append((x, y))
        theta = theta0
        for seg_len, bend in zip(SEGMENTS[finger], (b1, b2, b3)):
            theta += sign * bend
            x += seg_len * math.cos(math.radians(theta))
            y += seg_len * math.sin(math.radians(theta))
            lms.append((x, y))
    return [[round(x, 6), round(y, 6)] for x, y in lms]


def angles_of(landmarks):
    import numpy as np

    from asanakit.geometry import extract_features
    from asanakit.skeleton import Handedness, Kind, Landmark, LandmarkFrame, build_hand_topology

    frame = LandmarkFrame(
        Kind.HAND, Handedness.RIGHT, tuple(Landmark(x, y, 1.0) for x, y in landmarks)
    )
    return np.array(extract_features(frame, build_hand_topology(), 0.0).values)


def check_margins(templates, min_margin=25.0):
    import numpy as np

    from asanakit.skeleton import build_hand_topology

    names = list(templates)
    vecs = {n: angles_of(templates[n]) for n in names}
    joint_names = [t.name for t in build_hand_topology().angle_joints]
    ok = True
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            diff = np.abs(vecs[a] - vecs[b])
            j = int(np.argmax(diff))
            status = "ok" if diff[j] >= min_margin else "TOO CLOSE"
            if diff[j] < min_margin:
                ok = False
            print(f"{a:10s} vs {b:10s}: max gap {diff[j]:6.1f} deg at {joint_names[j]} [{status}]")
    return ok


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--check", action="store_true", help="verify inter-class margins only")
    parser.add_argument(
        "--out",
        default=str(Path(__file__).resolve().parents[1] / "src/asanakit/data/mudra_templates.json"),
    )
    args = parser.parse_args()

    templates = {name: build_template(spec) for name, spec in MUDRAS.items()}
    if args.check:
        raise SystemExit(0 if check_margins(templates) else 1)

    payload = {
        "schema": "mudra-templates-v1",
        "kind": "hand",
        "class_order": CLASS_ORDER,
        "templates": templates,
    }
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(payload, indent=1) + "\n")
    print(f"wrote {out}")
    check_margins(templates)


if __name__ == "__main__":
    main()
