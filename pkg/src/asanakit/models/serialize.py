"""Versioned model container: a magic header line followed by a JSON body.

JSON float serialization uses repr round-tripping, so reloaded models
reproduce predictions bit-exactly.
"""

from __future__ import annotations

import json
import re

from ..errors import CorruptModel, VersionMismatch
from .base import _IMPL, ModelSpec, TrainedModel

MAGIC = "ASANAKIT-MODEL"
VERSION = 1
_HEADER_RE = re.compile(rf"^{MAGIC} v(\d+)$")


def save_model(model: TrainedModel) -> bytes:
    body = {
        "spec": model.spec.to_dict(),
        "class_names": model.class_names,
        "feature_length": model.feature_length,
        "payload": model.impl.to_payload(),
    }
    return f"{MAGIC} v{VERSION}\n".encode() + json.dumps(body).encode()


def load_model(data: bytes) -> TrainedModel:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorruptModel(f"not valid UTF-8: {exc}") from None
    header, sep, rest = text.partition("\n")
    m = _HEADER_RE.match(header.strip())
    if not sep or m is None:
        raise CorruptModel("missing or malformed header line")
    version = int(m.group(1))
    if version != VERSION:
        raise VersionMismatch(f"file is format v{version}, this build reads v{VERSION}")
    try:
        body = json.loads(rest)
        spec = ModelSpec.from_dict(body["spec"])
        impl = _IMPL[spec.family].from_payload(body["payload"])
        return TrainedModel(
            spec=spec,
            class_names=list(body["class_names"]),
            feature_length=int(body["feature_length"]),
            impl=impl,
        )
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise CorruptModel(f"unreadable model body: {exc}") from None
