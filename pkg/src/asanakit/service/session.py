"""Per-session frame handling: classify, smooth, correct, record.

Smoothing takes a strict majority over the last SMOOTH_WINDOW raw labels
and reports "unstable" until MIN_STABLE_FRAMES frames have arrived or no
label holds a majority. Corrections run against the smoothed label's
profile so feedback does not flap during transitions.
"""

from __future__ import annotations

import time
import uuid
from collections import Counter, deque
from dataclasses import dataclass, field

from ..correction import PoseProfile, evaluate_pose
from ..errors import (
    AsanakitError,
    BadFrame,
    OutOfOrder,
    UnknownSession,
)
from ..geometry import extract_features
from ..models import TrainedModel, predict
from ..skeleton import Handedness, Kind, Landmark, LandmarkFrame, topology_for

UNSTABLE = "unstable"
SMOOTH_WINDOW = 15
MIN_STABLE_FRAMES = 5


@dataclass(frozen=True)
class FrameMessage:
    session_id: str
    seq: int
    kind: Kind
    handedness: Handedness
    timestamp_ms: int
    landmarks: tuple[float, ...]  # flat x,y,confidence triples


@dataclass(frozen=True)
class ResultMessage:
    session_id: str
    seq: int
    raw_label: str
    smoothed_label: str
    confidence: float
    corrections: tuple[dict, ...]
    missing_joints: tuple[int, ...]
    latency_ms: float


@dataclass(frozen=True)
class SessionEntry:
    timestamp_ms: int
    smoothed_label: str
    correct: bool


@dataclass
class SessionRecord:
    session_id: str
    user_id: str
    kind: Kind
    started_at_ms: int
    entries: list[SessionEntry] = field(default_factory=list)
    ended_at_ms: int | None = None


class _SessionState:
    def __init__(self, record: SessionRecord):
        self.record = record
        self.last_seq = -1
        self.history: deque[str] = deque(maxlen=SMOOTH_WINDOW)
        self.frames_seen = 0


def frame_to_landmarks(msg: FrameMessage) -> LandmarkFrame:
    flat = msg.landmarks
    if len(flat) % 3 != 0:
        raise BadFrame(f"landmark list length {len(flat)} is not a multiple of 3")
    try:
        lms = tuple(
            Landmark(float(flat[i]), float(flat[i + 1]), float(flat[i + 2]))
            for i in range(0, len(flat), 3)
        )
    except (TypeError, ValueError) as exc:
        raise BadFrame(f"bad landmark values: {exc}") from None
    return LandmarkFrame(msg.kind, msg.handedness, lms, msg.timestamp_ms)


class SessionService:
    """Holds open sessions; the model, profiles and store are shared
    read-only across all of them."""

    def __init__(
        self,
        model: TrainedModel,
        profiles: dict[str, PoseProfile] | None = None,
        store=None,
        min_confidence: float = 0.3,
        clock=time.time,
    ):
        self.model = model
        self.profiles = profiles or {}
        self.store = store
        self.min_confidence = min_confidence
        self.clock = clock
        self._sessions: dict[str, _SessionState] = {}

    def open_session(self, user_id: str, kind: Kind) -> str:
        sid = uuid.uuid4().hex[:12]
        record = SessionRecord(
            session_id=sid,
            user_id=user_id,
            kind=kind,
            started_at_ms=int(self.clock() * 1000),
        )
        self._sessions[sid] = _SessionState(record)
        return sid

    def close_session(self, session_id: str) -> SessionRecord:
        state = self._sessions.pop(session_id, None)
        if state is None:
            raise UnknownSession(f"no open session {session_id!r}")
        record = state.record
        record.ended_at_ms = int(self.clock() * 1000)
        if self.store is not None:
            self.store.append_record(record)
        return record

    def _smoothed(self, state: _SessionState) -> str:
        if state.frames_seen < MIN_STABLE_FRAMES:
            return UNSTABLE
        counts = Counter(state.history)
        label, count = counts.most_common(1)[0]
        if count > len(state.history) / 2:
            return label
        return UNSTABLE

    def handle_frame(self, msg: FrameMessage) -> ResultMessage:
        t0 = time.perf_counter()
        state = self._sessions.get(msg.session_id)
        if state is None:
            raise UnknownSession(f"no open session {msg.session_id!r}")
        if msg.seq <= state.last_seq:
            raise OutOfOrder(f"seq {msg.seq} <= last seen {state.last_seq}")
        state.last_seq = msg.seq

        if msg.kind != state.record.kind:
            raise BadFrame(
                f"frame kind {msg.kind.value} != session kind {state.record.kind.value}"
            )
        frame = frame_to_landmarks(msg)
        topo = topology_for(frame.kind)
        try:
            # threshold 0 here: prediction runs on whatever arrived; the
            # correction pass below applies the real confidence gate
            features = extract_features(frame, topo, min_confidence=0.0)
            label_idx, scores = predict(self.model, features)
        except AsanakitError as exc:
            raise BadFrame(str(exc)) from None
        raw_label = self.model.class_names[label_idx]
        confidence = float(scores[label_idx])

        state.frames_seen += 1
        state.history.append(raw_label)
        smoothed = self._smoothed(state)

        corrections: tuple[dict, ...] = ()
        missing: tuple[int, ...] = ()
        correct_flag = False
        if smoothed != UNSTABLE:
            profile = self.profiles.get(smoothed)
            if profile is not None and profile.kind == frame.kind:
                result = evaluate_pose(frame, profile, self.min_confidence)
                corrections = tuple(
                    {
                        "name": d.constraint_name,
                        "msg": d.message,
                        "excess": round(d.excess, 2),
                        "dir": d.direction.value,
                        "observed": round(d.observed, 2),
                        "target": round(d.target, 2),
                    }
                    for d in sorted(result.deviations, key=lambda d: -d.excess)
                )
                missing = tuple(sorted(result.missing_joints))
                correct_flag = result.correct
            else:
                correct_flag = True  # stable pose with nothing to check against

        state.record.entries.append(
            SessionEntry(msg.timestamp_ms, smoothed, correct_flag)
        )
        latency_ms = (time.perf_counter() - t0) * 1000.0
        return ResultMessage(
            session_id=msg.session_id,
            seq=msg.seq,
            raw_label=raw_label,
            smoothed_label=smoothed,
            confidence=confidence,
            corrections=corrections,
            missing_joints=missing,
            latency_ms=latency_ms,
        )

    def open_sessions(self) -> list[str]:
        return list(self._sessions)
