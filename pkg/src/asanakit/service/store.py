"""Append-only session log and activity aggregation.

Storage is one JSON-lines file per day (by session start, UTC) under a data
directory: a session meta line followed by one line per frame entry. No
database; the files are the durable record.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from ..skeleton import Kind
from .session import UNSTABLE, SessionEntry, SessionRecord

MAX_DELTA_S = 1.0  # cap inter-frame gaps so pauses don't inflate pose time


@dataclass
class PoseActivity:
    seconds: float = 0.0
    sessions: int = 0
    frames: int = 0
    correct_frames: int = 0

    @property
    def correct_fraction(self) -> float:
        return self.correct_frames / self.frames if self.frames else 0.0


@dataclass
class ActivityReport:
    user_id: str
    window_start_ms: int
    window_end_ms: int
    poses: dict[str, PoseActivity] = field(default_factory=dict)

    def total_seconds(self) -> float:
        return sum(p.seconds for p in self.poses.values())


class LogStore:
    def __init__(self, data_dir):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def _file_for(self, started_at_ms: int) -> Path:
        day = datetime.fromtimestamp(started_at_ms / 1000.0, tz=timezone.utc).date()
        return self.data_dir / f"sessions-{day.isoformat()}.jsonl"

    def append_record(self, record: SessionRecord) -> None:
        lines = [json.dumps({
            "t": "session",
            "sid": record.session_id,
            "user": record.user_id,
            "kind": record.kind.value,
            "start": record.started_at_ms,
            "end": record.ended_at_ms,
        })]
        for e in record.entries:
            lines.append(json.dumps({
                "t": "entry",
                "sid": record.session_id,
                "ts": e.timestamp_ms,
                "label": e.smoothed_label,
                "ok": e.correct,
            }))
        path = self._file_for(record.started_at_ms)
        with self._lock, open(path, "a", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
            fh.flush()

    def iter_records(self):
        metas: dict[str, SessionRecord] = {}
        order: list[str] = []
        for path in sorted(self.data_dir.glob("sessions-*.jsonl")):
            for line in path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                doc = json.loads(line)
                if doc["t"] == "session":
                    rec = SessionRecord(
                        session_id=doc["sid"],
                        user_id=doc["user"],
                        kind=Kind.parse(doc["kind"]),
                        started_at_ms=int(doc["start"]),
                        ended_at_ms=None if doc["end"] is None else int(doc["end"]),
                    )
                    metas[doc["sid"]] = rec
                    order.append(doc["sid"])
                elif doc["t"] == "entry" and doc["sid"] in metas:
                    metas[doc["sid"]].entries.append(
                        SessionEntry(int(doc["ts"]), doc["label"], bool(doc["ok"]))
                    )
        for sid in order:
            yield metas[sid]


def activity_report(
    user_id: str, window_start_ms: int, window_end_ms: int, store: LogStore
) -> ActivityReport:
    """Aggregate every stored session of the user intersecting the window.

    Pose seconds sum the deltas between consecutive entries, attributed to
    the earlier entry's smoothed label and capped at one second; "unstable"
    stretches are excluded.
    """
    report = ActivityReport(user_id, window_start_ms, window_end_ms)
    for record in store.iter_records():
        if record.user_id != user_id:
            continue
        end = record.ended_at_ms if record.ended_at_ms is not None else record.started_at_ms
        if end < window_start_ms or record.started_at_ms > window_end_ms:
            continue
        seen_labels = set()
        entries = sorted(record.entries, key=lambda e: e.timestamp_ms)
        for i, entry in enumerate(entries):
            label = entry.smoothed_label
            if label == UNSTABLE:
                continue
            pose = report.poses.setdefault(label, PoseActivity())
            pose.frames += 1
            pose.correct_frames += int(entry.correct)
            if label not in seen_labels:
                seen_labels.add(label)
                pose.sessions += 1
            if i + 1 < len(entries):
                delta = (entries[i + 1].timestamp_ms - entry.timestamp_ms) / 1000.0
                pose.seconds += min(max(delta, 0.0), MAX_DELTA_S)
    return report
