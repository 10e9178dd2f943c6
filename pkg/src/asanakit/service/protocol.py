"""Wire protocol v1: one JSON message per line (or per WebSocket text frame).

client -> server:
  {"t":"open","user":...,"kind":...}
  {"t":"frame","sid":...,"seq":...,"ts":...,"handed":...,"lm":[x,y,c,...]}
  {"t":"close","sid":...}
server -> client:
  {"t":"opened","sid":...}
  {"t":"result","sid":...,"seq":...,"raw":...,"label":...,"conf":...,
   "fix":[...],"missing":[...],"lat_ms":...}
  {"t":"err","code":...,"msg":...}
Error codes: out_of_order, unknown_session, bad_frame, internal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import BadFrame, OutOfOrder, UnknownSession
from ..skeleton import Handedness, Kind
from .session import FrameMessage, ResultMessage, SessionService

ERR_OUT_OF_ORDER = "out_of_order"
ERR_UNKNOWN_SESSION = "unknown_session"
ERR_BAD_FRAME = "bad_frame"
ERR_INTERNAL = "internal"


@dataclass
class ConnectionState:
    sid: str | None = None
    closed: bool = field(default=False)


def err(code: str, msg: str) -> dict:
    return {"t": "err", "code": code, "msg": msg}


def result_to_wire(r: ResultMessage) -> dict:
    return {
        "t": "result",
        "sid": r.session_id,
        "seq": r.seq,
        "raw": r.raw_label,
        "label": r.smoothed_label,
        "conf": round(r.confidence, 6),
        "fix": list(r.corrections),
        "missing": list(r.missing_joints),
        "lat_ms": round(r.latency_ms, 3),
    }


def handle_message(service: SessionService, conn: ConnectionState, text: str) -> list[dict]:
    """Process one client line; returns the replies to send. Sets
    conn.closed once the session has been closed."""
    try:
        msg = json.loads(text)
        if not isinstance(msg, dict):
            raise ValueError("message must be a JSON object")
    except ValueError as exc:
        return [err(ERR_INTERNAL, f"invalid message: {exc}")]

    t = msg.get("t")
    try:
        if t == "open":
            if conn.sid is not None:
                return [err(ERR_INTERNAL, "this connection already has a session")]
            kind = Kind.parse(str(msg.get("kind", "")))
            conn.sid = service.open_session(str(msg.get("user", "anonymous")), kind)
            return [{"t": "opened", "sid": conn.sid}]

        if t == "frame":
            sid = msg.get("sid")
            if conn.sid is None or sid != conn.sid:
                return [err(ERR_UNKNOWN_SESSION, f"no open session {sid!r} on this connection")]
            frame = FrameMessage(
                session_id=sid,
                seq=int(msg["seq"]),
                kind=service._sessions[sid].record.kind,
                handedness=Handedness.parse(str(msg.get("handed", "na"))),
                timestamp_ms=int(msg.get("ts", 0)),
                landmarks=tuple(float(v) for v in msg["lm"]),
            )
            return [result_to_wire(service.handle_frame(frame))]

        if t == "close":
            sid = msg.get("sid")
            if conn.sid is None or sid != conn.sid:
                return [err(ERR_UNKNOWN_SESSION, f"no open session {sid!r} on this connection")]
            service.close_session(sid)
            conn.sid = None
            conn.closed = True
            return []

        return [err(ERR_INTERNAL, f"unknown message type {t!r}")]
    except OutOfOrder as exc:
        return [err(ERR_OUT_OF_ORDER, str(exc))]
    except UnknownSession as exc:
        return [err(ERR_UNKNOWN_SESSION, str(exc))]
    except BadFrame as exc:
        return [err(ERR_BAD_FRAME, str(exc))]
    except (KeyError, TypeError, ValueError) as exc:
        return [err(ERR_BAD_FRAME, f"malformed frame message: {exc}")]


def abandon_connection(service: SessionService, conn: ConnectionState) -> None:
    """Server-side close when a client disconnects without sending close."""
    if conn.sid is not None:
        try:
            service.close_session(conn.sid)
        except UnknownSession:
            pass
        conn.sid = None
