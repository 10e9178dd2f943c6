from .session import (
    MIN_STABLE_FRAMES,
    SMOOTH_WINDOW,
    UNSTABLE,
    FrameMessage,
    ResultMessage,
    SessionEntry,
    SessionRecord,
    SessionService,
)
from .store import ActivityReport, LogStore, PoseActivity, activity_report
from .server import run_server, start_server

__all__ = [
    "UNSTABLE",
    "SMOOTH_WINDOW",
    "MIN_STABLE_FRAMES",
    "FrameMessage",
    "ResultMessage",
    "SessionEntry",
    "SessionRecord",
    "SessionService",
    "ActivityReport",
    "PoseActivity",
    "LogStore",
    "activity_report",
    "run_server",
    "start_server",
]
