import numpy as np
import pytest

from asanakit.correction import profile_from_samples
from asanakit.datasets import Dataset, make_sample, synth_mudra_dataset, synth_mudra_frames
from asanakit.errors import BadFrame, OutOfOrder, UnknownSession
from asanakit.models import KNN, ModelSpec, train
from asanakit.service import (
    MIN_STABLE_FRAMES,
    UNSTABLE,
    FrameMessage,
    LogStore,
    SessionEntry,
    SessionRecord,
    SessionService,
    activity_report,
)
from asanakit.skeleton import Handedness, Kind


@pytest.fixture(scope="module")
def mudra_model():
    return train(ModelSpec(KNN, {"k": 3}), synth_mudra_dataset(per_class=30, noise_deg=6.0, seed=1))


def flatten(frame):
    return tuple(v for lm in frame.landmarks for v in (lm.x, lm.y, lm.confidence))


def frame_msg(sid, seq, frame):
    return FrameMessage(
        session_id=sid,
        seq=seq,
        kind=frame.kind,
        handedness=frame.handedness,
        timestamp_ms=frame.timestamp_ms,
        landmarks=flatten(frame),
    )


def prana_frames(n, noise=3.0, seed=2):
    frames = [f for name, f in synth_mudra_frames(max(n, 2), noise_deg=noise, seed=seed)
              if name == "Prana"]
    return frames[:n]


class TestSessionLifecycle:
    def test_open_close_empty_record(self, mudra_model):
        svc = SessionService(mudra_model)
        sid = svc.open_session("u1", Kind.HAND)
        record = svc.close_session(sid)
        assert record.entries == []
        assert record.ended_at_ms >= record.started_at_ms

    def test_two_opens_distinct_ids(self, mudra_model):
        svc = SessionService(mudra_model)
        assert svc.open_session("u1", Kind.HAND) != svc.open_session("u1", Kind.HAND)

    def test_double_close(self, mudra_model):
        svc = SessionService(mudra_model)
        sid = svc.open_session("u1", Kind.HAND)
        svc.close_session(sid)
        with pytest.raises(UnknownSession):
            svc.close_session(sid)

    def test_unknown_session_frame(self, mudra_model):
        svc = SessionService(mudra_model)
        frame = prana_frames(1)[0]
        with pytest.raises(UnknownSession):
            svc.handle_frame(frame_msg("nope", 1, frame))


class TestHandleFrame:
    def test_prana_stream_smooths_to_prana(self, mudra_model):
        svc = SessionService(mudra_model)
        sid = svc.open_session("u1", Kind.HAND)
        frames = prana_frames(30)
        labels = []
        for i, frame in enumerate(frames):
            res = svc.handle_frame(frame_msg(sid, i + 1, frame))
            assert res.seq == i + 1
            labels.append(res.smoothed_label)
        assert all(lbl == "Prana" for lbl in labels[7:])

    def test_first_frames_unstable(self, mudra_model):
        svc = SessionService(mudra_model)
        sid = svc.open_session("u1", Kind.HAND)
        frames = prana_frames(MIN_STABLE_FRAMES)
        for i, frame in enumerate(frames[: MIN_STABLE_FRAMES - 1]):
            res = svc.handle_frame(frame_msg(sid, i + 1, frame))
            assert res.smoothed_label == UNSTABLE

    def test_out_of_order_rejected(self, mudra_model):
        svc = SessionService(mudra_model)
        sid = svc.open_session("u1", Kind.HAND)
        frame = prana_frames(1)[0]
        svc.handle_frame(frame_msg(sid, 5, frame))
        with pytest.raises(OutOfOrder):
            svc.handle_frame(frame_msg(sid, 5, frame))
        with pytest.raises(OutOfOrder):
            svc.handle_frame(frame_msg(sid, 4, frame))

    def test_bad_frame_keeps_session_open(self, mudra_model):
        svc = SessionService(mudra_model)
        sid = svc.open_session("u1", Kind.HAND)
        frame = prana_frames(1)[0]
        short = frame_msg(sid, 1, frame)
        with pytest.raises(BadFrame):
            svc.handle_frame(
                FrameMessage(sid, 1, Kind.HAND, Handedness.RIGHT, 0, short.landmarks[:30])
            )
        res = svc.handle_frame(frame_msg(sid, 2, frame))
        assert res.seq == 2

    def test_kind_mismatch_is_bad_frame(self, mudra_model):
        svc = SessionService(mudra_model)
        sid = svc.open_session("u1", Kind.BODY)
        frame = prana_frames(1)[0]
        with pytest.raises(BadFrame):
            svc.handle_frame(frame_msg(sid, 1, frame))

    def test_corrections_from_smoothed_profile(self, mudra_model):
        frames = [f for n, f in synth_mudra_frames(40, noise_deg=1.0, seed=5) if n == "Prana"]
        from asanakit.geometry import extract_features
        from asanakit.skeleton import topology_for

        topo = topology_for(Kind.HAND)
        ds = Dataset(
            Kind.HAND,
            [
                make_sample(Kind.HAND, extract_features(f, topo, 0.0).values, 0, "Prana", str(i))
                for i, f in enumerate(frames)
            ],
            ["Prana"],
        )
        profiles = {"Prana": profile_from_samples(ds, k_sigma=2.0)}
        svc = SessionService(mudra_model, profiles=profiles)
        sid = svc.open_session("u1", Kind.HAND)
        last = None
        for i, frame in enumerate(frames[:12]):
            last = svc.handle_frame(frame_msg(sid, i + 1, frame))
        assert last.smoothed_label == "Prana"
        assert last.corrections == ()  # frames match their own profile

    def test_latency_measured(self, mudra_model):
        svc = SessionService(mudra_model)
        sid = svc.open_session("u1", Kind.HAND)
        res = svc.handle_frame(frame_msg(sid, 1, prana_frames(1)[0]))
        assert res.latency_ms >= 0.0


def make_record(sid, user, start_ms, n_frames, interval_ms, label="Pataaka", correct=True):
    rec = SessionRecord(sid, user, Kind.HAND, started_at_ms=start_ms)
    for i in range(n_frames):
        rec.entries.append(SessionEntry(start_ms + i * interval_ms, label, correct))
    rec.ended_at_ms = start_ms + n_frames * interval_ms
    return rec


class TestActivityReport:
    def test_empty_store(self, tmp_path):
        store = LogStore(tmp_path)
        report = activity_report("u1", 0, 10**15, store)
        assert report.poses == {}
        assert report.total_seconds() == 0.0

    def test_60s_session_at_10fps(self, tmp_path):
        store = LogStore(tmp_path)
        start = 1_700_000_000_000
        store.append_record(make_record("s1", "u1", start, n_frames=600, interval_ms=100))
        report = activity_report("u1", start - 1000, start + 120_000, store)
        pose = report.poses["Pataaka"]
        assert pose.seconds == pytest.approx(60.0, abs=0.1)  # one frame interval
        assert pose.correct_fraction == 1.0
        assert pose.sessions == 1

    def test_gap_capped_at_one_second(self, tmp_path):
        store = LogStore(tmp_path)
        start = 1_700_000_000_000
        rec = SessionRecord("s1", "u1", Kind.HAND, started_at_ms=start)
        rec.entries = [
            SessionEntry(start, "Prana", True),
            SessionEntry(start + 30_000, "Prana", True),  # a 30s pause
            SessionEntry(start + 30_100, "Prana", True),
        ]
        rec.ended_at_ms = start + 31_000
        store.append_record(rec)
        report = activity_report("u1", start, start + 60_000, store)
        assert report.poses["Prana"].seconds == pytest.approx(1.1, abs=1e-6)

    def test_window_excludes_sessions(self, tmp_path):
        store = LogStore(tmp_path)
        start = 1_700_000_000_000
        store.append_record(make_record("s1", "u1", start, 100, 100))
        report = activity_report("u1", start + 10**9, start + 2 * 10**9, store)
        assert report.poses == {}

    def test_other_users_excluded(self, tmp_path):
        store = LogStore(tmp_path)
        start = 1_700_000_000_000
        store.append_record(make_record("s1", "alice", start, 50, 100))
        store.append_record(make_record("s2", "bob", start, 50, 100))
        report = activity_report("alice", start - 10, start + 10**6, store)
        assert report.poses["Pataaka"].sessions == 1

    def test_unstable_excluded(self, tmp_path):
        store = LogStore(tmp_path)
        start = 1_700_000_000_000
        rec = make_record("s1", "u1", start, 20, 100)
        rec.entries[:4] = [SessionEntry(start + i * 100, UNSTABLE, False) for i in range(4)]
        store.append_record(rec)
        report = activity_report("u1", start - 10, start + 10**6, store)
        assert UNSTABLE not in report.poses
        assert report.poses["Pataaka"].frames == 16

    def test_durability_after_close(self, tmp_path, mudra_model):
        store = LogStore(tmp_path)
        svc = SessionService(mudra_model, store=store)
        sid = svc.open_session("u9", Kind.HAND)
        for i, frame in enumerate(prana_frames(10)):
            svc.handle_frame(frame_msg(sid, i + 1, frame))
        record = svc.close_session(sid)
        report = activity_report(
            "u9", record.started_at_ms - 1000, record.ended_at_ms + 1000, store
        )
        assert report.poses  # the session is visible through a fresh read
        fresh = LogStore(tmp_path)
        records = list(fresh.iter_records())
        assert [r.session_id for r in records] == [sid]
        assert len(records[0].entries) == 10
