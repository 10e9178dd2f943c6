"""Command-line entry point.

Subcommands: synth, train, bench, predict, profile, serve, report.
Configuration precedence: flags > ASANAKIT_* environment variables >
--config JSON file. Exit codes: 0 ok, 1 runtime failure, 2 usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from datetime import datetime, timedelta, timezone
from pathlib import Path

import numpy as np

from . import datasets
from .correction import (
    load_profile,
    load_profile_dir,
    profile_from_samples,
    save_profile,
)
from .datasets import Dataset, SplitSpec, load_dataset, save_dataset, split, synth_mudra_dataset
from .errors import AsanakitError
from .geometry import extract_features
from .metrics import evaluate, matrix_to_csv, render_report
from .models import (
    GBDT,
    ModelSpec,
    SearchSpec,
    load_model,
    predict,
    predict_batch,
    random_search_cv,
    save_model,
    train,
)
from .service import LogStore, SessionService, activity_report, run_server
from .skeleton import Handedness, Kind, Landmark, LandmarkFrame, topology_for

FAMILY_ALIASES = {
    "knn": "knn",
    "tree": "decision_tree",
    "decision_tree": "decision_tree",
    "forest": "random_forest",
    "random_forest": "random_forest",
    "nb": "gaussian_nb",
    "gaussian_nb": "gaussian_nb",
    "logreg": "logistic_regression",
    "logistic_regression": "logistic_regression",
    "svm": "linear_svm",
    "linear_svm": "linear_svm",
    "mlp": "mlp",
    "gbdt": "gbdt",
}

# the hyperparameter space bench explores for gbdt + random search
GBDT_SEARCH_SPACE = {
    "n_rounds": [40, 80],
    "max_depth": (3, 5),
    "learning_rate": (0.1, 0.4),
    "subsample": [0.8, 1.0],
}
BENCH_SEARCH_ITERS = 6
BENCH_CV_FOLDS = 3


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"{value} is not a positive integer")
    return value


def non_negative_float(text: str) -> float:
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"{value} is negative")
    return value


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    return json.loads(Path(path).read_text())


def resolve_seed(args, config) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("ASANAKIT_SEED")
    if env is not None:
        return int(env)
    return int(config.get("seed", 42))


def resolve_data_dir(flag_value, config) -> Path:
    if flag_value:
        return Path(flag_value)
    env = os.environ.get("ASANAKIT_DATA_DIR")
    if env:
        return Path(env)
    return Path(config.get("data_dir", "asanakit-data"))


def parse_params(text: str | None) -> dict:
    """--params "k=3,p=2.0,max_depth=none" with light type coercion."""
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        name, _, raw = item.partition("=")
        if not _:
            raise argparse.ArgumentTypeError(f"bad --params item {item!r}, expected name=value")
        raw = raw.strip()
        low = raw.lower()
        if low in ("none", "null"):
            value = None
        elif low in ("true", "false"):
            value = low == "true"
        else:
            try:
                value = int(raw)
            except ValueError:
                try:
                    value = float(raw)
                except ValueError:
                    value = raw
        out[name.strip()] = value
    return out


# -- recordings (frames JSONL) -------------------------------------------------


def read_recording(path) -> list[LandmarkFrame]:
    frames = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        if not line.strip():
            continue
        doc = json.loads(line)
        flat = doc["lm"]
        lms = tuple(
            Landmark(float(flat[i]), float(flat[i + 1]), float(flat[i + 2]))
            for i in range(0, len(flat), 3)
        )
        frames.append(
            LandmarkFrame(
                Kind.parse(doc["kind"]),
                Handedness.parse(doc.get("handed", "na")),
                lms,
                int(doc.get("ts", lineno * 33)),
            )
        )
    return frames


def write_recording(frames: list[LandmarkFrame], path) -> None:
    lines = []
    for frame in frames:
        lines.append(json.dumps({
            "kind": frame.kind.value,
            "handed": frame.handedness.value,
            "ts": frame.timestamp_ms,
            "lm": [round(v, 6) for lm in frame.landmarks
                   for v in (lm.x, lm.y, lm.confidence)],
        }))
    Path(path).write_text("\n".join(lines) + "\n")


# -- subcommands ----------------------------------------------------------------


def cmd_synth(args, config) -> int:
    seed = resolve_seed(args, config)
    ds = synth_mudra_dataset(args.per_class, args.noise, seed)
    save_dataset(ds, args.out)
    counts = {name: 0 for name in ds.class_names}
    for s in ds.samples:
        counts[s.label_name] += 1
    for name, n in counts.items():
        print(f"{name}: {n}")
    print(f"wrote {len(ds)} samples to {args.out}")
    if args.frames_out:
        frames = datasets.synth_mudra_frames(args.per_class, args.noise, seed)
        if args.frames_class:
            frames = [(n, f) for n, f in frames if n == args.frames_class]
            if not frames:
                print(f"no frames for class {args.frames_class!r}", file=sys.stderr)
                return 1
        write_recording([f for _, f in frames], args.frames_out)
        print(f"wrote {len(frames)} frames to {args.frames_out}")
    return 0


def cmd_train(args, config) -> int:
    seed = resolve_seed(args, config)
    ds = load_dataset(args.data)
    spec = ModelSpec(FAMILY_ALIASES[args.family], parse_params(args.params), seed=seed)
    t0 = time.perf_counter()
    model = train(spec, ds)
    Path(args.out).write_bytes(save_model(model))
    acc = float(np.mean(predict_batch(model, ds.X()) == ds.y()))
    print(f"trained {spec.family} on {len(ds)} samples in {time.perf_counter() - t0:.2f}s")
    print(f"training accuracy: {acc:.4f}")
    print(f"saved model to {args.out}")
    return 0


def bench_configs(seed: int) -> list[tuple[str, object]]:
    """Every benchmarked configuration; a SearchSpec entry means random
    search first, then a fit of the winning spec."""
    seeds = np.random.SeedSequence(seed).generate_state(32)
    s = iter(int(v) for v in seeds)
    mlp500 = lambda: ModelSpec("mlp", {"hidden_size": 500}, seed=next(s))
    return [
        ("knn/k3", ModelSpec("knn", {"k": 3}, seed=next(s))),
        ("knn/k5", ModelSpec("knn", {"k": 5}, seed=next(s))),
        ("knn/k9", ModelSpec("knn", {"k": 9}, seed=next(s))),
        ("forest/30-depth7", ModelSpec("random_forest", {"n_estimators": 30, "max_depth": 7}, seed=next(s))),
        ("forest/30-depth10", ModelSpec("random_forest", {"n_estimators": 30, "max_depth": 10}, seed=next(s))),
        ("forest/30-unbounded", ModelSpec("random_forest", {"n_estimators": 30}, seed=next(s))),
        ("mlp/hidden100", ModelSpec("mlp", {"hidden_size": 100}, seed=next(s))),
        ("mlp/hidden500", ModelSpec("mlp", {"hidden_size": 500}, seed=next(s))),
        ("ovr/mlp500", ModelSpec("one_vs_rest", {"inner": mlp500()}, seed=next(s))),
        ("svm/linear-hinge", ModelSpec("linear_svm", {}, seed=next(s))),
        ("logreg/iter2500-lr0.5", ModelSpec("logistic_regression", {"max_iter": 2500, "learning_rate": 0.5}, seed=next(s))),
        ("logreg/iter2500-lr0.1", ModelSpec("logistic_regression", {"max_iter": 2500, "learning_rate": 0.1}, seed=next(s))),
        ("nb/gaussian", ModelSpec("gaussian_nb", {}, seed=next(s))),
        ("gbdt/random-search", SearchSpec(GBDT, GBDT_SEARCH_SPACE, n_iter=BENCH_SEARCH_ITERS,
                                          cv_folds=BENCH_CV_FOLDS, seed=next(s))),
        ("tree/leaf1-split2", ModelSpec("decision_tree", {"min_samples_leaf": 1, "min_samples_split": 2}, seed=next(s))),
        ("tree/leaf2-split2", ModelSpec("decision_tree", {"min_samples_leaf": 2, "min_samples_split": 2}, seed=next(s))),
        ("tree/leaf1-split3", ModelSpec("decision_tree", {"min_samples_leaf": 1, "min_samples_split": 3}, seed=next(s))),
        ("tree/leaf2-split3", ModelSpec("decision_tree", {"min_samples_leaf": 2, "min_samples_split": 3}, seed=next(s))),
    ]


def run_bench(dataset: Dataset, seed: int, search_iters=None, cv_folds=None, out=sys.stdout):
    train_set, test_set = split(dataset, SplitSpec(train_fraction=0.8, seed=seed))
    rows = []
    best = None
    for name, entry in bench_configs(seed):
        t0 = time.perf_counter()
        if isinstance(entry, SearchSpec):
            search = entry
            if search_iters or cv_folds:
                search = SearchSpec(entry.base_family, entry.param_distributions,
                                    n_iter=search_iters or entry.n_iter,
                                    cv_folds=cv_folds or entry.cv_folds, seed=entry.seed)
            best_spec, cv_acc, _trials = random_search_cv(search, train_set)
            model = train(best_spec, train_set)
            params = ", ".join(f"{k}={v}" for k, v in sorted(best_spec.hyperparams.items()))
            params += f" (cv={cv_acc:.3f})"
        else:
            model = train(entry, train_set)
            params = ", ".join(f"{k}={v}" for k, v in sorted(entry.hyperparams.items())
                               if k != "inner") or "defaults"
        elapsed = time.perf_counter() - t0
        matrix, report = evaluate(model, test_set)
        rows.append((name, params, report.accuracy, elapsed))
        print(f"{name:24s} {report.accuracy:8.4f}  {elapsed:8.2f}s  {params}", file=out)
        if best is None or report.accuracy > best[1]:
            best = (name, report.accuracy, model, matrix, report)
    name, acc, _model, matrix, report = best
    print(f"best: {name} accuracy={acc:.4f}", file=out)
    print(render_report(report, fmt="text"), file=out)
    print(matrix_to_csv(matrix), file=out, end="")
    return rows, best


def cmd_bench(args, config) -> int:
    seed = resolve_seed(args, config)
    dataset = load_dataset(args.data)
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        run_bench(dataset, seed, args.search_iters, args.cv, out=out)
    finally:
        if args.out:
            out.close()
            print(f"wrote {args.out}")
    return 0


def cmd_predict(args, config) -> int:
    model = load_model(Path(args.model).read_bytes())
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        if args.data:
            ds = load_dataset(args.data)
            preds = predict_batch(model, ds.X())
            for sample, p in zip(ds.samples, preds):
                print(f"{sample.source_id},{model.class_names[p]}", file=out)
            if ds.class_names == model.class_names:
                acc = float(np.mean(preds == ds.y()))
                print(f"accuracy: {acc:.4f}", file=out)
        else:
            frames = read_recording(args.frames)
            for i, frame in enumerate(frames):
                topo = topology_for(frame.kind)
                fv = extract_features(frame, topo, min_confidence=0.0)
                label, scores = predict(model, fv)
                print(f"{i},{model.class_names[label]},{max(scores):.4f}", file=out)
    finally:
        if args.out:
            out.close()
    return 0


def cmd_profile(args, config) -> int:
    if args.profile_cmd == "build":
        frames = read_recording(args.frames)
        if not frames:
            print("recording is empty", file=sys.stderr)
            return 1
        kind = frames[0].kind
        topo = topology_for(kind)
        rows = [
            datasets.make_sample(
                kind, extract_features(f, topo, min_confidence=0.0).values, 0,
                args.pose_id, f"rec:{i}",
            )
            for i, f in enumerate(frames)
        ]
        ds = Dataset(kind, rows, [args.pose_id])
        profile = profile_from_samples(ds, k_sigma=args.k_sigma, floor_deg=args.floor_deg)
        save_profile(profile, args.out)
        print(f"wrote profile {args.pose_id} ({len(profile.angle_constraints)} angle "
              f"constraints) to {args.out}")
        return 0
    if args.profile_cmd == "validate":
        profile = load_profile(args.profile)
        n = (len(profile.angle_constraints) + len(profile.slope_constraints)
             + len(profile.distance_constraints))
        print(f"ok: {profile.pose_id} ({profile.kind.value}, {n} constraints)")
        return 0
    print("unknown profile subcommand", file=sys.stderr)
    return 2


def cmd_serve(args, config) -> int:
    model = load_model(Path(args.model).read_bytes())
    profiles = load_profile_dir(args.profiles) if args.profiles else {}
    data_dir = resolve_data_dir(args.store, config)
    store = LogStore(data_dir)
    service = SessionService(model, profiles=profiles, store=store)
    print(f"model: {model.spec.family}, classes: {', '.join(model.class_names)}", flush=True)
    run_server(service, host=args.host, port=args.port)
    return 0


def parse_window(text: str, now_ms: int) -> tuple[int, int]:
    units = {"m": 60, "h": 3600, "d": 86400}
    if ".." in text:
        start_s, end_s = text.split("..", 1)
        to_ms = lambda s: int(
            datetime.fromisoformat(s).replace(tzinfo=timezone.utc).timestamp() * 1000
        )
        return to_ms(start_s), to_ms(end_s)
    if text and text[-1] in units:
        span = float(text[:-1]) * units[text[-1]] * 1000
        return now_ms - int(span), now_ms
    raise ValueError(f"bad window {text!r}; use e.g. 7d, 24h, 30m or ISO..ISO")


def cmd_report(args, config) -> int:
    data_dir = resolve_data_dir(args.store, config)
    store = LogStore(data_dir)
    now_ms = int(time.time() * 1000)
    try:
        start_ms, end_ms = parse_window(args.window, now_ms)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    report = activity_report(args.user, start_ms, end_ms, store)
    if not report.poses:
        print(f"no activity for {args.user} in the window")
        return 0
    print(f"activity for {args.user}")
    for pose, a in sorted(report.poses.items()):
        print(f"  {pose:12s} {a.seconds:8.1f}s  sessions={a.sessions}  "
              f"correct={100.0 * a.correct_fraction:5.1f}%")
    print(f"  total {report.total_seconds():.1f}s")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asanakit",
        description="Joint-angle mudra/pose recognition: synth data, train, "
                    "benchmark, correct, serve, report.",
    )
    parser.add_argument("--config", help="JSON config file (lowest precedence)")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("synth", help="generate a synthetic mudra dataset CSV")
    p.add_argument("--per-class", type=positive_int, required=True)
    p.add_argument("--noise", type=non_negative_float, default=6.0,
                   help="approximate per-angle jitter in degrees")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--frames-out", help="also write raw landmark frames (JSONL)")
    p.add_argument("--frames-class", help="restrict --frames-out to one class")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", help="fit one model and save it")
    p.add_argument("--family", choices=sorted(FAMILY_ALIASES), required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--params", help="comma list, e.g. k=3,p=2.0")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("bench", help="run the full benchmarked model table on an 80:20 split")
    p.add_argument("--data", required=True)
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--search-iters", type=positive_int, default=None)
    p.add_argument("--cv", type=positive_int, default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("predict", help="label a dataset CSV or a frames recording")
    p.add_argument("--model", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--data")
    group.add_argument("--frames")
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("profile", help="build or validate pose profiles")
    psub = p.add_subparsers(dest="profile_cmd", required=True)
    b = psub.add_parser("build", help="derive a profile from a frames recording")
    b.add_argument("--frames", required=True)
    b.add_argument("--pose-id", required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--k-sigma", type=non_negative_float, default=2.0)
    b.add_argument("--floor-deg", type=non_negative_float, default=5.0)
    b.add_argument("--seed", type=int, default=None)
    b.set_defaults(func=cmd_profile)
    v = psub.add_parser("validate", help="check a profile file")
    v.add_argument("--profile", required=True)
    v.add_argument("--seed", type=int, default=None)
    v.set_defaults(func=cmd_profile)

    p = sub.add_parser("serve", help="serve live sessions over the wire protocol")
    p.add_argument("--model", required=True)
    p.add_argument("--profiles", help="directory of pose profile JSON files")
    p.add_argument("--store", help="session log directory")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=7872)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("report", help="print a user's activity report")
    p.add_argument("--user", required=True)
    p.add_argument("--window", default="7d", help="7d, 24h, 30m or ISO..ISO")
    p.add_argument("--store", help="session log directory")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
        return args.func(args, config)
    except (AsanakitError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
