import numpy as np
import pytest

from asanakit.datasets import (
    Dataset,
    SplitSpec,
    load_dataset,
    load_mudra_templates,
    make_sample,
    save_dataset,
    split,
    synth_mudra_dataset,
)
from asanakit.errors import ParseError, SchemaError, TooFewSamples
from asanakit.skeleton import Kind


def toy_dataset(n_per_class=10, classes=("a", "b"), kind=Kind.HAND, seed=0):
    rng = np.random.default_rng(seed)
    width = 19 if kind is Kind.HAND else 8
    samples = []
    for label, name in enumerate(classes):
        for i in range(n_per_class):
            values = rng.uniform(10, 170, size=width)
            samples.append(make_sample(kind, values, label, name, f"{name}:{i}"))
    return Dataset(kind, samples, list(classes))


class TestCsvRoundTrip:
    def test_round_trip_exact(self, tmp_path):
        ds = synth_mudra_dataset(per_class=20, noise_deg=6.0, seed=3)
        path = tmp_path / "d.csv"
        save_dataset(ds, path)
        back = load_dataset(path)
        assert back.kind == ds.kind
        assert back.class_names == ds.class_names
        assert len(back) == len(ds)
        for s, t in zip(ds.samples, back.samples):
            assert s == t

    def test_well_formed_small_file(self, tmp_path):
        ds = toy_dataset(5)
        path = tmp_path / "d.csv"
        save_dataset(ds, path)
        assert len(load_dataset(path)) == 10

    def test_empty_dataset_header_only(self, tmp_path):
        ds = Dataset(Kind.HAND, [], ["a", "b"])
        path = tmp_path / "e.csv"
        save_dataset(ds, path)
        assert path.read_text() == "hand,a,b\n"
        assert len(load_dataset(path)) == 0

    def test_unwritable_path(self, tmp_path):
        with pytest.raises(OSError):
            save_dataset(toy_dataset(2), tmp_path / "nope" / "d.csv")


class TestLoadErrors:
    def test_wrong_column_count_is_schema_error(self, tmp_path):
        path = tmp_path / "bad.csv"
        row = ",".join(["a", "src"] + ["90"] * 18)
        path.write_text("hand,a,b\n" + row + "\n")
        with pytest.raises(SchemaError):
            load_dataset(path)

    def test_unknown_label_is_parse_error(self, tmp_path):
        path = tmp_path / "bad.csv"
        row = ",".join(["zz", "src"] + ["90"] * 19)
        path.write_text("hand,a,b\n" + row + "\n")
        with pytest.raises(ParseError) as exc:
            load_dataset(path)
        assert exc.value.line == 2

    def test_bad_number(self, tmp_path):
        path = tmp_path / "bad.csv"
        row = ",".join(["a", "src"] + ["90"] * 18 + ["oops"])
        path.write_text("hand,a,b\n" + row + "\n")
        with pytest.raises(ParseError) as exc:
            load_dataset(path)
        assert exc.value.column == 21

    def test_out_of_range_angle(self, tmp_path):
        path = tmp_path / "bad.csv"
        row = ",".join(["a", "src"] + ["90"] * 18 + ["181"])
        path.write_text("hand,a,b\n" + row + "\n")
        with pytest.raises(ParseError):
            load_dataset(path)

    def test_bad_kind(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("paw,a,b\n")
        with pytest.raises(ParseError) as exc:
            load_dataset(path)
        assert exc.value.line == 1


class TestSplit:
    def test_paper_counts_2000_500(self):
        ds = synth_mudra_dataset(per_class=500, noise_deg=6.0, seed=42)
        train, test = split(ds, SplitSpec(train_fraction=0.8, seed=42))
        assert (len(train), len(test)) == (2000, 500)

    def test_balanced_stratification_exact(self):
        ds = synth_mudra_dataset(per_class=500, noise_deg=6.0, seed=42)
        train, test = split(ds, SplitSpec(seed=7))
        for c in range(5):
            assert int(np.sum(train.y() == c)) == 400
            assert int(np.sum(test.y() == c)) == 100

    def test_deterministic(self):
        ds = toy_dataset(25)
        a = split(ds, SplitSpec(seed=11))
        b = split(ds, SplitSpec(seed=11))
        assert a[0].samples == b[0].samples and a[1].samples == b[1].samples

    def test_partition_disjoint_and_complete(self):
        ds = toy_dataset(17, classes=("a", "b", "c"))
        train, test = split(ds, SplitSpec(train_fraction=0.7, seed=5))
        ids = lambda d: {s.source_id for s in d.samples}
        assert ids(train) & ids(test) == set()
        assert ids(train) | ids(test) == ids(ds)

    def test_per_class_ratio_within_one(self):
        rng = np.random.default_rng(0)
        for trial in range(10):
            sizes = rng.integers(3, 40, size=4)
            samples = []
            names = ["w", "x", "y", "z"]
            for label, n in enumerate(sizes):
                for i in range(n):
                    samples.append(
                        make_sample(Kind.BODY, rng.uniform(0, 180, 8), label, names[label], f"{label}:{i}")
                    )
            ds = Dataset(Kind.BODY, samples, names)
            train, _ = split(ds, SplitSpec(train_fraction=0.8, seed=trial))
            for label, n in enumerate(sizes):
                got = int(np.sum(train.y() == label))
                assert abs(got - 0.8 * n) <= 1.0

    def test_too_few_samples(self):
        samples = [
            make_sample(Kind.HAND, np.full(19, 90.0), 0, "a", "a:0"),
            make_sample(Kind.HAND, np.full(19, 90.0), 1, "b", "b:0"),
            make_sample(Kind.HAND, np.full(19, 91.0), 1, "b", "b:1"),
        ]
        ds = Dataset(Kind.HAND, samples, ["a", "b"])
        with pytest.raises(TooFewSamples) as exc:
            split(ds, SplitSpec(seed=0))
        assert exc.value.class_name == "a"

    def test_rejects_bad_fraction(self):
        with pytest.raises(ValueError):
            SplitSpec(train_fraction=1.0)


class TestSynthMudra:
    def test_counts(self):
        ds = synth_mudra_dataset(per_class=10, noise_deg=6.0, seed=0)
        assert len(ds) == 50
        assert ds.class_names == ["Pataaka", "Mudrakhya", "Prana", "Pallava", "Tripataka"]

    def test_noise_zero_identical_within_class(self):
        ds = synth_mudra_dataset(per_class=6, noise_deg=0.0, seed=4)
        X, y = ds.X(), ds.y()
        for c in range(5):
            block = X[y == c]
            assert np.all(block == block[0])

    def test_mirrored_equals_unmirrored_at_zero_noise(self):
        ds = synth_mudra_dataset(per_class=2, noise_deg=0.0, seed=4)
        by_class = {}
        for s in ds.samples:
            by_class.setdefault(s.label_name, []).append(s)
        for name, pair in by_class.items():
            sides = {s.source_id.rsplit(":", 1)[1] for s in pair}
            assert sides == {"L", "R"}
            assert pair[0].features.values == pair[1].features.values

    def test_template_margins(self):
        # every class pair differs by >= 25 degrees on at least one angle
        class_order, templates = load_mudra_templates()
        ds = synth_mudra_dataset(per_class=2, noise_deg=0.0, seed=0)
        X, y = ds.X(), ds.y()
        means = np.array([X[y == c][0] for c in range(5)])
        for i in range(5):
            for j in range(i + 1, 5):
                assert np.max(np.abs(means[i] - means[j])) >= 25.0

    def test_determinism(self):
        a = synth_mudra_dataset(per_class=5, noise_deg=3.0, seed=8)
        b = synth_mudra_dataset(per_class=5, noise_deg=3.0, seed=8)
        assert a.samples == b.samples

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            synth_mudra_dataset(per_class=1, noise_deg=1.0, seed=0)
        with pytest.raises(ValueError):
            synth_mudra_dataset(per_class=5, noise_deg=-1.0, seed=0)
