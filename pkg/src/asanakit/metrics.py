"""Confusion matrix, per-class precision/recall/F1 and report rendering."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datasets import Dataset
from .errors import LabelSpaceMismatch
from .models import TrainedModel


@dataclass
class ConfusionMatrix:
    """counts[true][predicted]; rows are true classes."""

    counts: np.ndarray
    class_names: list[str]

    def total(self) -> int:
        return int(self.counts.sum())


@dataclass
class ClassReport:
    class_names: list[str]
    precision: list[float]
    recall: list[float]
    f1: list[float]
    support: list[int]
    accuracy: float


def confusion_matrix(y_true, y_pred, class_names) -> ConfusionMatrix:
    c = len(class_names)
    counts = np.zeros((c, c), dtype=np.int64)
    for t, p in zip(y_true, y_pred):
        counts[t, p] += 1
    return ConfusionMatrix(counts, list(class_names))


def class_report(matrix: ConfusionMatrix) -> ClassReport:
    counts = matrix.counts
    c = len(matrix.class_names)
    diag = np.diag(counts).astype(float)
    col = counts.sum(axis=0).astype(float)
    row = counts.sum(axis=1).astype(float)
    # empty columns/rows report 0, not NaN
    precision = np.divide(diag, col, out=np.zeros(c), where=col > 0)
    recall = np.divide(diag, row, out=np.zeros(c), where=row > 0)
    pr = precision + recall
    f1 = np.divide(2 * precision * recall, pr, out=np.zeros(c), where=pr > 0)
    total = counts.sum()
    accuracy = float(diag.sum() / total) if total else 0.0
    return ClassReport(
        class_names=list(matrix.class_names),
        precision=precision.tolist(),
        recall=recall.tolist(),
        f1=f1.tolist(),
        support=row.astype(int).tolist(),
        accuracy=accuracy,
    )


def evaluate(model: TrainedModel, test_set: Dataset) -> tuple[ConfusionMatrix, ClassReport]:
    if list(model.class_names) != list(test_set.class_names):
        raise LabelSpaceMismatch(
            f"model classes {model.class_names} != dataset classes {test_set.class_names}"
        )
    X = test_set.X()
    y = test_set.y()
    preds = np.argmax(model.score_matrix(X), axis=1)
    matrix = confusion_matrix(y, preds, test_set.class_names)
    return matrix, class_report(matrix)


def render_report(report: ClassReport, matrix: ConfusionMatrix | None = None,
                  fmt: str = "text") -> str:
    if fmt == "csv":
        lines = ["class,precision,recall,f1,support"]
        for i, name in enumerate(report.class_names):
            lines.append(
                f"{name},{report.precision[i]:.3f},{report.recall[i]:.3f},"
                f"{report.f1[i]:.3f},{report.support[i]}"
            )
        out = "\n".join(lines) + "\n"
        if matrix is not None:
            out += "\n" + matrix_to_csv(matrix)
        return out
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    width = max([len("class")] + [len(n) for n in report.class_names])
    lines = [f"{'class':<{width}}  precision  recall  f1     support"]
    for i, name in enumerate(report.class_names):
        lines.append(
            f"{name:<{width}}  {report.precision[i]:>9.3f}  {report.recall[i]:>6.3f}  "
            f"{report.f1[i]:<5.3f}  {report.support[i]:>7d}"
        )
    total = sum(report.support)
    lines.append(f"accuracy  {report.accuracy:.3f}  (total {total})")
    out = "\n".join(lines) + "\n"
    if matrix is not None:
        out += "\nconfusion matrix (rows=true, cols=predicted)\n" + matrix_to_csv(matrix)
    return out


def matrix_to_csv(matrix: ConfusionMatrix) -> str:
    lines = ["true\\pred," + ",".join(matrix.class_names)]
    for name, row in zip(matrix.class_names, matrix.counts):
        lines.append(name + "," + ",".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def matrix_from_csv(text: str) -> ConfusionMatrix:
    lines = [ln for ln in text.strip().split("\n") if ln]
    names = lines[0].split(",")[1:]
    counts = np.zeros((len(names), len(names)), dtype=np.int64)
    for i, line in enumerate(lines[1:]):
        counts[i] = [int(v) for v in line.split(",")[1:]]
    return ConfusionMatrix(counts, names)


def matrix_to_pgm(matrix: ConfusionMatrix) -> bytes:
    """Grayscale portable graymap of the counts (dark = many), one pixel
    per cell; kept dependency-free on purpose."""
    counts = matrix.counts
    peak = max(1, int(counts.max()))
    c = len(matrix.class_names)
    shade = 255 - np.round(counts / peak * 255).astype(int)
    lines = [f"P2 {c} {c} 255"]
    for row in shade:
        lines.append(" ".join(str(int(v)) for v in row))
    return ("\n".join(lines) + "\n").encode("ascii")
