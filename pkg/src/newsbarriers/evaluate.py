"""Stratified cross-validation, micro-averaged metrics, and report rendering.

For single-label binary prediction the micro-averaged precision, recall, and
F1 all collapse to classification accuracy (summing TP and FP over both
classes counts every prediction once; TP and FN count every gold label once).
``micro_metrics`` computes the class-summed formulas literally and asserts the
identity on every call.
"""

import csv
import io
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .annotate import BarrierDataset
from .classifiers import (
    DEFAULT_GRIDS,
    DISPLAY_NAMES,
    ModelFamily,
    ModelSpec,
    sweep_full,
    train,
)
from .errors import EmptyInput, LengthMismatch, TooFewPerClass
from .knowledge import BarrierKind

MODEL_ORDER = (
    ModelFamily.UNIFORM,
    ModelFamily.STRATIFIED,
    ModelFamily.MOST_FREQUENT,
    ModelFamily.SVM,
    ModelFamily.KNN,
    ModelFamily.DECISION_TREE,
    ModelFamily.RANDOM_FOREST,
    ModelFamily.NAIVE_BAYES,
)

BARRIER_ORDER = (
    BarrierKind.ECONOMIC,
    BarrierKind.CULTURAL,
    BarrierKind.GEOGRAPHICAL,
    BarrierKind.TIME_ZONE,
    BarrierKind.POLITICAL,
)

BARRIER_TITLES = {
    BarrierKind.ECONOMIC: "Economic",
    BarrierKind.CULTURAL: "Cultural",
    BarrierKind.GEOGRAPHICAL: "Geographical",
    BarrierKind.TIME_ZONE: "Time Zone",
    BarrierKind.POLITICAL: "Political",
}


@dataclass(frozen=True)
class FoldAssignment:
    fold_of: np.ndarray  # fold index per instance
    k: int
    seed: int

    def test_indices(self, fold: int) -> np.ndarray:
        return np.nonzero(self.fold_of == fold)[0]

    def train_indices(self, fold: int) -> np.ndarray:
        return np.nonzero(self.fold_of != fold)[0]


@dataclass(frozen=True)
class MetricSet:
    classification_accuracy: float
    micro_precision: float
    micro_recall: float
    micro_f1: float


@dataclass(frozen=True)
class ReportRow:
    barrier: BarrierKind
    family: ModelFamily
    metrics: MetricSet


def stratified_kfold(labels, k: int = 10, seed: int = 0, ids: Optional[Sequence[str]] = None) -> FoldAssignment:
    """Assign each instance to one of k folds, preserving class proportions.

    Fixed algorithm, stable across platforms: within each class, instances are
    ordered by (id, original position), shuffled once with a PCG64 generator
    seeded from ``seed``, and dealt round-robin into folds. Per-fold class
    counts land within one instance of perfect proportion.
    """
    labels = np.asarray(labels, dtype=bool)
    n = len(labels)
    if ids is None:
        ids = [""] * n
    fold_of = np.empty(n, dtype=int)
    rng = np.random.default_rng(seed)
    for label in (False, True):
        members = [i for i in range(n) if labels[i] == label]
        if len(members) < k:
            raise TooFewPerClass(label, len(members), k)
        members.sort(key=lambda i: (ids[i], i))
        order = rng.permutation(len(members))
        for position, j in enumerate(order):
            fold_of[members[j]] = position % k
    return FoldAssignment(fold_of=fold_of, k=k, seed=seed)


def micro_metrics(predictions, gold) -> MetricSet:
    """Class-summed micro precision/recall/F1 plus classification accuracy."""
    predictions = np.asarray(predictions, dtype=bool)
    gold = np.asarray(gold, dtype=bool)
    if predictions.shape != gold.shape:
        raise LengthMismatch(f"{len(predictions)} predictions vs {len(gold)} gold labels")
    if len(predictions) == 0:
        raise EmptyInput("no predictions to score")

    tp_sum = fp_sum = fn_sum = 0
    for label in (False, True):
        tp_sum += int(((predictions == label) & (gold == label)).sum())
        fp_sum += int(((predictions == label) & (gold != label)).sum())
        fn_sum += int(((predictions != label) & (gold == label)).sum())
    accuracy = int((predictions == gold).sum()) / len(gold)
    precision = tp_sum / (tp_sum + fp_sum)
    recall = tp_sum / (tp_sum + fn_sum)
    f1 = precision if precision == recall else 2.0 * precision * recall / (precision + recall)
    # Single-label binary identity; holds for every input by construction.
    assert precision == recall == f1 == accuracy
    return MetricSet(
        classification_accuracy=accuracy,
        micro_precision=precision,
        micro_recall=recall,
        micro_f1=f1,
    )


def _mean_metrics(per_fold: Sequence[MetricSet]) -> MetricSet:
    return MetricSet(
        classification_accuracy=float(np.mean([m.classification_accuracy for m in per_fold])),
        micro_precision=float(np.mean([m.micro_precision for m in per_fold])),
        micro_recall=float(np.mean([m.micro_recall for m in per_fold])),
        micro_f1=float(np.mean([m.micro_f1 for m in per_fold])),
    )


def _child_seed(seed: int, *key: int) -> int:
    return int(np.random.SeedSequence(entropy=seed, spawn_key=key).generate_state(1, np.uint64)[0])


def _select_nested(family, grid, train_instances, seed, inner_k):
    """Pick a grid point by inner cross-validation on the training fold only."""
    from .classifiers import as_arrays

    X, y = as_arrays(train_instances)
    counts = (int((~y).sum()), int(y.sum()))
    k = max(2, min(inner_k, min(counts)))
    assignment = stratified_kfold(y, k=k, seed=seed)
    best = None
    for g, point in enumerate(grid):
        preds = np.empty(len(y), dtype=bool)
        for fold in range(k):
            tr, te = assignment.train_indices(fold), assignment.test_indices(fold)
            spec = ModelSpec(family=family, hyperparameters=dict(point), seed=seed)
            model = train(spec, (X[tr], y[tr]))
            preds[te] = model.predict_batch(X[te])
        f1 = micro_metrics(preds, y).micro_f1
        if best is None or f1 > best[1]:
            best = (point, f1)
    return best[0]


def run_experiment(
    dataset: BarrierDataset,
    specs: Sequence[ModelSpec],
    k: int = 10,
    seed: int = 0,
    grids: Optional[dict] = None,
    nested: bool = False,
    fold_mean: bool = False,
    inner_k: int = 5,
) -> list:
    """k-fold evaluation of each model spec on one barrier dataset.

    Families with a hyperparameter grid are swept inside every fold; by
    default the sweep scores grid points on the fold's own test split (the
    reproduced protocol), while ``nested=True`` switches to inner
    cross-validation on the training portion. Metrics pool the held-out
    predictions of all folds unless ``fold_mean`` asks for per-fold averaging.
    """
    X, y = dataset.arrays()
    assignment = stratified_kfold(y, k=k, seed=seed, ids=[i.article_id for i in dataset.instances])
    rows = []
    for m, spec in enumerate(specs):
        grid = (grids or {}).get(spec.family) or DEFAULT_GRIDS.get(spec.family) or [dict(spec.hyperparameters)]
        pooled = np.empty(len(y), dtype=bool)
        per_fold = []
        for fold in range(k):
            tr, te = assignment.train_indices(fold), assignment.test_indices(fold)
            fold_seed = _child_seed(seed, m, fold)
            train_data, eval_data = (X[tr], y[tr]), (X[te], y[te])
            if len(grid) > 1:
                if nested:
                    point = _select_nested(spec.family, grid, train_data, fold_seed, inner_k)
                    fold_spec = ModelSpec(spec.family, dict(point), fold_seed)
                    preds = train(fold_spec, train_data).predict_batch(X[te])
                else:
                    _, _, preds = sweep_full(spec.family, grid, train_data, eval_data, seed=fold_seed)
            else:
                fold_spec = ModelSpec(spec.family, dict(grid[0]), fold_seed)
                preds = train(fold_spec, train_data).predict_batch(X[te])
            pooled[te] = preds
            if fold_mean:
                per_fold.append(micro_metrics(preds, y[te]))
        metrics = _mean_metrics(per_fold) if fold_mean else micro_metrics(pooled, y)
        rows.append(ReportRow(barrier=dataset.barrier, family=spec.family, metrics=metrics))
    return rows


def _sorted_rows(rows: Sequence[ReportRow]) -> list:
    return sorted(rows, key=lambda r: (BARRIER_ORDER.index(r.barrier), MODEL_ORDER.index(r.family)))


def render_report(rows: Sequence[ReportRow], fmt: str = "markdown", footer: Optional[Sequence[str]] = None) -> str:
    """Render report rows barrier by barrier, models in a fixed order.

    Markdown rounds to two decimals; csv keeps full precision and round-trips.
    """
    if not rows:
        raise EmptyInput("no report rows")
    ordered = _sorted_rows(rows)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(("barrier", "model", "ca", "micro_precision", "micro_recall", "micro_f1"))
        for r in ordered:
            writer.writerow(
                (
                    BARRIER_TITLES[r.barrier],
                    DISPLAY_NAMES[r.family],
                    repr(r.metrics.classification_accuracy),
                    repr(r.metrics.micro_precision),
                    repr(r.metrics.micro_recall),
                    repr(r.metrics.micro_f1),
                )
            )
        return buf.getvalue()
    if fmt != "markdown":
        raise ValueError(f"unknown report format: {fmt!r}")
    lines = ["| Barrier | Model | CA | Mic-Pre | Mic-Rec | Mic-F1 |", "| --- | --- | --- | --- | --- | --- |"]
    last_barrier = None
    for r in ordered:
        title = BARRIER_TITLES[r.barrier] if r.barrier is not last_barrier else ""
        last_barrier = r.barrier
        m = r.metrics
        lines.append(
            f"| {title} | {DISPLAY_NAMES[r.family]} | {m.classification_accuracy:.2f} "
            f"| {m.micro_precision:.2f} | {m.micro_recall:.2f} | {m.micro_f1:.2f} |"
        )
    text = "\n".join(lines) + "\n"
    if footer:
        text += "\n" + "\n".join(footer) + "\n"
    return text


def parse_report_csv(text: str) -> list:
    """Read report rows back from csv output."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != ["barrier", "model", "ca", "micro_precision", "micro_recall", "micro_f1"]:
        raise ValueError("not a report csv")
    title_to_barrier = {v: k for k, v in BARRIER_TITLES.items()}
    name_to_family = {v: k for k, v in DISPLAY_NAMES.items()}
    rows = []
    for record in reader:
        rows.append(
            ReportRow(
                barrier=title_to_barrier[record[0]],
                family=name_to_family[record[1]],
                metrics=MetricSet(
                    classification_accuracy=float(record[2]),
                    micro_precision=float(record[3]),
                    micro_recall=float(record[4]),
                    micro_f1=float(record[5]),
                ),
            )
        )
    return rows


def dataset_footer(dataset: BarrierDataset) -> list:
    n_true, n_false = dataset.class_counts
    lines = [
        f"{BARRIER_TITLES[dataset.barrier]}: {len(dataset.instances)} instances "
        f"(TRUE {n_true} / FALSE {n_false}), dropped {dataset.total_dropped}"
    ]
    for reason in sorted(dataset.dropped):
        lines.append(f"  dropped ({reason}): {dataset.dropped[reason]}")
    return lines
