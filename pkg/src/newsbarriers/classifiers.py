"""From-scratch classifiers and dummy baselines behind one train/predict contract.

All families are implemented directly (no learning framework) so every numeric
path is testable. Tie rules are global: any prediction tie resolves to FALSE,
the dominant class in the barrier datasets. Distance- and margin-based
families (kNN, SVM) standardize features with training-set statistics; trees
and Naive Bayes consume raw values.

Determinism contract: identical (family, hyperparameters, seed, data) yield
identical learned parameters and predictions.
"""

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from heapq import heappop, heappush
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateTrainingSet, EmptyInput, LengthMismatch


class ModelFamily(Enum):
    UNIFORM = "uniform"
    STRATIFIED = "stratified"
    MOST_FREQUENT = "most_frequent"
    SVM = "svm"
    KNN = "knn"
    DECISION_TREE = "decision_tree"
    RANDOM_FOREST = "random_forest"
    NAIVE_BAYES = "naive_bayes"


DISPLAY_NAMES = {
    ModelFamily.UNIFORM: "Uniform",
    ModelFamily.STRATIFIED: "Stratified",
    ModelFamily.MOST_FREQUENT: "Most Frequent",
    ModelFamily.SVM: "SVM",
    ModelFamily.KNN: "kNN",
    ModelFamily.DECISION_TREE: "Decision Tree",
    ModelFamily.RANDOM_FOREST: "Random Forest",
    ModelFamily.NAIVE_BAYES: "Naive Bayes",
}

DEFAULT_HYPERPARAMETERS = {
    ModelFamily.UNIFORM: {},
    ModelFamily.STRATIFIED: {},
    ModelFamily.MOST_FREQUENT: {},
    ModelFamily.SVM: {"lam": 1e-3, "epochs": 50},
    ModelFamily.KNN: {"k": 5},
    ModelFamily.DECISION_TREE: {"max_leaf_nodes": None},
    ModelFamily.RANDOM_FOREST: {"n_estimators": 100},
    ModelFamily.NAIVE_BAYES: {},
}

DEFAULT_GRIDS = {
    ModelFamily.SVM: [{"lam": 1e-4}, {"lam": 1e-3}, {"lam": 1e-2}],
    ModelFamily.KNN: [{"k": k} for k in (1, 3, 5, 7, 9, 11, 15)],
    ModelFamily.DECISION_TREE: [{"max_leaf_nodes": m} for m in (4, 8, 16, 32, 64, None)],
    ModelFamily.RANDOM_FOREST: [{"n_estimators": n} for n in (10, 50, 100, 200)],
}

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class ModelSpec:
    family: ModelFamily
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0


def family_from_name(name: str) -> ModelFamily:
    try:
        return ModelFamily(name.strip().lower().replace("-", "_").replace(" ", "_"))
    except ValueError:
        raise ValueError(f"unknown model family: {name!r}") from None


class Standardizer:
    """Per-feature (x - mean) / std; zero-variance features keep scale 1."""

    def __init__(self, mean=None, scale=None):
        self.mean = mean
        self.scale = scale

    def fit(self, X: np.ndarray) -> "Standardizer":
        self.mean = X.mean(axis=0)
        std = X.std(axis=0)
        self.scale = np.where(std > 0, std, 1.0)
        return self

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (X - self.mean) / self.scale


def _as_bool_labels(y) -> np.ndarray:
    return np.asarray(y, dtype=bool)


class UniformBaseline:
    """Coin-flip predictions from the model's own seeded generator."""

    def __init__(self, seed: int = 0):
        self.seed = seed

    def fit(self, X, y):
        return self

    def predict(self, X) -> np.ndarray:
        rng = np.random.default_rng(self.seed)
        return rng.integers(0, 2, size=len(X)).astype(bool)


class StratifiedBaseline:
    """Random predictions matching the training class distribution."""

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.p_true: Optional[float] = None

    def fit(self, X, y):
        y = _as_bool_labels(y)
        if y.all() or not y.any():
            raise DegenerateTrainingSet("stratified baseline needs both classes in training data")
        self.p_true = float(y.mean())
        return self

    def predict(self, X) -> np.ndarray:
        rng = np.random.default_rng(self.seed)
        return rng.random(len(X)) < self.p_true


class MostFrequentBaseline:
    """Constant prediction of the training majority label; tie goes to FALSE."""

    def __init__(self):
        self.prediction: Optional[bool] = None

    def fit(self, X, y):
        y = _as_bool_labels(y)
        n_true = int(y.sum())
        self.prediction = n_true > len(y) - n_true
        return self

    def predict(self, X) -> np.ndarray:
        return np.full(len(X), self.prediction, dtype=bool)


class KNearestNeighbors:
    """Euclidean kNN on standardized features.

    Distance ties resolve to the lower training index (stable sort); vote ties
    resolve to FALSE. k is capped at the training-set size.
    """

    def __init__(self, k: int = 5):
        self.k = k
        self.scaler = Standardizer()
        self.X_: Optional[np.ndarray] = None
        self.y_: Optional[np.ndarray] = None

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        self.X_ = self.scaler.fit(X).transform(X)
        self.y_ = _as_bool_labels(y)
        return self

    def predict(self, X) -> np.ndarray:
        Xs = self.scaler.transform(np.asarray(X, dtype=float))
        k = min(self.k, len(self.X_))
        out = np.empty(len(Xs), dtype=bool)
        for i, q in enumerate(Xs):
            diff = self.X_ - q
            d2 = np.einsum("ij,ij->i", diff, diff)
            neighbors = np.argsort(d2, kind="stable")[:k]
            n_true = int(self.y_[neighbors].sum())
            out[i] = n_true > k - n_true
        return out


class LinearSVM:
    """Linear SVM trained by stochastic subgradient descent on the hinge loss.

    Pegasos-style schedule: step 1/(lam * t) with per-epoch seeded shuffling.
    The intercept is learned as the weight of an internal constant feature.
    Decision threshold is 0; a score of exactly 0 predicts FALSE.
    """

    def __init__(self, lam: float = 1e-3, epochs: int = 50, seed: int = 0):
        self.lam = lam
        self.epochs = epochs
        self.seed = seed
        self.scaler = Standardizer()
        self.weights: Optional[np.ndarray] = None
        self.bias: float = 0.0

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y_pm = np.where(_as_bool_labels(y), 1.0, -1.0)
        Xs = self.scaler.fit(X).transform(X)
        Xa = np.hstack([Xs, np.ones((len(Xs), 1))])
        w = np.zeros(Xa.shape[1])
        rng = np.random.default_rng(self.seed)
        t = 0
        for _ in range(self.epochs):
            for i in rng.permutation(len(Xa)):
                t += 1
                eta = 1.0 / (self.lam * t)
                violated = y_pm[i] * float(Xa[i] @ w) < 1.0
                w *= 1.0 - eta * self.lam
                if violated:
                    w += eta * y_pm[i] * Xa[i]
        self.weights = w[:-1]
        self.bias = float(w[-1])
        return self

    def decision_values(self, X) -> np.ndarray:
        Xs = self.scaler.transform(np.asarray(X, dtype=float))
        return Xs @ self.weights + self.bias

    def predict(self, X) -> np.ndarray:
        return self.decision_values(X) > 0.0


class _Tree:
    """Flat binary tree: feature < 0 marks a leaf."""

    def __init__(self):
        self.feature: list = []
        self.threshold: list = []
        self.left: list = []
        self.right: list = []
        self.prediction: list = []

    def add_leaf(self, prediction: bool) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.prediction.append(bool(prediction))
        return len(self.feature) - 1

    def make_internal(self, node: int, feature: int, threshold: float, left: int, right: int) -> None:
        self.feature[node] = feature
        self.threshold[node] = threshold
        self.left[node] = left
        self.right[node] = right

    @property
    def n_leaves(self) -> int:
        return sum(1 for f in self.feature if f < 0)

    def predict(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(len(X), dtype=bool)
        for i, x in enumerate(X):
            node = 0
            while self.feature[node] >= 0:
                node = self.left[node] if x[self.feature[node]] <= self.threshold[node] else self.right[node]
            out[i] = self.prediction[node]
        return out

    def to_jsonable(self) -> dict:
        return {
            "feature": list(self.feature),
            "threshold": [float(t) for t in self.threshold],
            "left": list(self.left),
            "right": list(self.right),
            "prediction": list(self.prediction),
        }

    @classmethod
    def from_jsonable(cls, payload: dict) -> "_Tree":
        tree = cls()
        tree.feature = list(payload["feature"])
        tree.threshold = list(payload["threshold"])
        tree.left = list(payload["left"])
        tree.right = list(payload["right"])
        tree.prediction = [bool(p) for p in payload["prediction"]]
        return tree


def _gini_counts(n_true: int, n_false: int) -> float:
    n = n_true + n_false
    if n == 0:
        return 0.0
    pt = n_true / n
    pf = n_false / n
    return 1.0 - pt * pt - pf * pf


def _best_split(X: np.ndarray, y: np.ndarray, idx: np.ndarray, features: Sequence[int]):
    """Best (impurity decrease, feature, threshold) over candidate midpoints.

    Ties break toward the lower feature index, then the lower threshold.
    Returns None when no feature admits a valid split.
    """
    y_node = y[idx]
    n = len(idx)
    n_true = int(y_node.sum())
    parent = n * _gini_counts(n_true, n - n_true)
    best = None
    for f in features:
        values = X[idx, f]
        order = np.argsort(values, kind="stable")
        sv = values[order]
        cut = np.nonzero(sv[:-1] < sv[1:])[0]
        if len(cut) == 0:
            continue
        cum_true = np.cumsum(y_node[order])
        n_left = cut + 1
        t_left = cum_true[cut]
        f_left = n_left - t_left
        n_right = n - n_left
        t_right = n_true - t_left
        f_right = n_right - t_right
        child = n_left * (1.0 - (t_left / n_left) ** 2 - (f_left / n_left) ** 2) + n_right * (
            1.0 - (t_right / n_right) ** 2 - (f_right / n_right) ** 2
        )
        j = int(np.argmin(child))
        decrease = parent - float(child[j])
        if best is None or decrease > best[0]:
            threshold = (float(sv[cut[j]]) + float(sv[cut[j] + 1])) / 2.0
            best = (decrease, f, threshold)
    return best


class DecisionTreeCART:
    """Binary CART with Gini impurity and best-first leaf growth.

    Growth stops when ``max_leaf_nodes`` is reached or no impure node admits a
    split; impure nodes split even at zero immediate Gini decrease as long as
    a valid threshold exists, so depth alone never blocks a separable fit.
    ``max_features``, when set, draws a random feature subset per node from
    ``rng`` (used by the forest).
    """

    def __init__(self, max_leaf_nodes: Optional[int] = None, max_features: Optional[int] = None, rng=None):
        self.max_leaf_nodes = max_leaf_nodes
        self.max_features = max_features
        self.rng = rng
        self.tree_: Optional[_Tree] = None

    def _node_features(self, d: int) -> Sequence[int]:
        if self.max_features is None or self.max_features >= d:
            return range(d)
        subset = self.rng.choice(d, size=self.max_features, replace=False)
        return sorted(int(f) for f in subset)

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = _as_bool_labels(y)
        tree = _Tree()
        heap: list = []
        counter = 0

        def open_node(idx: np.ndarray) -> int:
            nonlocal counter
            n_true = int(y[idx].sum())
            node = tree.add_leaf(n_true > len(idx) - n_true)
            if 0 < n_true < len(idx):
                split = _best_split(X, y, idx, self._node_features(X.shape[1]))
                if split is not None:
                    heappush(heap, (-split[0], counter, node, idx, split[1], split[2]))
                    counter += 1
            return node

        open_node(np.arange(len(X)))
        leaves = 1
        while heap and (self.max_leaf_nodes is None or leaves < self.max_leaf_nodes):
            _, _, node, idx, feature, threshold = heappop(heap)
            mask = X[idx, feature] <= threshold
            left = open_node(idx[mask])
            right = open_node(idx[~mask])
            tree.make_internal(node, feature, threshold, left, right)
            leaves += 1
        self.tree_ = tree
        return self

    def predict(self, X) -> np.ndarray:
        return self.tree_.predict(np.asarray(X, dtype=float))


class RandomForest:
    """Bagged CART trees voting by majority; vote ties go to FALSE.

    Each tree sees a bootstrap sample and draws ceil(sqrt(d)) candidate
    features per node unless ``max_features`` overrides that.
    """

    def __init__(self, n_estimators: int = 100, max_features: Optional[int] = None, seed: int = 0):
        self.n_estimators = n_estimators
        self.max_features = max_features
        self.seed = seed
        self.trees_: list = []
        self.bootstrap_indices_: list = []

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = _as_bool_labels(y)
        n, d = X.shape
        max_features = self.max_features if self.max_features is not None else math.isqrt(d - 1) + 1
        self.trees_ = []
        self.bootstrap_indices_ = []
        for child in np.random.SeedSequence(self.seed).spawn(self.n_estimators):
            rng = np.random.default_rng(child)
            boot = rng.integers(0, n, size=n)
            tree = DecisionTreeCART(max_features=max_features, rng=rng)
            tree.fit(X[boot], y[boot])
            self.trees_.append(tree)
            self.bootstrap_indices_.append(boot)
        return self

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        votes = np.zeros(len(X), dtype=int)
        for tree in self.trees_:
            votes += tree.predict(X)
        return votes * 2 > len(self.trees_)


class GaussianNaiveBayes:
    """Gaussian NB with log-space scoring and relative variance smoothing."""

    VAR_SMOOTHING = 1e-9

    def __init__(self):
        self.log_prior: Optional[np.ndarray] = None  # [False, True]
        self.mean: Optional[np.ndarray] = None
        self.var: Optional[np.ndarray] = None

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = _as_bool_labels(y)
        if y.all() or not y.any():
            raise DegenerateTrainingSet("gaussian NB needs both classes in training data")
        max_var = float(X.var(axis=0).max())
        eps = self.VAR_SMOOTHING * max_var if max_var > 0 else self.VAR_SMOOTHING
        means, variances, priors = [], [], []
        for label in (False, True):
            block = X[y == label]
            means.append(block.mean(axis=0))
            variances.append(block.var(axis=0) + eps)
            priors.append(len(block) / len(X))
        self.mean = np.stack(means)
        self.var = np.stack(variances)
        self.log_prior = np.log(np.array(priors))
        return self

    def _joint_log_likelihood(self, X: np.ndarray) -> np.ndarray:
        jll = np.empty((len(X), 2))
        for c in range(2):
            log_det = np.sum(np.log(2.0 * np.pi * self.var[c]))
            sq = ((X - self.mean[c]) ** 2 / self.var[c]).sum(axis=1)
            jll[:, c] = self.log_prior[c] - 0.5 * (log_det + sq)
        return jll

    def predict(self, X) -> np.ndarray:
        jll = self._joint_log_likelihood(np.asarray(X, dtype=float))
        return jll[:, 1] > jll[:, 0]


@dataclass
class TrainedModel:
    """A fitted estimator plus everything needed to reuse it elsewhere."""

    family: ModelFamily
    hyperparameters: dict
    seed: int
    n_features: int
    estimator: object

    @property
    def standardization(self) -> Optional[dict]:
        scaler = getattr(self.estimator, "scaler", None)
        if scaler is None or scaler.mean is None:
            return None
        return {"mean": [float(v) for v in scaler.mean], "scale": [float(v) for v in scaler.scale]}

    def predict_batch(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise LengthMismatch(f"expected {self.n_features} features, got {X.shape[-1]}")
        return self.estimator.predict(X)

    def predict(self, features) -> bool:
        features = np.asarray(features, dtype=float)
        if features.ndim != 1 or len(features) != self.n_features:
            raise LengthMismatch(f"expected {self.n_features} features, got {len(features)}")
        return bool(self.estimator.predict(features[np.newaxis, :])[0])


def as_arrays(data):
    """Accept a list of LabeledInstance or an (X, y) pair."""
    if isinstance(data, tuple):
        X, y = data
        return np.asarray(X, dtype=float), _as_bool_labels(y)
    instances = list(data)
    if not instances:
        raise EmptyInput("no training instances")
    X = np.stack([i.features for i in instances])
    y = np.array([i.label for i in instances], dtype=bool)
    return X, y


def _make_estimator(spec: ModelSpec):
    params = dict(DEFAULT_HYPERPARAMETERS[spec.family])
    params.update(spec.hyperparameters)
    family = spec.family
    if family is ModelFamily.UNIFORM:
        return UniformBaseline(seed=spec.seed)
    if family is ModelFamily.STRATIFIED:
        return StratifiedBaseline(seed=spec.seed)
    if family is ModelFamily.MOST_FREQUENT:
        return MostFrequentBaseline()
    if family is ModelFamily.SVM:
        return LinearSVM(lam=params["lam"], epochs=params["epochs"], seed=spec.seed)
    if family is ModelFamily.KNN:
        return KNearestNeighbors(k=params["k"])
    if family is ModelFamily.DECISION_TREE:
        return DecisionTreeCART(max_leaf_nodes=params["max_leaf_nodes"])
    if family is ModelFamily.RANDOM_FOREST:
        return RandomForest(n_estimators=params["n_estimators"], seed=spec.seed)
    return GaussianNaiveBayes()


def train(spec: ModelSpec, data) -> TrainedModel:
    X, y = as_arrays(data)
    if len(X) == 0:
        raise EmptyInput("no training instances")
    estimator = _make_estimator(spec).fit(X, y)
    return TrainedModel(
        family=spec.family,
        hyperparameters=dict(spec.hyperparameters),
        seed=spec.seed,
        n_features=X.shape[1],
        estimator=estimator,
    )


def predict(model: TrainedModel, features) -> bool:
    return model.predict(features)


def sweep(family: ModelFamily, grid: Sequence[dict], train_data, eval_data, seed: int = 0) -> ModelSpec:
    """Grid point with the best micro-F1 on eval_data; first point wins ties."""
    best_spec, _, _ = sweep_full(family, grid, train_data, eval_data, seed)
    return best_spec


def sweep_full(family: ModelFamily, grid: Sequence[dict], train_data, eval_data, seed: int = 0):
    from .evaluate import micro_metrics

    if not grid:
        raise ValueError("hyperparameter grid must not be empty")
    X_eval, y_eval = as_arrays(eval_data)
    best = None
    for point in grid:
        spec = ModelSpec(family=family, hyperparameters=dict(point), seed=seed)
        model = train(spec, train_data)
        preds = model.predict_batch(X_eval)
        f1 = micro_metrics(preds, y_eval).micro_f1
        if best is None or f1 > best[3]:
            best = (spec, model, preds, f1)
    return best[0], best[1], best[2]


def _estimator_payload(model: TrainedModel) -> dict:
    est = model.estimator
    if isinstance(est, UniformBaseline):
        return {}
    if isinstance(est, StratifiedBaseline):
        return {"p_true": est.p_true}
    if isinstance(est, MostFrequentBaseline):
        return {"prediction": est.prediction}
    if isinstance(est, KNearestNeighbors):
        return {"X": [[float(v) for v in row] for row in est.X_], "y": [bool(v) for v in est.y_]}
    if isinstance(est, LinearSVM):
        return {"weights": [float(v) for v in est.weights], "bias": est.bias}
    if isinstance(est, DecisionTreeCART):
        return {"tree": est.tree_.to_jsonable()}
    if isinstance(est, RandomForest):
        return {"trees": [t.tree_.to_jsonable() for t in est.trees_]}
    return {
        "log_prior": [float(v) for v in est.log_prior],
        "mean": [[float(v) for v in row] for row in est.mean],
        "var": [[float(v) for v in row] for row in est.var],
    }


def save_model(model: TrainedModel, path) -> None:
    payload = {
        "format_version": MODEL_FORMAT_VERSION,
        "family": model.family.value,
        "hyperparameters": {k: v for k, v in model.hyperparameters.items()},
        "seed": model.seed,
        "n_features": model.n_features,
        "standardization": model.standardization,
        "parameters": _estimator_payload(model),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_model(path) -> TrainedModel:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format_version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format: {payload.get('format_version')!r}")
    family = ModelFamily(payload["family"])
    params = payload["parameters"]
    spec = ModelSpec(family=family, hyperparameters=payload["hyperparameters"], seed=payload["seed"])
    est = _make_estimator(spec)
    if isinstance(est, StratifiedBaseline):
        est.p_true = params["p_true"]
    elif isinstance(est, MostFrequentBaseline):
        est.prediction = params["prediction"]
    elif isinstance(est, KNearestNeighbors):
        est.X_ = np.array(params["X"], dtype=float)
        est.y_ = np.array(params["y"], dtype=bool)
    elif isinstance(est, LinearSVM):
        est.weights = np.array(params["weights"], dtype=float)
        est.bias = float(params["bias"])
    elif isinstance(est, DecisionTreeCART):
        est.tree_ = _Tree.from_jsonable(params["tree"])
    elif isinstance(est, RandomForest):
        est.trees_ = []
        for tree_payload in params["trees"]:
            tree = DecisionTreeCART()
            tree.tree_ = _Tree.from_jsonable(tree_payload)
            est.trees_.append(tree)
    elif isinstance(est, GaussianNaiveBayes):
        est.log_prior = np.array(params["log_prior"], dtype=float)
        est.mean = np.array(params["mean"], dtype=float)
        est.var = np.array(params["var"], dtype=float)
    if payload["standardization"] is not None and hasattr(est, "scaler"):
        est.scaler.mean = np.array(payload["standardization"]["mean"], dtype=float)
        est.scaler.scale = np.array(payload["standardization"]["scale"], dtype=float)
    return TrainedModel(
        family=family,
        hyperparameters=payload["hyperparameters"],
        seed=payload["seed"],
        n_features=payload["n_features"],
        estimator=est,
    )
