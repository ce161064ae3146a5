"""Regularized logistic tweet classifier.

The objective is the average logistic loss plus lam * ||w||^2 (bias left
unpenalized). Training runs deterministic epoch-ordered stochastic gradient
with averaged iterates for fast initial progress, then a monotone full-batch
polish (gradient descent with backtracking) that drives the objective to the
documented tolerance; convex-solver oracles in the tests check the final
loss, so the polish phase is not optional.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse


class TrainingDiverged(Exception):
    pass


def rows_to_csr(rows, n_features: int) -> sparse.csr_matrix:
    indptr = np.zeros(len(rows) + 1, dtype=np.int64)
    for i, r in enumerate(rows):
        indptr[i + 1] = indptr[i] + len(r)
    indices = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
    data = np.ones(len(indices), dtype=np.float64)
    return sparse.csr_matrix((data, indices, indptr), shape=(len(rows), n_features))


def _objective(X, y_pm, w, b, lam) -> float:
    margins = y_pm * (X @ w + b)
    return float(np.mean(np.logaddexp(0.0, -margins)) + lam * np.dot(w, w))


def _gradient(X, y_pm, w, b, lam):
    z = X @ w + b
    # d/ds log(1+exp(-y s)) = -y * sigmoid(-y s)
    sig = 1.0 / (1.0 + np.exp(np.clip(y_pm * z, -500, 500)))
    coef = -y_pm * sig / X.shape[0]
    grad_w = X.T @ coef + 2.0 * lam * w
    grad_b = float(np.sum(coef))
    return grad_w, grad_b


@dataclass
class ModelParams:
    classes: tuple[str, str]
    weights: np.ndarray
    bias: float
    lam: float
    seed: int
    epochs_run: int
    final_loss: float
    vocab_hash: str = ""

    def decision(self, rows) -> np.ndarray:
        return np.array([self.weights[r].sum() + self.bias for r in rows])

    def predict_proba(self, rows) -> np.ndarray:
        """P(classes[1]) per row."""
        return 1.0 / (1.0 + np.exp(-self.decision(rows)))

    def predict(self, rows) -> list[str]:
        return [self.classes[1] if p > 0.5 else self.classes[0] for p in self.predict_proba(rows)]

    def save(self, path) -> None:
        nz = np.nonzero(self.weights)[0]
        obj = {
            "version": 1,
            "classes": list(self.classes),
            "lam": self.lam,
            "seed": self.seed,
            "epochs_run": self.epochs_run,
            "final_loss": self.final_loss,
            "vocab_hash": self.vocab_hash,
            "bias": self.bias,
            "n_features": int(self.weights.size),
            "weights": [[int(i), repr(float(self.weights[i]))] for i in nz],
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, sort_keys=True, separators=(",", ":"))

    @classmethod
    def load(cls, path) -> "ModelParams":
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        w = np.zeros(obj["n_features"])
        for i, val in obj["weights"]:
            w[i] = float(val)
        return cls(
            classes=tuple(obj["classes"]),
            weights=w,
            bias=obj["bias"],
            lam=obj["lam"],
            seed=obj["seed"],
            epochs_run=obj["epochs_run"],
            final_loss=obj["final_loss"],
            vocab_hash=obj["vocab_hash"],
        )


def predict_tweet(model: ModelParams, feature_ids: np.ndarray) -> tuple[str, float]:
    """(class, probability of that class) for one sparse feature vector."""
    z = model.weights[feature_ids].sum() + model.bias if len(feature_ids) else model.bias
    p1 = 1.0 / (1.0 + math.exp(-z))
    if p1 > 0.5:
        return model.classes[1], p1
    return model.classes[0], 1.0 - p1


def train(
    rows,
    labels,
    classes: tuple[str, str],
    n_features: int,
    lam: float,
    seed: int = 0,
    max_epochs: int = 100,
    tol: float = 1e-8,
    polish_max_iter: int = 2000,
    vocab_hash: str = "",
) -> ModelParams:
    """Train the binary L2 logistic model.

    ``rows`` is a list of sorted feature-id arrays, ``labels`` a list of
    class names. Deterministic for fixed seed and input order.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    present = set(labels)
    if not present <= set(classes):
        raise ValueError(f"unknown labels: {sorted(present - set(classes))}")
    if len(present) < 2:
        raise ValueError("training labels must include both classes")
    y_pm = np.array([1.0 if lbl == classes[1] else -1.0 for lbl in labels])
    n = len(rows)
    X = rows_to_csr(rows, n_features)

    rng = np.random.default_rng(seed)
    w = np.zeros(n_features)
    b = 0.0
    # lazily scaled iterate: w = scale * v keeps the per-example L2 decay O(nnz)
    scale = 1.0
    v = np.zeros(n_features)
    avg_w = np.zeros(n_features)
    avg_b = 0.0
    eta0 = 0.5
    t = 0
    prev_loss = _objective(X, y_pm, w, b, lam)
    epochs_run = 0
    for epoch in range(max_epochs):
        order = rng.permutation(n)
        for i in order:
            eta = eta0 / (1.0 + t / n)
            t += 1
            idx = rows[i]
            z = scale * v[idx].sum() + b
            yz = y_pm[i] * z
            sig = 1.0 / (1.0 + math.exp(yz)) if yz > -500 else 1.0
            g = -y_pm[i] * sig
            decay = 1.0 - 2.0 * eta * lam
            if decay <= 0.0:
                raise TrainingDiverged(f"step size too large for lam={lam}")
            scale *= decay
            if len(idx):
                v[idx] -= eta * g / scale
            b -= eta * g
            if scale < 1e-9:
                v *= scale
                scale = 1.0
        epochs_run = epoch + 1
        w = scale * v
        avg_w += (w - avg_w) / epochs_run
        avg_b += (b - avg_b) / epochs_run
        loss = _objective(X, y_pm, w, b, lam)
        if loss > prev_loss * 1.5 + 1e-3:
            raise TrainingDiverged(
                f"epoch {epochs_run}: loss rose from {prev_loss:.6g} to {loss:.6g}"
            )
        if abs(prev_loss - loss) <= tol * max(prev_loss, 1e-12):
            prev_loss = loss
            break
        prev_loss = loss

    # averaged iterates: keep whichever of (final, average) scores better
    if epochs_run:
        avg_loss = _objective(X, y_pm, avg_w, avg_b, lam)
        if avg_loss < prev_loss:
            w, b, prev_loss = avg_w.copy(), avg_b, avg_loss
        else:
            w = w.copy()

    w, b, final_loss = _polish(X, y_pm, w, b, lam, tol=tol, max_iter=polish_max_iter)
    return ModelParams(
        classes=classes,
        weights=w,
        bias=b,
        lam=lam,
        seed=seed,
        epochs_run=epochs_run,
        final_loss=final_loss,
        vocab_hash=vocab_hash,
    )


def _polish(X, y_pm, w, b, lam, tol: float, max_iter: int):
    """Monotone full-batch descent with backtracking plus Nesterov momentum.

    Stops when the strong-convexity bound ||grad||^2 / (4 lam) certifies a
    suboptimality below tol, or on vanishing relative progress.
    """
    loss = _objective(X, y_pm, w, b, lam)
    step = 1.0
    mw, mb = w.copy(), b  # momentum lookahead point
    tk = 1.0
    for _ in range(max_iter):
        gw, gb = _gradient(X, y_pm, mw, mb, lam)
        gnorm2 = float(np.dot(gw, gw) + gb * gb)
        if gnorm2 / (4.0 * lam) < tol * max(loss, 1e-12):
            gw, gb = _gradient(X, y_pm, w, b, lam)
            gnorm2 = float(np.dot(gw, gw) + gb * gb)
            if gnorm2 / (4.0 * lam) < tol * max(loss, 1e-12):
                break
            mw, mb, tk = w.copy(), b, 1.0
            continue
        step *= 2.0
        for _ in range(60):
            cand_w = mw - step * gw
            cand_b = mb - step * gb
            cand_loss = _objective(X, y_pm, cand_w, cand_b, lam)
            if cand_loss <= _objective(X, y_pm, mw, mb, lam) - 1e-4 * step * gnorm2:
                break
            step *= 0.5
        if cand_loss > loss:
            # momentum overshoot: restart from the best plain iterate
            mw, mb, tk = w.copy(), b, 1.0
            continue
        tk_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * tk * tk))
        beta = (tk - 1.0) / tk_next
        mw = cand_w + beta * (cand_w - w)
        mb = cand_b + beta * (cand_b - b)
        tk = tk_next
        if abs(loss - cand_loss) <= 1e-14 * max(loss, 1e-12):
            w, b, loss = cand_w, cand_b, cand_loss
            break
        w, b, loss = cand_w, cand_b, cand_loss
    return w, b, loss


# --- evaluation ---------------------------------------------------------------


@dataclass
class MetricRecord:
    f1: float
    auroc: float | None
    accuracy: float
    precision: float
    recall: float

    def as_dict(self) -> dict:
        return {
            "f1": self.f1,
            "auroc": self.auroc,
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
        }


def _rank_auroc(scores: np.ndarray, positives: np.ndarray) -> float:
    """AUROC via the rank statistic with average ranks for ties."""
    order = np.argsort(scores, kind="stable")
    ranks = np.empty(len(scores))
    sorted_scores = scores[order]
    i = 0
    pos = 1.0
    while i < len(scores):
        j = i
        while j + 1 < len(scores) and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i : j + 1]] = (pos + pos + (j - i)) / 2.0
        pos += j - i + 1
        i = j + 1
    n_pos = int(positives.sum())
    n_neg = len(scores) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUROC undefined for single-class labels")
    u = ranks[positives].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def evaluate_metrics(predicted, actual, scores=None, classes=None) -> MetricRecord:
    """F1/precision/recall macro-averaged over the class-as-positive choices,
    accuracy, and rank AUROC (None when only one class is present)."""
    if len(predicted) != len(actual):
        raise ValueError("prediction/label length mismatch")
    if classes is None:
        classes = tuple(sorted(set(actual)))
    predicted = list(predicted)
    actual = list(actual)
    n = len(actual)
    accuracy = sum(p == a for p, a in zip(predicted, actual)) / n
    precisions, recalls, f1s = [], [], []
    for cls in classes:
        tp = sum(1 for p, a in zip(predicted, actual) if p == cls and a == cls)
        fp = sum(1 for p, a in zip(predicted, actual) if p == cls and a != cls)
        fn = sum(1 for p, a in zip(predicted, actual) if p != cls and a == cls)
        prec = tp / (tp + fp) if tp + fp else 0.0
        rec = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
        precisions.append(prec)
        recalls.append(rec)
        f1s.append(f1)
    auroc = None
    if scores is not None and len(set(actual)) > 1 and len(classes) == 2:
        positives = np.array([a == classes[1] for a in actual])
        auroc = _rank_auroc(np.asarray(scores, dtype=float), positives)
    return MetricRecord(
        f1=float(np.mean(f1s)),
        auroc=auroc,
        accuracy=float(accuracy),
        precision=float(np.mean(precisions)),
        recall=float(np.mean(recalls)),
    )


@dataclass
class CVReport:
    lam: float
    mean: MetricRecord
    per_fold: list[MetricRecord]
    grid: dict[float, float] = field(default_factory=dict)  # lam -> mean F1

    def as_dict(self) -> dict:
        return {
            "lam": self.lam,
            "mean": self.mean.as_dict(),
            "per_fold": [m.as_dict() for m in self.per_fold],
            "grid": {repr(k): v for k, v in sorted(self.grid.items())},
        }


DEFAULT_LAMBDA_GRID = tuple(10.0 ** e for e in range(-6, 3))


def cross_validate(
    rows,
    labels,
    classes: tuple[str, str],
    n_features: int,
    lam_grid=DEFAULT_LAMBDA_GRID,
    k: int = 10,
    seed: int = 0,
    max_epochs: int = 20,
    polish_max_iter: int = 300,
) -> CVReport:
    """k-fold cross validation selecting the lam with the best mean F1.

    Fold models use shortened optimization (max_epochs/polish_max_iter) since
    metric estimates do not need full convergence; raise the caps to match
    ``train`` defaults where exactness matters.
    """
    if k < 2:
        raise ValueError("need k >= 2 folds")
    n = len(rows)
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    folds = [order[i::k] for i in range(k)]

    def run_fold(lam, fold_idx):
        test_idx = folds[fold_idx]
        mask = np.ones(n, dtype=bool)
        mask[test_idx] = False
        train_idx = np.nonzero(mask)[0]
        model = train(
            [rows[i] for i in train_idx],
            [labels[i] for i in train_idx],
            classes,
            n_features,
            lam,
            seed=seed + fold_idx,
            max_epochs=max_epochs,
            polish_max_iter=polish_max_iter,
        )
        test_rows = [rows[i] for i in test_idx]
        probs = model.predict_proba(test_rows)
        preds = [classes[1] if p > 0.5 else classes[0] for p in probs]
        truth = [labels[i] for i in test_idx]
        return evaluate_metrics(preds, truth, scores=probs, classes=classes)

    grid_f1: dict[float, float] = {}
    best_records: list[MetricRecord] | None = None
    best_lam = None
    for lam in lam_grid:
        records = [run_fold(lam, f) for f in range(k)]
        mean_f1 = float(np.mean([r.f1 for r in records]))
        grid_f1[lam] = mean_f1
        if best_lam is None or mean_f1 > grid_f1[best_lam]:
            best_lam = lam
            best_records = records
    aurocs = [r.auroc for r in best_records if r.auroc is not None]
    mean = MetricRecord(
        f1=float(np.mean([r.f1 for r in best_records])),
        auroc=float(np.mean(aurocs)) if aurocs else None,
        accuracy=float(np.mean([r.accuracy for r in best_records])),
        precision=float(np.mean([r.precision for r in best_records])),
        recall=float(np.mean([r.recall for r in best_records])),
    )
    return CVReport(lam=best_lam, mean=mean, per_fold=best_records, grid=grid_f1)


# --- multi-class (one-vs-rest) -------------------------------------------------


@dataclass
class MulticlassModel:
    classes: tuple[str, ...]
    binary: ModelParams | None = None  # used when K == 2
    per_class: dict[str, ModelParams] = field(default_factory=dict)

    def predict(self, rows) -> list[str]:
        if self.binary is not None:
            return self.binary.predict(rows)
        scores = {cls: m.decision(rows) for cls, m in self.per_class.items()}
        out = []
        for i in range(len(rows)):
            out.append(max(sorted(scores), key=lambda cls: scores[cls][i]))
        return out


def train_multiclass(rows, labels, classes, n_features, lam, seed=0, **kwargs) -> MulticlassModel:
    """One-vs-rest wrapper; reduces to the plain binary path when K == 2."""
    classes = tuple(sorted(classes))
    if len(classes) == 2:
        return MulticlassModel(
            classes=classes,
            binary=train(rows, labels, classes, n_features, lam, seed=seed, **kwargs),
        )
    per_class = {}
    for cls in classes:
        ovr_labels = [cls if lbl == cls else "__rest__" for lbl in labels]
        per_class[cls] = train(
            rows, ovr_labels, ("__rest__", cls), n_features, lam, seed=seed, **kwargs
        )
    return MulticlassModel(classes=classes, per_class=per_class)
