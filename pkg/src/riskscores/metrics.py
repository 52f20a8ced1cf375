"""Evaluation: loss on splits, AUC, calibration curves, and the CV harness."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit
from scipy.stats import rankdata

from .dataset import Dataset, FoldPlan
from .errors import DimensionMismatch, SingleClass
from .rounding import IntegerRiskScore


def predict_risk(model: IntegerRiskScore, x: np.ndarray) -> float:
    """P(y = +1 | x) = sigmoid((w+ . x + w0+) / m)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (len(model.w_plus),):
        raise DimensionMismatch(f"row has shape {x.shape}")
    return float(expit((x @ model.w_plus + model.w0_plus) / model.m))


def predict_risk_matrix(model: IntegerRiskScore, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != len(model.w_plus):
        raise DimensionMismatch(f"matrix has shape {X.shape}")
    return expit((X @ model.w_plus + model.w0_plus) / model.m)


def auc(scores: np.ndarray, labels: np.ndarray) -> float:
    """Mann-Whitney rank estimator; tied score pairs contribute 1/2."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    if scores.shape != labels.shape:
        raise DimensionMismatch("scores and labels must have equal length")
    pos = labels > 0
    n_pos = int(pos.sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClass("AUC requires both classes")
    ranks = rankdata(scores)
    return float((ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def calibration_curve(
    probs: np.ndarray, labels: np.ndarray, bins: int = 5
) -> list[tuple[float, float, int]]:
    """Uniform-width bins over [0, 1]; empty bins are omitted.

    Returns (mean predicted probability, empirical positive fraction, count)
    per populated bin.
    """
    probs = np.asarray(probs, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    if np.any(probs < 0) or np.any(probs > 1):
        raise ValueError("probabilities must lie in [0, 1]")
    idx = np.minimum((probs * bins).astype(np.int64), bins - 1)
    out = []
    for b in range(bins):
        mask = idx == b
        count = int(mask.sum())
        if count == 0:
            continue
        out.append(
            (float(probs[mask].mean()), float((labels[mask] > 0).mean()), count)
        )
    return out


@dataclass
class EvalReport:
    split: str  # "train" or "test"
    loss: float
    auc: float
    n: int
    calibration: list[tuple[float, float, int]] | None = None

    def to_dict(self) -> dict:
        return {
            "split": self.split,
            "loss": self.loss,
            "auc": self.auc,
            "n": self.n,
            "calibration": self.calibration,
        }


def evaluate(model: IntegerRiskScore, ds: Dataset, split: str, bins: int = 5) -> EvalReport:
    raw = ds.X @ model.w_plus + model.w0_plus
    probs = expit(raw / model.m)
    return EvalReport(
        split=split,
        loss=float(np.logaddexp(0.0, -ds.y * raw / model.m).sum()),
        auc=auc(raw, ds.y),
        n=ds.n,
        calibration=calibration_curve(probs, ds.y, bins),
    )


@dataclass
class FoldResult:
    fold: int
    train: EvalReport | None = None
    test: EvalReport | None = None
    model: IntegerRiskScore | None = None
    pool_size: int | None = None
    error: str | None = None


def cross_validate(ds: Dataset, folds: FoldPlan, cfg) -> list[FoldResult]:
    """Run the full pipeline per training fold and evaluate the best integer
    model on the held-out fold. A failing fold is recorded, not fatal."""
    from .pipeline import run_pipeline  # local import to avoid a cycle

    results: list[FoldResult] = []
    for fold in range(folds.k_folds):
        train_idx, test_idx = folds.train_test(fold)
        result = FoldResult(fold=fold)
        try:
            train_ds = ds.subset(train_idx)
            test_ds = ds.subset(test_idx)
            outcome = run_pipeline(train_ds, cfg)
            best = outcome.integer_models[0]
            result.model = best
            result.pool_size = len(outcome.continuous_pool)
            result.train = evaluate(best, train_ds, "train")
            result.test = evaluate(best, test_ds, "test")
        except Exception as exc:  # noqa: BLE001 - per-fold isolation is the contract
            result.error = f"{type(exc).__name__}: {exc}"
        results.append(result)
    return results
