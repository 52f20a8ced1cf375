"""Logistic loss, coordinate gradients, and box-constrained coordinate descent."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .dataset import Dataset
from .errors import DimensionMismatch, EmptySupport, NonFiniteLoss

#: Sentinel coordinate index for the intercept pseudo-feature (a column of 1s).
INTERCEPT = -1


@dataclass
class ContinuousModel:
    """Real coefficient vector + intercept obeying box and sparsity constraints.

    ``support`` is derived from the nonzero coordinates of ``w``; ``loss`` is
    the cached training logistic loss when available.
    """

    w: np.ndarray
    w0: float
    loss: float | None = None
    support: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        self.w = np.asarray(self.w, dtype=np.float64)
        self.w0 = float(self.w0)
        self.support = tuple(int(j) for j in np.flatnonzero(self.w))

    def scores(self, X: np.ndarray) -> np.ndarray:
        return X @ self.w + self.w0

    def max_abs_coef(self) -> float:
        return float(np.max(np.abs(self.w))) if len(self.support) else 0.0


@dataclass(kw_only=True)
class OptimizerConfig:
    """Knobs for the coordinate-descent solver.

    ``max_cd_steps_factor`` caps full CD cycles at factor * |support|;
    ``parallel_probe_steps`` is the number of thresholding iterations used when
    probing coordinates outside the support.
    """

    C: float = 5.0
    cd_tolerance: float = 1e-8
    max_cd_steps_factor: int = 100
    parallel_probe_steps: int = 10

    def __post_init__(self):
        if self.C <= 0:
            raise ValueError("C must be positive")
        if self.cd_tolerance <= 0:
            raise ValueError("cd_tolerance must be positive")


def loss_from_scores(y: np.ndarray, scores: np.ndarray) -> float:
    # log(1 + exp(-z)) via logaddexp for stability at large |z|
    return float(np.logaddexp(0.0, -y * scores).sum())


def logistic_loss(ds: Dataset, w: np.ndarray, w0: float, m: float = 1.0) -> float:
    """Sum_i log(1 + exp(-y_i (x_i.w + w0) / m))."""
    if m <= 0:
        raise ValueError("multiplier m must be positive")
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (ds.p,):
        raise DimensionMismatch(f"w has shape {w.shape}, expected ({ds.p},)")
    return loss_from_scores(ds.y, (ds.X @ w + w0) / m)


def gradient_coordinate(ds: Dataset, w: np.ndarray, w0: float, j: int) -> float:
    """dL/dw_j = sum_i -y_i x_ij sigmoid(-y_i (x_i.w + w0)); j=INTERCEPT uses x_ij=1."""
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (ds.p,):
        raise DimensionMismatch(f"w has shape {w.shape}, expected ({ds.p},)")
    if j != INTERCEPT and not 0 <= j < ds.p:
        raise DimensionMismatch(f"coordinate {j} out of range")
    s = expit(-ds.y * (ds.X @ w + w0))
    xj = 1.0 if j == INTERCEPT else ds.X[:, j]
    return float(-(ds.y * xj * s).sum())


def lipschitz_coordinate(ds: Dataset, j: int) -> float:
    """Curvature bound (1/4) sum_i x_ij^2, floored at 1e-12 for all-zero columns."""
    if j == INTERCEPT:
        return ds.n / 4.0
    if not 0 <= j < ds.p:
        raise DimensionMismatch(f"coordinate {j} out of range")
    return max(float(np.square(ds.X[:, j]).sum()) / 4.0, 1e-12)


def lipschitz_all(ds: Dataset) -> np.ndarray:
    return np.maximum(np.square(ds.X).sum(axis=0) / 4.0, 1e-12)


def intercept_only_fit(ds: Dataset) -> tuple[float, float]:
    """Closed-form MLE for the empty support: w0 = log(N+/N-)."""
    w0 = float(np.log(ds.n_pos / ds.n_neg))
    return w0, loss_from_scores(ds.y, np.full(ds.n, w0))


def optimize_on_support(
    ds: Dataset,
    support,
    warm: ContinuousModel,
    cfg: OptimizerConfig,
) -> ContinuousModel:
    """Cyclic coordinate descent over ``support`` plus the intercept.

    Each update is w_j <- clip(w_j - grad_j / l_j, -C, C); the intercept is
    never clipped. Stops after max_cd_steps_factor * |support| full cycles or
    when the relative loss decrease per cycle drops below cd_tolerance.
    The returned loss never exceeds the warm-start loss.
    """
    support = tuple(sorted(int(j) for j in set(support)))
    if any(j < 0 or j >= ds.p for j in support):
        raise DimensionMismatch("support index out of range")
    if any(j not in support for j in warm.support):
        raise EmptySupport("warm start has weight outside the requested support")

    w = warm.w.copy()
    w0 = warm.w0
    scores = ds.X @ w + w0
    loss = loss_from_scores(ds.y, scores)
    if not np.isfinite(loss):
        raise NonFiniteLoss("warm start loss is not finite")

    cols = [ds.X[:, j] for j in support]
    lips = [lipschitz_coordinate(ds, j) for j in support]
    l0 = ds.n / 4.0
    y = ds.y
    max_cycles = cfg.max_cd_steps_factor * max(1, len(support))

    for _ in range(max_cycles):
        for j, xj, lj in zip(support, cols, lips):
            g = float(-(y * xj * expit(-y * scores)).sum())
            new = min(max(w[j] - g / lj, -cfg.C), cfg.C)
            if new != w[j]:
                scores += (new - w[j]) * xj
                w[j] = new
        g0 = float(-(y * expit(-y * scores)).sum())
        new0 = w0 - g0 / l0
        if new0 != w0:
            scores += new0 - w0
            w0 = new0
        new_loss = loss_from_scores(y, scores)
        if not np.isfinite(new_loss):
            raise NonFiniteLoss("coordinate descent produced non-finite loss")
        assert new_loss <= loss + 1e-9, "loss increased within a CD cycle"
        if loss - new_loss < cfg.cd_tolerance * max(loss, 1e-12):
            loss = new_loss
            break
        loss = new_loss

    return ContinuousModel(w=w, w0=w0, loss=loss)
