"""Reference rounding schemes (all at multiplier m = 1) for comparisons."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dataset import Dataset
from .logreg import ContinuousModel, logistic_loss
from .metrics import auc
from .rounding import IntegerRiskScore, star_ray_search, StarRayConfig


class RounderKind(Enum):
    NEAREST = "nearest"  # clip to the box, then round to the closest integer
    UNIT = "unit"  # sign(w_j)
    RESCALE_ROUND = "rescale_round"  # scale so max |w| hits the box, then round
    RANDOMIZED = "randomized"  # ceil with probability equal to the fractional part
    GREEDY_SEQUENTIAL = "greedy_sequential"  # per-coordinate floor/ceil by true loss
    GREEDY_PLUS_DCD = "greedy_plus_dcd"  # greedy, then discrete coordinate descent


def _round_nearest(values: np.ndarray) -> np.ndarray:
    """Ceil only when strictly closer; exact halves go to the floor."""
    lo = np.floor(values)
    hi = np.ceil(values)
    return np.where(np.abs(values - hi) < np.abs(values - lo), hi, lo)


def _dcd_polish(
    ds: Dataset, w: np.ndarray, w0: int, support: tuple[int, ...], C: float
) -> np.ndarray:
    """Greedy single-coefficient integer moves within the box; strictly
    loss-decreasing per accepted move, so termination is guaranteed."""
    w = w.copy()
    lattice = np.arange(-int(C), int(C) + 1)
    current = logistic_loss(ds, w, w0)
    while True:
        best_gain = 0.0
        best_move = None
        for j in support:
            for v in lattice:
                if v == w[j]:
                    continue
                trial = w.copy()
                trial[j] = v
                loss = logistic_loss(ds, trial, w0)
                if current - loss > best_gain:
                    best_gain = current - loss
                    best_move = (j, v, loss)
        if best_move is None:
            return w
        j, v, loss = best_move
        w[j] = float(v)
        current = loss


def round_with(
    kind: RounderKind,
    ds: Dataset,
    model: ContinuousModel,
    C: float = 5.0,
    seed: int | None = None,
) -> IntegerRiskScore:
    """Apply one baseline rounding scheme; the intercept is always rounded to
    the nearest integer and the multiplier is fixed at 1."""
    if kind is RounderKind.RANDOMIZED and seed is None:
        raise ValueError("randomized rounding requires a seed")
    w = np.clip(model.w, -C, C)
    w0 = int(_round_nearest(np.array([model.w0]))[0])

    if kind is RounderKind.NEAREST:
        rounded = _round_nearest(w)
    elif kind is RounderKind.UNIT:
        rounded = np.sign(model.w)
    elif kind is RounderKind.RESCALE_ROUND:
        peak = model.max_abs_coef()
        gamma = C / peak if peak > 0 else 1.0
        rounded = _round_nearest(gamma * model.w)
    elif kind is RounderKind.RANDOMIZED:
        rng = np.random.default_rng(seed)
        frac = w - np.floor(w)
        go_up = rng.random(len(w)) < frac
        rounded = np.clip(np.where(go_up, np.ceil(w), np.floor(w)), -C, C)
    elif kind in (RounderKind.GREEDY_SEQUENTIAL, RounderKind.GREEDY_PLUS_DCD):
        rounded = w.copy()
        for j in model.support:
            down, up = rounded.copy(), rounded.copy()
            down[j] = np.floor(w[j])
            up[j] = np.ceil(w[j])
            loss_down = logistic_loss(ds, down, w0)
            loss_up = logistic_loss(ds, up, w0)
            rounded = down if loss_down <= loss_up else up
        if kind is RounderKind.GREEDY_PLUS_DCD:
            rounded = _dcd_polish(ds, rounded, w0, model.support, C)
    else:  # pragma: no cover
        raise ValueError(f"unknown rounder {kind}")

    rounded = np.clip(rounded, -C, C)
    loss = logistic_loss(ds, rounded, w0)
    return IntegerRiskScore(w_plus=rounded.astype(np.int64), w0_plus=w0, m=1.0, loss=loss)


@dataclass
class RounderRow:
    kind: str
    loss: float
    auc: float
    model: IntegerRiskScore


def compare_rounders(
    ds: Dataset,
    model: ContinuousModel,
    kinds: list[RounderKind],
    C: float = 5.0,
    seed: int | None = None,
    include_star_ray: bool = False,
    star_cfg: StarRayConfig | None = None,
) -> list[RounderRow]:
    """Evaluate each requested rounder (optionally plus the multiplier search)
    on the same continuous model."""
    if not kinds and not include_star_ray:
        raise ValueError("at least one rounder required")
    rows = []
    for kind in kinds:
        integer = round_with(kind, ds, model, C=C, seed=seed)
        scores = ds.X @ integer.w_plus + integer.w0_plus
        rows.append(RounderRow(kind.value, integer.loss, auc(scores, ds.y), integer))
    if include_star_ray:
        integer = star_ray_search(ds, model, star_cfg or StarRayConfig(C=C))
        scores = ds.X @ integer.w_plus + integer.w0_plus
        rows.append(RounderRow("star_ray", integer.loss, auc(scores, ds.y), integer))
    return rows
