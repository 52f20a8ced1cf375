"""Beam search over supports for box-constrained sparse logistic regression."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .dataset import Dataset
from .errors import NoCandidates
from .logreg import (
    ContinuousModel,
    OptimizerConfig,
    intercept_only_fit,
    lipschitz_all,
    optimize_on_support,
)

SupportKey = tuple[int, ...]


@dataclass(kw_only=True)
class BeamConfig(OptimizerConfig):
    """Target support size ``k`` and beam width ``B`` on top of the CD knobs."""

    k: int
    B: int = 10

    def __post_init__(self):
        super().__post_init__()
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.B < 1:
            raise ValueError("B must be >= 1")


def _probe_candidates(
    ds: Dataset, model: ContinuousModel, cfg: BeamConfig
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Parallel single-coordinate optimization outside the support.

    Runs ``parallel_probe_steps`` thresholding iterations
    d_j <- clip(d_j - grad_j / l_j, -C, C) from d_j = 0 for every j outside
    the support, all at once in matrix form. Returns (candidate indices,
    optimized step d_j, post-probe logistic loss per candidate).
    """
    outside = np.array(
        [j for j in range(ds.p) if j not in model.support], dtype=np.int64
    )
    base = model.scores(ds.X)
    Xc = ds.X[:, outside]
    lips = lipschitz_all(ds)[outside]
    y = ds.y
    d = np.zeros(len(outside))
    for _ in range(cfg.parallel_probe_steps):
        scores = base[:, None] + Xc * d[None, :]
        grads = -(y[:, None] * Xc * expit(-y[:, None] * scores)).sum(axis=0)
        d = np.clip(d - grads / lips, -cfg.C, cfg.C)
    scores = base[:, None] + Xc * d[None, :]
    losses = np.logaddexp(0.0, -y[:, None] * scores).sum(axis=0)
    return outside, d, losses


def expand_supp_by_1(
    ds: Dataset,
    model: ContinuousModel,
    found: set[SupportKey],
    cfg: BeamConfig,
) -> list[ContinuousModel]:
    """Grow one model's support by a single feature.

    Probes every outside coordinate, ranks candidates by post-probe loss
    (ties broken by lowest feature index), takes the top B, skips supports
    already in ``found``, and fine-tunes each survivor on its enlarged
    support. ``found`` is updated in place with every fine-tuned support.
    """
    outside, d, losses = _probe_candidates(ds, model, cfg)
    if len(outside) == 0:
        raise NoCandidates("support already spans all features")
    order = np.lexsort((outside, losses))
    top = order[: cfg.B]

    results: list[ContinuousModel] = []
    for idx in top:
        j = int(outside[idx])
        new_support: SupportKey = tuple(sorted(model.support + (j,)))
        if new_support in found:
            continue
        found.add(new_support)
        warm_w = model.w.copy()
        warm_w[j] = d[idx]
        warm = ContinuousModel(w=warm_w, w0=model.w0)
        results.append(optimize_on_support(ds, new_support, warm, cfg))
    if not results:
        raise NoCandidates("all top-B candidate supports were already explored")
    return results


def sparse_beam_lr(ds: Dataset, cfg: BeamConfig) -> ContinuousModel:
    """Beam search over support sizes 1..k; returns the min-loss model found.

    Deterministic: ties are broken by lowest feature index and insertion
    order, with no randomness anywhere.
    """
    if cfg.k > ds.p:
        raise ValueError(f"k={cfg.k} exceeds feature count p={ds.p}")
    w0, loss = intercept_only_fit(ds)
    root = ContinuousModel(w=np.zeros(ds.p), w0=w0, loss=loss)
    found: set[SupportKey] = set()

    beam = expand_supp_by_1(ds, root, found, cfg)
    beam.sort(key=lambda mdl: mdl.loss)
    beam = beam[: cfg.B]

    for _ in range(2, cfg.k + 1):
        tmp: list[ContinuousModel] = []
        for member in beam:
            try:
                tmp.extend(expand_supp_by_1(ds, member, found, cfg))
            except NoCandidates:
                continue
        if not tmp:
            break
        tmp.sort(key=lambda mdl: mdl.loss)
        beam = tmp[: cfg.B]

    return min(beam, key=lambda mdl: mdl.loss)
