"""Near-optimal sparse model enumeration by single-feature swaps."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .dataset import Dataset
from .logreg import ContinuousModel, OptimizerConfig, optimize_on_support

LEVEL_SET_TOL = 1e-9


@dataclass(kw_only=True)
class PoolConfig:
    """Tolerance gap and number of swap attempts per deleted feature."""

    epsilon: float = 0.3
    T: int = 50

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        if self.T < 1:
            raise ValueError("T must be >= 1")


@dataclass
class ContinuousPool:
    """Seed model first, then admitted swaps in ascending loss order.

    Construction asserts the (1 + epsilon) level-set inequality for every
    member and pairwise-distinct supports.
    """

    members: list[ContinuousModel]
    epsilon: float
    losses: list[float] = field(init=False)

    def __post_init__(self):
        self.losses = [m.loss for m in self.members]
        ceiling = (1.0 + self.epsilon) * self.losses[0] + LEVEL_SET_TOL
        for m in self.members:
            assert m.loss <= ceiling, "pool member violates the level-set gap"
        supports = [m.support for m in self.members]
        assert len(set(supports)) == len(supports), "duplicate support in pool"

    def __len__(self) -> int:
        return len(self.members)


def collect_sparse_diverse_pool(
    ds: Dataset,
    seed_model: ContinuousModel,
    cfg: PoolConfig,
    opt: OptimizerConfig | None = None,
) -> ContinuousPool:
    """For each supported feature, delete it, rank replacement features by
    gradient magnitude at the deleted solution, refit the top T swapped
    supports, and keep every refit within the (1 + epsilon) loss gap.
    """
    opt = opt or OptimizerConfig()
    best_loss = seed_model.loss
    ceiling = (1.0 + cfg.epsilon) * best_loss + LEVEL_SET_TOL
    support = seed_model.support
    outside = np.array([j for j in range(ds.p) if j not in support], dtype=np.int64)

    members = [seed_model]
    seen = {seed_model.support}

    for j_minus in support:
        if len(outside) == 0:
            break
        w_del = seed_model.w.copy()
        w_del[j_minus] = 0.0
        scores = ds.X @ w_del + seed_model.w0
        sig = expit(-ds.y * scores)
        grads = -(ds.y[:, None] * ds.X[:, outside] * sig[:, None]).sum(axis=0)
        # biggest |gradient| first; ties broken by lowest feature index
        order = np.lexsort((outside, -np.abs(grads)))
        for idx in order[: cfg.T]:
            j_plus = int(outside[idx])
            new_support = tuple(sorted(set(support) - {j_minus} | {j_plus}))
            warm_w = w_del.copy()
            warm = ContinuousModel(w=warm_w, w0=seed_model.w0)
            refit = optimize_on_support(ds, new_support, warm, opt)
            if refit.loss <= ceiling and refit.support not in seen:
                seen.add(refit.support)
                members.append(refit)

    head, rest = members[0], members[1:]
    rest.sort(key=lambda mdl: mdl.loss)
    return ContinuousPool(members=[head] + rest, epsilon=cfg.epsilon)
