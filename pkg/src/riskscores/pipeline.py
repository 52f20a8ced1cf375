"""End-to-end orchestration: beam search -> diverse pool -> integer rounding."""

from __future__ import annotations

import time
from dataclasses import dataclass

from .beam import BeamConfig, sparse_beam_lr
from .dataset import Dataset
from .logreg import OptimizerConfig
from .pool import ContinuousPool, PoolConfig, collect_sparse_diverse_pool
from .rounding import IntegerRiskScore, StarRayConfig, star_ray_search


@dataclass(kw_only=True)
class PipelineConfig:
    """All knobs of the three-stage pipeline, with the standard defaults."""

    k: int
    B: int = 10
    C: float = 5.0
    epsilon: float = 0.3
    T: int = 50
    N_m: int = 20
    cd_tolerance: float = 1e-8
    max_cd_steps_factor: int = 100
    parallel_probe_steps: int = 10
    time_limit: float | None = None  # soft wall-clock budget in seconds

    def beam(self) -> BeamConfig:
        return BeamConfig(
            k=self.k,
            B=self.B,
            C=self.C,
            cd_tolerance=self.cd_tolerance,
            max_cd_steps_factor=self.max_cd_steps_factor,
            parallel_probe_steps=self.parallel_probe_steps,
        )

    def optimizer(self) -> OptimizerConfig:
        return OptimizerConfig(
            C=self.C,
            cd_tolerance=self.cd_tolerance,
            max_cd_steps_factor=self.max_cd_steps_factor,
            parallel_probe_steps=self.parallel_probe_steps,
        )

    def pool(self) -> PoolConfig:
        return PoolConfig(epsilon=self.epsilon, T=self.T)

    def star_ray(self) -> StarRayConfig:
        return StarRayConfig(N_m=self.N_m, C=self.C)


@dataclass
class PipelineResult:
    continuous_pool: ContinuousPool
    integer_models: list[IntegerRiskScore]  # ascending loss
    timed_out: bool = False


def run_pipeline(ds: Dataset, cfg: PipelineConfig) -> PipelineResult:
    """Train on ``ds`` and return the continuous pool plus its integer
    conversions sorted by loss. If the soft time budget runs out, the
    remaining pool members are skipped and the result is flagged."""
    deadline = time.monotonic() + cfg.time_limit if cfg.time_limit else None
    seed_model = sparse_beam_lr(ds, cfg.beam())
    pool = collect_sparse_diverse_pool(ds, seed_model, cfg.pool(), cfg.optimizer())

    integer_models: list[IntegerRiskScore] = []
    timed_out = False
    star_cfg = cfg.star_ray()
    for i, member in enumerate(pool.members):
        if deadline is not None and time.monotonic() > deadline and integer_models:
            timed_out = True
            break
        score = star_ray_search(ds, member, star_cfg)
        score.source_index = i
        integer_models.append(score)
    integer_models.sort(key=lambda s: s.loss)
    return PipelineResult(pool, integer_models, timed_out)
