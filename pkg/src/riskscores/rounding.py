"""Multiplier search and sequential auxiliary-loss rounding with certificates."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import expit

from .dataset import Dataset
from .errors import ZeroModel
from .logreg import INTERCEPT, ContinuousModel, loss_from_scores

CERT_TOL = 1e-9


class ChainStep(NamedTuple):
    coordinate: int  # original feature index; INTERCEPT (-1) for the intercept
    direction: str  # "up" or "down"
    cum_auxiliary: float
    cum_chain_bound: float


@dataclass
class RoundingCertificate:
    """Closed-form bound on the rounding loss increase plus the per-step
    accumulation ledger that realizes it."""

    bound: float
    loss_before: float
    loss_after: float
    chain_ledger: list[ChainStep]

    def check(self, tol: float = CERT_TOL) -> None:
        assert self.loss_after - self.loss_before <= self.bound + tol, (
            "rounding loss increase exceeds the certified bound"
        )
        for step in self.chain_ledger:
            assert step.cum_auxiliary <= step.cum_chain_bound + tol, (
                "auxiliary objective exceeds the chain bound at a ledger step"
            )


@dataclass
class IntegerRiskScore:
    """Integer coefficients + integer intercept + positive multiplier m.

    ``loss`` is the logistic loss on the (1/m)-scaled data. ``zero_model``
    flags intercept-only results produced from an all-zero continuous model.
    """

    w_plus: np.ndarray
    w0_plus: int
    m: float
    loss: float
    source_index: int = -1
    certificate: RoundingCertificate | None = None
    zero_model: bool = False

    def __post_init__(self):
        self.w_plus = np.asarray(self.w_plus, dtype=np.int64)
        self.w0_plus = int(self.w0_plus)
        if self.m <= 0:
            raise ValueError("multiplier must be positive")

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(int(j) for j in np.flatnonzero(self.w_plus))


@dataclass(kw_only=True)
class StarRayConfig:
    N_m: int = 20
    C: float = 5.0

    def __post_init__(self):
        if self.N_m < 1:
            raise ValueError("N_m must be >= 1")
        if self.C <= 0:
            raise ValueError("C must be positive")


def _augment(
    ds: Dataset, w: np.ndarray, w0: float, intercept_scale: float = 1.0
) -> tuple[np.ndarray, np.ndarray]:
    """Concatenate the intercept as a leading constant column.

    When the feature matrix has been divided by a multiplier, the implicit
    intercept pseudo-feature scales with it, so the column holds 1/m."""
    Xa = np.column_stack([np.full(ds.n, intercept_scale), ds.X])
    wc = np.concatenate([[w0], np.asarray(w, dtype=np.float64)])
    return Xa, wc


def _sample_lipschitz(Xa: np.ndarray, y: np.ndarray, wc: np.ndarray) -> np.ndarray:
    """Per-sample constants l_i = sigmoid(-y_i x_i . gamma_i) with the
    worst-corner choice gamma_ij = floor(w_j) if y_i x_ij > 0 else ceil(w_j)."""
    lo = np.floor(wc)
    hi = np.ceil(wc)
    Z = y[:, None] * Xa
    G = np.where(Z > 0, lo[None, :], hi[None, :])
    return expit(-y * (Xa * G).sum(axis=1))


def theorem1_bound(
    ds_scaled: Dataset, w: np.ndarray, w0: float, intercept_scale: float = 1.0
) -> float:
    """Closed-form certificate sqrt(n * sum_ij (l_i x_ij)^2 u_j (1 - u_j))
    with u_j the fractional parts of the intercept-augmented coefficients."""
    Xa, wc = _augment(ds_scaled, w, w0, intercept_scale)
    li = _sample_lipschitz(Xa, ds_scaled.y, wc)
    u = wc - np.floor(wc)
    per_ij = (li[:, None] * Xa) ** 2 * (u * (1.0 - u))[None, :]
    return float(np.sqrt(ds_scaled.n * per_ij.sum()))


def auxiliary_loss_round(
    ds_scaled: Dataset, w: np.ndarray, w0: float, intercept_scale: float = 1.0
) -> tuple[np.ndarray, int, RoundingCertificate]:
    """Round coefficients one at a time, picking the (coordinate, direction)
    pair minimizing the quadratic auxiliary objective sum_i l_i^2 (x_i . (w+ - w))^2.

    The per-sample constants l_i are computed once from the pre-rounding
    coefficients; already-integral coordinates are never revisited. Ties
    between rounding up and down go up. Returns integer coefficients, an
    integer intercept, and a checked certificate.
    """
    Xa, wc = _augment(ds_scaled, w, w0, intercept_scale)
    y = ds_scaled.y
    n = ds_scaled.n
    li = _sample_lipschitz(Xa, y, wc)
    u = wc - np.floor(wc)
    bound = float(np.sqrt(n * ((li[:, None] * Xa) ** 2 * (u * (1 - u))[None, :]).sum()))
    loss_before = loss_from_scores(y, Xa @ wc)

    w_plus = wc.copy()
    frac = [j for j in range(len(wc)) if np.floor(wc[j]) != np.ceil(wc[j])]
    residual = np.zeros(n)  # r_i = sum_{j fixed} l_i x_ij (w+_j - w_j)
    cum_chain = 0.0
    ledger: list[ChainStep] = []

    while frac:
        J = np.asarray(frac, dtype=np.int64)
        A = li[:, None] * Xa[:, J]
        up_vals = np.ceil(wc[J])
        down_vals = np.floor(wc[J])
        U_up = ((residual[:, None] + A * (up_vals - wc[J])[None, :]) ** 2).sum(axis=0)
        U_down = ((residual[:, None] + A * (down_vals - wc[J])[None, :]) ** 2).sum(axis=0)
        if U_up.min() <= U_down.min():
            pick = int(np.argmin(U_up))
            value = up_vals[pick]
            direction = "up"
        else:
            pick = int(np.argmin(U_down))
            value = down_vals[pick]
            direction = "down"
        j = int(J[pick])
        residual = residual + li * Xa[:, j] * (value - wc[j])
        w_plus[j] = value
        frac.remove(j)
        cum_chain += float((li**2 * Xa[:, j] ** 2).sum() * u[j] * (1.0 - u[j]))
        ledger.append(
            ChainStep(
                coordinate=j - 1 if j > 0 else INTERCEPT,
                direction=direction,
                cum_auxiliary=float((residual**2).sum()),
                cum_chain_bound=cum_chain,
            )
        )

    loss_after = loss_from_scores(y, Xa @ w_plus)
    cert = RoundingCertificate(
        bound=bound,
        loss_before=loss_before,
        loss_after=loss_after,
        chain_ledger=ledger,
    )
    cert.check()
    coeffs = np.rint(w_plus[1:]).astype(np.int64)
    intercept = int(np.rint(w_plus[0]))
    return coeffs, intercept, cert


def multiplier_grid(m_max: float, n_m: int) -> np.ndarray:
    """Equally spaced multipliers with step (m_max - m_min) / N_m, both
    endpoints included. Doubling N_m therefore refines the grid into a
    superset, so a larger budget can never return a worse loss. Shrinkage
    below m = 1 is allowed only when the box is already saturated
    (m_max = 1)."""
    m_min = 0.5 if m_max <= 1.0 else 1.0
    if n_m == 1:
        return np.array([m_max])
    return m_min + (m_max - m_min) * np.arange(n_m + 1) / n_m


def star_ray_search(
    ds: Dataset, model: ContinuousModel, cfg: StarRayConfig
) -> IntegerRiskScore:
    """Try every multiplier on the grid, round each rescaled solution, and
    keep the integer model with the smallest loss on its rescaled data."""
    if not model.support:
        warnings.warn("all coefficients zero; returning intercept-only model", ZeroModel)
        scaled = Dataset(ds.X.copy(), ds.y, ds.feature_names)
        coeffs, intercept, cert = auxiliary_loss_round(scaled, model.w, model.w0)
        return IntegerRiskScore(
            w_plus=coeffs,
            w0_plus=intercept,
            m=1.0,
            loss=cert.loss_after,
            certificate=cert,
            zero_model=True,
        )

    m_max = cfg.C / model.max_abs_coef()
    best: IntegerRiskScore | None = None
    for m in multiplier_grid(m_max, cfg.N_m):
        scaled = Dataset(ds.X / m, ds.y, ds.feature_names)
        w_scaled = np.clip(m * model.w, -cfg.C, cfg.C)
        coeffs, intercept, cert = auxiliary_loss_round(
            scaled, w_scaled, m * model.w0, intercept_scale=1.0 / m
        )
        if best is None or cert.loss_after < best.loss:
            best = IntegerRiskScore(
                w_plus=coeffs,
                w0_plus=intercept,
                m=float(m),
                loss=cert.loss_after,
                certificate=cert,
            )
    return best


def round_pool(
    ds: Dataset,
    pool,
    cfg: StarRayConfig,
    best_only: bool = False,
) -> list[IntegerRiskScore]:
    """Map the star-ray search over every pool member; ascending-loss order."""
    results: list[IntegerRiskScore] = []
    for i, member in enumerate(pool.members):
        score = star_ray_search(ds, member, cfg)
        score.source_index = i
        results.append(score)
    results.sort(key=lambda s: s.loss)
    if best_only:
        return results[:1]
    return results
