"""Estimator-style wrapper around the ``riskscores`` command-line trainer.

Training runs in a subprocess and results are read back from the documented
JSON artifacts, so a fitted estimator is bit-for-bit identical to a CLI run
with the same inputs and configuration.
"""

from __future__ import annotations

import json
import re
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np
from scipy.special import expit

__version__ = "0.1.0"

__all__ = [
    "CoreError",
    "NotFittedError",
    "RiskScoreEstimator",
    "load",
    "save",
]


class CoreError(RuntimeError):
    """A trainer failure; ``name`` preserves the core error class name."""

    def __init__(self, name: str, message: str):
        super().__init__(f"{name}: {message}")
        self.name = name


class NotFittedError(RuntimeError):
    pass


_ERROR_LINE = re.compile(r"^error: (?P<name>\w+): (?P<msg>.*)$", re.MULTILINE)


def _run_cli(args: list[str]) -> None:
    proc = subprocess.run(
        [sys.executable, "-m", "riskscores.cli", *args],
        capture_output=True,
        text=True,
    )
    if proc.returncode == 0:
        return
    match = _ERROR_LINE.search(proc.stderr)
    if match:
        raise CoreError(match.group("name"), match.group("msg"))
    raise CoreError("CliFailure", proc.stderr.strip() or f"exit {proc.returncode}")


def _write_csv(path: Path, X: np.ndarray, y: np.ndarray) -> None:
    header = "label," + ",".join(f"f{j}" for j in range(X.shape[1]))
    lines = [header]
    for row, yi in zip(X, y):
        # 17 significant digits round-trip every float exactly
        lines.append(f"{int(yi)}," + ",".join(f"{v:.17g}" for v in row))
    path.write_text("\n".join(lines) + "\n")


class RiskScoreEstimator:
    """Sparse integer risk-score model with an array-in/model-out API.

    Parameters mirror the CLI flags: ``k`` is the support size, ``B`` the beam
    width, ``C`` the coefficient bound, ``epsilon`` the pool loss tolerance,
    ``T`` the swap attempts per feature, ``N_m`` the multiplier count.
    """

    def __init__(
        self,
        k: int,
        B: int = 10,
        C: float = 5.0,
        epsilon: float = 0.3,
        T: int = 50,
        N_m: int = 20,
        seed: int = 0,
    ):
        self.k = k
        self.B = B
        self.C = C
        self.epsilon = epsilon
        self.T = T
        self.N_m = N_m
        self.seed = seed
        self._model: dict | None = None
        self._pool: list[dict] | None = None
        self._card: str | None = None

    # -- fitting -----------------------------------------------------------

    def fit(self, X, y) -> "RiskScoreEstimator":
        X = np.ascontiguousarray(X, dtype=np.float64)  # copies caller memory
        y = np.asarray(y)
        if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
            raise CoreError(
                "DimensionMismatch", f"X has shape {X.shape}, y has shape {y.shape}"
            )
        y01 = np.where(np.asarray(y, dtype=np.float64) > 0, 1, 0)
        with tempfile.TemporaryDirectory(prefix="riskscores-") as tmp:
            tmp_path = Path(tmp)
            data = tmp_path / "data.csv"
            out = tmp_path / "out"
            _write_csv(data, X, y01)
            _run_cli(
                [
                    "train",
                    "--data", str(data),
                    "--label-column", "label",
                    "--k", str(self.k),
                    "--beam-size", str(self.B),
                    "--coef-bound", str(self.C),
                    "--epsilon", str(self.epsilon),
                    "--attempts", str(self.T),
                    "--multipliers", str(self.N_m),
                    "--seed", str(self.seed),
                    "--emit-pool",
                    "--out", str(out),
                ]
            )
            self._model = json.loads((out / "model.json").read_text())
            self._pool = json.loads((out / "pool.json").read_text())
            self._card = (out / "model.txt").read_text()
        return self

    def _require_fit(self) -> dict:
        if self._model is None:
            raise NotFittedError("call fit() first")
        return self._model

    # -- fitted attributes -------------------------------------------------

    @property
    def coefficients(self) -> np.ndarray:
        return np.asarray(self._require_fit()["coefficients"], dtype=np.int64)

    @property
    def intercept(self) -> int:
        return int(self._require_fit()["intercept"])

    @property
    def multiplier(self) -> float:
        return float(self._require_fit()["multiplier"])

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(self._require_fit()["feature_names"])

    @property
    def loss(self) -> float:
        return float(self._require_fit()["loss"])

    # -- inference ---------------------------------------------------------

    def predict_proba(self, X) -> np.ndarray:
        model = self._require_fit()
        X = np.ascontiguousarray(X, dtype=np.float64)
        w = np.asarray(model["coefficients"], dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != len(w):
            raise CoreError("DimensionMismatch", f"X has shape {X.shape}")
        return expit((X @ w + model["intercept"]) / model["multiplier"])

    def pool(self) -> list[dict]:
        if self._pool is None:
            raise NotFittedError("call fit() first")
        return [json.loads(json.dumps(entry)) for entry in self._pool]  # copies

    def scorecard(self) -> str:
        if self._card is None:
            raise NotFittedError("call fit() first")
        return self._card


def save(estimator: RiskScoreEstimator, path) -> None:
    """Write the fitted model in the trainer's model.json schema."""
    model = estimator._require_fit()
    Path(path).write_text(json.dumps(model, sort_keys=True, indent=2) + "\n")


def load(path) -> RiskScoreEstimator:
    """Rebuild an estimator from a model.json file (pool/card unavailable)."""
    obj = json.loads(Path(path).read_text())
    prov = obj.get("provenance") or {}
    est = RiskScoreEstimator(
        k=int(prov.get("k", len([c for c in obj["coefficients"] if c]) or 1)),
        B=int(prov.get("B", 10)),
        epsilon=float(prov.get("epsilon", 0.3)),
        T=int(prov.get("T", 50)),
        N_m=int(prov.get("N_m", 20)),
        seed=int(prov.get("seed", 0)),
        C=float(obj.get("C", 5.0)),
    )
    est._model = obj
    return est
