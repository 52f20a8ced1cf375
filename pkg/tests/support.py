"""Shared test helpers: synthetic data, data paths, acceptance reporting."""

from pathlib import Path

import numpy as np

from riskscores import Dataset

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

#: one line per acceptance criterion, echoed after the run so the verdicts
#: survive pytest's output capture
ACCEPTANCE_LINES: list[str] = []


def report(name: str, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE {'PASS' if ok else 'FAIL'} | {name} | {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, f"{name}: {detail}"


def random_dataset(rng, n, p, informative=True):
    """Random Gaussian-feature dataset; labels from a planted linear model
    when informative, otherwise coin flips. Both classes guaranteed."""
    X = rng.normal(size=(n, p))
    if informative:
        truth = rng.uniform(-2.0, 2.0, size=p)
        probs = 1.0 / (1.0 + np.exp(-(X @ truth)))
        y = np.where(rng.random(n) < probs, 1.0, -1.0)
    else:
        y = np.where(rng.random(n) < 0.5, 1.0, -1.0)
    if np.all(y == y[0]):
        y[0] = -y[0]
    return Dataset(X, y, tuple(f"f{i}" for i in range(p)))
