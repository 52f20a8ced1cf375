"""Human-readable score cards, risk tables, reduction, and (de)serialization."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .dataset import Dataset
from .errors import MalformedJson
from .rounding import IntegerRiskScore, RoundingCertificate


@dataclass(frozen=True)
class RiskTable:
    """Rows of (integer score, predicted risk), strictly increasing in both."""

    rows: tuple[tuple[float, float], ...]
    open_ended: bool = False  # extremes rendered as <= / >= sentinels

    def __post_init__(self):
        risks = [r for _, r in self.rows]
        assert all(a < b for a, b in zip(risks, risks[1:])), "risks must increase"


@dataclass(frozen=True)
class ScoreCard:
    lines: tuple[tuple[str, int], ...]
    intercept: int
    multiplier: float
    risk_table: RiskTable


def _achievable_scores(points: list[int]) -> list[int]:
    sums = {0}
    for pts in points:
        sums |= {s + pts for s in sums}
    return sorted(sums)


def build_scorecard(
    model: IntegerRiskScore,
    names,
    ds: Dataset | None = None,
) -> ScoreCard:
    """One line per supported feature plus a risk-conversion table.

    With binary features the table enumerates every achievable subset-sum
    score; otherwise it lists the scores observed in ``ds`` with open-ended
    extremes. Without data, features are assumed binary.
    """
    names = tuple(names)
    support = model.support
    lines = tuple((names[j], int(model.w_plus[j])) for j in support)
    points = [pts for _, pts in lines]

    binary = True
    if ds is not None and support:
        sub = ds.X[:, list(support)]
        binary = bool(np.all(np.isin(sub, (0.0, 1.0))))

    open_ended = False
    if not support:
        scores = [0]
    elif binary:
        scores = _achievable_scores(points)
    else:
        observed = np.unique(ds.X[:, list(support)] @ np.asarray(points))
        scores = [float(s) for s in observed]
        open_ended = True

    rows = tuple(
        (s, float(expit((s + model.w0_plus) / model.m))) for s in scores
    )
    return ScoreCard(
        lines=lines,
        intercept=model.w0_plus,
        multiplier=model.m,
        risk_table=RiskTable(rows=rows, open_ended=open_ended),
    )


def reduce_coefficients(model: IntegerRiskScore) -> IntegerRiskScore:
    """Divide coefficients, intercept, and multiplier by their gcd.

    Every predicted risk is preserved exactly: (s/g + w0/g) / (m/g) equals
    (s + w0) / m. The intercept participates in the gcd only when nonzero.
    """
    values = [abs(int(v)) for v in model.w_plus if v != 0]
    if model.w0_plus != 0:
        values.append(abs(model.w0_plus))
    g = math.gcd(*values) if values else 1
    if g <= 1:
        return model
    return IntegerRiskScore(
        w_plus=model.w_plus // g,
        w0_plus=model.w0_plus // g,
        m=model.m / g,
        loss=model.loss,
        source_index=model.source_index,
        certificate=model.certificate,
        zero_model=model.zero_model,
    )


def render_text(card: ScoreCard) -> str:
    """Fixed-width text rendering: numbered point rows, then the risk table."""
    out = []
    width = max((len(name) for name, _ in card.lines), default=10)
    for i, (name, pts) in enumerate(card.lines, start=1):
        plural = "point " if abs(pts) == 1 else "points"
        prefix = " " if i == 1 else "+"
        out.append(f"{i:>2}. {name:<{width}} {pts:>4} {plural}  {prefix} ...")
    out.append(f"{'':>4}{'SCORE':<{width}} {'=':>4} ...")
    out.append("")
    lo = "<=" if card.risk_table.open_ended else ""
    hi = ">=" if card.risk_table.open_ended else ""
    rows = list(card.risk_table.rows)
    for start in range(0, len(rows), 6):
        chunk = rows[start : start + 6]
        cells_s, cells_r = [], []
        for idx, (score, risk) in enumerate(chunk, start=start):
            marker = lo if idx == 0 else (hi if idx == len(rows) - 1 else "")
            cells_s.append(f"{marker}{score:g}".rjust(7))
            cells_r.append(f"{100 * risk:.1f}%".rjust(7))
        out.append("SCORE |" + " |".join(cells_s) + " |")
        out.append("RISK  |" + " |".join(cells_r) + " |")
    out.append("")
    out.append(f"intercept = {card.intercept}, multiplier = {card.multiplier!r}")
    return "\n".join(out) + "\n"


def model_to_json(
    model: IntegerRiskScore,
    feature_names,
    C: float = 5.0,
    provenance: dict | None = None,
) -> str:
    """Serialize to the documented schema. The multiplier uses repr, which is
    the shortest decimal that round-trips the exact float."""
    cert = model.certificate
    obj = {
        "feature_names": list(feature_names),
        "coefficients": [int(v) for v in model.w_plus],
        "intercept": model.w0_plus,
        "multiplier": model.m,
        "C": C,
        "certificate": None
        if cert is None
        else {
            "bound": cert.bound,
            "loss_before": cert.loss_before,
            "loss_after": cert.loss_after,
        },
        "provenance": provenance or {},
        "loss": model.loss,
        "source_index": model.source_index,
        "zero_model": model.zero_model,
    }
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def model_from_json(text: str) -> tuple[IntegerRiskScore, tuple[str, ...], float, dict]:
    """Inverse of model_to_json; returns (model, feature_names, C, provenance)."""
    try:
        obj = json.loads(text)
        cert = obj.get("certificate")
        certificate = (
            None
            if cert is None
            else RoundingCertificate(
                bound=cert["bound"],
                loss_before=cert["loss_before"],
                loss_after=cert["loss_after"],
                chain_ledger=[],
            )
        )
        model = IntegerRiskScore(
            w_plus=np.asarray(obj["coefficients"], dtype=np.int64),
            w0_plus=int(obj["intercept"]),
            m=float(obj["multiplier"]),
            loss=float(obj["loss"]),
            source_index=int(obj.get("source_index", -1)),
            certificate=certificate,
            zero_model=bool(obj.get("zero_model", False)),
        )
        return model, tuple(obj["feature_names"]), float(obj["C"]), obj["provenance"]
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise MalformedJson(f"cannot parse model JSON: {exc}") from None
