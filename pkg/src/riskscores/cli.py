"""Command-line entry point: train, pool, cv, compare, render."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import RounderKind, compare_rounders
from .dataset import (
    BinarizationSpec,
    BinarizationStrategy,
    Dataset,
    binarize,
    load_csv,
    make_folds,
)
from .errors import RiskScoresError
from .metrics import cross_validate, evaluate
from .pipeline import PipelineConfig, run_pipeline
from .scorecard import build_scorecard, model_from_json, model_to_json, reduce_coefficients, render_text


def _parse_label_map(text: str) -> dict:
    mapping = {}
    for item in text.split(","):
        raw, _, target = item.partition("=")
        mapping[raw.strip()] = int(target)
    return mapping


def _add_data_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--data", required=True, help="CSV file with a header row")
    sub.add_argument("--label-column", required=True)
    sub.add_argument(
        "--label-map",
        default="0=-1,1=1",
        help="comma-separated raw=target pairs, targets in {-1,1}",
    )
    sub.add_argument(
        "--binarize",
        default=None,
        help="comma-separated feature names to expand into <= indicators",
    )
    sub.add_argument(
        "--quantiles",
        type=int,
        default=None,
        help="use q quantile cut-points instead of all unique thresholds",
    )


def _add_train_args(sub: argparse.ArgumentParser) -> None:
    _add_data_args(sub)
    sub.add_argument("--k", type=int, required=True, help="target support size")
    sub.add_argument("--beam-size", type=int, default=10)
    sub.add_argument("--coef-bound", type=float, default=5.0)
    sub.add_argument("--epsilon", type=float, default=0.3)
    sub.add_argument("--attempts", type=int, default=50)
    sub.add_argument("--multipliers", type=int, default=20)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--out", default=".", help="output directory")
    sub.add_argument("--emit-pool", action="store_true")
    sub.add_argument("--reduce", action="store_true", help="gcd-reduce the best model")
    sub.add_argument("--time-limit", type=float, default=900.0)
    sub.add_argument(
        "--workers",
        type=int,
        default=int(os.environ.get("RISKSCORES_WORKERS", "1")),
        help="worker count (execution is deterministic regardless)",
    )


def _load_dataset(args) -> Dataset:
    ds = load_csv(args.data, args.label_column, _parse_label_map(args.label_map))
    if args.binarize:
        wanted = [c.strip() for c in args.binarize.split(",")]
        missing = [c for c in wanted if c not in ds.feature_names]
        if missing:
            raise RiskScoresError(f"binarize columns not found: {missing}")
        columns = tuple(ds.feature_names.index(c) for c in wanted)
        if args.quantiles:
            spec = BinarizationSpec(
                BinarizationStrategy.QUANTILES, q=args.quantiles, columns=columns
            )
        else:
            spec = BinarizationSpec(columns=columns)
        ds = binarize(ds, spec)
    return ds


def _pipeline_config(args) -> PipelineConfig:
    return PipelineConfig(
        k=args.k,
        B=args.beam_size,
        C=args.coef_bound,
        epsilon=args.epsilon,
        T=args.attempts,
        N_m=args.multipliers,
        time_limit=args.time_limit,
    )


def _provenance(args) -> dict:
    return {
        "k": args.k,
        "B": args.beam_size,
        "epsilon": args.epsilon,
        "T": args.attempts,
        "N_m": args.multipliers,
        "seed": args.seed,
    }


def _write_manifest(out: Path, args, timed_out: bool) -> None:
    config = {
        key: value
        for key, value in sorted(vars(args).items())
        if key not in ("func", "from_manifest")
    }
    manifest = {"version": __version__, "config": config, "timed_out": timed_out}
    (out / "manifest.json").write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")


def _pool_records(ds: Dataset, result, C: float) -> list[dict]:
    records = []
    for member, integer in zip(
        [result.continuous_pool.members[s.source_index] for s in result.integer_models],
        result.integer_models,
    ):
        records.append(
            {
                "continuous": {
                    "coefficients": member.w.tolist(),
                    "intercept": member.w0,
                    "loss": member.loss,
                },
                "integer": json.loads(model_to_json(integer, ds.feature_names, C)),
            }
        )
    return records


def cmd_train(args) -> int:
    ds = _load_dataset(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    result = run_pipeline(ds, _pipeline_config(args))
    best = result.integer_models[0]
    if args.reduce:
        best = reduce_coefficients(best)
    (out / "model.json").write_text(
        model_to_json(best, ds.feature_names, args.coef_bound, _provenance(args))
    )
    (out / "model.txt").write_text(render_text(build_scorecard(best, ds.feature_names, ds)))
    if args.emit_pool:
        (out / "pool.json").write_text(
            json.dumps(_pool_records(ds, result, args.coef_bound), sort_keys=True, indent=2)
            + "\n"
        )
    _write_manifest(out, args, result.timed_out)
    report = evaluate(best, ds, "train")
    print(f"train loss={report.loss:.6f} auc={report.auc:.4f} n={report.n}")
    return 0


def cmd_pool(args) -> int:
    ds = _load_dataset(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    result = run_pipeline(ds, _pipeline_config(args))
    (out / "pool.json").write_text(
        json.dumps(_pool_records(ds, result, args.coef_bound), sort_keys=True, indent=2)
        + "\n"
    )
    _write_manifest(out, args, result.timed_out)
    print(f"pool size={len(result.integer_models)}")
    return 0


def cmd_cv(args) -> int:
    ds = _load_dataset(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    folds = make_folds(ds, args.folds, args.seed)
    results = cross_validate(ds, folds, _pipeline_config(args))
    payload = []
    for r in results:
        payload.append(
            {
                "fold": r.fold,
                "train": r.train.to_dict() if r.train else None,
                "test": r.test.to_dict() if r.test else None,
                "pool_size": r.pool_size,
                "error": r.error,
            }
        )
    (out / "cv_report.json").write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    _write_manifest(out, args, False)
    print(f"{'fold':>4} {'train_auc':>10} {'test_auc':>10} {'train_loss':>12} {'test_loss':>12}")
    for r in results:
        if r.error:
            print(f"{r.fold:>4} error: {r.error}")
            continue
        print(
            f"{r.fold:>4} {r.train.auc:>10.4f} {r.test.auc:>10.4f}"
            f" {r.train.loss:>12.4f} {r.test.loss:>12.4f}"
        )
    ok = [r for r in results if not r.error]
    if ok:
        print(
            f"mean {np.mean([r.train.auc for r in ok]):>10.4f}"
            f" {np.mean([r.test.auc for r in ok]):>10.4f}"
        )
    return 0


def cmd_compare(args) -> int:
    ds = _load_dataset(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    result = run_pipeline(ds, _pipeline_config(args))
    best_continuous = result.continuous_pool.members[0]
    if args.rounders == "all":
        kinds = list(RounderKind)
    else:
        kinds = [RounderKind(name.strip()) for name in args.rounders.split(",")]
    rows = compare_rounders(
        ds,
        best_continuous,
        kinds,
        C=args.coef_bound,
        seed=args.seed,
        include_star_ray=args.include_star_ray,
    )
    (out / "compare.json").write_text(
        json.dumps(
            [{"kind": r.kind, "loss": r.loss, "auc": r.auc} for r in rows],
            sort_keys=True,
            indent=2,
        )
        + "\n"
    )
    lines = ["kind,loss,auc"] + [f"{r.kind},{r.loss!r},{r.auc!r}" for r in rows]
    (out / "compare.csv").write_text("\n".join(lines) + "\n")
    for r in rows:
        print(f"{r.kind:>20} loss={r.loss:.6f} auc={r.auc:.4f}")
    return 0


def cmd_render(args) -> int:
    model, names, _, _ = model_from_json(Path(args.model).read_text())
    print(render_text(build_scorecard(model, names)), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riskscores",
        description="Learn sparse integer risk scores from binary-labeled CSV data.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    train = subs.add_parser("train", help="fit and write the best risk score")
    _add_train_args(train)
    train.set_defaults(func=cmd_train)

    pool = subs.add_parser("pool", help="fit and write the whole model pool")
    _add_train_args(pool)
    pool.set_defaults(func=cmd_pool)

    cv = subs.add_parser("cv", help="stratified cross-validation")
    _add_train_args(cv)
    cv.add_argument("--folds", type=int, default=5)
    cv.set_defaults(func=cmd_cv)

    compare = subs.add_parser("compare", help="compare rounding baselines")
    _add_train_args(compare)
    compare.add_argument("--rounders", default="all")
    compare.add_argument("--include-star-ray", action="store_true")
    compare.set_defaults(func=cmd_compare)

    render = subs.add_parser("render", help="pretty-print a saved model")
    render.add_argument("--model", required=True)
    render.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "k", None) is not None and args.k < 1:
        parser.error("--k must be >= 1")
    if getattr(args, "folds", None) is not None and args.folds < 2:
        parser.error("--folds must be >= 2")
    try:
        return args.func(args)
    except RiskScoresError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
