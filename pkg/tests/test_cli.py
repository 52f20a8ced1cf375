import json

import numpy as np
import pytest

from riskscores.cli import main

from support import DATA_DIR, random_dataset


@pytest.fixture()
def small_csv(tmp_path):
    rng = np.random.default_rng(0)
    ds = random_dataset(rng, 80, 5)
    path = tmp_path / "train.csv"
    header = "label," + ",".join(ds.feature_names)
    rows = [
        f"{1 if yi > 0 else 0}," + ",".join(f"{v:.17g}" for v in row)
        for row, yi in zip(ds.X, ds.y)
    ]
    path.write_text("\n".join([header] + rows) + "\n")
    return path


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestTrain:
    def test_writes_artifacts(self, small_csv, tmp_path, capsys):
        out = tmp_path / "run"
        code, stdout, _ = run(
            [
                "train", "--data", str(small_csv), "--label-column", "label",
                "--k", "2", "--attempts", "5", "--multipliers", "5",
                "--out", str(out), "--emit-pool",
            ],
            capsys,
        )
        assert code == 0
        assert "train loss=" in stdout and "auc=" in stdout
        model = json.loads((out / "model.json").read_text())
        assert len(model["coefficients"]) == 5
        assert all(isinstance(c, int) for c in model["coefficients"])
        assert model["provenance"]["k"] == 2
        assert "SCORE |" in (out / "model.txt").read_text()
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["config"]["k"] == 2 and manifest["timed_out"] is False
        pool = json.loads((out / "pool.json").read_text())
        assert len(pool) >= 1
        assert {"continuous", "integer"} <= set(pool[0])

    def test_reduce_flag(self, small_csv, tmp_path, capsys):
        out = tmp_path / "run"
        code, _, _ = run(
            [
                "train", "--data", str(small_csv), "--label-column", "label",
                "--k", "2", "--attempts", "5", "--multipliers", "5",
                "--out", str(out), "--reduce",
            ],
            capsys,
        )
        assert code == 0
        model = json.loads((out / "model.json").read_text())
        nonzero = [abs(c) for c in model["coefficients"] if c] + (
            [abs(model["intercept"])] if model["intercept"] else []
        )
        assert not nonzero or np.gcd.reduce(nonzero) == 1

    def test_k_validation_exits_2(self, small_csv, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["train", "--data", str(small_csv), "--label-column", "label", "--k", "0"])
        assert exc.value.code == 2

    def test_missing_file_exits_1(self, capsys):
        code, _, err = run(
            ["train", "--data", "/nonexistent.csv", "--label-column", "y", "--k", "1"],
            capsys,
        )
        assert code == 1
        assert err.startswith("error: FileNotFoundError")

    def test_bad_label_column_exits_1(self, small_csv, capsys):
        code, _, err = run(
            ["train", "--data", str(small_csv), "--label-column", "nope", "--k", "1"],
            capsys,
        )
        assert code == 1
        assert err.startswith("error: MissingColumn")


class TestRender:
    def test_round_trip(self, tmp_path, capsys):
        # binary features: the rendered card is reproducible from JSON alone
        rng = np.random.default_rng(1)
        X = rng.integers(0, 2, size=(80, 4))
        y = (X[:, 0] + X[:, 1] + rng.random(80) > 1.2).astype(int)
        path = tmp_path / "binary.csv"
        header = "label,b0,b1,b2,b3"
        rows = [f"{yi}," + ",".join(str(v) for v in row) for row, yi in zip(X, y)]
        path.write_text("\n".join([header] + rows) + "\n")
        out = tmp_path / "run"
        run(
            [
                "train", "--data", str(path), "--label-column", "label",
                "--k", "2", "--attempts", "5", "--multipliers", "5", "--out", str(out),
            ],
            capsys,
        )
        code, stdout, _ = run(["render", "--model", str(out / "model.json")], capsys)
        assert code == 0
        assert stdout == (out / "model.txt").read_text()


class TestCv:
    def test_report_written(self, small_csv, tmp_path, capsys):
        out = tmp_path / "cv"
        code, stdout, _ = run(
            [
                "cv", "--data", str(small_csv), "--label-column", "label",
                "--k", "2", "--attempts", "5", "--multipliers", "5",
                "--folds", "3", "--out", str(out),
            ],
            capsys,
        )
        assert code == 0
        report = json.loads((out / "cv_report.json").read_text())
        assert len(report) == 3
        assert all(r["error"] is None for r in report)
        assert "mean" in stdout

    def test_folds_validation(self, small_csv):
        with pytest.raises(SystemExit) as exc:
            main(
                ["cv", "--data", str(small_csv), "--label-column", "label",
                 "--k", "1", "--folds", "1"]
            )
        assert exc.value.code == 2


class TestCompare:
    def test_outputs(self, small_csv, tmp_path, capsys):
        out = tmp_path / "cmp"
        code, stdout, _ = run(
            [
                "compare", "--data", str(small_csv), "--label-column", "label",
                "--k", "2", "--attempts", "5", "--multipliers", "5",
                "--out", str(out), "--include-star-ray",
            ],
            capsys,
        )
        assert code == 0
        rows = json.loads((out / "compare.json").read_text())
        kinds = {r["kind"] for r in rows}
        assert "nearest" in kinds and "star_ray" in kinds
        csv_text = (out / "compare.csv").read_text()
        assert csv_text.splitlines()[0] == "kind,loss,auc"
        assert len(csv_text.splitlines()) == len(rows) + 1

    def test_subset_of_rounders(self, small_csv, tmp_path, capsys):
        out = tmp_path / "cmp2"
        code, _, _ = run(
            [
                "compare", "--data", str(small_csv), "--label-column", "label",
                "--k", "2", "--attempts", "5", "--multipliers", "5",
                "--out", str(out), "--rounders", "nearest,unit",
            ],
            capsys,
        )
        assert code == 0
        rows = json.loads((out / "compare.json").read_text())
        assert [r["kind"] for r in rows] == ["nearest", "unit"]


class TestBinarizeFlag:
    def test_mammo_density_expansion(self, tmp_path, capsys):
        out = tmp_path / "mam"
        code, _, _ = run(
            [
                "train", "--data", str(DATA_DIR / "mammo.csv"),
                "--label-column", "Malignant", "--binarize", "Density",
                "--k", "2", "--attempts", "3", "--multipliers", "3",
                "--out", str(out),
            ],
            capsys,
        )
        assert code == 0
        model = json.loads((out / "model.json").read_text())
        assert any(name.startswith("Density<=") for name in model["feature_names"])

    def test_unknown_binarize_column(self, small_csv, capsys):
        code, _, err = run(
            [
                "train", "--data", str(small_csv), "--label-column", "label",
                "--binarize", "ghost", "--k", "1",
            ],
            capsys,
        )
        assert code == 1 and "ghost" in err
