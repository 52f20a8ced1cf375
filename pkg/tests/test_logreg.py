import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riskscores import (
    INTERCEPT,
    ContinuousModel,
    Dataset,
    OptimizerConfig,
    gradient_coordinate,
    lipschitz_coordinate,
    logistic_loss,
    optimize_on_support,
)
from riskscores.errors import DimensionMismatch, EmptySupport
from riskscores.logreg import intercept_only_fit, loss_from_scores

from support import random_dataset


def finite_difference(ds, w, w0, j, h=1e-5):
    """Central-difference oracle for the coordinate gradient."""
    if j == INTERCEPT:
        return (logistic_loss(ds, w, w0 + h) - logistic_loss(ds, w, w0 - h)) / (2 * h)
    up, down = w.copy(), w.copy()
    up[j] += h
    down[j] -= h
    return (logistic_loss(ds, up, w0) - logistic_loss(ds, down, w0)) / (2 * h)


class TestLoss:
    def test_zero_model_loss_is_n_log2(self):
        ds = random_dataset(np.random.default_rng(0), 30, 4)
        assert logistic_loss(ds, np.zeros(4), 0.0) == pytest.approx(30 * np.log(2))

    def test_known_value_single_point(self):
        ds = Dataset(np.array([[1.0], [0.0]]), np.array([1, -1]), ("x",))
        # losses: log(1+e^-(2+1)) + log(1+e^(1)) by hand
        expected = np.log1p(np.exp(-3.0)) + np.log1p(np.exp(1.0))
        assert logistic_loss(ds, np.array([2.0]), 1.0) == pytest.approx(expected)

    def test_stable_at_extreme_scores(self):
        y = np.array([1.0, -1.0])
        val = loss_from_scores(y, np.array([5000.0, 5000.0]))
        assert np.isfinite(val) and val == pytest.approx(5000.0)

    def test_multiplier_scales_scores(self):
        ds = random_dataset(np.random.default_rng(1), 20, 3)
        w = np.array([1.0, -2.0, 0.5])
        direct = logistic_loss(Dataset(ds.X / 2.0, ds.y, ds.feature_names), w, 1.5)
        assert logistic_loss(ds, w, 3.0, m=2.0) == pytest.approx(direct, rel=1e-12)

    def test_rejects_bad_multiplier_and_shape(self):
        ds = random_dataset(np.random.default_rng(2), 10, 3)
        with pytest.raises(ValueError):
            logistic_loss(ds, np.zeros(3), 0.0, m=0.0)
        with pytest.raises(DimensionMismatch):
            logistic_loss(ds, np.zeros(4), 0.0)


class TestGradient:
    def test_matches_finite_differences(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            ds = random_dataset(rng, 25, 5)
            w = rng.uniform(-5, 5, size=5)
            w0 = rng.uniform(-2, 2)
            for j in list(range(5)) + [INTERCEPT]:
                g = gradient_coordinate(ds, w, w0, j)
                fd = finite_difference(ds, w, w0, j)
                assert abs(g - fd) <= 1e-5 * max(1.0, abs(fd))

    @settings(max_examples=50, deadline=None)
    @given(seed=st.integers(0, 10_000), j=st.integers(-1, 3))
    def test_gradient_property(self, seed, j):
        rng = np.random.default_rng(seed)
        ds = random_dataset(rng, 15, 4)
        w = rng.uniform(-5, 5, size=4)
        w0 = rng.uniform(-3, 3)
        g = gradient_coordinate(ds, w, w0, j)
        fd = finite_difference(ds, w, w0, j)
        assert abs(g - fd) <= 1e-5 * max(1.0, abs(fd))

    def test_out_of_range_coordinate(self):
        ds = random_dataset(np.random.default_rng(0), 10, 2)
        with pytest.raises(DimensionMismatch):
            gradient_coordinate(ds, np.zeros(2), 0.0, 2)


class TestLipschitz:
    def test_column_formula(self):
        X = np.array([[1.0, 2.0], [3.0, 0.0], [1.0, 1.0]])
        ds = Dataset(X, np.array([1, -1, 1]), ("a", "b"))
        assert lipschitz_coordinate(ds, 0) == pytest.approx((1 + 9 + 1) / 4)
        assert lipschitz_coordinate(ds, INTERCEPT) == pytest.approx(3 / 4)

    def test_zero_column_floor(self):
        ds = Dataset(np.array([[0.0], [0.0]]), np.array([1, -1]), ("z",))
        assert lipschitz_coordinate(ds, 0) == 1e-12

    def test_upper_bounds_curvature(self):
        # sigmoid'(z) <= 1/4 everywhere, so the quadratic majorizer holds:
        # L(w + t e_j) <= L(w) + t grad_j + (l_j / 2) t^2 for any step t.
        rng = np.random.default_rng(11)
        ds = random_dataset(rng, 40, 3)
        w = rng.uniform(-2, 2, size=3)
        for j in range(3):
            lj = lipschitz_coordinate(ds, j)
            g = gradient_coordinate(ds, w, 0.0, j)
            base = logistic_loss(ds, w, 0.0)
            for t in (-1.7, -0.3, 0.4, 2.1):
                trial = w.copy()
                trial[j] += t
                assert logistic_loss(ds, trial, 0.0) <= base + t * g + 0.5 * lj * t * t + 1e-9


class TestInterceptOnly:
    def test_closed_form_matches_entropy(self):
        # MLE loss for the empty support is n * H(pi), pi = N+/n.
        ds = random_dataset(np.random.default_rng(4), 100, 3)
        w0, loss = intercept_only_fit(ds)
        pi = ds.n_pos / ds.n
        assert w0 == pytest.approx(np.log(ds.n_pos / ds.n_neg))
        entropy = -(pi * np.log(pi) + (1 - pi) * np.log(1 - pi))
        assert loss == pytest.approx(ds.n * entropy, rel=1e-12)

    def test_is_stationary_point(self):
        ds = random_dataset(np.random.default_rng(9), 60, 2)
        w0, _ = intercept_only_fit(ds)
        assert abs(gradient_coordinate(ds, np.zeros(2), w0, INTERCEPT)) < 1e-9


class TestOptimizeOnSupport:
    def test_improves_on_warm_start(self):
        rng = np.random.default_rng(21)
        ds = random_dataset(rng, 80, 6)
        warm = ContinuousModel(w=np.zeros(6), w0=0.0)
        fit = optimize_on_support(ds, (0, 2, 4), warm, OptimizerConfig())
        assert fit.loss <= logistic_loss(ds, warm.w, warm.w0) + 1e-9
        assert set(fit.support) <= {0, 2, 4}

    def test_near_stationary_at_convergence(self):
        rng = np.random.default_rng(22)
        ds = random_dataset(rng, 100, 4)
        cfg = OptimizerConfig(cd_tolerance=1e-12)
        fit = optimize_on_support(ds, (0, 1, 2, 3), ContinuousModel(w=np.zeros(4), w0=0.0), cfg)
        # interior coordinates must have (near-)zero gradient
        for j in list(range(4)) + [INTERCEPT]:
            if j != INTERCEPT and abs(fit.w[j]) >= cfg.C - 1e-9:
                continue
            assert abs(gradient_coordinate(ds, fit.w, fit.w0, j)) < 1e-3

    def test_matches_long_run_self_oracle(self):
        rng = np.random.default_rng(23)
        for _ in range(5):
            ds = random_dataset(rng, 60, 5)
            warm = ContinuousModel(w=np.zeros(5), w0=0.0)
            quick = optimize_on_support(ds, (0, 1, 2), warm, OptimizerConfig())
            slow = optimize_on_support(
                ds,
                (0, 1, 2),
                warm,
                OptimizerConfig(cd_tolerance=1e-14, max_cd_steps_factor=2000),
            )
            assert quick.loss <= slow.loss + 1e-6 * max(1.0, slow.loss)

    def test_single_feature_matches_grid_oracle(self):
        # exhaustive oracle: dense grid + local refinement over (w_j, w0)
        rng = np.random.default_rng(24)
        ds = random_dataset(rng, 50, 1)
        fit = optimize_on_support(
            ds, (0,), ContinuousModel(w=np.zeros(1), w0=0.0), OptimizerConfig(cd_tolerance=1e-14)
        )
        grid = np.linspace(-5, 5, 201)
        best = min(
            logistic_loss(ds, np.array([a]), b) for a in grid for b in np.linspace(-3, 3, 61)
        )
        assert fit.loss <= best + 1e-6

    def test_box_constraint_enforced(self):
        # a separable dataset pushes weights to the boundary
        X = np.array([[1.0], [1.0], [0.0], [0.0]])
        y = np.array([1, 1, -1, -1])
        ds = Dataset(X, y, ("x",))
        cfg = OptimizerConfig(C=2.0, max_cd_steps_factor=5000, cd_tolerance=1e-14)
        fit = optimize_on_support(ds, (0,), ContinuousModel(w=np.zeros(1), w0=0.0), cfg)
        assert abs(fit.w[0]) <= 2.0 + 1e-12
        assert fit.w[0] == pytest.approx(2.0)

    def test_intercept_unclipped(self):
        # heavily imbalanced labels need |w0| > C
        X = np.zeros((200, 1))
        X[0, 0] = 1.0
        y = np.ones(200)
        y[:2] = -1
        ds = Dataset(X, y, ("x",))
        cfg = OptimizerConfig(C=1.0, cd_tolerance=1e-14, max_cd_steps_factor=5000)
        fit = optimize_on_support(ds, (), ContinuousModel(w=np.zeros(1), w0=0.0), cfg)
        assert fit.w0 > 1.0

    def test_empty_support_intercept_only(self):
        ds = random_dataset(np.random.default_rng(25), 40, 2)
        fit = optimize_on_support(
            ds, (), ContinuousModel(w=np.zeros(2), w0=0.0), OptimizerConfig(cd_tolerance=1e-14)
        )
        _, oracle = intercept_only_fit(ds)
        assert fit.loss == pytest.approx(oracle, abs=1e-8)

    def test_warm_weight_outside_support_rejected(self):
        ds = random_dataset(np.random.default_rng(26), 20, 3)
        warm = ContinuousModel(w=np.array([0.0, 1.0, 0.0]), w0=0.0)
        with pytest.raises(EmptySupport):
            optimize_on_support(ds, (0,), warm, OptimizerConfig())

    def test_bad_support_index(self):
        ds = random_dataset(np.random.default_rng(27), 20, 3)
        with pytest.raises(DimensionMismatch):
            optimize_on_support(
                ds, (5,), ContinuousModel(w=np.zeros(3), w0=0.0), OptimizerConfig()
            )
