"""
Unit tests for calibration_utils module
"""
import numpy as np
import pytest

from scripts.calibration_utils import (
    PUBLISHED_ERRORS,
    PUBLISHED_MODELS,
    CalibrationDataset,
    PolynomialModel,
    build_design_matrix,
    cross_validate,
    describe_model,
    evaluate_model,
    fit_polynomial,
    format_fit_report,
    kfold_split,
    least_squares_fit,
    protocol_forces,
    protocol_weights,
    synthetic_dataset,
)
from scripts.exceptions import (
    DataError,
    SingularFitError,
    UnderdeterminedFitError,
    UsageError,
)
from scripts.units_utils import rmse

SIGNALS = np.linspace(1.0, 12.0, 100)


class TestProtocol:
    """Tests for the weight-set collection protocol"""

    def test_total_samples(self):
        assert sum(n for _, n in protocol_weights()) == 100

    def test_counts(self):
        counts = dict(protocol_weights())
        assert len(counts) == 12
        assert counts[50.0] == 10
        assert counts[20.0] == counts[100.0] == 9
        assert counts[5.0] == 8

    def test_forces(self):
        forces = protocol_forces()
        assert forces.shape == (100,)
        assert forces.max() == pytest.approx(0.98)
        assert np.count_nonzero(np.isclose(forces, 0.49)) == 10


class TestDesignMatrix:
    """Tests for build_design_matrix function"""

    def test_single_row(self):
        np.testing.assert_array_equal(build_design_matrix([2.0], 1), [[1.0, 2.0]])

    def test_powers(self):
        np.testing.assert_array_equal(
            build_design_matrix([1.0, 3.0], 2), [[1, 1, 1], [1, 3, 9]]
        )

    def test_zero_signal(self):
        np.testing.assert_array_equal(build_design_matrix([0.0], 3), [[1, 0, 0, 0]])

    def test_invalid_order(self):
        with pytest.raises(UsageError):
            build_design_matrix([1.0, 2.0], 0)


class TestLeastSquares:
    """Tests for least_squares_fit and fit_polynomial"""

    def test_exact_line(self, model_rows):
        v, f = model_rows
        model = fit_polynomial(v, f, order=1)
        np.testing.assert_allclose(model.coefficients, (1.0, 2.0), atol=1e-12)

    @pytest.mark.parametrize("order", [1, 3])
    def test_published_recovery_tight(self, order):
        truth = PUBLISHED_MODELS[order]
        data = synthetic_dataset(truth, SIGNALS)
        model = fit_polynomial(data.signals, data.forces, order)
        np.testing.assert_allclose(model.coefficients, truth.coefficients, atol=1e-9)

    @pytest.mark.parametrize("order", [1, 2, 3, 4, 5])
    def test_published_recovery(self, order):
        truth = PUBLISHED_MODELS[order]
        data = synthetic_dataset(truth, SIGNALS)
        model = fit_polynomial(data.signals, data.forces, order)
        np.testing.assert_allclose(model.coefficients, truth.coefficients, atol=1e-6)

    def test_residual_orthogonal(self):
        data = synthetic_dataset(PUBLISHED_MODELS[1], SIGNALS, noise_sigma=0.09, seed=3)
        A = build_design_matrix(data.signals, 3)
        x = least_squares_fit(A, data.forces)
        residual = A.T @ (A @ x - data.forces)
        bound = 1e-8 * np.abs(A).sum(axis=1).max() * np.abs(data.forces).max()
        assert np.max(np.abs(residual)) <= bound

    def test_refit_idempotent(self):
        data = synthetic_dataset(PUBLISHED_MODELS[1], SIGNALS, noise_sigma=0.09, seed=4)
        model = fit_polynomial(data.signals, data.forces, 2)
        again = fit_polynomial(data.signals, evaluate_model(model, data.signals), 2)
        np.testing.assert_allclose(again.coefficients, model.coefficients, atol=1e-9)

    def test_underdetermined(self):
        with pytest.raises(UnderdeterminedFitError):
            fit_polynomial([1.0, 2.0], [0.1, 0.2], order=2)

    def test_singular(self):
        with pytest.raises(SingularFitError) as info:
            fit_polynomial([2.0, 2.0, 2.0], [0.1, 0.2, 0.3], order=1)
        assert info.value.order == 1

    def test_signal_units_tag(self, model_rows):
        v, f = model_rows
        assert fit_polynomial(v, f, 1, signal_units="adc_counts").signal_units == "adc_counts"


class TestModel:
    """Tests for PolynomialModel, evaluate_model and describe_model"""

    def test_evaluate_examples(self):
        assert evaluate_model(PUBLISHED_MODELS[1], 0.0) == -0.0650
        assert evaluate_model(PUBLISHED_MODELS[1], 10.0) == pytest.approx(0.8240)
        assert evaluate_model(PUBLISHED_MODELS[3], 0.0) == 0.0653

    def test_intercept_exact(self):
        for model in PUBLISHED_MODELS.values():
            assert evaluate_model(model, 0.0) == model.coefficients[0]

    def test_vectorised(self):
        out = evaluate_model(PUBLISHED_MODELS[1], np.array([0.0, 10.0]))
        np.testing.assert_allclose(out, [-0.065, 0.824])

    def test_order(self):
        assert PUBLISHED_MODELS[4].order == 4

    def test_published_selection(self):
        best = min(PUBLISHED_ERRORS, key=lambda o: PUBLISHED_ERRORS[o][1])
        assert best == 3
        assert set(PUBLISHED_ERRORS) == set(PUBLISHED_MODELS)

    def test_describe(self):
        assert describe_model(PUBLISHED_MODELS[1]) == "f=-0.065+0.0889v"
        assert describe_model(PUBLISHED_MODELS[2]) == "f=-0.0301+0.0737v+0.0012v^2"

    def test_order_zero_rejected(self):
        with pytest.raises(UsageError):
            PolynomialModel((1.0,))

    def test_unknown_units(self):
        with pytest.raises(UsageError):
            PolynomialModel((0.0, 1.0), signal_units="amps")


class TestDataset:
    """Tests for CalibrationDataset"""

    def test_length_mismatch(self):
        with pytest.raises(DataError):
            CalibrationDataset(signals=[1.0, 2.0], forces=[0.1])

    def test_with_folds(self):
        data = synthetic_dataset(PUBLISHED_MODELS[1], SIGNALS).with_folds(5, seed=1)
        assert np.bincount(data.fold_ids).tolist() == [20] * 5

    def test_to_frame(self):
        data = CalibrationDataset(signals=[1.0], forces=[0.2], weights_gw=[20.0])
        assert list(data.to_frame().columns) == ["v", "force_n", "weight_gw"]


class TestKFold:
    """Tests for kfold_split function"""

    def test_five_folds_of_twenty(self):
        folds = kfold_split(100, k=5, seed=0)
        assert np.bincount(folds).tolist() == [20] * 5

    def test_deterministic(self):
        np.testing.assert_array_equal(kfold_split(100, 5, seed=9), kfold_split(100, 5, seed=9))

    def test_partition_balanced(self):
        folds = kfold_split(7, k=3, seed=2)
        sizes = np.bincount(folds, minlength=3)
        assert sizes.sum() == 7
        assert sizes.max() - sizes.min() <= 1

    def test_k_too_small(self):
        with pytest.raises(UsageError):
            kfold_split(10, k=1)

    def test_too_few_samples(self):
        with pytest.raises(UsageError):
            kfold_split(3, k=5)


class TestCrossValidate:
    """Tests for cross_validate function"""

    def test_noise_free_line(self):
        data = synthetic_dataset(PolynomialModel((0.0, 0.1)), SIGNALS)
        report = cross_validate(data, orders=(1, 2, 3), repeats=2, seed=0)
        assert report.test_rmse[0] < 1e-9
        assert np.all(report.train_rmse < 1e-9)
        assert report.selected_order == 1

    def test_lowest_order_wins_ties(self):
        data = synthetic_dataset(PolynomialModel((0.1, 0.05, 0.01)), SIGNALS)
        report = cross_validate(data, orders=(1, 2, 3, 4), repeats=2, seed=0)
        assert report.selected_order == 2

    def test_training_error_non_increasing_on_fixed_split(self):
        data = synthetic_dataset(PUBLISHED_MODELS[1], SIGNALS, noise_sigma=0.09, seed=11)
        is_test = kfold_split(data, 5, seed=5) == 0
        v, f = data.signals[~is_test], data.forces[~is_test]
        errors = [rmse(evaluate_model(fit_polynomial(v, f, o), v), f) for o in range(1, 6)]
        assert np.all(np.diff(errors) <= 1e-10)

    @pytest.mark.slow
    def test_noisy_scale(self):
        data = synthetic_dataset(PUBLISHED_MODELS[1], SIGNALS, noise_sigma=0.09, seed=0)
        report = cross_validate(data, orders=(1, 2, 3, 4, 5), repeats=20, seed=0)
        assert 0.07 <= report.test_rmse[report.orders.index(report.selected_order)] <= 0.13
        assert report.model.order == report.selected_order
        assert set(report.models) == {1, 2, 3, 4, 5}

    def test_deterministic(self):
        data = synthetic_dataset(PUBLISHED_MODELS[1], SIGNALS, noise_sigma=0.09, seed=0)
        a = cross_validate(data, repeats=3, seed=42)
        b = cross_validate(data, repeats=3, seed=42)
        np.testing.assert_array_equal(a.test_rmse, b.test_rmse)
        assert a.model == b.model

    def test_strict_uses_one_fold(self):
        data = synthetic_dataset(PUBLISHED_MODELS[1], SIGNALS, noise_sigma=0.09, seed=0)
        report = cross_validate(data, orders=(1,), repeats=3, seed=1, strict_paper_cv=True)
        assert report.strict_paper_cv
        assert report.test_rmse.shape == (1,)

        rng = np.random.default_rng(1)
        fold_zero = []
        for _ in range(3):
            is_test = kfold_split(data, 5, rng) == 0
            model = fit_polynomial(data.signals[~is_test], data.forces[~is_test], 1)
            fold_zero.append(rmse(evaluate_model(model, data.signals[is_test]), data.forces[is_test]))
        assert report.test_rmse[0] == pytest.approx(np.mean(fold_zero), rel=1e-12)

        rotated = cross_validate(data, orders=(1,), repeats=3, seed=1)
        assert rotated.test_rmse[0] != pytest.approx(report.test_rmse[0], rel=1e-9)

    def test_underdetermined_dataset(self):
        data = CalibrationDataset(signals=[1.0, 2.0, 3.0], forces=[0.1, 0.2, 0.3])
        with pytest.raises(UnderdeterminedFitError):
            cross_validate(data, orders=(1, 2, 3, 4, 5), k=2)

    def test_singular_fold_reports_order(self):
        signals = np.array([1.0] * 10 + [2.0])
        data = CalibrationDataset(signals=signals, forces=signals * 0.1)
        with pytest.raises(SingularFitError) as info:
            cross_validate(data, orders=(1,), repeats=5, k=5, seed=0)
        assert info.value.order == 1

    def test_report_table(self):
        data = synthetic_dataset(PUBLISHED_MODELS[1], SIGNALS, noise_sigma=0.09, seed=0)
        report = cross_validate(data, orders=(1, 2), repeats=2, seed=0)
        frame = report.to_frame()
        assert list(frame.columns) == ["order", "model", "train_rmse_n", "test_rmse_n", "selected"]
        assert frame["selected"].sum() == 1
        text = format_fit_report(report)
        assert text.startswith("k=5 repeats=2 seed=0")
        assert "f=" in text
