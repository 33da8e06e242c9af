import numpy as np
import pytest

from robustcf.errors import DivergenceError, InvalidInputError, SingularityError
from robustcf.kernel import explicit_kernel_matrix, gaussian_correlation
from robustcf.learner import LearnerParams, objective, solve_filter, train
from robustcf.losses import LossKind
from robustcf.spectral import dft2, gaussian_labels, idft2


def random_instance(rng, size=8):
    features = rng.uniform(-0.5, 0.5, size=(size, size))
    labels = gaussian_labels(size, size, 1.0)
    return features, labels


class TestSolveFilter:
    def test_zero_numerator(self, rng):
        y_hat = dft2(rng.standard_normal((4, 4)))
        k_hat = dft2(np.abs(rng.standard_normal((4, 4))))
        alphaf = solve_filter(y_hat, y_hat, k_hat, 1e-4)
        assert np.max(np.abs(alphaf)) == 0.0

    def test_constant_kernel_is_scalar_division(self, rng):
        y_hat = dft2(rng.standard_normal((4, 4)))
        k_hat = np.full((4, 4), 2.0, dtype=complex)
        alphaf = solve_filter(y_hat, np.zeros_like(y_hat), k_hat, 0.5)
        assert np.allclose(alphaf, y_hat / 2.5)

    def test_singularity_names_bin(self):
        y_hat = np.ones((3, 3), dtype=complex)
        k_hat = np.zeros((3, 3), dtype=complex)
        k_hat += 1.0
        k_hat[1, 2] = -1e-4  # cancels lam exactly
        with pytest.raises(SingularityError, match=r"\(1, 2\)"):
            solve_filter(y_hat, np.zeros_like(y_hat), k_hat, 1e-4)

    def test_shape_mismatch(self):
        with pytest.raises(InvalidInputError):
            solve_filter(np.ones((3, 3)), np.ones((3, 3)), np.ones((3, 4)), 1e-4)

    def test_matches_dense_ridge_solve(self, rng):
        lam = 1e-4
        for _ in range(5):
            features, labels = random_instance(rng)
            corr = gaussian_correlation(features, features, 0.5)
            alphaf = solve_filter(
                dft2(labels), np.zeros_like(corr.k_hat), corr.k_hat, lam
            )
            alpha = idft2(alphaf).ravel()
            dense = explicit_kernel_matrix(features, 0.5)
            direct = np.linalg.solve(dense + lam * np.eye(64), labels.ravel())
            assert np.max(np.abs(alpha - direct)) < 1e-8


class TestTrain:
    def test_l2_is_single_iteration_closed_form(self, rng):
        features, labels = random_instance(rng, size=16)
        result = train(features, labels, LearnerParams(loss=LossKind.L2))
        assert result.iterations == 1
        assert result.converged
        assert np.all(result.residual == 0)
        corr = gaussian_correlation(features, features, 0.5)
        expected = dft2(labels) / (corr.k_hat + 1e-4)
        assert np.array_equal(result.alphaf, expected)

    def test_huge_tau_collapses_to_baseline(self, rng):
        features, labels = random_instance(rng, size=16)
        loose = train(features, labels, LearnerParams(loss=LossKind.L1, tau=1e6))
        base = train(features, labels, LearnerParams(loss=LossKind.L2))
        assert np.all(loose.residual == 0)
        assert np.max(np.abs(loose.alphaf - base.alphaf)) < 1e-12 * np.max(
            np.abs(base.alphaf)
        )

    @pytest.mark.parametrize("loss", list(LossKind))
    def test_converges_with_descending_trace(self, rng, loss):
        features = rng.uniform(-0.5, 0.5, size=(32, 32))
        labels = gaussian_labels(32, 32, 2.0)
        result = train(features, labels, LearnerParams(loss=loss))
        assert result.iterations <= 100
        diffs = np.diff(result.objective_trace)
        assert np.all(diffs <= 1e-9)

    def test_trace_matches_objective_function(self, rng):
        features, labels = random_instance(rng, size=16)
        params = LearnerParams(loss=LossKind.L1, tau=0.05)
        result = train(features, labels, params)
        value = objective(features, labels, result.alphaf, result.residual, params)
        assert value == pytest.approx(result.objective_trace[-1], rel=1e-12)

    def test_divergence_error_carries_trace(self, rng):
        features = rng.uniform(-0.5, 0.5, size=(8, 8))
        labels = np.full((8, 8), 1e200)
        with pytest.raises(DivergenceError) as excinfo:
            train(features, labels, LearnerParams(loss=LossKind.L1))
        assert len(excinfo.value.trace) >= 1

    def test_label_shape_mismatch(self, rng):
        with pytest.raises(InvalidInputError):
            train(rng.standard_normal((8, 8)), np.ones((4, 4)))


class TestObjective:
    def test_empty_model_is_label_energy(self, rng):
        features, labels = random_instance(rng)
        params = LearnerParams(loss=LossKind.L1)
        value = objective(
            features, labels, np.zeros((8, 8), complex), np.zeros((8, 8)), params
        )
        assert value == pytest.approx(float(np.sum(labels**2)))

    def test_matches_dense_ridge_objective(self, rng):
        lam = 1e-4
        params = LearnerParams(loss=LossKind.L2, lam=lam)
        for _ in range(5):
            features, labels = random_instance(rng)
            result = train(features, labels, params)
            dense = explicit_kernel_matrix(features, 0.5)
            alpha = np.linalg.solve(dense + lam * np.eye(64), labels.ravel())
            dense_value = float(
                np.sum((dense @ alpha - labels.ravel()) ** 2)
                + lam * alpha @ dense @ alpha
            )
            fast_value = objective(
                features, labels, result.alphaf, result.residual, params
            )
            assert fast_value == pytest.approx(dense_value, abs=1e-8)

    def test_block_optimality_of_filter_step(self, rng):
        # after the closed-form solve the objective cannot be improved by
        # any other filter, checked against the dense global optimum
        lam = 1e-4
        params = LearnerParams(loss=LossKind.L1, lam=lam, tau=0.1, max_iters=3)
        features, labels = random_instance(rng)
        result = train(features, labels, params)
        dense = explicit_kernel_matrix(features, 0.5)
        target = labels.ravel() - result.residual.ravel()
        best_alpha = np.linalg.solve(dense + lam * np.eye(64), target)
        best_hat = dft2(best_alpha.reshape(8, 8))
        ours = objective(features, labels, result.alphaf, result.residual, params)
        dense_best = objective(features, labels, best_hat, result.residual, params)
        assert ours <= dense_best + 1e-8


class TestDiagnostics:
    def test_dump_and_reload(self, rng, tmp_path):
        import json

        features, labels = random_instance(rng, size=16)
        result = train(features, labels, LearnerParams(loss=LossKind.L1, tau=0.05))
        path = tmp_path / "learning.json"
        from robustcf.learner import dump_diagnostics

        dump_diagnostics(result, path)
        payload = json.loads(path.read_text())
        assert payload["iterations"] == result.iterations
        assert payload["objective_trace"] == result.objective_trace
        assert np.array_equal(np.array(payload["residual"]), result.residual)


class TestLearnerParams:
    def test_validation(self):
        with pytest.raises(InvalidInputError):
            LearnerParams(lam=0.0)
        with pytest.raises(InvalidInputError):
            LearnerParams(tau=-1.0)
        with pytest.raises(InvalidInputError):
            LearnerParams(max_iters=0)
        with pytest.raises(InvalidInputError):
            LearnerParams(rel_tol=0.0)

    def test_loss_coercion(self):
        assert LearnerParams(loss="l21").loss is LossKind.L21
