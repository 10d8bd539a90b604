"""Tests for the cross-validation experiment runner and CSV emitters."""

import math

import numpy as np
import pytest

from momentclf import (
    ClassMoments,
    Dataset,
    ExperimentConfig,
    GaussianSpec,
    LineSearchConfig,
    emit_report,
    emit_trace,
    gd_backtracking,
    run_experiment,
    save_libsvm,
    save_moments,
    std_normal_cdf,
)
from momentclf.harness import METHODS, REPORT_HEADER, TRACE_HEADER
from momentclf.objectives import ObjectiveEval


@pytest.fixture(scope="module")
def bayes_files(tmp_path_factory):
    """LIBSVM file + exact-moments sidecar for a d=2 shared-covariance problem.

    Means at +-e1 with identity covariance: the Bayes accuracy is phi(1).
    """
    tmp = tmp_path_factory.mktemp("bayes")
    rng = np.random.default_rng(1234)
    n = 10_000
    X_pos = rng.standard_normal((n // 2, 2)) + np.array([1.0, 0.0])
    X_neg = rng.standard_normal((n // 2, 2)) + np.array([-1.0, 0.0])
    ds = Dataset(
        features=np.vstack([X_pos, X_neg]),
        labels=np.concatenate([np.ones(n // 2, dtype=int), -np.ones(n // 2, dtype=int)]),
    )
    data_path = tmp / "bayes.libsvm"
    save_libsvm(ds, data_path)
    truth = ClassMoments(
        np.array([1.0, 0.0]), np.array([-1.0, 0.0]), np.eye(2), np.eye(2), 0.5, 0.5
    )
    sidecar = tmp / "bayes.moments"
    save_moments(truth, sidecar)
    return data_path, sidecar


class TestConfigValidation:
    def test_unknown_method_rejected(self):
        with pytest.raises(ValueError):
            ExperimentConfig(method="perceptron", data=GaussianSpec(d=2, n=20, prior_pos=0.5))

    def test_methods_constant_lists_all_five(self):
        assert set(METHODS) == {"error-direct", "auc-direct", "logistic", "hinge", "lda"}

    def test_exact_source_needs_generator_or_sidecar(self):
        with pytest.raises(ValueError):
            ExperimentConfig(method="error-direct", data="some/file.libsvm", moment_source="exact")

    def test_exact_source_allowed_for_generator(self):
        cfg = ExperimentConfig(
            method="error-direct",
            data=GaussianSpec(d=2, n=40, prior_pos=0.5),
            moment_source="exact",
        )
        assert cfg.moment_source == "exact"

    def test_normalize_conflicts_with_per_fold(self):
        with pytest.raises(ValueError):
            ExperimentConfig(
                method="lda",
                data=GaussianSpec(d=2, n=40, prior_pos=0.5),
                normalize=True,
                per_fold_norm=True,
            )

    def test_unknown_moment_source_rejected(self):
        with pytest.raises(ValueError):
            ExperimentConfig(
                method="error-direct",
                data=GaussianSpec(d=2, n=40, prior_pos=0.5),
                moment_source="oracle",
            )


class TestRunExperiment:
    def test_lda_reaches_bayes_rate(self, bayes_files):
        data_path, _ = bayes_files
        report = run_experiment(ExperimentConfig(method="lda", data=str(data_path), seed=5))
        assert len(report.runs) == 20  # folds=5 x repeats=4
        bayes = std_normal_cdf(1.0)
        assert abs(report.mean_accuracy - bayes) <= 0.02

    def test_exact_error_direct_at_least_matches_lda(self, bayes_files):
        data_path, sidecar = bayes_files
        lda = run_experiment(ExperimentConfig(method="lda", data=str(data_path), seed=5))
        err = run_experiment(
            ExperimentConfig(
                method="error-direct",
                data=str(data_path),
                moment_source="exact",
                moments_path=str(sidecar),
                seed=5,
            )
        )
        assert err.mean_accuracy >= lda.mean_accuracy

    def test_direct_method_collects_traces(self, bayes_files):
        data_path, _ = bayes_files
        report = run_experiment(
            ExperimentConfig(
                method="error-direct", data=str(data_path), folds=2, repeats=1, seed=0
            )
        )
        assert len(report.traces) == 2
        assert all(t.iterations >= 1 for t in report.traces)

    def test_generator_source_runs_all_methods(self):
        spec = GaussianSpec(d=3, n=200, prior_pos=0.5, seed=8)
        for method in METHODS:
            report = run_experiment(
                ExperimentConfig(method=method, data=spec, folds=2, repeats=1, seed=1)
            )
            assert len(report.runs) == 2
            assert all(not r.failed for r in report.runs)

    def test_runs_ordered_by_repeat_then_fold(self):
        spec = GaussianSpec(d=2, n=60, prior_pos=0.5, seed=2)
        report = run_experiment(
            ExperimentConfig(method="lda", data=spec, folds=3, repeats=2, seed=4)
        )
        order = [(r.repeat, r.fold) for r in report.runs]
        assert order == sorted(order)
        assert [r.run for r in report.runs] == list(range(6))

    def test_failed_folds_are_reported_not_raised(self, tmp_path):
        rng = np.random.default_rng(7)
        ds = Dataset(
            features=rng.normal(size=(30, 2)),
            labels=np.concatenate([np.ones(26, dtype=int), -np.ones(4, dtype=int)]),
        )
        path = tmp_path / "scarce.libsvm"
        save_libsvm(ds, path)
        report = run_experiment(
            ExperimentConfig(
                method="error-direct", data=str(path), folds=5, repeats=2, seed=3
            )
        )
        failed = [r for r in report.runs if r.failed]
        completed = [r for r in report.runs if not r.failed]
        assert failed and completed
        assert all(r.reason for r in failed)
        assert all(r.accuracy is None for r in failed)
        # aggregates come from completed runs only
        manual = sum(r.accuracy for r in completed) / len(completed)
        assert abs(report.mean_accuracy - manual) <= 1e-15

    def test_deterministic_given_seed(self):
        spec = GaussianSpec(d=3, n=120, prior_pos=0.5, seed=10)
        cfg = ExperimentConfig(method="error-direct", data=spec, folds=3, repeats=2, seed=11)
        a = run_experiment(cfg)
        b = run_experiment(cfg)
        assert [r.accuracy for r in a.runs] == [r.accuracy for r in b.runs]
        assert [r.auc for r in a.runs] == [r.auc for r in b.runs]

    def test_exact_moments_from_generator_truth(self):
        spec = GaussianSpec(d=3, n=200, prior_pos=0.5, seed=12)
        report = run_experiment(
            ExperimentConfig(
                method="auc-direct", data=spec, moment_source="exact", folds=2, repeats=1, seed=6
            )
        )
        assert all(not r.failed for r in report.runs)


class TestEmitReport:
    def test_header_and_row_arithmetic(self, tmp_path):
        spec = GaussianSpec(d=2, n=80, prior_pos=0.5, seed=14)
        report = run_experiment(
            ExperimentConfig(method="lda", data=spec, folds=5, repeats=4, seed=15)
        )
        out = tmp_path / "report.csv"
        emit_report(report, out)
        lines = out.read_text().splitlines()
        assert lines[0] == REPORT_HEADER
        assert len(lines) == 1 + 20 + 1  # header, runs, summary

    def test_reparsed_aggregates_match(self, tmp_path):
        spec = GaussianSpec(d=2, n=80, prior_pos=0.5, seed=14)
        report = run_experiment(
            ExperimentConfig(method="lda", data=spec, folds=4, repeats=3, seed=16)
        )
        out = tmp_path / "report.csv"
        emit_report(report, out)
        lines = out.read_text().splitlines()
        accs = []
        aucs = []
        for row in lines[1:-1]:
            parts = row.split(",")
            accs.append(float(parts[5]))
            aucs.append(float(parts[6]))
        summary = lines[-1].split(",")
        assert len(summary) == 7
        assert abs(float(summary[2]) - sum(accs) / len(accs)) <= 1e-12
        mean = sum(accs) / len(accs)
        std = math.sqrt(sum((a - mean) ** 2 for a in accs) / (len(accs) - 1))
        assert abs(float(summary[3]) - std) <= 1e-12
        assert abs(float(summary[4]) - sum(aucs) / len(aucs)) <= 1e-12
        assert abs(float(summary[2]) - report.mean_accuracy) <= 1e-15

    def test_failed_rows_have_empty_metrics_and_reason(self, tmp_path):
        rng = np.random.default_rng(7)
        ds = Dataset(
            features=rng.normal(size=(30, 2)),
            labels=np.concatenate([np.ones(26, dtype=int), -np.ones(4, dtype=int)]),
        )
        path = tmp_path / "scarce.libsvm"
        save_libsvm(ds, path)
        report = run_experiment(
            ExperimentConfig(method="error-direct", data=str(path), folds=5, repeats=2, seed=3)
        )
        out = tmp_path / "scarce.csv"
        emit_report(report, out)
        failed_rows = [
            row for row in out.read_text().splitlines()[1:-1] if row.split(",")[5] == ""
        ]
        assert failed_rows
        for row in failed_rows:
            parts = row.split(",")
            assert parts[6] == "" and parts[7] == ""
            assert parts[8] != ""

    def test_byte_identical_reports_modulo_timing(self, tmp_path):
        spec = GaussianSpec(d=3, n=120, prior_pos=0.5, seed=10)
        cfg = ExperimentConfig(method="error-direct", data=spec, folds=3, repeats=2, seed=11)

        def masked(path):
            rows = []
            lines = path.read_text().splitlines()
            for row in lines[1:-1]:
                parts = row.split(",")
                parts[7] = "MASK"
                rows.append(",".join(parts))
            summary = lines[-1].split(",")
            summary[6] = "MASK"
            rows.append(",".join(summary))
            return "\n".join([lines[0]] + rows)

        p1 = tmp_path / "a.csv"
        p2 = tmp_path / "b.csv"
        emit_report(run_experiment(cfg), p1)
        emit_report(run_experiment(cfg), p2)
        assert masked(p1) == masked(p2)

    def test_unwritable_path_raises(self, tmp_path):
        spec = GaussianSpec(d=2, n=40, prior_pos=0.5, seed=17)
        report = run_experiment(
            ExperimentConfig(method="lda", data=spec, folds=2, repeats=1, seed=18)
        )
        with pytest.raises(OSError):
            emit_report(report, tmp_path / "missing" / "deep" / "report.csv")


class TestEmitTrace:
    def _fifty_iteration_trace(self):
        def quartic(w):
            x = float(w[0])
            return ObjectiveEval(value=x**4, gradient=np.array([4.0 * x**3]))

        cfg = LineSearchConfig(max_iters=50, grad_tol_rel=1e-300)
        _, trace = gd_backtracking(quartic, np.array([1.5]), cfg)
        assert trace.iterations == 50
        return trace

    def test_row_count_and_header(self, tmp_path):
        trace = self._fifty_iteration_trace()
        out = tmp_path / "trace.csv"
        emit_trace(trace, out)
        lines = out.read_text().splitlines()
        assert lines[0] == TRACE_HEADER
        assert len(lines) == 51

    def test_iter_strictly_increasing_objective_nonincreasing(self, tmp_path):
        trace = self._fifty_iteration_trace()
        out = tmp_path / "trace.csv"
        emit_trace(trace, out)
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        iters = [int(r[0]) for r in rows]
        values = [float(r[1]) for r in rows]
        assert iters == list(range(1, 51))
        assert all(a >= b for a, b in zip(values, values[1:]))

    def test_armijo_replay_from_csv_rows(self, tmp_path):
        trace = self._fifty_iteration_trace()
        out = tmp_path / "trace.csv"
        emit_trace(trace, out)
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        c = LineSearchConfig().c
        for prev, cur in zip(rows, rows[1:]):
            prev_value = float(prev[1])
            prev_gnorm = float(prev[2])
            step = float(cur[3])
            assert float(cur[1]) <= prev_value - step * (c * prev_gnorm * prev_gnorm)

    def test_unwritable_path_raises(self, tmp_path):
        trace = self._fifty_iteration_trace()
        with pytest.raises(OSError):
            emit_trace(trace, tmp_path / "no_dir" / "trace.csv")
