"""Whole-system checks tying the simulator to its analytic references.

The slowest tests in the suite live here; together they take a few
minutes on one core. Each one exercises a capability end to end
instead of a single function: exhaustive uniformity, oracle agreement,
the analytic cap, spectral inequality sweeps, tail arithmetic, the
sequential low-rate regime, covering consistency at scale, the
extraction ratio curve, and byte-level reproducibility of reports.
"""

import json
import math
import time

import numpy as np
import pytest

from corrbits import (
    DEFAULT_EPSILON_GRID,
    DEFAULT_K_GRID,
    NoiseParam,
    SimulationConfig,
    bound_report,
    emit_figure1,
    exact_agreement_probability,
    exhaustive_decode_table,
    fresh_codebook,
    gaussian_upper_tail,
    inverse_gaussian_tail,
    run_fourier_sweeps,
    run_simulation,
    tail_sandwich,
    threshold_t,
    uniformity_audit,
    unique_covering_experiment,
)
from corrbits.cli import main


def wald_sigma(estimate: float, trials: int) -> float:
    return math.sqrt(estimate * (1.0 - estimate) / trials)


class TestExactUniformity:
    def test_twenty_codebooks_partition_the_cube_evenly(self):
        started = time.perf_counter()
        for seed in range(20):
            code = fresh_codebook(12, 3, seed=seed)
            report = uniformity_audit(code, epsilon=0.2)
            assert report.class_count == 8
            assert report.marginal_counts_min == 512
            assert report.marginal_counts_max == 512
            assert report.conditional_max_deviation <= 1e-12
        assert time.perf_counter() - started < 30.0


class TestOracleEquivalence:
    def test_spectral_value_equals_direct_pair_sum(self):
        rng = np.random.default_rng(404)
        for _ in range(50):
            n = int(rng.choice([4, 6, 8]))
            k = int(rng.integers(1, 4))
            eps = float(rng.choice([0.05, 0.1, 0.25, 0.4, 0.5]))
            size = 1 << n
            f = rng.integers(0, 1 << k, size=size)
            g = rng.integers(0, 1 << k, size=size)
            spectral = exact_agreement_probability(f, g, k, NoiseParam(eps))

            xs = np.arange(size)
            dist = np.bitwise_count(xs[:, None] ^ xs[None, :])
            weights = eps**dist * (1.0 - eps) ** (n - dist) / size
            direct = sum(
                float(weights[np.ix_(f == z, g == z)].sum())
                for z in range(1 << k)
            )
            assert spectral == pytest.approx(direct, abs=1e-10)

    def test_monte_carlo_converges_to_the_exact_value(self):
        for seed in range(5):
            code = fresh_codebook(10, 2, seed=100 + seed)
            table = exhaustive_decode_table(code)
            exact = exact_agreement_probability(table, table, 2, NoiseParam(0.2))
            config = SimulationConfig(
                n=10, k=2, epsilon=0.2, trials=10**6, seed=seed
            )
            report = run_simulation(config, code=code)
            assert abs(report.estimate - exact) <= 3 * wald_sigma(exact, report.trials)


class TestAgreementCap:
    # Trial counts sized for one core: enumeration decoding is
    # exponential in k, so the widest points get the fewest trials.
    AFFINE_TRIALS = {8: 2000, 12: 2000, 16: 2000, 20: 200, 24: 20}

    def test_no_protocol_beats_the_cap_on_the_default_grid(self):
        for k in DEFAULT_K_GRID:
            for eps in DEFAULT_EPSILON_GRID:
                cap = bound_report(k, eps).upper

                trivial = run_simulation(
                    SimulationConfig(
                        n=k, k=k, epsilon=eps, trials=100_000,
                        seed=17, protocol="trivial",
                    )
                )
                slack = 3 * wald_sigma(trivial.estimate, trivial.trials)
                assert trivial.estimate - slack <= cap

                affine = run_simulation(
                    SimulationConfig(
                        n=32 * k, k=k, epsilon=eps,
                        trials=self.AFFINE_TRIALS[k], seed=17,
                    )
                )
                slack = 3 * wald_sigma(affine.estimate, affine.trials)
                assert affine.estimate - slack <= cap

    def test_cap_is_tight_for_independent_observations(self):
        config = SimulationConfig(
            n=2, k=2, epsilon=0.5, trials=100_000, seed=23, protocol="trivial"
        )
        report = run_simulation(config)
        assert report.upper_bound_ref == pytest.approx(0.25)
        low, high = report.wilson_ci_95
        assert low <= 0.25 <= high


def test_spectral_inequality_sweeps_pass():
    started = time.perf_counter()
    result = run_fourier_sweeps(functions_per_check=100, seed=0)
    assert result["all_passed"] is True
    assert result["equality_max_error"] <= 1e-10
    assert result["geometric_worst_margin"] >= -1e-10
    assert result["indicator_worst_margin"] >= -1e-10
    assert result["hyper_worst_margin"] >= -1e-10
    assert time.perf_counter() - started < 180.0


class TestTailArithmetic:
    def test_quantile_stays_inside_the_elementary_bracket(self):
        started = time.perf_counter()
        for k in range(10, 65):
            t = threshold_t(k)
            assert math.sqrt(k * math.log(2)) <= t <= math.sqrt(2 * k)
        assert time.perf_counter() - started < 3.0

    def test_tail_bracket_and_inverse_round_trip(self):
        for y in np.linspace(0.3, 8.0, 20):
            low, high = tail_sandwich(float(y))
            q = gaussian_upper_tail(float(y))
            assert low <= q <= high
        for p in np.geomspace(1e-18, 0.4, 20):
            back = gaussian_upper_tail(inverse_gaussian_tail(float(p)))
            assert abs(back - p) / p < 1e-9


def test_sequential_low_rate_run_lands_between_the_bounds():
    config = SimulationConfig(
        n=512, k=16, epsilon=0.25, trials=10**7, seed=31,
        stop_after_agreements=1000,
    )
    report = run_simulation(config)
    assert report.agreements == 1000
    assert report.lower_bound_ref is not None
    slack = 3 * wald_sigma(report.estimate, report.trials)
    assert report.estimate + slack >= report.lower_bound_ref
    assert report.estimate - slack <= report.upper_bound_ref


def test_unique_covering_implies_decoder_agreement_at_scale():
    # Every event is checked against both decoders inside the run and
    # any mismatch raises; finishing with events observed is the proof.
    report = unique_covering_experiment(512, 12, 0.25, trials=100_000, seed=41)
    assert report.trials == 100_000
    assert report.unique_cover_events > 0
    assert 0.0 <= report.estimate <= 1.0
    assert report.analytic_target > 0.0


def test_extraction_curve_shape_and_endpoints():
    curve = emit_figure1()
    ratios = curve[:, 1]
    assert np.all(np.diff(ratios) < 0)
    assert abs(ratios[0] - 1.4427) < 1e-4
    assert abs(ratios[-1] - 1.0) < 1e-4


class TestWorkerCountInvisibility:
    @staticmethod
    def run_cli(capsys, argv):
        rc = main(argv)
        out = capsys.readouterr().out
        assert rc == 0
        return [line for line in out.splitlines() if "wall_time" not in line]

    def test_simulate_reports_are_byte_identical(self, capsys):
        base = ["simulate", "--k", "6", "--n", "96", "--eps", "0.2",
                "--trials", "6000", "--seed", "13"]
        single = self.run_cli(capsys, base + ["--workers", "1"])
        multi = self.run_cli(capsys, base + ["--workers", "2"])
        assert single == multi

    def test_cover_reports_are_byte_identical(self, capsys):
        base = ["cover", "--k", "4", "--n", "64", "--eps", "0.25",
                "--trials", "4000", "--seed", "13"]
        single = self.run_cli(capsys, base + ["--workers", "1"])
        multi = self.run_cli(capsys, base + ["--workers", "2"])
        assert single == multi

    def test_sampled_audit_reports_are_byte_identical(self, capsys, tmp_path):
        book = tmp_path / "book.afc"
        rc = main(["codegen", "--k", "4", "--n", "64", "--out", str(book)])
        capsys.readouterr()
        assert rc == 0
        base = ["audit", "--codebook", str(book), "--eps", "0.1",
                "--trials", "4000", "--seed", "13"]
        single = self.run_cli(capsys, base + ["--workers", "1"])
        multi = self.run_cli(capsys, base + ["--workers", "2"])
        assert single == multi
