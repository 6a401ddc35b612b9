"""Monte Carlo engine and report emitters.

Runs both agreement protocols over the correlated source, the
unique-covering experiment, uniformity audits of codebooks, and the
analytic tables (bounds grid, baseline-advantage curve). The command
line in `cli` is a thin wrapper over the functions here.

Randomness discipline: trial t always draws from stream(seed, t), so a
trial's bits depend only on (seed, t) and never on scheduling. Trials
are processed in fixed blocks of TRIAL_BLOCK; with several workers the
blocks are farmed out in order and reduced by counting, which keeps
reports byte-identical for every worker count (wall_time aside). The
reserved stream id CODEBOOK_STREAM (2^64 - 1, never a trial index)
seeds fresh codebook sampling, so a run's codebook is reproducible from
the seed alone.

Sequential stopping: when stop_after_agreements is set, the run ends at
the exact trial where that agreement count is reached (or at the trials
cap), and the estimate uses the trials consumed. The stopped estimate
is slightly biased; at a stopping target of 1000 events the relative
bias is of order 1/1000 and is ignored.

Output-distribution checks: outputs are tallied when 2^k is at most
2^20; the chi-square statistic is reported only when the expected count
per class is at least 5, otherwise the field is null.
"""

from __future__ import annotations

import csv
import io
import json
import math
import multiprocessing
import time
from dataclasses import dataclass
from functools import partial
from pathlib import Path

import numpy as np

from ._kernels import cover_scan, decode_pair_words
from .bounds import (
    bound_report,
    covering_target,
    extraction_ratio,
    inverse_gaussian_tail,
    radius,
)
from .errors import InvariantViolation, ResourceCapError, ValidationError
from .fourier import (
    AGREEMENT_DIMENSION_CAP,
    TruthTable,
    agreement_class_probabilities,
    check_geometric,
    check_hypercontractive,
    check_indicator_stability,
    correlated_expectation,
)
from .protocol import (
    DECODE_DIMENSION_CAP,
    AffineCode,
    exhaustive_decode_table,
    load_code,
    sample_affine_code,
    save_code,
)
from .source import NoiseParam, pair_words, stream

__all__ = [
    "TRIAL_BLOCK",
    "CODEBOOK_STREAM",
    "DEFAULT_K_GRID",
    "DEFAULT_EPSILON_GRID",
    "SimulationConfig",
    "SimulationReport",
    "CoveringReport",
    "AuditReport",
    "default_dimension",
    "fresh_codebook",
    "wilson_interval",
    "run_simulation",
    "unique_covering_experiment",
    "uniformity_audit",
    "run_fourier_sweeps",
    "emit_bounds_table",
    "emit_figure1",
    "simulation_report_dict",
    "covering_report_dict",
    "audit_report_dict",
    "bounds_table_dict",
    "figure1_dict",
    "report_json",
    "report_csv",
    "bounds_table_csv",
    "figure1_csv",
]

TRIAL_BLOCK = 2048
CODEBOOK_STREAM = 2 ** 64 - 1
DEFAULT_K_GRID = (8, 12, 16, 20, 24)
DEFAULT_EPSILON_GRID = (0.05, 0.1, 0.25, 0.4, 0.5)

_COUNT_BIT_CAP = 20  # tally outputs only while the count array stays small
_MIN_EXPECTED = 5.0  # chi-square needs this many expected hits per class


def default_dimension(k: int) -> int:
    """Ambient length used when none is requested: 64 k, a multiple of 64."""
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    return 64 * k


def fresh_codebook(n: int, k: int, seed: int) -> AffineCode:
    """The codebook a run with this seed samples when given no file."""
    return sample_affine_code(n, k, stream(seed, CODEBOOK_STREAM))


def wilson_interval(successes: int, trials: int) -> tuple[float, float]:
    """95% Wilson score interval; always contains successes/trials."""
    if trials < 1 or not 0 <= successes <= trials:
        raise ValidationError("need 0 <= successes <= trials, trials >= 1")
    z = inverse_gaussian_tail(0.025)
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2.0 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denom
    low = max(0.0, center - half)
    high = min(1.0, center + half)
    # the score interval touches the point estimate exactly at 0 and 1;
    # pin those endpoints so rounding cannot push them past it
    if successes == 0:
        low = 0.0
    if successes == trials:
        high = 1.0
    return low, high


def _chi_square_uniform(counts: np.ndarray) -> tuple[float, float]:
    from scipy.stats import chi2

    total = int(counts.sum())
    m = counts.size
    expected = total / m
    stat = float(((counts - expected) ** 2 / expected).sum())
    return stat, float(chi2.sf(stat, m - 1))


# ---- protocol simulation ----


@dataclass(frozen=True)
class SimulationConfig:
    """One simulation run: which protocol, at what size, how many trials."""

    n: int
    k: int
    epsilon: float
    trials: int
    seed: int
    protocol: str = "affine"
    codebook_path: str | None = None
    workers: int = 1
    stop_after_agreements: int | None = None

    def __post_init__(self):
        NoiseParam(self.epsilon)
        if self.protocol not in ("trivial", "affine"):
            raise ValidationError(f"unknown protocol {self.protocol!r}")
        if self.k < 1 or self.n < self.k:
            raise ValidationError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.protocol == "affine" and self.k > DECODE_DIMENSION_CAP:
            raise ResourceCapError(
                f"k={self.k} exceeds the enumeration decoding cap of {DECODE_DIMENSION_CAP}"
            )
        if self.trials < 1:
            raise ValidationError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValidationError("seed must be an unsigned 64-bit value")
        if self.workers < 1:
            raise ValidationError(f"workers must be >= 1, got {self.workers}")
        if self.stop_after_agreements is not None and self.stop_after_agreements < 1:
            raise ValidationError("stop_after_agreements must be >= 1 when set")


@dataclass(frozen=True)
class SimulationReport:
    """Counts, estimate with interval, analytic references, output checks."""

    config: SimulationConfig
    agreements: int
    trials: int
    estimate: float
    wilson_ci_95: tuple[float, float]
    trivial_reference: float
    upper_bound_ref: float
    lower_bound_ref: float | None
    chi_square_outputs: tuple[float, float] | None
    chi_square_agreed_outputs: tuple[float, float] | None
    wall_time: float

    def __post_init__(self):
        if not 0 <= self.agreements <= self.trials:
            raise InvariantViolation("agreement count outside [0, trials]")
        if self.estimate != self.agreements / self.trials:
            raise InvariantViolation("estimate must equal agreements/trials")
        low, high = self.wilson_ci_95
        if not low <= self.estimate <= high:
            raise InvariantViolation("interval must contain the point estimate")


def _low_bits_equal(xw: np.ndarray, yw: np.ndarray, k: int) -> bool:
    full, rem = divmod(k, 64)
    for j in range(full):
        if xw[j] != yw[j]:
            return False
    if rem:
        mask = np.uint64((1 << rem) - 1)
        if (xw[full] ^ yw[full]) & mask:
            return False
    return True


def _simulate_block(args: tuple, block: int):
    seed, n, k, eps, protocol, basis, offset, trials, count_outputs = args
    start = block * TRIAL_BLOCK
    m = min(TRIAL_BLOCK, trials - start)
    noise = NoiseParam(eps)
    flags = np.zeros(m, dtype=bool)
    outputs = np.zeros(m, dtype=np.int64) if count_outputs else None
    if protocol == "trivial":
        out_mask = (1 << k) - 1
        for i in range(m):
            rng = stream(seed, start + i)
            xw, yw = pair_words(n, noise, rng)
            flags[i] = _low_bits_equal(xw, yw, k)
            if count_outputs:
                outputs[i] = int(xw[0]) & out_mask
    else:
        for i in range(m):
            rng = stream(seed, start + i)
            xw, yw = pair_words(n, noise, rng)
            zx, zy = decode_pair_words(basis, xw ^ offset, yw ^ offset)
            flags[i] = zx == zy
            if count_outputs:
                outputs[i] = zx
    return m, int(flags.sum()), flags, outputs


def _block_stream(fn, n_blocks: int, workers: int):
    if workers <= 1:
        for b in range(n_blocks):
            yield fn(b)
        return
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(workers) as pool:
        yield from pool.imap(fn, range(n_blocks), chunksize=1)


def _resolve_codebook(config: SimulationConfig) -> AffineCode | None:
    if config.protocol != "affine":
        return None
    if config.codebook_path is not None:
        path = Path(config.codebook_path)
        if path.exists():
            code = load_code(path)
            if code.n != config.n or code.k != config.k:
                raise ValidationError(
                    f"codebook has (n, k) = ({code.n}, {code.k}), "
                    f"run wants ({config.n}, {config.k})"
                )
            return code
        code = fresh_codebook(config.n, config.k, config.seed)
        save_code(code, path)
        return code
    return fresh_codebook(config.n, config.k, config.seed)


def run_simulation(config: SimulationConfig, code: AffineCode | None = None) -> SimulationReport:
    """Estimate the agreement probability of one protocol by simulation.

    For the affine protocol the codebook comes from, in order: the
    `code` argument, the codebook_path (loaded if present, sampled and
    persisted if not), or a fresh sample from the reserved stream. The
    report is deterministic in (config, seed) apart from wall_time.
    """
    t_start = time.perf_counter()
    if code is not None:
        if config.protocol != "affine":
            raise ValidationError("an explicit codebook requires the affine protocol")
        if code.n != config.n or code.k != config.k:
            raise ValidationError(
                f"codebook has (n, k) = ({code.n}, {code.k}), "
                f"run wants ({config.n}, {config.k})"
            )
    else:
        code = _resolve_codebook(config)
    count_outputs = config.k <= _COUNT_BIT_CAP
    args = (
        config.seed,
        config.n,
        config.k,
        config.epsilon,
        config.protocol,
        code.basis_words if code is not None else None,
        code.offset_words if code is not None else None,
        config.trials,
        count_outputs,
    )
    fn = partial(_simulate_block, args)
    n_blocks = -(-config.trials // TRIAL_BLOCK)
    stop = config.stop_after_agreements
    bins = 1 << config.k if count_outputs else 0
    counts = np.zeros(bins, dtype=np.int64) if count_outputs else None
    agreed_counts = np.zeros(bins, dtype=np.int64) if count_outputs else None
    trials_done = 0
    agreements = 0
    for m, block_agreements, flags, outputs in _block_stream(fn, n_blocks, config.workers):
        if stop is not None and agreements + block_agreements >= stop:
            need = stop - agreements
            cut = int(np.flatnonzero(flags)[need - 1]) + 1
            m, block_agreements = cut, need
            flags = flags[:cut]
            if outputs is not None:
                outputs = outputs[:cut]
        trials_done += m
        agreements += block_agreements
        if counts is not None:
            counts += np.bincount(outputs, minlength=bins)
            agreed_counts += np.bincount(outputs[flags], minlength=bins)
        if stop is not None and agreements >= stop:
            break
    refs = bound_report(config.k, config.epsilon)
    chi = chi_agreed = None
    if counts is not None and trials_done >= _MIN_EXPECTED * bins:
        chi = _chi_square_uniform(counts)
    if agreed_counts is not None and agreements >= _MIN_EXPECTED * bins:
        chi_agreed = _chi_square_uniform(agreed_counts)
    return SimulationReport(
        config=config,
        agreements=agreements,
        trials=trials_done,
        estimate=agreements / trials_done,
        wilson_ci_95=wilson_interval(agreements, trials_done),
        trivial_reference=refs.trivial,
        upper_bound_ref=refs.upper,
        lower_bound_ref=refs.lower,
        chi_square_outputs=chi,
        chi_square_agreed_outputs=chi_agreed,
        wall_time=time.perf_counter() - t_start,
    )


# ---- unique covering ----


@dataclass(frozen=True)
class CoveringReport:
    """Frequency of the both-parties-uniquely-covered event vs its target."""

    n: int
    k: int
    epsilon: float
    trials: int
    seed: int
    unique_cover_events: int
    estimate: float
    analytic_target: float
    radius: float
    wall_time: float

    def __post_init__(self):
        if not 0.0 <= self.estimate <= 1.0:
            raise InvariantViolation("estimate must lie in [0, 1]")


def _covering_block(args: tuple, block: int):
    seed, n, k, eps, trials, r_int = args
    start = block * TRIAL_BLOCK
    m = min(TRIAL_BLOCK, trials - start)
    noise = NoiseParam(eps)
    events = 0
    for i in range(m):
        rng = stream(seed, start + i)
        code = sample_affine_code(n, k, rng)
        xw, yw = pair_words(n, noise, rng)
        ow = code.offset_words
        cx, cov_x, cy, cov_y, zx, zy = cover_scan(
            code.basis_words, xw ^ ow, yw ^ ow, r_int
        )
        if cx == 1 and cy == 1 and cov_x == cov_y:
            if not zx == zy == cov_x:
                raise InvariantViolation(
                    "unique covering must force both decoders onto the covering codeword"
                )
            events += 1
    return m, events


def unique_covering_experiment(
    n: int, k: int, epsilon: float, trials: int, seed: int, workers: int = 1
) -> CoveringReport:
    """Per trial: fresh codebook, fresh pair; count both-uniquely-covered.

    The covering radius is the low-weight cutoff from the bounds module.
    Whenever the event fires, both decoders provably land on the covering
    codeword; that is asserted per trial and a failure aborts the run.
    The estimate is reported next to the analytic large-n target.
    """
    NoiseParam(epsilon)
    if k < 1 or n < k:
        raise ValidationError(f"need 1 <= k <= n, got k={k}, n={n}")
    if k > DECODE_DIMENSION_CAP:
        raise ResourceCapError(
            f"k={k} exceeds the enumeration decoding cap of {DECODE_DIMENSION_CAP}"
        )
    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials}")
    if not 0 <= seed < 2 ** 64:
        raise ValidationError("seed must be an unsigned 64-bit value")
    t_start = time.perf_counter()
    r = radius(n, k)
    args = (seed, n, k, epsilon, trials, int(math.floor(r)))
    fn = partial(_covering_block, args)
    n_blocks = -(-trials // TRIAL_BLOCK)
    events = 0
    for m, block_events in _block_stream(fn, n_blocks, workers):
        events += block_events
    return CoveringReport(
        n=n,
        k=k,
        epsilon=epsilon,
        trials=trials,
        seed=seed,
        unique_cover_events=events,
        estimate=events / trials,
        analytic_target=covering_target(k, epsilon),
        radius=r,
        wall_time=time.perf_counter() - t_start,
    )


# ---- uniformity audits ----


@dataclass(frozen=True)
class AuditReport:
    """Output-distribution audit of one codebook, exact or sampled."""

    mode: str
    n: int
    k: int
    epsilon: float | None
    class_count: int
    expected_count: int | None
    marginal_counts_min: int | None
    marginal_counts_max: int | None
    conditional_max_deviation: float | None
    draws: int | None
    agreements: int | None
    chi_square_outputs: tuple[float, float] | None
    chi_square_agreed_outputs: tuple[float, float] | None
    wall_time: float


def uniformity_audit(
    code: AffineCode,
    sample_count: int | None = None,
    exhaustive: bool | None = None,
    epsilon: float | None = None,
    seed: int = 0,
    workers: int = 1,
) -> AuditReport:
    """Check that decoder outputs are uniform, marginally and on agreement.

    Exhaustive mode (n <= 14; the default there) enumerates every input:
    each of the 2^k classes must have exactly 2^(n-k) preimages, and a
    miss raises InvariantViolation since the decoder guarantees equal
    class sizes. Given eps (and n <= 12) it also computes the exact
    agreement-conditioned distribution and reports its largest deviation
    from 2^(-k), which is pure float error.

    Sampled mode simulates sample_count pairs (eps defaults to 0.1) and
    reports the chi-square statistics for the marginal and the
    agreement-conditioned output distributions.
    """
    t_start = time.perf_counter()
    if exhaustive is None:
        exhaustive = code.n <= 14 and sample_count is None
    if exhaustive:
        if code.n > 14:
            raise ValidationError(f"exhaustive audit needs n <= 14, got n={code.n}")
        table = exhaustive_decode_table(code)
        counts = np.bincount(table, minlength=2 ** code.k)
        expected = 2 ** (code.n - code.k)
        if counts.min() != expected or counts.max() != expected:
            raise InvariantViolation(
                f"output classes are not balanced: counts range "
                f"[{counts.min()}, {counts.max()}], expected {expected}"
            )
        conditional_dev = None
        if epsilon is not None and code.n <= AGREEMENT_DIMENSION_CAP:
            per_class = agreement_class_probabilities(
                table.astype(np.int64), table.astype(np.int64), code.k, NoiseParam(epsilon)
            )
            conditional = per_class / per_class.sum()
            conditional_dev = float(np.abs(conditional - 2.0 ** -code.k).max())
        return AuditReport(
            mode="exhaustive",
            n=code.n,
            k=code.k,
            epsilon=epsilon,
            class_count=2 ** code.k,
            expected_count=expected,
            marginal_counts_min=int(counts.min()),
            marginal_counts_max=int(counts.max()),
            conditional_max_deviation=conditional_dev,
            draws=None,
            agreements=None,
            chi_square_outputs=None,
            chi_square_agreed_outputs=None,
            wall_time=time.perf_counter() - t_start,
        )
    if sample_count is None:
        sample_count = 10 ** 6
    eps = 0.1 if epsilon is None else epsilon
    sim = run_simulation(
        SimulationConfig(
            n=code.n,
            k=code.k,
            epsilon=eps,
            trials=sample_count,
            seed=seed,
            protocol="affine",
            workers=workers,
        ),
        code=code,
    )
    return AuditReport(
        mode="sampled",
        n=code.n,
        k=code.k,
        epsilon=eps,
        class_count=2 ** code.k,
        expected_count=None,
        marginal_counts_min=None,
        marginal_counts_max=None,
        conditional_max_deviation=None,
        draws=sim.trials,
        agreements=sim.agreements,
        chi_square_outputs=sim.chi_square_outputs,
        chi_square_agreed_outputs=sim.chi_square_agreed_outputs,
        wall_time=time.perf_counter() - t_start,
    )


# ---- analytic sweeps and tables ----


def run_fourier_sweeps(
    functions_per_check: int = 100,
    seed: int = 0,
    dimensions: tuple[int, ...] = (4, 6, 8),
    epsilons: tuple[float, ...] = DEFAULT_EPSILON_GRID,
) -> dict:
    """Hammer the spectral inequalities and identities with random tables.

    For every (n, eps) on the grid: the product-form identity for
    E[f(x) g(y)] is compared against the explicit double sum; the
    geometric, indicator-stability, and hypercontractive inequalities are
    checked with slack 1e-10. Any failure raises InvariantViolation;
    otherwise the worst margins are returned for inspection.
    """
    if functions_per_check < 1:
        raise ValidationError("functions_per_check must be >= 1")
    equality_err = 0.0
    worst = {"geometric": -math.inf, "indicator": -math.inf, "hyper": -math.inf}

    def note(name, lhs, rhs):
        gap = lhs - rhs
        if gap > worst[name]:
            worst[name] = gap
        if gap > 1e-10:
            raise InvariantViolation(f"{name} check failed: lhs {lhs} > rhs {rhs}")

    rng = stream(seed, CODEBOOK_STREAM - 1)
    for n in dimensions:
        size = 2 ** n
        xs = np.arange(size, dtype=np.uint64)
        dist = np.bitwise_count(xs[:, None] ^ xs[None, :]).astype(np.float64)
        for eps in epsilons:
            noise = NoiseParam(eps)
            pair_weight = eps ** dist * (1.0 - eps) ** (n - dist) / size
            for _ in range(functions_per_check):
                f = TruthTable(n, rng.normal(size=size))
                g = TruthTable(n, rng.normal(size=size))
                spectral = correlated_expectation(f, g, noise)
                direct = float(f.values @ pair_weight @ g.values)
                err = abs(spectral - direct)
                equality_err = max(equality_err, err)
                if err > 1e-10:
                    raise InvariantViolation(
                        f"product-form identity broke at n={n}, eps={eps}: "
                        f"{spectral} vs {direct}"
                    )
                note("geometric", *check_geometric(f, g, noise))
                indicator = TruthTable(
                    n, (rng.random(size) < rng.random()).astype(np.float64)
                )
                note("indicator", *check_indicator_stability(indicator, noise))
                nonneg = TruthTable(n, np.abs(rng.normal(size=size)))
                note("hyper", *check_hypercontractive(nonneg, noise.rho))
    return {
        "functions_per_check": functions_per_check,
        "dimensions": list(dimensions),
        "epsilons": list(epsilons),
        "equality_max_error": equality_err,
        "geometric_worst_margin": worst["geometric"],
        "indicator_worst_margin": worst["indicator"],
        "hyper_worst_margin": worst["hyper"],
        "all_passed": True,
    }


def emit_bounds_table(k_list=None, epsilon_list=None) -> list:
    """Bound values over a (k, eps) grid, k outermost."""
    if k_list is None:
        k_list = DEFAULT_K_GRID
    if epsilon_list is None:
        epsilon_list = DEFAULT_EPSILON_GRID
    return [bound_report(k, eps) for k in k_list for eps in epsilon_list]


def emit_figure1(epsilon_grid: np.ndarray | None = None) -> np.ndarray:
    """(eps, advantage cap) pairs; the curve falls from 1/ln 2 to 1."""
    if epsilon_grid is None:
        epsilon_grid = np.geomspace(1e-4, 0.5, 200)
    grid = np.asarray(epsilon_grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size < 1:
        raise ValidationError("epsilon grid must be a nonempty 1-d array")
    if grid.min() <= 0.0 or grid.max() > 0.5:
        raise ValidationError("epsilon grid must lie within (0, 1/2]")
    ratios = np.array([extraction_ratio(float(e)) for e in grid])
    return np.column_stack([grid, ratios])


# ---- serialization ----


def _real(x: float) -> str:
    return f"{x:.17g}"


def _chi_dict(chi: tuple[float, float] | None):
    if chi is None:
        return None
    return {"statistic": chi[0], "p_value": chi[1]}


def simulation_report_dict(report: SimulationReport) -> dict:
    c = report.config
    return {
        "config": {
            "n": c.n,
            "k": c.k,
            "epsilon": c.epsilon,
            "trials": c.trials,
            "seed": c.seed,
            "protocol": c.protocol,
            "codebook_path": c.codebook_path,
            "stop_after_agreements": c.stop_after_agreements,
        },
        "results": {
            "agreements": report.agreements,
            "trials": report.trials,
            "estimate": report.estimate,
            "wilson_ci_95": list(report.wilson_ci_95),
            "wall_time": report.wall_time,
        },
        "bounds": {
            "trivial_reference": report.trivial_reference,
            "upper_bound_ref": report.upper_bound_ref,
            "lower_bound_ref": report.lower_bound_ref,
        },
        "checks": {
            "chi_square_outputs": _chi_dict(report.chi_square_outputs),
            "chi_square_agreed_outputs": _chi_dict(report.chi_square_agreed_outputs),
        },
    }


def covering_report_dict(report: CoveringReport) -> dict:
    return {
        "config": {
            "n": report.n,
            "k": report.k,
            "epsilon": report.epsilon,
            "trials": report.trials,
            "seed": report.seed,
        },
        "results": {
            "unique_cover_events": report.unique_cover_events,
            "estimate": report.estimate,
            "wall_time": report.wall_time,
        },
        "bounds": {
            "analytic_target": report.analytic_target,
            "radius": report.radius,
        },
        "checks": {"covering_implies_agreement": True},
    }


def audit_report_dict(report: AuditReport) -> dict:
    return {
        "config": {
            "mode": report.mode,
            "n": report.n,
            "k": report.k,
            "epsilon": report.epsilon,
        },
        "results": {
            "class_count": report.class_count,
            "expected_count": report.expected_count,
            "marginal_counts_min": report.marginal_counts_min,
            "marginal_counts_max": report.marginal_counts_max,
            "conditional_max_deviation": report.conditional_max_deviation,
            "draws": report.draws,
            "agreements": report.agreements,
            "wall_time": report.wall_time,
        },
        "bounds": {},
        "checks": {
            "chi_square_outputs": _chi_dict(report.chi_square_outputs),
            "chi_square_agreed_outputs": _chi_dict(report.chi_square_agreed_outputs),
        },
    }


def bounds_table_dict(reports: list, k_list=None, epsilon_list=None) -> dict:
    rows = [
        {
            "k": r.k,
            "epsilon": r.epsilon,
            "trivial": r.trivial,
            "upper": r.upper,
            "lower": r.lower,
            "t": r.t,
            "condition_met": r.condition_met,
        }
        for r in reports
    ]
    return {
        "config": {
            "k_list": list(k_list) if k_list is not None else list(DEFAULT_K_GRID),
            "epsilon_list": (
                list(epsilon_list) if epsilon_list is not None else list(DEFAULT_EPSILON_GRID)
            ),
        },
        "results": {"rows": rows},
        "bounds": {},
        "checks": {},
    }


def figure1_dict(points: np.ndarray) -> dict:
    return {
        "config": {"points": int(points.shape[0])},
        "results": {"rows": [[float(e), float(r)] for e, r in points]},
        "bounds": {},
        "checks": {},
    }


def report_json(payload: dict) -> str:
    """Canonical JSON text: sorted keys, two-space indent, one trailing newline."""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _flatten(payload: dict) -> list[tuple[str, object]]:
    items = []
    for section in ("config", "results", "bounds", "checks"):
        for key, value in payload.get(section, {}).items():
            if isinstance(value, dict):
                for sub, v in value.items():
                    items.append((section, f"{key}_{sub}", v))
            elif isinstance(value, (list, tuple)):
                for i, v in enumerate(value):
                    items.append((section, f"{key}_{i}", v))
            else:
                items.append((section, key, value))
    seen: dict[str, int] = {}
    for _, key, _ in items:
        seen[key] = seen.get(key, 0) + 1
    # a name used by two sections gets its section as prefix (e.g. the
    # requested trial cap vs the trials actually consumed)
    return [
        (f"{section}_{key}" if seen[key] > 1 else key, value)
        for section, key, value in items
    ]


def report_csv(payload: dict) -> str:
    """One header row and one data row; empty cells for null fields."""
    items = _flatten(payload)

    def cell(v):
        if v is None:
            return ""
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, float):
            return _real(v)
        return v

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([k for k, _ in items])
    writer.writerow([cell(v) for _, v in items])
    return buf.getvalue()


def bounds_table_csv(reports: list) -> str:
    lines = ["k,epsilon,trivial,upper,lower,t,condition_met"]
    for r in reports:
        lower = "" if r.lower is None else _real(r.lower)
        flag = "true" if r.condition_met else "false"
        lines.append(
            f"{r.k},{_real(r.epsilon)},{_real(r.trivial)},{_real(r.upper)},"
            f"{lower},{_real(r.t)},{flag}"
        )
    return "\n".join(lines) + "\n"


def figure1_csv(points: np.ndarray) -> str:
    lines = ["epsilon,extraction_ratio"]
    for e, ratio in points:
        lines.append(f"{_real(float(e))},{_real(float(ratio))}")
    return "\n".join(lines) + "\n"
