"""Common-randomness extraction from noise-correlated bit sources.

Two parties see bit strings x and y where each aligned pair of bits
agrees with probability 1 - eps. Without communicating, each applies a
shared decoder to its own string, aiming to land on the same k-bit
output. This package implements the first-k-bits baseline and an
affine-code nearest-point decoder, exact small-n Fourier diagnostics,
the analytic agreement bounds, and a reproducible Monte Carlo harness.
"""

from .bounds import (
    BoundReport,
    ConditionError,
    ball_fraction,
    bound_report,
    covering_target,
    extraction_ratio,
    gaussian_upper_tail,
    inverse_gaussian_tail,
    lower_bound,
    minimum_k,
    radius,
    tail_sandwich,
    threshold_t,
    trivial_agreement,
    upper_bound,
)
from .errors import (
    CorrbitsError,
    InvariantViolation,
    ResourceCapError,
    ValidationError,
)
from .fourier import (
    FourierSpectrum,
    TruthTable,
    agreement_class_probabilities,
    check_geometric,
    check_hypercontractive,
    check_indicator_stability,
    correlated_expectation,
    exact_agreement_probability,
    inverse_wht,
    noise_operator,
    wht,
)
from .gf2 import (
    BitString,
    Gf2Matrix,
    hamming_weight,
    order_less,
    rank,
    solve_coordinates,
    xor,
)
from .harness import (
    DEFAULT_EPSILON_GRID,
    DEFAULT_K_GRID,
    AuditReport,
    CoveringReport,
    SimulationConfig,
    SimulationReport,
    default_dimension,
    emit_bounds_table,
    emit_figure1,
    fresh_codebook,
    run_fourier_sweeps,
    run_simulation,
    uniformity_audit,
    unique_covering_experiment,
    wilson_interval,
)
from .protocol import (
    DECODE_DIMENSION_CAP,
    AffineCode,
    decode,
    encode,
    exhaustive_decode_table,
    load_code,
    sample_affine_code,
    save_code,
    trivial_extract,
)
from .source import (
    NoiseParam,
    flip_channel,
    pair_words,
    random_bitstring,
    sample_pair,
    stream,
)

__version__ = "0.1.0"
