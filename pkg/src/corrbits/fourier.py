"""Walsh-Hadamard analysis of functions on the Boolean cube, for small n.

A real-valued function on {0,1}^n is stored as a table of 2^n values
indexed by the integer encoding of the point, bit i of the index being
coordinate i (the same little-endian convention as BitString). The
transform is expectation normalized: coefficient S (indexed by its
characteristic mask) is E_x[f(x) (-1)^{popcount(S & x)}], matching the
inner product E[f g] rather than the plain sum.

Under the correlated pair distribution the cross expectation has the
closed form E[f(x) g(y)] = sum_S fhat_S ghat_S theta^{|S|} with
theta = 1 - 2 eps, which is what `correlated_expectation` evaluates.
The three `check_*` functions return (lhs, rhs) pairs for inequalities
that the calling code (tests, the verify subcommand) asserts.

Everything here is exact arithmetic up to float rounding; caps on n
keep table sizes honest (2^20 doubles is 8 MB).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvariantViolation, ResourceCapError, ValidationError
from .source import NoiseParam

__all__ = [
    "TABLE_DIMENSION_CAP",
    "AGREEMENT_DIMENSION_CAP",
    "TruthTable",
    "FourierSpectrum",
    "wht",
    "inverse_wht",
    "noise_operator",
    "correlated_expectation",
    "check_geometric",
    "check_indicator_stability",
    "check_hypercontractive",
    "agreement_class_probabilities",
    "exact_agreement_probability",
]

TABLE_DIMENSION_CAP = 20
AGREEMENT_DIMENSION_CAP = 12


def _check_dimension(n: int, cap: int) -> None:
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if n > cap:
        raise ResourceCapError(f"n={n} exceeds the cap of {cap} for this operation")


@dataclass(frozen=True, eq=False)
class TruthTable:
    """2^n finite real values, one per point of {0,1}^n."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        _check_dimension(self.n, TABLE_DIMENSION_CAP)
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (2 ** self.n,):
            raise ValidationError(
                f"expected {2 ** self.n} values for n={self.n}, got shape {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise ValidationError("table values must be finite")
        object.__setattr__(self, "values", v)

    def mean(self) -> float:
        return float(self.values.mean())


@dataclass(frozen=True, eq=False)
class FourierSpectrum:
    """Expectation-normalized coefficients, indexed by the subset mask."""

    n: int
    coefficients: np.ndarray

    def __post_init__(self):
        _check_dimension(self.n, TABLE_DIMENSION_CAP)
        c = np.asarray(self.coefficients, dtype=np.float64)
        if c.shape != (2 ** self.n,):
            raise ValidationError(
                f"expected {2 ** self.n} coefficients for n={self.n}, got shape {c.shape}"
            )
        object.__setattr__(self, "coefficients", c)


def _butterfly(values: np.ndarray) -> np.ndarray:
    """Unnormalized in-place Walsh-Hadamard transform of a copy."""
    a = values.copy()
    h = 1
    while h < a.size:
        a = a.reshape(-1, 2 * h)
        u = a[:, :h].copy()
        v = a[:, h:].copy()
        a[:, :h] = u + v
        a[:, h:] = u - v
        a = a.reshape(-1)
        h *= 2
    return a


def _subset_sizes(n: int) -> np.ndarray:
    return np.bitwise_count(np.arange(2 ** n, dtype=np.uint64)).astype(np.int64)


def wht(f: TruthTable) -> FourierSpectrum:
    """Transform to coefficients fhat_S = E[f chi_S]."""
    return FourierSpectrum(f.n, _butterfly(f.values) / 2 ** f.n)


def inverse_wht(spec: FourierSpectrum) -> TruthTable:
    """Reconstruct the table: f(x) = sum_S fhat_S chi_S(x)."""
    return TruthTable(spec.n, _butterfly(spec.coefficients))


def noise_operator(f: TruthTable, rho: float) -> TruthTable:
    """Damp coefficient S by rho^{|S|}; rho = 1 is the identity, rho = 0 averages."""
    if not -1.0 <= rho <= 1.0:
        raise ValidationError(f"need |rho| <= 1, got {rho}")
    spec = wht(f)
    damped = spec.coefficients * rho ** _subset_sizes(f.n)
    return inverse_wht(FourierSpectrum(f.n, damped))


def _pair_check(f: TruthTable, g: TruthTable) -> None:
    if f.n != g.n:
        raise ValidationError(f"dimension mismatch: {f.n} vs {g.n}")


def correlated_expectation(f: TruthTable, g: TruthTable, noise: NoiseParam) -> float:
    """E[f(x) g(y)] under the eps-correlated pair, exactly."""
    _pair_check(f, g)
    fh = wht(f).coefficients
    gh = wht(g).coefficients
    return float(np.sum(fh * gh * noise.theta ** _subset_sizes(f.n)))


def check_geometric(
    f: TruthTable, g: TruthTable, noise: NoiseParam
) -> tuple[float, float]:
    """Both sides of E[f(x)g(y)] <= sqrt(E[f(x)f(y)] E[g(x)g(y)]).

    The two self-expectations are sums of squares scaled by nonnegative
    powers of theta, hence nonnegative, so the root is always defined.
    """
    _pair_check(f, g)
    lhs = correlated_expectation(f, g, noise)
    ff = correlated_expectation(f, f, noise)
    gg = correlated_expectation(g, g, noise)
    return lhs, float(np.sqrt(max(ff, 0.0) * max(gg, 0.0)))


def check_indicator_stability(h: TruthTable, noise: NoiseParam) -> tuple[float, float]:
    """Both sides of E[h(x)h(y)] <= E[h]^(1/(1-eps)) for 0/1-valued h."""
    vals = h.values
    if not np.all((vals == 0.0) | (vals == 1.0)):
        raise ValidationError("table must be 0/1 valued")
    lhs = correlated_expectation(h, h, noise)
    rhs = h.mean() ** (1.0 / (1.0 - noise.epsilon))
    return lhs, float(rhs)


def check_hypercontractive(f: TruthTable, rho: float) -> tuple[float, float]:
    """Both sides of E[(T_rho f)^2]^(1/2) <= E[f^(1+rho^2)]^(1/(1+rho^2)).

    Defined for pointwise nonnegative f, where the fractional power is
    real. The left side is evaluated pointwise through the noise
    operator rather than spectrally, so tests can cross-check the two.
    """
    if np.any(f.values < 0.0):
        raise ValidationError("table must be nonnegative")
    if not -1.0 <= rho <= 1.0:
        raise ValidationError(f"need |rho| <= 1, got {rho}")
    smoothed = noise_operator(f, rho)
    lhs = np.sqrt(np.mean(smoothed.values ** 2))
    q = 1.0 + rho * rho
    rhs = np.mean(f.values ** q) ** (1.0 / q)
    return float(lhs), float(rhs)


# ---- exact agreement of k-bit extractors ----


def _check_output_table(table: np.ndarray, n: int, k: int) -> np.ndarray:
    t = np.asarray(table)
    if t.shape != (2 ** n,):
        raise ValidationError(f"output table must have 2^{n} entries, got {t.shape}")
    if not np.issubdtype(t.dtype, np.integer):
        raise ValidationError("output table must be integer valued")
    if t.min() < 0 or t.max() >= 2 ** k:
        raise ValidationError(f"outputs must lie in [0, 2^{k})")
    return t.astype(np.int64)


def agreement_class_probabilities(
    f_map: np.ndarray, g_map: np.ndarray, k: int, noise: NoiseParam
) -> np.ndarray:
    """Pr[f(x) = g(y) = z] for every class z, via per-class spectra.

    f_map and g_map are output tables of length 2^n holding k-bit values
    in the little-endian index convention. Cost is 2^k transforms of
    size 2^n per side, capped at n <= 12.
    """
    n = int(np.log2(len(f_map)))
    _check_dimension(n, AGREEMENT_DIMENSION_CAP)
    f = _check_output_table(f_map, n, k)
    g = _check_output_table(g_map, n, k)
    sizes = _subset_sizes(n)
    weights = noise.theta ** sizes
    out = np.empty(2 ** k)
    scale = 1.0 / 4.0 ** n  # two expectation normalizations folded together
    for z in range(2 ** k):
        fz = _butterfly((f == z).astype(np.float64))
        gz = _butterfly((g == z).astype(np.float64))
        out[z] = np.sum(fz * gz * weights) * scale
    return out


def _direct_agreement(f: np.ndarray, g: np.ndarray, n: int, noise: NoiseParam) -> float:
    """Brute-force pair sum over all (x, y), usable up to n = 8."""
    xs = np.arange(2 ** n, dtype=np.uint64)
    d = np.bitwise_count(xs[:, None] ^ xs[None, :]).astype(np.float64)
    eps = noise.epsilon
    w = eps ** d * (1.0 - eps) ** (n - d) / 2.0 ** n
    return float(np.sum(w * (f[:, None] == g[None, :])))


def exact_agreement_probability(
    f_map: np.ndarray, g_map: np.ndarray, k: int, noise: NoiseParam
) -> float:
    """Exact Pr[f(x) = g(y)] for two k-bit extractors given as output tables.

    Uses the per-class spectral path (n <= 12). Up to n = 8 the brute
    force double sum is also evaluated and the two must agree to 1e-10,
    guarding against indexing mistakes in either path.
    """
    n = int(np.log2(len(f_map)))
    _check_dimension(n, AGREEMENT_DIMENSION_CAP)
    spectral = float(agreement_class_probabilities(f_map, g_map, k, noise).sum())
    if n <= 8:
        f = _check_output_table(f_map, n, k)
        g = _check_output_table(g_map, n, k)
        direct = _direct_agreement(f, g, n, noise)
        if abs(direct - spectral) > 1e-10:
            raise InvariantViolation(
                f"agreement paths disagree: direct {direct} vs spectral {spectral}"
            )
    return spectral
