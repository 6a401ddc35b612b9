"""Closed-form agreement bounds and the Gaussian tail arithmetic behind them.

Conventions and context
-----------------------
Two parties each hold one half of an eps-correlated pair of n-bit
strings and run identical k-bit extractors with no communication.

* The first-k-bits baseline agrees with probability (1 - eps)^k.
* No protocol with (near) uniform k-bit output can beat
  2^(-k eps/(1 - eps)) by more than the slack terms in `upper_bound`.
* The affine-code decoder achieves at least
  0.003 (eps k)^(-1/2) 2^(-k eps/(1 - eps)) once k >= 10 + 2(1-eps)/eps
  and n is large enough; `lower_bound` evaluates that guarantee.

The analysis threshold t(k) is the Gaussian quantile with upper-tail
mass 2^(-k-2), and the covering radius r = n/2 - t sqrt(n)/2 marks the
low-weight ball around a codeword that a uniform string enters with
probability about 2^(-k-2). All tail computations go through
`gaussian_upper_tail`, a thin wrapper over erfc, and its bracketed
Newton inverse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvariantViolation, ValidationError

__all__ = [
    "ConditionError",
    "BoundReport",
    "gaussian_upper_tail",
    "inverse_gaussian_tail",
    "threshold_t",
    "radius",
    "ball_fraction",
    "tail_sandwich",
    "trivial_agreement",
    "upper_bound",
    "lower_bound",
    "minimum_k",
    "covering_target",
    "extraction_ratio",
    "bound_report",
]

_SQRT2 = math.sqrt(2.0)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


class ConditionError(ValidationError):
    """The lower bound's hypothesis k >= 10 + 2(1-eps)/eps fails.

    Carries `min_k`, the smallest k for which the bound applies.
    """

    def __init__(self, k: int, epsilon: float, min_k: int):
        self.min_k = min_k
        super().__init__(
            f"lower bound needs k >= {min_k} at eps={epsilon}, got k={k}"
        )


def _check_eps(epsilon: float, positive: bool = False) -> None:
    lo = 0.0
    if not (lo <= epsilon <= 0.5):
        raise ValidationError(f"eps must lie in [0, 1/2], got {epsilon}")
    if positive and epsilon == 0.0:
        raise ValidationError("eps must be positive here")


def gaussian_upper_tail(y: float) -> float:
    """Q(y) = Pr[Z > y] for standard normal Z, via the complementary error function."""
    return 0.5 * math.erfc(y / _SQRT2)


def _phi(y: float) -> float:
    return math.exp(-0.5 * y * y) / _SQRT_2PI


def inverse_gaussian_tail(p: float) -> float:
    """The y >= 0 with Q(y) = p, for p in (0, 1/2).

    Bracketed Newton iteration with bisection fallback; converges to a
    relative residual below 1e-12. Q is convex and strictly decreasing
    on [0, inf), so the bracket [lo, hi] always contains the root.
    """
    if not (0.0 < p < 0.5):
        raise ValidationError(f"inverse tail needs p in (0, 1/2), got {p}")
    lo, hi = 0.0, 50.0
    # crude starting point from the asymptotic Q(y) ~ phi(y)/y
    y = math.sqrt(max(-2.0 * math.log(2.0 * p), 0.25))
    for _ in range(200):
        q = gaussian_upper_tail(y)
        if q > p:
            lo = y
        else:
            hi = y
        err = q - p
        if abs(err) <= 1e-12 * p:
            return y
        step = err / _phi(y)  # Q' = -phi, Newton moves right when Q > p
        y_new = y + step
        if not (lo < y_new < hi):
            y_new = 0.5 * (lo + hi)
        y = y_new
    return y


def threshold_t(k: int) -> float:
    """Quantile t with Q(t) = 2^(-k-2)."""
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    return inverse_gaussian_tail(2.0 ** (-k - 2))


def radius(n: int, k: int) -> float:
    """Covering radius r = n/2 - t sqrt(n)/2 for the k-output analysis.

    A uniform string falls within Hamming distance r of any fixed point
    with probability approaching 2^(-k-2), so a 2^k-point codebook
    covers a string about 1/4 of the time, making unique covering a
    constant-probability event. The radius is positive only when
    n > t(k)^2; below that there is no useful covering regime.
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    return n / 2.0 - threshold_t(k) * math.sqrt(n) / 2.0


def ball_fraction(n: int, r: float) -> float:
    """Fraction of {0,1}^n within Hamming distance floor(r) of a point.

    Computed as a log-space sum of binomial coefficients so that large n
    cannot overflow.
    """
    if not (0 <= r <= n):
        raise ValidationError(f"need 0 <= r <= n, got r={r}, n={n}")
    ri = math.floor(r)
    if ri >= n:
        return 1.0
    if ri == 0:
        return 2.0 ** (-n)
    log_terms = [
        math.lgamma(n + 1) - math.lgamma(i + 1) - math.lgamma(n - i + 1)
        for i in range(ri + 1)
    ]
    m = max(log_terms)
    s = m + math.log(sum(math.exp(t - m) for t in log_terms))
    return math.exp(s - n * math.log(2.0))


def tail_sandwich(y: float) -> tuple[float, float]:
    """Two-sided elementary bracket for Q(y), valid for y > 0.

    Returns (low, high) with
    low = y/(y^2+1) phi(y) <= Q(y) <= phi(y)/y = high,
    where phi is the standard normal density.
    """
    if y <= 0:
        raise ValidationError(f"sandwich needs y > 0, got {y}")
    core = math.exp(-0.5 * y * y) / _SQRT_2PI
    return (y / (y * y + 1.0)) * core, core / y


def trivial_agreement(k: int, epsilon: float) -> float:
    """Agreement probability (1 - eps)^k of the first-k-bits strategy."""
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    _check_eps(epsilon)
    return (1.0 - epsilon) ** k


def upper_bound(t_entropy: float, epsilon: float, delta: float = 0.0) -> float:
    """Agreement cap 2^(-t eps/(1-eps)) + 2 delta for near-uniform outputs.

    t_entropy is the min-entropy of the output distribution and delta
    its statistical distance from the nearest such distribution; a
    protocol with exactly uniform k-bit output uses t_entropy = k and
    delta = 0. At eps = 0 the cap is vacuous and 1.0 is returned.
    """
    if t_entropy < 0:
        raise ValidationError(f"t_entropy must be >= 0, got {t_entropy}")
    if delta < 0:
        raise ValidationError(f"delta must be >= 0, got {delta}")
    _check_eps(epsilon)
    if epsilon == 0.0:
        return 1.0
    return 2.0 ** (-t_entropy * epsilon / (1.0 - epsilon)) + 2.0 * delta


def minimum_k(epsilon: float) -> int:
    """Smallest k satisfying the lower bound's hypothesis at this eps."""
    _check_eps(epsilon, positive=True)
    return math.ceil(10.0 + 2.0 * (1.0 - epsilon) / epsilon)


def lower_bound(k: int, epsilon: float) -> float:
    """Guaranteed agreement 0.003 (eps k)^(-1/2) 2^(-k eps/(1-eps)).

    Holds for the affine-code decoder on average over codebooks, in the
    large-n regime, provided k >= 10 + 2(1-eps)/eps. Raises
    ConditionError (carrying the minimal k) when the hypothesis fails.
    """
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    _check_eps(epsilon, positive=True)
    min_k = minimum_k(epsilon)
    if k < 10.0 + 2.0 * (1.0 - epsilon) / epsilon:
        raise ConditionError(k, epsilon, min_k)
    return 0.003 / math.sqrt(epsilon * k) * 2.0 ** (-k * epsilon / (1.0 - epsilon))


def covering_target(k: int, epsilon: float) -> float:
    """Analytic target (1/8) Q(sqrt(eps/(1-eps)) t(k)) for unique covering.

    This is the large-n value that the unique-covering experiment's
    estimate is reported against. At eps = 0 the limit Q(0)/8 = 1/16 is
    returned.
    """
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    _check_eps(epsilon)
    if epsilon == 0.0:
        return 1.0 / 16.0
    y = math.sqrt(epsilon / (1.0 - epsilon)) * threshold_t(k)
    return gaussian_upper_tail(y) / 8.0


def extraction_ratio(epsilon: float) -> float:
    """How many times more bits than the baseline any protocol could extract.

    At equal agreement probability the cap is
    ((1 - eps)/eps) log2(1/(1 - eps)), which decreases from 1/ln 2
    (about 1.4427) near eps = 0 down to exactly 1 at eps = 1/2. The
    eps = 0 limit is returned directly.
    """
    _check_eps(epsilon)
    if epsilon == 0.0:
        return 1.0 / math.log(2.0)
    return (1.0 - epsilon) / epsilon * math.log2(1.0 / (1.0 - epsilon))


@dataclass(frozen=True)
class BoundReport:
    """All bound values for one (k, eps) point, with r when n is given."""

    k: int
    epsilon: float
    trivial: float
    upper: float
    lower: float | None
    t: float
    r: float | None
    condition_met: bool

    def __post_init__(self):
        if (self.lower is not None) != self.condition_met:
            raise InvariantViolation("lower bound present iff its condition holds")
        if self.lower is not None and self.lower > self.upper:
            raise InvariantViolation(
                f"lower bound {self.lower} exceeds upper bound {self.upper}"
            )


def bound_report(k: int, epsilon: float, n: int | None = None) -> BoundReport:
    """Evaluate every bound at one grid point."""
    _check_eps(epsilon)
    condition = epsilon > 0.0 and k >= 10.0 + 2.0 * (1.0 - epsilon) / epsilon
    return BoundReport(
        k=k,
        epsilon=epsilon,
        trivial=trivial_agreement(k, epsilon),
        upper=upper_bound(float(k), epsilon, 0.0),
        lower=lower_bound(k, epsilon) if condition else None,
        t=threshold_t(k),
        r=radius(n, k) if n is not None else None,
        condition_met=condition,
    )
