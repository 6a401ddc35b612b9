"""Spectral analysis of functions on correlated inputs.

The workhorse identity: for f, g on n bits and a pair (x, y) that
disagrees per coordinate with probability eps,

    E[f(x) g(y)] = sum over S of fhat(S) ghat(S) (1 - 2 eps)^|S|

where fhat are the Walsh coefficients of f. This script verifies the
identity against a direct sum over all pairs, then exercises the
smoothing operator and two of the inequalities the verify command
sweeps over.
"""

import numpy as np

from corrbits import (
    NoiseParam,
    TruthTable,
    check_geometric,
    check_hypercontractive,
    correlated_expectation,
    exact_agreement_probability,
    noise_operator,
    trivial_extract,
    wht,
)

rng = np.random.default_rng(99)
n = 6
noise = NoiseParam(0.2)

f = TruthTable(n, rng.choice([-1.0, 1.0], size=1 << n))
g = TruthTable(n, rng.choice([-1.0, 1.0], size=1 << n))

# Direct computation: weight each (x, y) by the channel probability.
xs = np.arange(1 << n)
dist = np.bitwise_count(xs[:, None] ^ xs[None, :])
weights = noise.epsilon**dist * (1 - noise.epsilon) ** (n - dist) / (1 << n)
direct = float(f.values @ weights @ g.values)

spectral = correlated_expectation(f, g, noise)
print(f"E[f(x) g(y)]  direct {direct:+.12f}  spectral {spectral:+.12f}")
assert abs(direct - spectral) < 1e-12

# Smoothing damps the S-coefficient by rho^|S|; applying it twice at
# rho1 and rho2 is one application at rho1 * rho2.
smoothed = noise_operator(noise_operator(f, 0.9), 0.7)
once = noise_operator(f, 0.63)
print(f"noise operator composition error {np.max(np.abs(smoothed.values - once.values)):.2e}")

lhs, rhs = check_geometric(f, g, noise)
print(f"cross term {lhs:+.6f} bounded by geometric mean {rhs:.6f}")

h = TruthTable(n, rng.random(1 << n))
lhs, rhs = check_hypercontractive(h, noise.rho)
print(f"smoothed 2-norm {lhs:.6f} bounded by {rhs:.6f}")

# The same machinery computes exact agreement probabilities for whole
# protocols, here first-2-bits against itself.
table = np.arange(1 << n) & 3
exact = exact_agreement_probability(table, table, 2, noise)
print(f"first-2-bits agreement: exact {exact:.10f}  closed form {(1 - noise.epsilon) ** 2:.10f}")

coeffs = wht(f)
print(f"Parseval check: {np.sum(coeffs.coefficients ** 2):.12f} (should be 1 for +-1 f)")
