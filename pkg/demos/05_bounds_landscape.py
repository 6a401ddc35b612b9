"""The bound table and the extraction ratio curve.

For each output length k and disagreement rate eps, three analytic
numbers frame what any zero-communication protocol can do: the
trivial rate (1 - eps)^k, an upper bound 2^(-k eps / (1 - eps)) plus a
vanishing term, and, once k is large enough relative to eps, a lower
bound showing affine codes get within a polynomial factor of the cap.

The second half prints the eps -> (1 - eps) log2(1 / (1 - eps)) / eps
curve: how many of the agreeing bits the baseline wastes. It rises to
1/ln 2 as eps -> 0 and falls to exactly 1 at eps = 1/2.
"""

import numpy as np

from corrbits import emit_bounds_table, emit_figure1

rows = emit_bounds_table(k_list=[8, 16, 24], epsilon_list=[0.05, 0.25, 0.4])

print(f"{'k':>3} {'eps':>5} {'trivial':>12} {'upper':>12} {'lower':>12}")
for row in rows:
    lower = f"{row.lower:.4e}" if row.lower is not None else "--"
    print(
        f"{row.k:>3} {row.epsilon:>5.2f} {row.trivial:>12.4e}"
        f" {row.upper:>12.4e} {lower:>12}"
    )

print()
curve = emit_figure1(np.geomspace(1e-4, 0.5, 9))
print(f"{'eps':>10} {'extraction ratio':>18}")
for eps, ratio in curve:
    print(f"{eps:>10.5f} {ratio:>18.6f}")
print()
print(f"limit at eps -> 0 is 1/ln 2 = {1 / np.log(2):.6f}")
