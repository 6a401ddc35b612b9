"""Every output of the affine decoder is exactly equally likely.

The decoder partitions the n-cube into 2^k classes of identical size,
so on a uniform input each k-bit output appears with probability
exactly 2^-k. For small n we can check this by decoding all 2^n
inputs. Conditioned on the two parties agreeing, the shared output is
still uniform; the audit confirms that too, using the exact joint
distribution of a correlated pair.
"""

from corrbits import fresh_codebook, uniformity_audit

N = 12
K = 4

code = fresh_codebook(N, K, seed=2024)
report = uniformity_audit(code, epsilon=0.2)

print(f"decoded all 2^{N} inputs through a random ({N}, {K}) codebook")
print(f"  output classes          {report.class_count}")
print(f"  expected size per class {report.expected_count}")
print(f"  observed sizes          {report.marginal_counts_min} .. {report.marginal_counts_max}")
print(f"  conditional skew        {report.conditional_max_deviation:.3e}")

assert report.marginal_counts_min == report.marginal_counts_max

# The same audit on sampled inputs, for codebooks too large to enumerate.
big = fresh_codebook(256, 8, seed=2024)
sampled = uniformity_audit(big, sample_count=40_000, epsilon=0.2, seed=5)
stat, p = sampled.chi_square_outputs
print()
print(f"sampled audit at n=256, k=8 over {sampled.draws} draws:")
print(f"  chi-square vs uniform over 2^8 outputs: stat {stat:.1f}, p {p:.3f}")
