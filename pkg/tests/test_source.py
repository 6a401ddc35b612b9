"""Sampling distribution and determinism tests for the pair source."""

import numpy as np
import pytest
from scipy import stats

from corrbits import ValidationError
from corrbits.source import NoiseParam, flip_channel, random_bitstring, sample_pair, stream


class TestNoiseParam:
    def test_derived_quantities(self):
        p = NoiseParam(0.1)
        assert p.theta == pytest.approx(0.8)
        assert p.rho == pytest.approx(np.sqrt(0.8))
        assert p.rho ** 2 == pytest.approx(p.theta)

    @pytest.mark.parametrize("eps", [-0.01, 0.51, 1.0])
    def test_range_enforced(self, eps):
        with pytest.raises(ValidationError):
            NoiseParam(eps)

    def test_endpoints_allowed(self):
        assert NoiseParam(0.0).rho == 1.0
        assert NoiseParam(0.5).rho == 0.0


class TestDeterminism:
    def test_same_key_same_bits(self):
        a = sample_pair(257, NoiseParam(0.2), stream(42, 7))
        b = sample_pair(257, NoiseParam(0.2), stream(42, 7))
        assert a == b

    def test_distinct_stream_ids_differ(self):
        x1, _ = sample_pair(257, NoiseParam(0.2), stream(42, 7))
        x2, _ = sample_pair(257, NoiseParam(0.2), stream(42, 8))
        assert x1 != x2

    def test_call_sequence_reproduced(self):
        g1, g2 = stream(1, 2), stream(1, 2)
        seq1 = [random_bitstring(31, g1) for _ in range(5)]
        seq2 = [random_bitstring(31, g2) for _ in range(5)]
        assert seq1 == seq2


class TestSamplePair:
    def test_zero_noise_copies(self):
        x, y = sample_pair(400, NoiseParam(0.0), stream(0, 0))
        assert x == y

    def test_half_noise_is_independent(self):
        # per-bit agreement must come out at 1/2 within 3 sigma at 10^6 bits
        rng = stream(3, 0)
        n, reps = 10000, 100
        agree = 0
        for _ in range(reps):
            x, y = sample_pair(n, NoiseParam(0.5), rng)
            agree += n - (x ^ y).weight()
        total = n * reps
        sigma = np.sqrt(total * 0.25)
        assert abs(agree - total / 2) < 3 * sigma

    def test_disagreement_rate(self):
        rng = stream(4, 0)
        n, reps, eps = 10000, 100, 0.1
        flips = 0
        for _ in range(reps):
            x, y = sample_pair(n, NoiseParam(eps), rng)
            flips += (x ^ y).weight()
        total = n * reps
        sigma = np.sqrt(total * eps * (1 - eps))
        assert abs(flips - total * eps) < 3 * sigma

    def test_marginals_uniform(self):
        rng = stream(5, 0)
        n, reps = 4096, 200
        ones_x = ones_y = 0
        for _ in range(reps):
            x, y = sample_pair(n, NoiseParam(0.25), rng)
            ones_x += x.weight()
            ones_y += y.weight()
        total = n * reps
        sigma = np.sqrt(total * 0.25)
        assert abs(ones_x - total / 2) < 3 * sigma
        assert abs(ones_y - total / 2) < 3 * sigma

    def test_pair_frequencies_chi_square(self):
        # composition property: per-position pair frequencies of
        # (00, 01, 10, 11) at 10^6 samples, significance 1e-4
        eps = 0.2
        rng = stream(6, 0)
        n, reps = 10000, 100
        counts = np.zeros(4, dtype=np.int64)
        for _ in range(reps):
            x, y = sample_pair(n, NoiseParam(eps), rng)
            xb, yb = x.bits().astype(np.int64), y.bits().astype(np.int64)
            pair = 2 * xb + yb
            counts += np.bincount(pair, minlength=4)
        total = n * reps
        expected = total * np.array(
            [(1 - eps) / 2, eps / 2, eps / 2, (1 - eps) / 2]
        )
        chi2 = ((counts - expected) ** 2 / expected).sum()
        p = stats.chi2.sf(chi2, df=3)
        assert p > 1e-4


class TestFlipChannel:
    def test_zero_noise_identity(self):
        x = random_bitstring(123, stream(7, 0))
        assert flip_channel(x, NoiseParam(0.0), stream(7, 1)) == x

    def test_out_of_range_rejected(self):
        with pytest.raises(ValidationError):
            NoiseParam(1.0)

    def test_expected_flip_count(self):
        rng = stream(8, 0)
        x = random_bitstring(10000, rng)
        eps = 0.3
        flips = sum(
            (x ^ flip_channel(x, NoiseParam(eps), rng)).weight() for _ in range(100)
        )
        total = 10000 * 100
        sigma = np.sqrt(total * eps * (1 - eps))
        assert abs(flips - total * eps) < 3 * sigma


class TestPairWords:
    @pytest.mark.parametrize("n", [1, 7, 64, 65, 130, 512])
    def test_describes_the_same_draw_as_sample_pair(self, n):
        from corrbits.source import pair_words

        noise = NoiseParam(0.3)
        x, y = sample_pair(n, noise, stream(5, 9))
        xw, yw = pair_words(n, noise, stream(5, 9))
        np.testing.assert_array_equal(xw, x.words())
        np.testing.assert_array_equal(yw, y.words())

    def test_validates_length(self):
        from corrbits.source import pair_words

        with pytest.raises(ValidationError):
            pair_words(0, NoiseParam(0.1), stream(1, 1))
