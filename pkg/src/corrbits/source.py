"""The correlated pair source and its single-channel form.

A pair (x, y) of n-bit strings is drawn so that each aligned bit pair
takes values 00 or 11 with probability (1 - eps)/2 each and 01 or 10
with probability eps/2 each. Equivalently: x is uniform and y is x sent
through a symmetric channel that flips each bit independently with
probability eps. Only eps in [0, 1/2] is accepted; the analysis in the
rest of the package relies on rho = sqrt(1 - 2 eps) being real.

Randomness is counter based: every consumer derives its stream from a
(seed, stream_id) pair, so trial t can always use stream_id = t and the
results do not depend on how trials are scheduled across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .gf2 import BitString

__all__ = [
    "NoiseParam",
    "stream",
    "sample_pair",
    "pair_words",
    "flip_channel",
    "random_bitstring",
]


@dataclass(frozen=True)
class NoiseParam:
    """Noise rate eps with the derived quantities rho and theta.

    rho = sqrt(1 - 2 eps) is the per-coordinate correlation of the
    +/-1 encoding; theta = rho^2 = 1 - 2 eps.
    """

    epsilon: float

    def __post_init__(self):
        if not (0.0 <= self.epsilon <= 0.5):
            raise ValidationError(f"eps must lie in [0, 1/2], got {self.epsilon}")

    @property
    def theta(self) -> float:
        return 1.0 - 2.0 * self.epsilon

    @property
    def rho(self) -> float:
        return math.sqrt(self.theta)


def stream(seed: int, stream_id: int) -> np.random.Generator:
    """Deterministic generator for one (seed, stream_id) pair.

    Built on the Philox counter-based generator keyed by both values, so
    streams for distinct ids are statistically independent and the same
    pair always reproduces the same bits.
    """
    if not (0 <= seed < 2 ** 64 and 0 <= stream_id < 2 ** 64):
        raise ValidationError("seed and stream_id must be unsigned 64-bit values")
    return np.random.Generator(np.random.Philox(key=np.array([seed, stream_id], dtype=np.uint64)))


def _random_payload(n: int, rng: np.random.Generator) -> bytes:
    nbytes = (n + 7) // 8
    raw = rng.integers(0, 256, size=nbytes, dtype=np.uint8)
    used = n % 8
    if used:
        raw[-1] &= (1 << used) - 1
    return raw.tobytes()


def random_bitstring(n: int, rng: np.random.Generator) -> BitString:
    """Uniform n-bit string."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    return BitString(n, _random_payload(n, rng))


def _noise_mask(n: int, noise: NoiseParam, rng: np.random.Generator) -> bytes:
    flips = rng.random(n) < noise.epsilon
    return np.packbits(flips, bitorder="little").tobytes()[: (n + 7) // 8]


def flip_channel(x: BitString, noise: NoiseParam, rng: np.random.Generator) -> BitString:
    """Flip each bit of x independently with probability eps."""
    return x ^ BitString(x.n, _noise_mask(x.n, noise, rng))


def sample_pair(
    n: int, noise: NoiseParam, rng: np.random.Generator
) -> tuple[BitString, BitString]:
    """One draw of the correlated pair: x uniform, y = x through the channel.

    Per bit this realizes exactly the 00/11 with probability (1 - eps)/2,
    01/10 with probability eps/2 distribution, and both marginals are
    uniform.
    """
    x = random_bitstring(n, rng)
    y = flip_channel(x, noise, rng)
    return x, y


def _bytes_to_words(raw: bytes, n: int) -> np.ndarray:
    word_count = (n + 63) // 64
    buf = np.zeros(word_count * 8, dtype=np.uint8)
    buf[: len(raw)] = np.frombuffer(raw, dtype=np.uint8)
    return buf.view("<u8")


def pair_words(
    n: int, noise: NoiseParam, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """One correlated pair as little-endian uint64 word arrays.

    Consumes the generator exactly like sample_pair, so for a given
    stream both functions describe the same draw. This form skips the
    BitString wrappers and is what the simulation loop uses.
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    x = _random_payload(n, rng)
    mask = _noise_mask(n, noise, rng)
    xw = _bytes_to_words(x, n)
    yw = xw ^ _bytes_to_words(mask, n)
    return xw, yw
