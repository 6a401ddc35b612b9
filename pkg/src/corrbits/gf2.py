"""Packed bit strings and GF(2) linear algebra.

Bit packing convention used everywhere in this package (including the
codebook file format): bit i of a string lives at bit position (i mod 8)
of byte (i div 8), least significant bit first within each byte. Bits
beyond position n-1 in the final byte are always zero.

The strict total order `order_less` compares by Hamming weight first and
breaks ties by comparing the strings as unsigned integers with bit 0 as
the most significant bit. A fixed deterministic rule keeps decoding
reproducible across runs and platforms.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import ValidationError

__all__ = [
    "BitString",
    "Gf2Matrix",
    "xor",
    "hamming_weight",
    "order_less",
    "rank",
    "solve_coordinates",
]


def _tail_mask(n: int) -> int:
    used = n % 8
    return 0xFF if used == 0 else (1 << used) - 1


@dataclass(frozen=True)
class BitString:
    """Fixed-length bit vector, packed 8 bits per byte.

    Parameters
    ----------
    n : int
        Number of bits, n >= 1.
    payload : bytes
        ceil(n/8) bytes in the packing convention above. Padding bits in
        the final byte must be zero; the constructor enforces this.
    """

    n: int
    payload: bytes

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"bit string length must be >= 1, got {self.n}")
        nbytes = (self.n + 7) // 8
        if len(self.payload) != nbytes:
            raise ValidationError(
                f"payload has {len(self.payload)} bytes, expected {nbytes} for n={self.n}"
            )
        if self.payload and (self.payload[-1] & ~_tail_mask(self.n)) != 0:
            raise ValidationError("padding bits beyond position n-1 must be zero")

    # ---- constructors ----

    @classmethod
    def zeros(cls, n: int) -> "BitString":
        return cls(n, bytes((n + 7) // 8))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitString":
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
        if arr.ndim != 1 or arr.size == 0:
            raise ValidationError("from_bits expects a non-empty 1-d sequence of 0/1")
        if not np.all((arr == 0) | (arr == 1)):
            raise ValidationError("bits must be 0 or 1")
        return cls(int(arr.size), np.packbits(arr, bitorder="little").tobytes())

    @classmethod
    def from01(cls, s: str) -> "BitString":
        """Parse a textual bit string, character i giving bit i."""
        return cls.from_bits([int(c) for c in s])

    @classmethod
    def from_words(cls, words: np.ndarray, n: int) -> "BitString":
        """Build from little-endian uint64 words, discarding padding beyond n."""
        raw = np.ascontiguousarray(words, dtype="<u8").tobytes()[: (n + 7) // 8]
        raw = bytearray(raw)
        raw[-1] &= _tail_mask(n)
        return cls(n, bytes(raw))

    # ---- views ----

    def bits(self) -> np.ndarray:
        """The n bits as a uint8 array of 0/1 values."""
        return np.unpackbits(
            np.frombuffer(self.payload, dtype=np.uint8), count=self.n, bitorder="little"
        )

    def words(self) -> np.ndarray:
        """Payload as little-endian uint64 words, zero padded to a word boundary."""
        nw = (self.n + 63) // 64
        buf = np.zeros(nw * 8, dtype=np.uint8)
        buf[: len(self.payload)] = np.frombuffer(self.payload, dtype=np.uint8)
        return buf.view("<u8")

    def to01(self) -> str:
        return "".join("1" if b else "0" for b in self.bits())

    def weight(self) -> int:
        return int(np.bitwise_count(np.frombuffer(self.payload, dtype=np.uint8)).sum())

    def __xor__(self, other: "BitString") -> "BitString":
        if self.n != other.n:
            raise ValidationError(f"length mismatch: {self.n} vs {other.n}")
        a = np.frombuffer(self.payload, dtype=np.uint8)
        b = np.frombuffer(other.payload, dtype=np.uint8)
        return BitString(self.n, (a ^ b).tobytes())

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        body = self.to01() if self.n <= 64 else self.to01()[:61] + "..."
        return f"BitString({self.n}, {body})"


@dataclass(frozen=True)
class Gf2Matrix:
    """A list of equal-length rows treated as a matrix over GF(2)."""

    rows: tuple[BitString, ...]

    def __post_init__(self):
        if not self.rows:
            raise ValidationError("matrix needs at least one row")
        n = self.rows[0].n
        if any(r.n != n for r in self.rows):
            raise ValidationError("all rows must share one length")
        object.__setattr__(self, "rows", tuple(self.rows))

    @property
    def n(self) -> int:
        return self.rows[0].n

    @property
    def row_count(self) -> int:
        return len(self.rows)

    @cached_property
    def word_array(self) -> np.ndarray:
        """Rows stacked as a (row_count, words) uint64 array. Read only."""
        arr = np.stack([r.words() for r in self.rows])
        arr.flags.writeable = False
        return arr


# ---- module-level operations ----


def xor(a: BitString, b: BitString) -> BitString:
    """Bitwise exclusive-or of two equal-length strings."""
    return a ^ b


def hamming_weight(a: BitString) -> int:
    """Number of set bits."""
    return a.weight()


def order_less(a: BitString, b: BitString) -> bool:
    """Strict total order: weight first, then unsigned compare, bit 0 most significant.

    Returns False for equal inputs (the order is strict).
    """
    if a.n != b.n:
        raise ValidationError(f"length mismatch: {a.n} vs {b.n}")
    wa, wb = a.weight(), b.weight()
    if wa != wb:
        return wa < wb
    pa, pb = a.payload, b.payload
    for x, y in zip(pa, pb):
        if x != y:
            d = x ^ y
            lsb = d & (-d)
            # the lowest differing bit index is the most significant
            # position where they differ; whoever has 0 there is smaller
            return (x & lsb) == 0
    return False


def _column_bit(words: np.ndarray, col: int) -> np.ndarray:
    return (words[:, col // 64] >> np.uint64(col % 64)) & np.uint64(1)


def rank(m: Gf2Matrix) -> int:
    """GF(2) row rank by elimination."""
    work = m.word_array.copy()
    k, n = m.row_count, m.n
    r = 0
    for col in range(n):
        if r == k:
            break
        bits = _column_bit(work[r:], col)
        hits = np.nonzero(bits)[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            work[[r, p]] = work[[p, r]]
        below = r + 1 + np.nonzero(_column_bit(work[r + 1 :], col))[0]
        work[below] ^= work[r]
        r += 1
    return r


def solve_coordinates(basis: Gf2Matrix, v: BitString) -> BitString | None:
    """Express v in a full-rank basis.

    Returns z of length row_count with xor of z_i * basis_i equal to v,
    or None when v lies outside the span. The basis must have full rank.
    """
    k, n = basis.row_count, basis.n
    if v.n != n:
        raise ValidationError(f"length mismatch: {v.n} vs {n}")
    work = basis.word_array.copy()
    combos = [1 << i for i in range(k)]  # which original rows sum to work[i]
    pivots: list[tuple[int, int]] = []  # (column, row index in work)
    r = 0
    for col in range(n):
        if r == k:
            break
        bits = _column_bit(work[r:], col)
        hits = np.nonzero(bits)[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            work[[r, p]] = work[[p, r]]
            combos[r], combos[p] = combos[p], combos[r]
        below = r + 1 + np.nonzero(_column_bit(work[r + 1 :], col))[0]
        for j in below:
            work[j] ^= work[r]
            combos[j] ^= combos[r]
        pivots.append((col, r))
        r += 1
    if r < k:
        raise ValidationError(f"basis is rank deficient: rank {r} < {k} rows")

    target = v.words().copy()
    z = 0
    for col, row in pivots:
        if (target[col // 64] >> np.uint64(col % 64)) & np.uint64(1):
            target ^= work[row]
            z ^= combos[row]
    if np.any(target):
        return None
    return BitString.from_bits([(z >> i) & 1 for i in range(k)])
