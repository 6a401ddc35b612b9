"""The two zero-communication extraction strategies and codebook persistence.

The baseline simply keeps the first k bits. The affine-code strategy
fixes a shared codebook C = a + L (a random k-dimensional affine
subspace of {0,1}^n) and decodes an input x to the unique codeword c
minimizing x xor c under the weight-then-tiebreak order; the output is
c's coordinate vector in the stored basis of L. Decoding enumerates all
2^k codewords, which is why k is capped at 24.

Codebook file format (bit exact, little endian):
    magic "AFC1" | n u32 | k u32 | offset ceil(n/8) bytes
    | k basis rows, ceil(n/8) bytes each | crc32 u32 of all prior bytes
The CRC is the usual reflected polynomial 0xEDB88320 (zlib.crc32).
"""

from __future__ import annotations

import io
import struct
import zlib
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import BinaryIO

import numpy as np

from . import _kernels
from .errors import ResourceCapError, ValidationError
from .gf2 import BitString, Gf2Matrix, rank
from .source import random_bitstring

__all__ = [
    "DECODE_DIMENSION_CAP",
    "AffineCode",
    "sample_affine_code",
    "encode",
    "decode",
    "trivial_extract",
    "save_code",
    "load_code",
    "CodebookHeaderError",
    "CodebookTruncationError",
    "CodebookIntegrityError",
    "CodebookRankError",
]

DECODE_DIMENSION_CAP = 24

_MAGIC = b"AFC1"


class CodebookHeaderError(ValidationError):
    """Bad magic bytes, impossible dimensions, or nonzero padding bits."""


class CodebookTruncationError(ValidationError):
    """File length does not match the declared dimensions."""


class CodebookIntegrityError(ValidationError):
    """Checksum mismatch."""


class CodebookRankError(ValidationError):
    """Stored basis rows are linearly dependent."""


@dataclass(frozen=True)
class AffineCode:
    """Codebook C = offset + span(basis) with a full-rank k-row basis."""

    offset: BitString
    basis: Gf2Matrix

    def __post_init__(self):
        n, k = self.offset.n, self.basis.row_count
        if self.basis.n != n:
            raise ValidationError(
                f"offset length {n} and basis length {self.basis.n} differ"
            )
        if not (1 <= k <= n):
            raise ValidationError(f"need 1 <= k <= n, got k={k}, n={n}")
        if rank(self.basis) != k:
            raise CodebookRankError(f"basis rank below {k}")

    @property
    def n(self) -> int:
        return self.offset.n

    @property
    def k(self) -> int:
        return self.basis.row_count

    @cached_property
    def offset_words(self) -> np.ndarray:
        w = self.offset.words()
        w.flags.writeable = False
        return w

    @property
    def basis_words(self) -> np.ndarray:
        return self.basis.word_array


def sample_affine_code(n: int, k: int, rng: np.random.Generator) -> AffineCode:
    """Uniformly random k-dimensional affine code in {0,1}^n.

    The offset is uniform; basis rows are drawn uniformly and any row
    that lands in the span of the earlier ones is redrawn, which leaves
    the basis uniform over full-rank k-tuples. Expected redraws are O(1)
    even at n = k.
    """
    if not 1 <= k <= n:
        raise ValidationError(f"need 1 <= k <= n, got k={k}, n={n}")
    if k > DECODE_DIMENSION_CAP:
        raise ResourceCapError(
            f"k={k} exceeds the enumeration decoding cap of {DECODE_DIMENSION_CAP}"
        )
    offset = random_bitstring(n, rng)
    rows: list[BitString] = []
    reduced: list[int] = []  # echelon form of accepted rows, as ints
    while len(rows) < k:
        cand = random_bitstring(n, rng)
        v = int.from_bytes(cand.payload, "little")
        for p in reduced:
            v = min(v, v ^ p)
        if v == 0:
            continue  # dependent, redraw
        rows.append(cand)
        reduced.append(v)
        reduced.sort(reverse=True)
    return AffineCode(offset=offset, basis=Gf2Matrix(tuple(rows)))


def encode(code: AffineCode, z: BitString) -> BitString:
    """Codeword offset + sum of basis rows selected by z."""
    if z.n != code.k:
        raise ValidationError(f"coordinate length {z.n} differs from k={code.k}")
    words = code.offset_words.copy()
    zbits = z.bits()
    for i in np.nonzero(zbits)[0]:
        words ^= code.basis_words[i]
    return BitString.from_words(words, code.n)


def decode(code: AffineCode, x: BitString) -> BitString:
    """Coordinates of the codeword whose translate of x is order-minimal.

    The order compares Hamming weight first and breaks ties by unsigned
    comparison with bit 0 most significant, so the minimizer is unique
    and the map is a deterministic function of x.
    """
    if x.n != code.n:
        raise ValidationError(f"input length {x.n} differs from n={code.n}")
    if code.k > DECODE_DIMENSION_CAP:
        raise ResourceCapError(
            f"k={code.k} exceeds the enumeration decoding cap of {DECODE_DIMENSION_CAP}"
        )
    v = x.words() ^ code.offset_words
    coords = _kernels.decode_words(code.basis_words, v)
    return BitString.from_bits([(coords >> i) & 1 for i in range(code.k)])


def trivial_extract(x: BitString, k: int) -> BitString:
    """First k bits of x."""
    if not 1 <= k <= x.n:
        raise ValidationError(f"need 1 <= k <= n, got k={k}, n={x.n}")
    return BitString.from_bits(x.bits()[:k])


# ---- persistence ----


def _row_bytes(n: int) -> int:
    return (n + 7) // 8


def save_code(code: AffineCode, destination: str | Path | BinaryIO) -> None:
    """Write the codebook in the AFC1 format described in the module docstring."""
    body = bytearray()
    body += _MAGIC
    body += struct.pack("<II", code.n, code.k)
    body += code.offset.payload
    for row in code.basis.rows:
        body += row.payload
    body += struct.pack("<I", zlib.crc32(bytes(body)))
    if isinstance(destination, (str, Path)):
        Path(destination).write_bytes(bytes(body))
    else:
        destination.write(bytes(body))


def load_code(source: str | Path | BinaryIO | bytes) -> AffineCode:
    """Read and fully validate an AFC1 codebook.

    Raises CodebookHeaderError, CodebookTruncationError,
    CodebookIntegrityError, or CodebookRankError; all are
    ValidationError subclasses.
    """
    if isinstance(source, (str, Path)):
        raw = Path(source).read_bytes()
    elif isinstance(source, bytes):
        raw = source
    else:
        raw = source.read()

    if len(raw) < 12:
        raise CodebookTruncationError(f"file too short: {len(raw)} bytes")
    if raw[:4] != _MAGIC:
        raise CodebookHeaderError(f"bad magic {raw[:4]!r}")
    n, k = struct.unpack("<II", raw[4:12])
    if n < 1 or k < 1 or k > n:
        raise CodebookHeaderError(f"impossible dimensions n={n}, k={k}")
    rb = _row_bytes(n)
    expected = 12 + (k + 1) * rb + 4
    if len(raw) != expected:
        raise CodebookTruncationError(
            f"file has {len(raw)} bytes, format requires {expected} for n={n}, k={k}"
        )
    (stored_crc,) = struct.unpack("<I", raw[-4:])
    if zlib.crc32(raw[:-4]) != stored_crc:
        raise CodebookIntegrityError("checksum mismatch")

    def _bitstring(chunk: bytes) -> BitString:
        try:
            return BitString(n, chunk)
        except ValidationError as exc:
            raise CodebookHeaderError(f"bad row payload: {exc}") from exc

    offset = _bitstring(raw[12 : 12 + rb])
    rows = tuple(
        _bitstring(raw[12 + rb * (i + 1) : 12 + rb * (i + 2)]) for i in range(k)
    )
    matrix = Gf2Matrix(rows)
    if rank(matrix) != k:
        raise CodebookRankError(f"stored basis has rank below {k}")
    return AffineCode(offset=offset, basis=matrix)


def exhaustive_decode_table(code: AffineCode, cap: int = 14) -> np.ndarray:
    """decode() applied to every input, as a uint32 array indexed by input.

    Only for n <= cap (default 14); raises ResourceCapError beyond that.
    Entry x holds the integer whose bit i is coordinate i of the output.
    """
    if code.n > cap:
        raise ResourceCapError(f"exhaustive decoding capped at n <= {cap}, got {code.n}")
    basis_w = np.ascontiguousarray(code.basis_words[:, 0])
    return _kernels.decode_all_single_word(basis_w, code.offset_words[0], code.n)
