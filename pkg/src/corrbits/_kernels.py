"""Numba kernels behind the enumeration decoder and covering scans.

The decoder visits all 2^k codewords in Gray-code order: step s flips
exactly one basis row (the count of trailing zeros of s) into a running
translate, so the codebook is never materialized and each step costs a
handful of xors and popcounts on 64-bit words. Popcount compiles to the
llvm.ctpop intrinsic.

All kernels take little-endian uint64 word arrays; padding bits above
position n-1 must be zero (weights would otherwise be wrong).
"""

from __future__ import annotations

import numpy as np
from llvmlite import ir
from numba import njit, types
from numba.extending import intrinsic

_ONE = np.uint64(1)


@intrinsic
def _popcount64(typingctx, x):
    # int64 return avoids unsigned/signed unification surprises in sums
    sig = types.int64(types.uint64)

    def codegen(context, builder, signature, args):
        fn = builder.module.declare_intrinsic("llvm.ctpop", [ir.IntType(64)])
        return builder.zext(builder.call(fn, [args[0]]), ir.IntType(64))

    return sig, codegen


@njit(inline="always")
def _ctz(s):
    # count trailing zeros of a positive int64 via the isolated lowest bit
    return _popcount64(np.uint64((s & -s) - 1))


@njit(inline="always")
def _translate_less(a, b):
    # strict order at equal weight: lowest differing bit index decides,
    # and the string with 0 there is the smaller one
    for j in range(a.size):
        if a[j] != b[j]:
            d = a[j] ^ b[j]
            lsb = d & (~d + _ONE)
            return (a[j] & lsb) == np.uint64(0)
    return False


@njit(cache=True)
def decode_words(basis, v):
    """Coordinates (as an int bit mask) of the weight-order minimizing codeword.

    basis: (k, W) uint64, v: (W,) uint64 holding x xor offset.
    """
    k, W = basis.shape
    cur = v.copy()
    best = v.copy()
    best_w = 0
    for t in range(W):
        best_w += _popcount64(cur[t])
    best_coords = 0
    for s in range(1, 1 << k):
        row = basis[_ctz(s)]
        w = 0
        for t in range(W):
            cur[t] ^= row[t]
            w += _popcount64(cur[t])
        if w < best_w or (w == best_w and _translate_less(cur, best)):
            best_w = w
            best_coords = s ^ (s >> 1)
            for t in range(W):
                best[t] = cur[t]
    return best_coords


@njit(cache=True)
def decode_pair_words(basis, vx, vy):
    """Decode two inputs in one Gray scan (shared basis row traffic)."""
    k, W = basis.shape
    cx = vx.copy()
    cy = vy.copy()
    bx = vx.copy()
    by = vy.copy()
    bwx = 0
    bwy = 0
    for t in range(W):
        bwx += _popcount64(cx[t])
        bwy += _popcount64(cy[t])
    zx = 0
    zy = 0
    for s in range(1, 1 << k):
        row = basis[_ctz(s)]
        wx = 0
        wy = 0
        for t in range(W):
            cx[t] ^= row[t]
            cy[t] ^= row[t]
            wx += _popcount64(cx[t])
            wy += _popcount64(cy[t])
        if wx < bwx or (wx == bwx and _translate_less(cx, bx)):
            bwx = wx
            zx = s ^ (s >> 1)
            for t in range(W):
                bx[t] = cx[t]
        if wy < bwy or (wy == bwy and _translate_less(cy, by)):
            bwy = wy
            zy = s ^ (s >> 1)
            for t in range(W):
                by[t] = cy[t]
    return zx, zy


@njit(cache=True)
def cover_scan(basis, vx, vy, r_int):
    """Covering counts within distance r_int plus full decode, one scan.

    Returns (count_x, cover_x, count_y, cover_y, decode_x, decode_y)
    where cover_* is the coordinate mask of the last codeword within
    distance r_int (meaningful when the matching count is exactly 1).
    """
    k, W = basis.shape
    cx = vx.copy()
    cy = vy.copy()
    bx = vx.copy()
    by = vy.copy()
    bwx = 0
    bwy = 0
    for t in range(W):
        bwx += _popcount64(cx[t])
        bwy += _popcount64(cy[t])
    zx = 0
    zy = 0
    count_x = 0
    count_y = 0
    cover_x = -1
    cover_y = -1
    if bwx <= r_int:
        count_x = 1
        cover_x = 0
    if bwy <= r_int:
        count_y = 1
        cover_y = 0
    for s in range(1, 1 << k):
        row = basis[_ctz(s)]
        wx = 0
        wy = 0
        for t in range(W):
            cx[t] ^= row[t]
            cy[t] ^= row[t]
            wx += _popcount64(cx[t])
            wy += _popcount64(cy[t])
        g = s ^ (s >> 1)
        if wx <= r_int:
            count_x += 1
            cover_x = g
        if wy <= r_int:
            count_y += 1
            cover_y = g
        if wx < bwx or (wx == bwx and _translate_less(cx, bx)):
            bwx = wx
            zx = g
            for t in range(W):
                bx[t] = cx[t]
        if wy < bwy or (wy == bwy and _translate_less(cy, by)):
            bwy = wy
            zy = g
            for t in range(W):
                by[t] = cy[t]
    return count_x, cover_x, count_y, cover_y, zx, zy


@njit(cache=True)
def decode_all_single_word(basis_w, offset_w, n):
    """Decode every input of {0,1}^n at once; only for n <= 14 (W = 1).

    basis_w: (k,) uint64 single-word basis rows. Returns a uint32 array
    indexed by the integer encoding of the input.
    """
    k = basis_w.size
    out = np.empty(1 << n, dtype=np.uint32)
    for xi in range(1 << n):
        v = np.uint64(xi) ^ offset_w
        best = v
        best_w = _popcount64(v)
        best_coords = 0
        cur = v
        for s in range(1, 1 << k):
            cur ^= basis_w[_ctz(s)]
            w = _popcount64(cur)
            take = False
            if w < best_w:
                take = True
            elif w == best_w:
                d = cur ^ best
                lsb = d & (~d + _ONE)
                take = (cur & lsb) == np.uint64(0)
            if take:
                best_w = w
                best = cur
                best_coords = s ^ (s >> 1)
        out[xi] = best_coords
    return out
