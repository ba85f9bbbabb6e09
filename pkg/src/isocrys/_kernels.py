"""Hot arithmetic kernels for matrices over (Z/p^N)[x]/(g)[t]/(t^T).

A matrix over the ring is an array of shape ``(rows, cols, T, f)``: entry
``[i, j, k, d]`` is the coefficient of ``t^k x^d``.  Two storage modes exist:

* ``int64`` whenever the modulus is below ``2**42``.  Products are formed with
  a limb split so no intermediate exceeds 63 bits.
* ``object`` (Python integers) for larger moduli.

The int64 path has a numba implementation and a pure-numpy one.  Numba is used
unless ``ISOCRYS_NO_NUMBA`` is set to a non-empty value other than ``0``, or
numba cannot be imported.
"""

from __future__ import annotations

import os

import numpy as np

INT64_MODULUS_LIMIT = 1 << 42
_LIMB_BITS = 14
_LIMB_MASK = (1 << _LIMB_BITS) - 1

_flag = os.environ.get("ISOCRYS_NO_NUMBA", "")
_NUMBA_REQUESTED = _flag in ("", "0")

try:
    if not _NUMBA_REQUESTED:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAVE_NUMBA = False


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


def storage_dtype(modulus: int):
    return np.int64 if modulus < INT64_MODULUS_LIMIT else object


# --------------------------------------------------------------------------
# pure numpy path

def _dot_mod_int64(X, Y, m):
    """(X @ Y) mod m for int64 operands reduced mod m < 2**42."""
    out = np.zeros((X.shape[0], Y.shape[1]), dtype=np.int64)
    shift = 0
    Yr = Y.copy()
    while True:
        limb = Yr & _LIMB_MASK
        part = (X @ limb) % m
        for _ in range(shift):
            part = (part << _LIMB_BITS) % m
        out = (out + part) % m
        Yr >>= _LIMB_BITS
        shift += 1
        if not Yr.any():
            break
    return out


def dot_mod(X, Y, m):
    if X.dtype == object or Y.dtype == object:
        return (X.astype(object) @ Y.astype(object)) % m
    if X.shape[1] > 128:
        # split the contraction so limb sums stay below 2**63
        acc = np.zeros((X.shape[0], Y.shape[1]), dtype=np.int64)
        for s in range(0, X.shape[1], 128):
            acc = (acc + _dot_mod_int64(X[:, s:s + 128], Y[s:s + 128], m)) % m
        return acc
    return _dot_mod_int64(X, Y, m)


def _ring_matmul_numpy(A, B, red, m):
    h, k, T, f = A.shape
    l = B.shape[1]
    full = np.zeros((h, l, T, 2 * f - 1), dtype=A.dtype)
    Bflat = B.reshape(k, l * T * f)
    for t1 in range(T):
        for x1 in range(f):
            a = A[:, :, t1, x1]
            if not a.any():
                continue
            prod = dot_mod(a, Bflat, m).reshape(h, l, T, f)
            full[:, :, t1:, x1:x1 + f] += prod[:, :, :T - t1, :]
            full[:, :, t1:, x1:x1 + f] %= m
    return _reduce_numpy(full, red, m)


def _reduce_numpy(full, red, m):
    f = full.shape[-1] // 2 + 1
    low = full[..., :f]
    if f == 1:
        return low % m
    high = full[..., f:]
    shp = high.shape
    folded = dot_mod(high.reshape(-1, f - 1), red, m).reshape(shp[:-1] + (f,))
    return (low + folded) % m


# --------------------------------------------------------------------------
# numba path

if HAVE_NUMBA:

    @njit(cache=True)
    def _mulmod(a, b, m):
        # quotient from a double estimate; the remainder is exact under int64 wraparound
        q = np.int64(float(a) * float(b) / float(m))
        r = a * b - q * m
        while r < 0:
            r += m
        while r >= m:
            r -= m
        return r

    @njit(cache=True)
    def _ring_matmul_nb(A, B, red, m):
        h, k, T, f = A.shape
        l = B.shape[1]
        out = np.zeros((h, l, T, f), dtype=np.int64)
        tmp = np.zeros((T, 2 * f - 1), dtype=np.int64)
        for i in range(h):
            for c in range(l):
                tmp[:, :] = 0
                for j in range(k):
                    for t1 in range(T):
                        for x1 in range(f):
                            a = A[i, j, t1, x1]
                            if a == 0:
                                continue
                            for t2 in range(T - t1):
                                for x2 in range(f):
                                    b = B[j, c, t2, x2]
                                    if b == 0:
                                        continue
                                    v = tmp[t1 + t2, x1 + x2] + _mulmod(a, b, m)
                                    if v >= m:
                                        v -= m
                                    tmp[t1 + t2, x1 + x2] = v
                for t in range(T):
                    for d in range(f):
                        out[i, c, t, d] = tmp[t, d]
                    for e in range(f - 1):
                        v = tmp[t, f + e]
                        if v == 0:
                            continue
                        for d in range(f):
                            w = out[i, c, t, d] + _mulmod(v, red[e, d], m)
                            if w >= m:
                                w -= m
                            out[i, c, t, d] = w
        return out


def ring_matmul(A, B, red, m):
    """Product of ring matrices ``A`` (h,k,T,f) and ``B`` (k,l,T,f)."""
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} x {B.shape}")
    if A.dtype == object or B.dtype == object:
        return _ring_matmul_numpy(A.astype(object), B.astype(object), red.astype(object), m)
    if HAVE_NUMBA:
        return _ring_matmul_nb(np.ascontiguousarray(A), np.ascontiguousarray(B),
                               np.ascontiguousarray(red), m)
    return _ring_matmul_numpy(A, B, red, m)


def ring_matmul_numpy(A, B, red, m):
    """The numpy implementation regardless of backend (used by the benchmark)."""
    if A.dtype == object or B.dtype == object:
        return _ring_matmul_numpy(A.astype(object), B.astype(object), red.astype(object), m)
    return _ring_matmul_numpy(A, B, red, m)
