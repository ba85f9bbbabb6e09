"""Linear algebra over truncated Witt rings and their residue fields."""

from __future__ import annotations

import itertools

import numpy as np

from .ring import (
    PrecisionError,
    RingElem,
    RingSpec,
    mat_identity,
    mat_mul,
    mat_scale,
    mat_tau,
    mat_zeros,
    valuation_int,
)


def charpoly(spec: RingSpec, A) -> list[RingElem]:
    """Coefficients [1, c_1, ..., c_h] of det(X - A), division free (Berkowitz).

    Works over any commutative ring, in particular Z/p^N with zero divisors.
    """
    A = np.asarray(A)
    n = A.shape[0]
    if n == 0:
        return [RingElem.one(spec)]
    # vectors of ring elements are stored as (len, 1, T, f) column matrices
    q = [RingElem.one(spec), -RingElem(spec, A[0, 0])]
    for r in range(1, n):
        M = A[:r, :r]
        R = A[r:r + 1, :r]
        C = A[:r, r:r + 1]
        col = [RingElem.one(spec), -RingElem(spec, A[r, r])]
        v = C
        for _ in range(r):
            col.append(-RingElem(spec, mat_mul(spec, R, v)[0, 0]))
            v = mat_mul(spec, M, v)
        new = []
        for i in range(r + 2):
            acc = RingElem.zero(spec)
            for j in range(min(i, r) + 1):
                acc = acc + col[i - j] * q[j]
            new.append(acc)
        q = new
    return q


def determinant(spec: RingSpec, A) -> RingElem:
    n = np.asarray(A).shape[0]
    c = charpoly(spec, A)[-1]
    return c if n % 2 == 0 else -c


def adjugate(spec: RingSpec, A) -> np.ndarray:
    """adj(A) from Cayley-Hamilton: adj(A) = (-1)^(n+1) (A^(n-1) + c_1 A^(n-2) + ... + c_(n-1))."""
    A = np.asarray(A)
    n = A.shape[0]
    c = charpoly(spec, A)
    acc = mat_identity(spec, n)
    for k in range(1, n):
        acc = mat_mul(spec, A, acc)
        acc = (acc.astype(object) + _scalar_times_identity(spec, c[k], n)) % spec.modulus
    acc = acc.astype(spec.dtype)
    return acc if n % 2 == 1 else mat_scale(spec, acc, -1)


def _scalar_times_identity(spec, c: RingElem, n: int):
    out = mat_zeros(spec, n, n).astype(object)
    for i in range(n):
        out[i, i] = c.coeffs
    return out


def inverse_scaled(spec: RingSpec, A, scale_exp: int = 0):
    """p^scale_exp * A^(-1), which must be integral; returns (matrix, lost_digits).

    The result is known modulo p^(N - lost_digits).
    """
    A = np.asarray(A)
    det = determinant(spec, A)
    v = det.valuation()
    if v >= spec.N:
        raise PrecisionError(f"v(det) >= N={spec.N}: determinant vanishes at working precision")
    unit = _unit_part(det, v)
    adj = adjugate(spec, A)
    shift = v - scale_exp
    if shift > 0:
        arr = adj.astype(object)
        if np.any(arr % spec.p ** shift):
            raise ArithmeticError("scaled inverse is not integral")
        arr = arr // spec.p ** shift
        lost = shift
    else:
        arr = adj.astype(object) * spec.p ** (-shift)
        lost = 0
    out = (arr % spec.modulus).astype(spec.dtype)
    uinv = unit.inverse()
    n = A.shape[0]
    return mat_mul(spec, out, _scalar_times_identity(spec, uinv, n).astype(spec.dtype)), lost


def _unit_part(x: RingElem, v: int) -> RingElem:
    """x / p^v as a unit, with the lost top digits filled by zero."""
    return x.divide_by_p(v) if v else x


# ---------------------------------------------------------------------------
# residue-field linear algebra (matrices over F_{p^f} stored as N = 1 rings)

def residue_spec(spec: RingSpec) -> RingSpec:
    return spec.with_(N=1, T=1)


def reduce_mod_p(spec: RingSpec, A) -> tuple[RingSpec, np.ndarray]:
    """Reduce a t-constant matrix modulo p."""
    A = np.asarray(A)
    if spec.T > 1:
        A = A[:, :, :1, :]
    rs = residue_spec(spec)
    return rs, (A.astype(object) % spec.p).astype(rs.dtype)


def residue_rank(rs: RingSpec, A) -> int:
    """Rank of a matrix over F_{p^f} (Gaussian elimination)."""
    A = np.asarray(A).astype(object).copy()
    rows, cols = A.shape[:2]
    rank = 0
    for c in range(cols):
        piv = None
        for r in range(rank, rows):
            if np.any(A[r, c] % rs.p):
                piv = r
                break
        if piv is None:
            continue
        A[[rank, piv]] = A[[piv, rank]]
        inv = RingElem(rs, A[rank, c]).inverse()
        row = A[rank:rank + 1].astype(rs.dtype)
        row = mat_mul(rs, _scalar_times_identity(rs, inv, 1).astype(rs.dtype), row)
        A[rank] = row[0]
        for r in range(rows):
            if r != rank and np.any(A[r, c] % rs.p):
                factor = RingElem(rs, A[r, c])
                sub = mat_mul(rs, _scalar_times_identity(rs, factor, 1).astype(rs.dtype), row)
                A[r] = (A[r] - sub[0]) % rs.p
        rank += 1
        if rank == rows:
            break
    return rank


def stable_rank(rs: RingSpec, A, step: int = 1) -> int:
    """Rank of the image of the semilinear map x -> A tau^step(x) iterated h times.

    The image of the n-fold iterate is the column space of
    A tau^step(A) ... tau^((n-1) step)(A); it stabilises after at most h steps.
    """
    A = np.asarray(A)
    h = A.shape[0]
    prod = A
    prev = residue_rank(rs, prod)
    for k in range(1, h + 1):
        prod = mat_mul(rs, prod, mat_tau(rs, A, step * k))
        cur = residue_rank(rs, prod)
        if cur == prev:
            return cur
        prev = cur
    return prev


# ---------------------------------------------------------------------------
# integer matrices over Z/p^N (valuation pivoting)

def smith_reduce(M, p: int, N: int):
    """Diagonalise an integer matrix over Z/p^N by valuation pivoting.

    Returns ``(diag_vals, V)`` where ``diag_vals`` are the valuations of the
    pivots in elimination order (N for a vanishing pivot) and the columns of
    ``V`` (an invertible matrix over Z/p^N) realise the column operations, so
    that the trailing columns of V with vanishing pivots span the kernel.
    """
    m = p ** N
    A = [[int(x) % m for x in row] for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    V = [[int(i == j) for j in range(cols)] for i in range(cols)]
    vals = []
    for k in range(min(rows, cols)):
        best = None
        for i in range(k, rows):
            for j in range(k, cols):
                if A[i][j]:
                    v = valuation_int(A[i][j], p, N)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            vals.extend([N] * (min(rows, cols) - k))
            break
        v, i, j = best
        A[k], A[i] = A[i], A[k]
        for row in A:
            row[k], row[j] = row[j], row[k]
        for row in V:
            row[k], row[j] = row[j], row[k]
        piv = A[k][k]
        unit = piv // p ** v
        uinv = pow(unit, -1, m)
        # clear row k to the right (column operations)
        for jj in range(k + 1, cols):
            if A[k][jj]:
                factor = (A[k][jj] // p ** v) * uinv % m
                for row in A:
                    row[jj] = (row[jj] - factor * row[k]) % m
                for row in V:
                    row[jj] = (row[jj] - factor * row[k]) % m
        # clear column k below (row operations; no effect on the kernel)
        for ii in range(k + 1, rows):
            if A[ii][k]:
                factor = (A[ii][k] // p ** v) * uinv % m
                A[ii] = [(a - factor * b) % m for a, b in zip(A[ii], A[k])]
        vals.append(v)
    return vals, V


def kernel_basis(M, p: int, N: int, ambiguity_gap: int | None = None):
    """Basis of the saturated kernel of an integer matrix over Z_p, to precision.

    Returns ``(basis, reliable_digits)``: the basis vectors (as lists of ints
    mod p^N) are correct modulo p^reliable_digits.  A pivot whose valuation
    lies in [N - gap, N) makes the kernel rank ambiguous and raises
    PrecisionError.
    """
    gap = N // 2 if ambiguity_gap is None else ambiguity_gap
    vals, V = smith_reduce(M, p, N)
    cols = len(V)
    vals = vals + [N] * (cols - len(vals))
    nonzero = [v for v in vals if v < N]
    if any(v >= N - gap for v in nonzero):
        raise PrecisionError(f"kernel rank ambiguous: pivot valuations {vals} at N={N}")
    vmax = max(nonzero, default=0)
    basis = [[V[i][k] for i in range(cols)] for k in range(cols) if vals[k] >= N]
    return basis, N - vmax


def int_rank(M, p: int, N: int) -> int:
    vals, _ = smith_reduce(M, p, N)
    return sum(1 for v in vals if v < N)


def determinantal_valuations(spec: RingSpec, A) -> list[int]:
    """[delta_1, ..., delta_h]: delta_i = min Gauss valuation of the i x i minors."""
    A = np.asarray(A)
    h = A.shape[0]
    out = []
    for i in range(1, h + 1):
        best = spec.N
        for rows in itertools.combinations(range(h), i):
            for cols in itertools.combinations(range(h), i):
                sub = A[np.ix_(rows, cols)]
                v = determinant(spec, sub).valuation()
                if v < best:
                    best = v
        out.append(best)
    return out
