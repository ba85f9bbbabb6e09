"""Truncated unramified Witt rings W_N(F_q) and power series over them.

Elements of ``W_N(F_{p^f})[[t]]/(t^T)`` are stored as integer arrays of shape
``(T, f)`` holding coefficients of ``t^k x^d`` modulo ``p^N``, where
``W(F_{p^f}) = Z_p[x]/(g)`` for a fixed monic ``g`` irreducible mod ``p``.
The Frobenius lift ``tau`` acts on ``x`` by the canonical lift of ``x -> x^p``
and sends ``t`` to ``t^p``.

Matrices are plain arrays of shape ``(rows, cols, T, f)``; the ``mat_*``
helpers below implement their arithmetic.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
import sympy

from . import _kernels


class PrecisionError(ArithmeticError):
    """A quantity needed by a computation is not determined at precision N."""


DEFAULT_P = 5
DEFAULT_N = int(os.environ.get("ISOCRYS_PRECISION", "16"))
DEFAULT_T = 48


def _int_digits(n: int, p: int, f: int) -> list[int]:
    out = []
    for _ in range(f):
        n, r = divmod(n, p)
        out.append(r)
    return out


def smallest_irreducible(p: int, f: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree f over F_p.

    Candidates ``c_0 + c_1 x + ... + c_{f-1} x^{f-1} + x^f`` are enumerated by
    the integer ``n = sum c_i p^i`` in increasing order; the first irreducible
    one is returned as ``(c_0, ..., c_{f-1}, 1)``.
    """
    x = sympy.Symbol("x")
    for n in range(p ** f):
        cs = _int_digits(n, p, f)
        if f > 1 and cs[0] == 0:
            continue
        coeffs = [1] + cs[::-1]
        if f == 1 or sympy.Poly(coeffs, x, modulus=p).is_irreducible:
            return tuple(cs) + (1,)
    raise RuntimeError("no irreducible polynomial found")  # pragma: no cover


@dataclass(frozen=True)
class RingSpec:
    """Parameters of ``W_N(F_{p^f})[[t]]/(t^T)``."""

    p: int = DEFAULT_P
    f: int = 1
    N: int = DEFAULT_N
    T: int = 1
    poly: tuple[int, ...] | None = field(default=None)

    def __post_init__(self):
        if self.p < 3 or not sympy.isprime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.f < 1 or self.N < 1 or self.T < 1:
            raise ValueError("f, N, T must be positive")
        if self.poly is None:
            object.__setattr__(self, "poly", smallest_irreducible(self.p, self.f))
        else:
            poly = tuple(int(c) for c in self.poly)
            if len(poly) != self.f + 1 or poly[-1] != 1:
                raise ValueError("poly must be monic of degree f, given low-to-high")
            object.__setattr__(self, "poly", poly)

    # -- derived data -----------------------------------------------------
    @cached_property
    def modulus(self) -> int:
        return self.p ** self.N

    @cached_property
    def dtype(self):
        return _kernels.storage_dtype(self.modulus)

    @property
    def q(self) -> int:
        return self.p ** self.f

    @cached_property
    def red(self) -> np.ndarray:
        """Row e holds x^(f+e) mod g, for e = 0..f-2."""
        f, m = self.f, self.modulus
        rows = np.zeros((max(f - 1, 1), f), dtype=object)
        cur = [(-c) % m for c in self.poly[:f]]  # x^f
        for e in range(f - 1):
            rows[e] = cur
            # multiply by x
            top = cur[-1]
            cur = [0] + cur[:-1]
            cur = [(c - top * g) % m for c, g in zip(cur, self.poly[:f])]
        return rows.astype(self.dtype)

    def with_(self, **changes) -> "RingSpec":
        """A new spec; the polynomial is kept when p and f do not change."""
        d = dict(p=self.p, f=self.f, N=self.N, T=self.T)
        d.update(changes)
        if d["p"] == self.p and d["f"] == self.f:
            d["poly"] = self.poly
        return RingSpec(**d)

    def to_dict(self) -> dict:
        return {"p": self.p, "f": self.f, "N": self.N, "T": self.T, "poly": list(self.poly)}

    @classmethod
    def from_dict(cls, d: dict) -> "RingSpec":
        poly = d.get("poly")
        return cls(p=d["p"], f=d.get("f", 1), N=d.get("N", DEFAULT_N), T=d.get("T", 1),
                   poly=tuple(poly) if poly is not None else None)

    # -- Frobenius ---------------------------------------------------------
    @cached_property
    def frob_root(self) -> np.ndarray:
        """Coefficients of the canonical lift y of x^p, a root of g with y = x^p mod p."""
        const = self.with_(T=1)
        X = np.zeros((1, self.f), dtype=object)
        if self.f > 1:
            X[0, 1] = 1
        else:
            return np.array([(-self.poly[0]) % self.modulus], dtype=object)
        y = RingElem(const, X) ** self.p
        g = [RingElem.scalar(const, c) for c in self.poly]
        dg = [RingElem.scalar(const, i * c) for i, c in enumerate(self.poly)][1:]
        prec = 1
        while prec < self.N:
            val = _horner(g, y, const)
            der = _horner(dg, y, const)
            y = y - val * der.inverse()
            prec *= 2
        return y.coeffs[0].astype(object)

    @cached_property
    def frob_matrix(self) -> np.ndarray:
        """Column i = coordinates of tau(x^i)."""
        f, m = self.f, self.modulus
        const = self.with_(T=1)
        y = RingElem(const, self.frob_root.reshape(1, f))
        cols = []
        cur = RingElem.one(const)
        for _ in range(f):
            cols.append(cur.coeffs[0])
            cur = cur * y
        return (np.array(cols, dtype=object).T % m).astype(self.dtype)

    def frob_power(self, k: int) -> np.ndarray:
        k %= self.f
        cache = self.__dict__.setdefault("_frob_powers", {})
        if k not in cache:
            M = np.eye(self.f, dtype=object)
            base = self.frob_matrix.astype(object)
            for _ in range(k):
                M = (base @ M) % self.modulus
            cache[k] = M.astype(self.dtype)
        return cache[k]


def _horner(coeffs, y, spec):
    acc = RingElem.zero(spec)
    for c in reversed(coeffs):
        acc = acc * y + c
    return acc


def valuation_int(a: int, p: int, cap: int) -> int:
    """p-adic valuation of an integer residue mod p^cap (cap if zero)."""
    a = int(a)
    if a == 0:
        return cap
    v = 0
    while a % p == 0:
        a //= p
        v += 1
        if v >= cap:
            return cap
    return v


def array_valuation(arr: np.ndarray, p: int, cap: int) -> int:
    """Minimum p-adic valuation over all entries (``cap`` if everything vanishes)."""
    best = cap
    for a in np.asarray(arr).ravel():
        a = int(a)
        if a:
            v = valuation_int(a, p, cap)
            if v < best:
                best = v
                if best == 0:
                    return 0
    return best


class RingElem:
    """An element of ``W_N(F_{p^f})[[t]]/(t^T)``; immutable by convention."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: RingSpec, coeffs):
        arr = np.asarray(coeffs, dtype=object) % spec.modulus
        if arr.shape != (spec.T, spec.f):
            raise ValueError(f"expected shape {(spec.T, spec.f)}, got {arr.shape}")
        self.spec = spec
        self.coeffs = arr.astype(spec.dtype)

    # constructors
    @classmethod
    def zero(cls, spec):
        return cls(spec, np.zeros((spec.T, spec.f), dtype=object))

    @classmethod
    def one(cls, spec):
        return cls.scalar(spec, 1)

    @classmethod
    def scalar(cls, spec, c):
        a = np.zeros((spec.T, spec.f), dtype=object)
        a[0, 0] = c
        return cls(spec, a)

    @classmethod
    def t_power(cls, spec, k=1, c=1):
        a = np.zeros((spec.T, spec.f), dtype=object)
        if k < spec.T:
            a[k, 0] = c
        return cls(spec, a)

    @classmethod
    def from_residue(cls, spec, residue):
        """The naive lift of a residue-field element given by f integers (or one int)."""
        if isinstance(residue, (int, np.integer)):
            residue = [int(residue)] + [0] * (spec.f - 1)
        a = np.zeros((spec.T, spec.f), dtype=object)
        a[0, :] = [int(r) % spec.p for r in residue]
        return cls(spec, a)

    # arithmetic
    def _check(self, other):
        if isinstance(other, (int, np.integer)):
            return RingElem.scalar(self.spec, int(other))
        if other.spec != self.spec:
            raise ValueError("ring specs differ")
        return other

    def __add__(self, other):
        other = self._check(other)
        return RingElem(self.spec, self.coeffs.astype(object) + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return RingElem(self.spec, self.coeffs.astype(object) - other.coeffs)

    def __rsub__(self, other):
        return self._check(other) - self

    def __neg__(self):
        return RingElem(self.spec, -self.coeffs.astype(object))

    def __mul__(self, other):
        other = self._check(other)
        s = self.spec
        out = _kernels.ring_matmul(self.coeffs[None, None], other.coeffs[None, None],
                                   s.red, s.modulus)
        return RingElem(s, out[0, 0])

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = RingElem.one(self.spec)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = RingElem.scalar(self.spec, int(other))
        if not isinstance(other, RingElem):
            return NotImplemented
        return self.spec == other.spec and np.array_equal(
            self.coeffs.astype(object), other.coeffs.astype(object))

    def __hash__(self):
        return hash((self.spec, tuple(int(c) for c in self.coeffs.ravel())))

    def __repr__(self):
        return f"RingElem({self.coeffs.tolist()})"

    # structure
    def valuation(self) -> int:
        """Gauss valuation: min p-adic valuation over all coefficients (N if zero)."""
        return array_valuation(self.coeffs, self.spec.p, self.spec.N)

    def is_zero(self) -> bool:
        return not np.any(self.coeffs.astype(object))

    def is_unit(self) -> bool:
        c = self.coeffs[0].astype(object) % self.spec.p
        return bool(np.any(c))

    def is_constant(self) -> bool:
        return self.spec.T == 1 or not np.any(self.coeffs[1:].astype(object))

    def tau(self, k: int = 1) -> "RingElem":
        return RingElem(self.spec, tau_coeffs(self.spec, self.coeffs, k))

    def residue(self) -> tuple[int, ...]:
        return tuple(int(c) % self.spec.p for c in self.coeffs[0])

    def divide_by_p(self, e: int) -> "RingElem":
        """Exact division by p^e; the top e digits become zero (precision drops)."""
        if e == 0:
            return self
        pe = self.spec.p ** e
        arr = self.coeffs.astype(object)
        if np.any(arr % pe):
            raise ArithmeticError(f"element not divisible by p^{e}")
        return RingElem(self.spec, arr // pe)

    def inverse(self) -> "RingElem":
        """Inverse of a unit (Newton iteration from the residue-field inverse)."""
        if not self.is_unit():
            raise ZeroDivisionError("element is not a unit")
        s = self.spec
        const = s.with_(T=1)
        c0 = RingElem(const, self.coeffs[:1])
        z = RingElem(const, (c0 ** (s.q - 2)).coeffs)
        prec = 1
        while prec < s.N:
            z = z * (2 - c0 * z)
            prec *= 2
        if s.T == 1:
            return z
        # power-series part: invert 1 + u with u divisible by t
        z_full = RingElem(s, np.vstack([z.coeffs, np.zeros((s.T - 1, s.f), dtype=object)]))
        w = z_full
        k = 1
        while k < s.T:
            w = w * (2 - self * w)
            k *= 2
        return w

    def substitute_t(self, value: "RingElem") -> "RingElem":
        """Evaluate the t-polynomial at a constant element of a (possibly larger) ring."""
        tgt = value.spec
        acc = RingElem.zero(tgt)
        for k in range(self.spec.T - 1, -1, -1):
            acc = acc * value + embed_constant(self.spec, self.coeffs[k], tgt)
        return acc


def tau_coeffs(spec: RingSpec, arr, k: int = 1):
    """Apply tau^k to an element array (..., T, f)."""
    arr = np.asarray(arr)
    if k == 0:
        return arr
    k_field = k % spec.f
    out = arr
    if k_field:
        F = spec.frob_power(k_field)
        shp = arr.shape
        flat = arr.reshape(-1, spec.f)
        out = _kernels.dot_mod(flat, F.T.copy(), spec.modulus).reshape(shp)
    if spec.T > 1:
        step = spec.p ** k
        moved = np.zeros_like(out)
        for j in range(spec.T):
            if j * step < spec.T:
                moved[..., j * step, :] = out[..., j, :]
            else:
                break
        out = moved
    return out


# ---------------------------------------------------------------------------
# matrices

def mat_zeros(spec: RingSpec, rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols, spec.T, spec.f), dtype=spec.dtype)


def mat_identity(spec: RingSpec, n: int, scale: int = 1) -> np.ndarray:
    A = mat_zeros(spec, n, n)
    for i in range(n):
        A[i, i, 0, 0] = scale % spec.modulus
    return A


def mat_from_ints(spec: RingSpec, rows: Sequence[Sequence[int]]) -> np.ndarray:
    """Matrix with integer (t-constant, Z_p) entries; rationals with unit denominators allowed."""
    rows = [list(r) for r in rows]
    A = mat_zeros(spec, len(rows), len(rows[0]))
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            A[i, j, 0, 0] = int_mod(v, spec)
    return A


def int_mod(v, spec: RingSpec) -> int:
    """Reduce an int or a p-integral Fraction modulo p^N."""
    from fractions import Fraction

    m = spec.modulus
    if isinstance(v, Fraction):
        if v.denominator % spec.p == 0:
            raise ValueError(f"{v} is not p-integral")
        return v.numerator * pow(v.denominator, -1, m) % m
    return int(v) % m


def mat_mul(spec: RingSpec, A, B) -> np.ndarray:
    return _kernels.ring_matmul(np.asarray(A).astype(spec.dtype), np.asarray(B).astype(spec.dtype),
                                spec.red, spec.modulus)


def mat_add(spec: RingSpec, A, B) -> np.ndarray:
    return ((np.asarray(A).astype(object) + np.asarray(B)) % spec.modulus).astype(spec.dtype)


def mat_sub(spec: RingSpec, A, B) -> np.ndarray:
    return ((np.asarray(A).astype(object) - np.asarray(B)) % spec.modulus).astype(spec.dtype)


def mat_scale(spec: RingSpec, A, c: int) -> np.ndarray:
    return ((np.asarray(A).astype(object) * int(c)) % spec.modulus).astype(spec.dtype)


def mat_tau(spec: RingSpec, A, k: int = 1) -> np.ndarray:
    return tau_coeffs(spec, A, k)


def mat_entry(spec: RingSpec, A, i: int, j: int) -> RingElem:
    return RingElem(spec, A[i, j])


def mat_from_elems(spec: RingSpec, rows) -> np.ndarray:
    rows = [list(r) for r in rows]
    A = mat_zeros(spec, len(rows), len(rows[0]))
    for i, r in enumerate(rows):
        for j, e in enumerate(r):
            if isinstance(e, RingElem):
                A[i, j] = e.coeffs
            else:
                A[i, j, 0, 0] = int_mod(e, spec)
    return A


def mat_equal(A, B) -> bool:
    return np.array_equal(np.asarray(A).astype(object), np.asarray(B).astype(object))


def mat_valuation(spec: RingSpec, A) -> int:
    return array_valuation(A, spec.p, spec.N)


def mat_twisted_product(spec: RingSpec, A, count: int, step: int = 1) -> np.ndarray:
    """A * tau^step(A) * tau^(2 step)(A) * ... (count factors), by doubling."""
    if count < 1:
        raise ValueError("count must be positive")
    result = None
    block, block_len = np.asarray(A), 1  # block = product of block_len consecutive twists
    offset = 0
    n = count
    while n:
        if n & 1:
            piece = mat_tau(spec, block, step * offset)
            result = piece if result is None else mat_mul(spec, result, piece)
            offset += block_len
        n >>= 1
        if n:
            block = mat_mul(spec, block, mat_tau(spec, block, step * block_len))
            block_len *= 2
    return result


def change_precision(spec: RingSpec, A, N: int):
    """Reinterpret canonical representatives at a new precision."""
    new = spec.with_(N=N)
    arr = np.asarray(A).astype(object) % new.modulus
    return new, arr.astype(new.dtype)


# ---------------------------------------------------------------------------
# Teichmueller lifts, subfields and embeddings

def teichmuller(residue, spec: RingSpec) -> RingElem:
    """The multiplicative lift of a residue-field element (t-constant).

    ``residue`` is an int (f = 1) or a sequence of f integers mod p in the
    polynomial basis.
    """
    const = spec.with_(T=1)
    a = RingElem.from_residue(const, residue)
    if a.is_zero():
        return RingElem.zero(spec)
    q = spec.q
    x = a
    # Newton iteration for X^q = X; the derivative q X^(q-1) - 1 is a unit
    prec = 1
    while prec < spec.N:
        xq1 = x ** (q - 1)
        val = xq1 * x - x
        der = xq1 * q - 1
        x = x - val * der.inverse()
        prec *= 2
    if spec.T == 1:
        return x
    return RingElem(spec, np.vstack([x.coeffs, np.zeros((spec.T - 1, spec.f), dtype=object)]))


def residue_frobenius_matrix(spec: RingSpec, k: int = 1) -> np.ndarray:
    """The F_p-linear map a -> a^(p^k) on F_{p^f} in the polynomial basis."""
    return np.asarray(spec.frob_power(k)).astype(object) % spec.p


def subfield_basis(spec: RingSpec, d: int) -> list[tuple[int, ...]]:
    """An F_p-basis of the subfield F_{p^d} inside F_{p^f}."""
    if spec.f % d:
        raise ValueError(f"{d} does not divide {spec.f}")
    M = sympy.Matrix(residue_frobenius_matrix(spec, d).tolist()) - sympy.eye(spec.f)
    from sympy.polys.matrices import DomainMatrix
    from sympy import GF

    dm = DomainMatrix.from_Matrix(M).convert_to(GF(spec.p))
    ns = dm.nullspace().to_Matrix()
    basis = []
    for row in range(ns.rows):
        basis.append(tuple(int(v) % spec.p for v in ns.row(row)))
    if len(basis) != d:
        raise RuntimeError("subfield dimension mismatch")  # pragma: no cover
    return basis


def _poly_eval_residue(coeffs, y: RingElem) -> RingElem:
    acc = RingElem.zero(y.spec)
    for c in reversed(coeffs):
        acc = acc * y + int(c)
    return acc


def embedding_root(src: RingSpec, tgt: RingSpec) -> np.ndarray:
    """Image of x under a fixed embedding W(F_{p^f_src}) -> W(F_{p^f_tgt}).

    The residue root is the first root of g_src (in the enumeration order of
    coordinate vectors over the subfield basis) and is Hensel-lifted.
    """
    if src.p != tgt.p or tgt.f % src.f:
        raise ValueError("no embedding between these rings")
    key = (src.f, src.poly, tgt.N)
    cache = tgt.__dict__.setdefault("_embeddings", {})
    if key in cache:
        return cache[key]
    const = tgt.with_(T=1)
    if src.f == 1:
        root = None
    elif src.f == tgt.f and src.poly == tgt.poly:
        root = np.zeros((1, tgt.f), dtype=object)
        root[0, 1] = 1
        root = RingElem(const, root)
    else:
        basis = subfield_basis(tgt, src.f)
        resid = const.with_(N=1)
        root = None
        import itertools

        for digits in itertools.product(range(tgt.p), repeat=src.f):
            if not any(digits):
                continue
            vec = [sum(d * b[i] for d, b in zip(digits, basis)) % tgt.p for i in range(tgt.f)]
            y = RingElem(resid, np.array([vec], dtype=object))
            if _poly_eval_residue(src.poly, y).is_zero():
                root = RingElem(const, np.array([vec], dtype=object))
                break
        if root is None:  # pragma: no cover
            raise RuntimeError("no root found")
        dpoly = [i * c for i, c in enumerate(src.poly)][1:]
        prec = 1
        while prec < tgt.N:
            root = root - _poly_eval_residue(src.poly, root) * _poly_eval_residue(dpoly, root).inverse()
            prec *= 2
    cache[key] = root
    return root


def embed_constant(src: RingSpec, vec, tgt: RingSpec) -> RingElem:
    """Embed a t-constant coefficient vector of ``src`` into the constants of ``tgt``."""
    vec = [int(v) for v in np.asarray(vec).ravel()]
    if src.f == tgt.f and src.poly == tgt.poly:
        a = np.zeros((tgt.T, tgt.f), dtype=object)
        a[0] = vec
        return RingElem(tgt, a)
    if all(v == 0 for v in vec[1:]):
        return RingElem.scalar(tgt, vec[0])
    root = embedding_root(src, tgt)
    const = tgt.with_(T=1)
    acc = RingElem.zero(const)
    for c in reversed(vec):
        acc = acc * root + c
    if tgt.T == 1:
        return acc
    return RingElem(tgt, np.vstack([acc.coeffs, np.zeros((tgt.T - 1, tgt.f), dtype=object)]))


def embed_matrix(src: RingSpec, A, tgt: RingSpec) -> np.ndarray:
    """Embed a matrix with t-constant entries into a ring with larger residue field."""
    A = np.asarray(A)
    out = mat_zeros(tgt, A.shape[0], A.shape[1])
    for i in range(A.shape[0]):
        for j in range(A.shape[1]):
            if src.T > 1 and np.any(A[i, j, 1:].astype(object)):
                raise ValueError("entry is not t-constant")
            out[i, j] = embed_constant(src, A[i, j, 0], tgt).coeffs
    return out


def residue_power(spec: RingSpec, residue, e: int) -> tuple[int, ...]:
    """residue ** e computed in F_{p^f}."""
    r = spec.with_(N=1, T=1)
    return (RingElem.from_residue(r, residue) ** e).residue()


def is_square_residue(spec: RingSpec, residue, degree: int | None = None) -> bool:
    """Quadratic-residue test in the subfield F_{p^degree} (default: whole field)."""
    d = spec.f if degree is None else degree
    val = residue_power(spec, residue, (spec.p ** d - 1) // 2)
    one = (1,) + (0,) * (spec.f - 1)
    return val == one


def nonsquare_in_subfield(spec: RingSpec, d: int) -> tuple[int, ...]:
    """Deterministic non-square of F_{p^d} inside F_{p^f}: first one in subfield-basis order."""
    import itertools

    basis = subfield_basis(spec, d)
    for digits in itertools.product(range(spec.p), repeat=d):
        if not any(digits):
            continue
        vec = tuple(sum(c * b[i] for c, b in zip(digits, basis)) % spec.p for i in range(spec.f))
        if not is_square_residue(spec, vec, d):
            return vec
    raise RuntimeError("no non-square found")  # pragma: no cover


def random_residue(spec: RingSpec, rng: np.random.Generator, d: int | None = None) -> tuple[int, ...]:
    """A uniformly random element of F_{p^d} (d | f) inside F_{p^f}."""
    if d is None or d == spec.f:
        return tuple(int(v) for v in rng.integers(0, spec.p, size=spec.f))
    basis = subfield_basis(spec, d)
    digits = rng.integers(0, spec.p, size=d)
    return tuple(sum(int(c) * b[i] for c, b in zip(digits, basis)) % spec.p for i in range(spec.f))


def random_int_mod(m: int, rng: np.random.Generator) -> int:
    nbytes = (m.bit_length() + 71) // 8
    return int.from_bytes(rng.bytes(nbytes), "little") % m


def random_elem(spec: RingSpec, rng: np.random.Generator) -> RingElem:
    vals = [[random_int_mod(spec.modulus, rng) for _ in range(spec.f)] for _ in range(spec.T)]
    return RingElem(spec, np.array(vals, dtype=object))


def random_matrix(spec: RingSpec, rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    A = mat_zeros(spec, rows, cols)
    for i in range(rows):
        for j in range(cols):
            A[i, j] = random_elem(spec, rng).coeffs
    return A
