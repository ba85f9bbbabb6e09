"""Octonion algebras over Q, their derivation algebra (type G2) and weight data.

All linear algebra is exact over QQ via sympy's DomainMatrix.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import sympy
from sympy import QQ
from sympy.polys.matrices import DomainMatrix


class DimensionMismatch(AssertionError):
    pass


class SearchFailure(RuntimeError):
    pass


Vec = tuple  # tuple of 8 Fractions


def _dm(rows) -> DomainMatrix:
    return DomainMatrix([[QQ(int(x.numerator), int(x.denominator)) if isinstance(x, Fraction) else QQ(x)
                          for x in row] for row in rows], (len(rows), len(rows[0]) if rows else 0), QQ)


def _nullspace(rows, ncols: int) -> list[list[Fraction]]:
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ns = _dm(rows).nullspace().to_Matrix()
    return [[Fraction(int(sympy.fraction(v)[0]), int(sympy.fraction(v)[1])) for v in ns.row(i)]
            for i in range(ns.rows)]


def _rank(rows) -> int:
    if not rows:
        return 0
    return _dm(rows).rank()


# ---------------------------------------------------------------------------
# structure constants

def _quat_mul(x, y):
    a1, b1, c1, d1 = x
    a2, b2, c2, d2 = y
    # (-1, -1) quaternions: i^2 = j^2 = -1, k = ij
    return (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2)


def _quat_conj(x):
    return (x[0], -x[1], -x[2], -x[3])


def _cd_mul(x, y, gamma=-1):
    """(a, b)(c, d) = (ac + gamma conj(d) b, d a + b conj(c))."""
    a, b = x[:4], x[4:]
    c, d = y[:4], y[4:]
    first = tuple(u + gamma * v for u, v in zip(_quat_mul(a, c), _quat_mul(_quat_conj(d), b)))
    second = tuple(u + v for u, v in zip(_quat_mul(d, a), _quat_mul(b, _quat_conj(c))))
    return first + second


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _zorn_from_coords(x):
    """Basis 1, h = diag(1, -1), u1..u3, v1..v3 -> (a, u, v, b)."""
    return x[0] + x[1], tuple(x[2:5]), tuple(x[5:8]), x[0] - x[1]


def _zorn_to_coords(a, u, v, b):
    half = Fraction(1, 2)
    return ((a + b) * half, (a - b) * half) + tuple(u) + tuple(v)


def _zorn_mul(x, y):
    a, u, v, b = _zorn_from_coords(x)
    a2, u2, v2, b2 = _zorn_from_coords(y)
    na = a * a2 + _dot(u, v2)
    nu = tuple(a * p + b2 * q - r for p, q, r in zip(u2, u, _cross(v, v2)))
    nv = tuple(a2 * p + b * q + r for p, q, r in zip(v, v2, _cross(u, u2)))
    nb = b * b2 + _dot(v, u2)
    return _zorn_to_coords(na, nu, nv, nb)


@dataclass(frozen=True)
class OctonionAlgebra:
    flavor: str
    table: tuple  # table[i][j] = coordinates of e_i e_j

    @classmethod
    def division(cls) -> "OctonionAlgebra":
        return cls("division", _table(lambda x, y: _cd_mul(x, y, -1)))

    @classmethod
    def split(cls) -> "OctonionAlgebra":
        return cls("split", _table(_zorn_mul))

    @classmethod
    def of(cls, flavor: str) -> "OctonionAlgebra":
        if flavor == "division":
            return cls.division()
        if flavor == "split":
            return cls.split()
        raise ValueError(f"unknown flavor {flavor!r}")

    def mul(self, x, y) -> Vec:
        out = [Fraction(0)] * 8
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                c = xi * yj
                for k, t in enumerate(self.table[i][j]):
                    if t:
                        out[k] += c * t
        return tuple(out)

    @staticmethod
    def trace(x) -> Fraction:
        return 2 * x[0]

    def conj(self, x) -> Vec:
        return (x[0],) + tuple(-v for v in x[1:])

    def norm(self, x) -> Fraction:
        n = self.mul(x, self.conj(x))
        if any(n[1:]):
            raise AssertionError("x conj(x) is not scalar")
        return n[0]

    def bilinear(self, x, y) -> Fraction:
        """B(x, y) = N(x + y) - N(x) - N(y) = t(x conj(y))."""
        return self.trace(self.mul(x, self.conj(y)))

    @cached_property
    def gram(self) -> list[list[Fraction]]:
        return [[self.bilinear(_e(i), _e(j)) for j in range(8)] for i in range(8)]

    def witt_index(self) -> int:
        """Witt index of the norm form over Q via its signature (indefinite forms are split here)."""
        M = sympy.Matrix(8, 8, lambda i, j: sympy.Rational(self.gram[i][j].numerator, self.gram[i][j].denominator))
        ev = M.eigenvals()
        pos = sum(m for v, m in ev.items() if v > 0)
        neg = sum(m for v, m in ev.items() if v < 0)
        return min(pos, neg)


def _e(i) -> Vec:
    return tuple(Fraction(int(i == k)) for k in range(8))


def _table(mul):
    return tuple(tuple(tuple(Fraction(v) for v in mul(_e(i), _e(j))) for j in range(8)) for i in range(8))


def commutator(alg: OctonionAlgebra, x, y) -> Vec:
    a, b = alg.mul(x, y), alg.mul(y, x)
    return tuple(p - q for p, q in zip(a, b))


# ---------------------------------------------------------------------------
# derivations

Matrix = list[list[Fraction]]


def _matvec(M, x):
    return tuple(sum(M[i][j] * x[j] for j in range(len(x))) for i in range(len(M)))


def _matmul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return [[sum(A[i][l] * B[l][j] for l in range(k)) for j in range(m)] for i in range(n)]


def _bracket(A, B):
    AB, BA = _matmul(A, B), _matmul(B, A)
    return [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(AB, BA)]


def _flatten(M):
    return [v for row in M for v in row]


@dataclass
class DerivationAlgebra:
    algebra: OctonionAlgebra
    basis8: list[Matrix]   # 8x8 matrices on the whole algebra
    basis: list[Matrix]    # 7x7 restrictions to C_0 (basis e_1..e_7)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def coordinates(self, M7: Matrix) -> list[Fraction] | None:
        """Coordinates of a 7x7 matrix in the basis, or None if outside the span."""
        rows = [[self.basis[k][i][j] for k in range(self.dimension)] + [M7[i][j]]
                for i in range(7) for j in range(7)]
        ns = _nullspace(rows, self.dimension + 1)
        for v in ns:
            if v[-1]:
                return [-c / v[-1] for c in v[:-1]]
        return None

    def structure_constants(self) -> list[list[list[Fraction]]]:
        out = []
        for A in self.basis:
            row = []
            for B in self.basis:
                c = self.coordinates(_bracket(A, B))
                if c is None:
                    raise AssertionError("derivations are not closed under the bracket")
                row.append(c)
            out.append(row)
        return out

    def combination(self, coeffs) -> Matrix:
        M = [[Fraction(0)] * 7 for _ in range(7)]
        for c, B in zip(coeffs, self.basis):
            if c:
                for i in range(7):
                    for j in range(7):
                        M[i][j] += c * B[i][j]
        return M


def derivation_basis(alg: OctonionAlgebra) -> DerivationAlgebra:
    """Solve D(e_i e_j) = D(e_i) e_j + e_i D(e_j) for the 64 entries of D."""
    rows = []
    for i in range(8):
        for j in range(8):
            prod = alg.table[i][j]
            # coefficient of unknown D[a][b] (row a, column b) in component k of the equation
            for k in range(8):
                row = [Fraction(0)] * 64
                for b in range(8):
                    if prod[b]:
                        row[k * 8 + b] += prod[b]
                # - D(e_i) e_j : D(e_i) = sum_a D[a][i] e_a, times e_j
                for a in range(8):
                    t = alg.table[a][j][k]
                    if t:
                        row[a * 8 + i] -= t
                    t = alg.table[i][a][k]
                    if t:
                        row[a * 8 + j] -= t
                if any(row):
                    rows.append(row)
    ns = _nullspace(rows, 64)
    basis8 = [[[v[a * 8 + b] for b in range(8)] for a in range(8)] for v in ns]
    if len(basis8) != 14:
        raise DimensionMismatch(f"derivation algebra has dimension {len(basis8)}, expected 14")
    for D in basis8:
        if any(D[a][0] for a in range(8)) or any(D[0][b] for b in range(8)):
            raise AssertionError("a derivation does not kill 1 or leaves C_0")
    basis = [[row[1:] for row in D[1:]] for D in basis8]
    return DerivationAlgebra(alg, basis8, basis)


def is_derivation(alg: OctonionAlgebra, D8: Matrix) -> bool:
    for i in range(8):
        for j in range(8):
            lhs = _matvec(D8, alg.table[i][j])
            a = alg.mul(_matvec(D8, _e(i)), _e(j))
            b = alg.mul(_e(i), _matvec(D8, _e(j)))
            if any(l - x - y for l, x, y in zip(lhs, a, b)):
                return False
    return True


def c0_gram(alg: OctonionAlgebra) -> Matrix:
    return [row[1:] for row in alg.gram[1:]]


def skew_defects(der: DerivationAlgebra) -> int:
    """Number of (D, i, j) with B(D e_i, e_j) + B(e_i, D e_j) != 0 on C_0."""
    G = c0_gram(der.algebra)
    bad = 0
    for D in der.basis:
        DtG = _matmul([list(r) for r in zip(*D)], G)
        GD = _matmul(G, D)
        bad += sum(1 for i in range(7) for j in range(7) if DtG[i][j] + GD[i][j])
    return bad


# ---------------------------------------------------------------------------
# Lambda^2 C_0

PAIRS = list(itertools.combinations(range(7), 2))


def _wedge_action(D: Matrix) -> Matrix:
    """Matrix of D on Lambda^2 C_0: D(x ^ y) = Dx ^ y + x ^ Dy, basis e_i ^ e_j (i < j)."""
    idx = {pq: n for n, pq in enumerate(PAIRS)}
    M = [[Fraction(0)] * 21 for _ in range(21)]
    for col, (i, j) in enumerate(PAIRS):
        for k in range(7):
            c = D[k][i]           # D e_i = sum_k D[k][i] e_k  ->  e_k ^ e_j
            if c and k != j:
                a, b, s = (k, j, 1) if k < j else (j, k, -1)
                M[idx[(a, b)]][col] += s * c
            c = D[k][j]           # e_i ^ e_k
            if c and k != i:
                a, b, s = (i, k, 1) if i < k else (k, i, -1)
                M[idx[(a, b)]][col] += s * c
    return M


def _iota(alg: OctonionAlgebra, i: int, j: int) -> Matrix:
    """iota(e_i ^ e_j)(z) = B(e_j, z) e_i - B(e_i, z) e_j on C_0."""
    G = c0_gram(alg)
    M = [[Fraction(0)] * 7 for _ in range(7)]
    for z in range(7):
        M[i][z] += G[j][z]
        M[j][z] -= G[i][z]
    return M


@dataclass
class Lambda2Split:
    P_g: Matrix        # projection onto the copy of g
    P_c: Matrix        # projection onto the complement, identified with C_0 by the commutator
    commutator_map: Matrix  # 7 x 21
    rank_g: int
    rank_c: int
    commutator_rank: int


def lambda2_split(alg: OctonionAlgebra, der: DerivationAlgebra | None = None) -> Lambda2Split:
    der = der or derivation_basis(alg)
    # g inside Lambda^2: solve iota(w) = D for each basis derivation
    iota_cols = [_flatten(_iota(alg, i, j)) for i, j in PAIRS]  # 21 vectors of length 49
    g_vecs = []
    for D in der.basis:
        rows = [[iota_cols[c][r] for c in range(21)] + [-_flatten(D)[r]] for r in range(49)]
        ns = [v for v in _nullspace(rows, 22) if v[-1]]
        if not ns:
            raise AssertionError("a derivation is not in the image of Lambda^2")
        v = ns[0]
        g_vecs.append([x / v[-1] for x in v[:-1]])
    # commutator map c(e_i ^ e_j) = [e_i, e_j] restricted to C_0 coordinates
    cmap = [[Fraction(0)] * 21 for _ in range(7)]
    for col, (i, j) in enumerate(PAIRS):
        com = commutator(alg, _e(i + 1), _e(j + 1))
        if com[0]:
            raise AssertionError("commutator of trace-zero elements has a scalar part")
        for k in range(7):
            cmap[k][col] = com[k + 1]
    # the complement: kernel-complement chosen as the orthogonal of g for the form induced by B
    G = c0_gram(alg)
    # induced form on Lambda^2: <x^y, z^w> = B(x,z)B(y,w) - B(x,w)B(y,z)
    L = [[G[a][c] * G[b][d] - G[a][d] * G[b][c] for (c, d) in PAIRS] for (a, b) in PAIRS]
    comp = _nullspace([[sum(g[r] * L[r][c] for r in range(21)) for c in range(21)] for g in g_vecs], 21)
    if _rank([_matvec(cmap, g) for g in g_vecs]) != 0:
        raise AssertionError("the commutator does not vanish on g")
    # change of basis S = [g | comp]; projections diag(1,0) and diag(0,1) conjugated back
    S = [[(g_vecs + comp)[c][r] for c in range(21)] for r in range(21)]
    if _rank(S) != 21:
        raise AssertionError("g and its complement are not complementary")
    Sm = sympy.Matrix(21, 21, lambda i, j: sympy.Rational(S[i][j].numerator, S[i][j].denominator))
    Sinv = Sm.inv()
    def proj(keep):
        Dg = sympy.diag(*[1 if keep(k) else 0 for k in range(21)])
        P = Sm * Dg * Sinv
        return [[Fraction(int(sympy.fraction(P[i, j])[0]), int(sympy.fraction(P[i, j])[1])) for j in range(21)]
                for i in range(21)]
    P_g = proj(lambda k: k < len(g_vecs))
    P_c = proj(lambda k: k >= len(g_vecs))
    return Lambda2Split(P_g, P_c, cmap, _rank(P_g), _rank(P_c), _rank(cmap))


def projections_equivariant(split: Lambda2Split, der: DerivationAlgebra) -> bool:
    for D in der.basis:
        W = _wedge_action(D)
        for P in (split.P_g, split.P_c):
            if _matmul(P, W) != _matmul(W, P):
                return False
    return True


def projections_complementary(split: Lambda2Split) -> bool:
    n = 21
    I = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    Z = [[Fraction(0)] * n for _ in range(n)]
    s = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(split.P_g, split.P_c)]
    return (s == I and _matmul(split.P_g, split.P_g) == split.P_g
            and _matmul(split.P_c, split.P_c) == split.P_c and _matmul(split.P_g, split.P_c) == Z)


# ---------------------------------------------------------------------------
# long-root sl2

@dataclass
class WeightDatum:
    e: Matrix
    h: Matrix
    f: Matrix
    eigenvalues: list[int]
    candidate_index: int

    def multiset(self) -> list[int]:
        return sorted(self.eigenvalues)


def _is_zero(M) -> bool:
    return all(not v for row in M for v in row)


def _rank_matrix(M) -> int:
    return _rank([list(r) for r in M])


def _candidates(der: DerivationAlgebra):
    n = der.dimension
    for i in range(n):
        yield [Fraction(int(k == i)) for k in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        for s in (1, -1):
            c = [Fraction(0)] * n
            c[i], c[j] = Fraction(1), Fraction(s)
            yield c
    for i, j, k in itertools.combinations(range(n), 3):
        for s, t in itertools.product((1, -1), repeat=2):
            c = [Fraction(0)] * n
            c[i], c[j], c[k] = Fraction(1), Fraction(s), Fraction(t)
            yield c


def long_root_nilpotents(der: DerivationAlgebra, limit: int = 2):
    """Square-zero derivations of rank 2 on C_0, in the deterministic candidate order."""
    found = []
    for c in _candidates(der):
        E = der.combination(c)
        if _is_zero(_matmul(E, E)) and _rank_matrix(E) == 2:
            found.append(E)
            if len(found) >= limit:
                break
    return found


def _solve_in_algebra(der: DerivationAlgebra, lhs_maps, rhs_list):
    """Find coefficients x with sum_k x_k lhs_maps(B_k) = rhs (stacked conditions)."""
    n = der.dimension
    rows = []
    imgs = [lhs_maps(B) for B in der.basis]  # each a list of matrices
    for part in range(len(rhs_list)):
        for i in range(7):
            for j in range(7):
                rows.append([imgs[k][part][i][j] for k in range(n)] + [-rhs_list[part][i][j]])
    ns = [v for v in _nullspace(rows, n + 1) if v[-1]]
    if not ns:
        return None
    v = ns[0]
    return der.combination([x / v[-1] for x in v[:-1]])


def long_root_sl2_weights(alg: OctonionAlgebra, der: DerivationAlgebra | None = None,
                          candidate: int = 0) -> WeightDatum:
    if alg.flavor != "split":
        raise ValueError("integral weights need the split form")
    der = der or derivation_basis(alg)
    es = long_root_nilpotents(der, candidate + 1)
    if len(es) <= candidate:
        raise SearchFailure("no square-zero rank-2 derivation within the search bound")
    E = es[candidate]
    two_e = [[2 * v for v in row] for row in E]
    # f0 with [[e, f0], e] = 2e
    f0 = _solve_in_algebra(der, lambda B: [_bracket(_bracket(E, B), E)], [two_e])
    if f0 is None:
        raise SearchFailure("Jacobson-Morozov system for h has no solution")
    H = _bracket(E, f0)
    # f with [e, f] = h and [h, f] = -2f  (second condition as [h, f] + 2 f = 0)
    zero = [[Fraction(0)] * 7 for _ in range(7)]
    Fm = _solve_in_algebra(
        der, lambda B: [_bracket(E, B), [[a + 2 * b for a, b in zip(r1, r2)] for r1, r2 in zip(_bracket(H, B), B)]],
        [H, zero])
    if Fm is None:
        raise SearchFailure("Jacobson-Morozov system for f has no solution")
    Hm = sympy.Matrix(7, 7, lambda i, j: sympy.Rational(H[i][j].numerator, H[i][j].denominator))
    ev = Hm.eigenvals()
    eig = []
    for val, mult in ev.items():
        if not val.is_integer:
            raise ValueError(f"non-integral eigenvalue {val}")
        eig.extend([int(val)] * mult)
    if len(eig) != 7:
        raise ValueError("h is not diagonalizable over Q")
    return WeightDatum(E, H, Fm, sorted(eig), candidate)


def wedge_weights(datum: WeightDatum) -> list[int]:
    """Eigenvalues of h acting on Lambda^2 C_0 (from the matrix of the action)."""
    W = _wedge_action(datum.h)
    Wm = sympy.Matrix(21, 21, lambda i, j: sympy.Rational(W[i][j].numerator, W[i][j].denominator))
    out = []
    for val, mult in Wm.eigenvals().items():
        out.extend([int(val)] * mult)
    return sorted(out)


def pairwise_sum_weights(weights) -> list[int]:
    return sorted(a + b for a, b in itertools.combinations(weights, 2))


# ---------------------------------------------------------------------------
# commutants and torus weights

def commutant_dimension(alg: OctonionAlgebra, space: str = "C0", der: DerivationAlgebra | None = None,
                        constrained: bool = True) -> int:
    """dim of the linear maps on C_0 or Lambda^2 C_0 commuting with every derivation."""
    if space not in ("C0", "L2"):
        raise ValueError("space must be 'C0' or 'L2'")
    n = 7 if space == "C0" else 21
    if not constrained:
        return n * n
    der = der or derivation_basis(alg)
    mats = der.basis if space == "C0" else [_wedge_action(D) for D in der.basis]
    rows = []
    # X D - D X = 0, unknown X[a][b] at index a*n + b
    for D in mats:
        for i in range(n):
            for j in range(n):
                row = [Fraction(0)] * (n * n)
                for k in range(n):
                    if D[k][j]:
                        row[i * n + k] += D[k][j]
                    if D[i][k]:
                        row[k * n + j] -= D[i][k]
                if any(row):
                    rows.append(row)
    return n * n - _rank(rows)


def g2_torus_derivation(alg: OctonionAlgebra, c=(1, 2, -3)) -> Matrix:
    """On the split form: u_i -> c_i u_i, v_i -> -c_i v_i, trivial on 1 and h (sum c_i = 0)."""
    if alg.flavor != "split" or sum(c) != 0:
        raise ValueError("needs the split form and a trace-zero cocharacter")
    D = [[Fraction(0)] * 8 for _ in range(8)]
    for i in range(3):
        D[2 + i][2 + i] = Fraction(c[i])
        D[5 + i][5 + i] = Fraction(-c[i])
    if not is_derivation(alg, D):
        raise AssertionError("torus element is not a derivation")
    return D


def g2_torus_weights(alg: OctonionAlgebra, c=(1, 2, -3)) -> list[int]:
    D = g2_torus_derivation(alg, c)
    return sorted(int(D[i][i]) for i in range(1, 8))


def weight_counter(ws) -> Counter:
    return Counter(ws)
