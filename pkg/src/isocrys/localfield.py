"""Elements of W(F_{p^f})[1/p], Hilbert symbols and small local quadratic forms."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .ring import PrecisionError, RingElem, RingSpec, residue_power


@dataclass(frozen=True)
class LocalFieldElem:
    """``p^exp * unit`` with ``unit`` known modulo ``p^prec`` (zero when unit is None)."""

    spec: RingSpec
    unit: RingElem | None
    exp: int = 0
    prec: int = 0

    @classmethod
    def from_ring(cls, x: RingElem, exp: int = 0) -> "LocalFieldElem":
        spec = x.spec
        if spec.T != 1:
            if not x.is_constant():
                raise ValueError("local field elements must be t-constant")
            spec = spec.with_(T=1)
            x = RingElem(spec, x.coeffs[:1])
        v = x.valuation()
        if v >= spec.N:
            return cls(spec, None, 0, 0)
        return cls(spec, x.divide_by_p(v), exp + v, spec.N - v)

    @classmethod
    def from_int(cls, spec: RingSpec, n: int) -> "LocalFieldElem":
        from fractions import Fraction

        spec = spec.with_(T=1)
        n = Fraction(n)
        if n == 0:
            return cls(spec, None, 0, 0)
        num, den = n.numerator, n.denominator
        e = 0
        while num % spec.p == 0:
            num //= spec.p
            e += 1
        while den % spec.p == 0:
            den //= spec.p
            e -= 1
        m = spec.modulus
        return cls(spec, RingElem.scalar(spec, num * pow(den, -1, m) % m), e, spec.N)

    # queries
    def is_zero(self) -> bool:
        return self.unit is None

    def valuation(self) -> int:
        if self.unit is None:
            raise ValueError("valuation of zero")
        return self.exp

    def residue(self) -> tuple[int, ...]:
        if self.unit is None:
            raise ValueError("zero has no unit residue")
        if self.prec < 1:
            raise PrecisionError("unit part not determined mod p")
        return self.unit.residue()

    # arithmetic
    def __mul__(self, other: "LocalFieldElem") -> "LocalFieldElem":
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return LocalFieldElem(self.spec, None)
        return LocalFieldElem(self.spec, self.unit * other.unit, self.exp + other.exp,
                              min(self.prec, other.prec))

    __rmul__ = __mul__

    def __neg__(self):
        if self.is_zero():
            return self
        return LocalFieldElem(self.spec, -self.unit, self.exp, self.prec)

    def __add__(self, other: "LocalFieldElem") -> "LocalFieldElem":
        other = self._coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        a, b = (self, other) if self.exp <= other.exp else (other, self)
        shift = b.exp - a.exp
        prec = min(a.prec, b.prec + shift)
        s = a.unit + b.unit * (self.spec.p ** shift)
        v = s.valuation()
        if v >= prec:
            return LocalFieldElem(self.spec, None)
        return LocalFieldElem(self.spec, s.divide_by_p(v), a.exp + v, prec - v)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def inverse(self) -> "LocalFieldElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return LocalFieldElem(self.spec, self.unit.inverse(), -self.exp, self.prec)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def _coerce(self, other):
        if isinstance(other, (int, np.integer)):
            return LocalFieldElem.from_int(self.spec, int(other))
        if other.spec.with_(T=1) != self.spec:
            raise ValueError("specs differ")
        return other

    def __repr__(self):
        if self.is_zero():
            return "LocalFieldElem(0)"
        return f"LocalFieldElem(p^{self.exp} * {self.unit.coeffs[0].tolist()}, prec={self.prec})"


def quadratic_character(spec: RingSpec, residue, degree: int | None = None) -> int:
    """chi(u) = u^((q-1)/2) in F_q with q = p^degree, for a residue in that subfield."""
    d = spec.f if degree is None else degree
    if spec.f % d:
        raise ValueError("degree must divide f")
    val = residue_power(spec, residue, (spec.p ** d - 1) // 2)
    one = (1,) + (0,) * (spec.f - 1)
    minus = ((spec.p - 1),) + (0,) * (spec.f - 1)
    if val == one:
        return 1
    if val == minus:
        return -1
    raise ValueError("residue is zero or does not lie in the requested subfield")


def hilbert_symbol(a: LocalFieldElem, b: LocalFieldElem, degree: int | None = None) -> int:
    """Hilbert symbol of the unramified extension of Q_p of the given degree (odd p).

    Tame formula: for a = p^al u, b = p^be w,
    (a, b) = chi(u)^be * chi(w)^al * chi(-1)^(al*be).
    """
    if a.is_zero() or b.is_zero():
        raise ValueError("Hilbert symbol needs nonzero arguments")
    spec = a.spec
    al, be = a.valuation(), b.valuation()
    chi_u = quadratic_character(spec, a.residue(), degree)
    chi_w = quadratic_character(spec, b.residue(), degree)
    d = spec.f if degree is None else degree
    chi_m1 = 1 if (spec.p ** d - 1) // 2 % 2 == 0 else -1
    return (chi_u ** (be % 2)) * (chi_w ** (al % 2)) * (chi_m1 ** ((al * be) % 2))


def hasse_invariant(diag, degree: int | None = None) -> int:
    out = 1
    for i, j in itertools.combinations(range(len(diag)), 2):
        out *= hilbert_symbol(diag[i], diag[j], degree)
    return out


def discriminant(diag) -> LocalFieldElem:
    d = diag[0]
    for x in diag[1:]:
        d = d * x
    return d


def ternary_anisotropic(d1: LocalFieldElem, d2: LocalFieldElem, d3: LocalFieldElem,
                        degree: int | None = None) -> bool:
    """Is d1 x^2 + d2 y^2 + d3 z^2 anisotropic?  Anisotropic iff hasse != (-1, -disc)."""
    diag = [d1, d2, d3]
    if any(x.is_zero() for x in diag):
        raise ValueError("degenerate form")
    minus_one = LocalFieldElem.from_int(d1.spec, -1)
    return hasse_invariant(diag, degree) != hilbert_symbol(minus_one, -discriminant(diag), degree)


def square_class(x: LocalFieldElem, degree: int | None = None) -> tuple[int, int]:
    """(valuation mod 2, chi(unit)) -- a complete invariant of x modulo squares."""
    return x.valuation() % 2, quadratic_character(x.spec, x.residue(), degree)


def form_invariants(diag, degree: int | None = None) -> tuple[int, tuple[int, int], int]:
    """(rank, determinant square class, Hasse invariant) of a diagonal form."""
    return len(diag), square_class(discriminant(diag), degree), hasse_invariant(diag, degree)


def forms_equivalent(diag1, diag2, degree: int | None = None) -> bool:
    return form_invariants(diag1, degree) == form_invariants(diag2, degree)


def diagonalize(gram) -> list[LocalFieldElem]:
    """Diagonal entries of a form congruent to ``gram`` (symmetric elimination, p odd)."""
    G = [list(row) for row in gram]
    out = []
    while G:
        m = len(G)
        piv = next((i for i in range(m) if not G[i][i].is_zero()), None)
        if piv is None:
            pair = next(((i, j) for i in range(m) for j in range(i + 1, m)
                         if not G[i][j].is_zero()), None)
            if pair is None:
                raise ValueError("degenerate form")
            i, j = pair
            # congruence by e_i -> e_i + e_j; the new (i, i) entry is 2 G[i][j]
            row = [G[i][c] + G[j][c] for c in range(m)]
            row[i] = G[i][i] + G[i][j] + G[j][i] + G[j][j]
            G[i] = row
            for r in range(m):
                if r != i:
                    G[r][i] = row[r]
            piv = i
        a = G[piv][piv]
        out.append(a)
        ainv = a.inverse()
        rest = [r for r in range(m) if r != piv]
        G = [[G[r][c] - G[r][piv] * G[piv][c] * ainv for c in rest] for r in rest]
    return out


# ---------------------------------------------------------------------------
# real quadratic orders

@dataclass(frozen=True)
class QuadraticInteger:
    """a + b*omega in the maximal order of Q(sqrt(D)); omega = sqrt(D) or (1 + sqrt(D))/2."""

    a: int
    b: int
    D: int

    @property
    def omega_is_half(self) -> bool:
        return self.D % 4 == 1

    def rational_parts(self) -> tuple:
        """(x, y) with value x + y sqrt(D), as Fractions."""
        from fractions import Fraction

        if self.omega_is_half:
            return Fraction(2 * self.a + self.b, 2), Fraction(self.b, 2)
        return Fraction(self.a), Fraction(self.b)

    def embeddings(self) -> tuple[float, float]:
        x, y = self.rational_parts()
        r = math.sqrt(self.D)
        return float(x + y * r), float(x - y * r)

    def is_totally_positive(self) -> bool:
        x, y = self.rational_parts()
        # x + y sqrt(D) > 0 and x - y sqrt(D) > 0  <=>  x > 0 and x^2 > D y^2
        return x > 0 and x * x > self.D * y * y

    def __str__(self):
        w = "(1+sqrt(%d))/2" % self.D if self.omega_is_half else "sqrt(%d)" % self.D
        return f"{self.a} + {self.b}*{w}"


def sqrt_in_witt(D: int, spec: RingSpec) -> RingElem:
    """A square root of D in W_N(F_{p^2}) (first residue root, Hensel-lifted)."""
    if spec.f % 2:
        raise ValueError("need even residue degree")
    from .ring import subfield_basis

    basis = subfield_basis(spec, 2)
    const = spec.with_(T=1)
    resid = const.with_(N=1)
    root = None
    for digits in itertools.product(range(spec.p), repeat=2):
        vec = [sum(c * b[i] for c, b in zip(digits, basis)) % spec.p for i in range(spec.f)]
        y = RingElem(resid, np.array([vec], dtype=object))
        if (y * y - D).is_zero() and not y.is_zero():
            root = RingElem(const, np.array([vec], dtype=object))
            break
    if root is None:
        raise ValueError(f"{D} has no square root in F_{{p^2}}")
    prec = 1
    while prec < spec.N:
        root = root - (root * root - D) * (root * 2).inverse()
        prec *= 2
    return root


def quadratic_integer_to_local(z: QuadraticInteger, spec: RingSpec) -> LocalFieldElem:
    s = sqrt_in_witt(z.D, spec)
    x, y = z.rational_parts()
    m = spec.modulus
    inv2 = pow(2, -1, m)
    xi = x.numerator * (inv2 if x.denominator == 2 else 1)
    yi = y.numerator * (inv2 if y.denominator == 2 else 1)
    return LocalFieldElem.from_ring(RingElem.scalar(spec.with_(T=1), xi) + s * yi)


def is_inert(D: int, p: int) -> bool:
    return D % p != 0 and pow(D % p, (p - 1) // 2, p) == p - 1


class SearchExhausted(RuntimeError):
    pass


def small_totally_positive(D: int, bound: int) -> list[QuadraticInteger]:
    """Totally positive a + b omega with |a|, |b| <= bound, ordered by (max(|a|,|b|), a, b)."""
    out = []
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            z = QuadraticInteger(a, b, D)
            if z.is_totally_positive():
                out.append(z)
    out.sort(key=lambda z: (max(abs(z.a), abs(z.b)), z.a, z.b))
    return out


def find_anisotropic_triple(D: int, p: int, bound: int = 50, N: int = 16):
    """Deterministic search for totally positive a, b, c in O_K with anisotropic a x^2 + b y^2 + c z^2.

    Triples (i <= j <= k) of candidate indices are visited by increasing k,
    then j, then i.  Returns the triple of QuadraticIntegers.
    """
    if not is_inert(D, p):
        raise ValueError(f"{p} is not inert in Q(sqrt({D}))")
    spec = RingSpec(p=p, f=2, N=N)
    cands = small_totally_positive(D, bound)
    locs: dict[int, LocalFieldElem] = {}

    def loc(i):
        if i not in locs:
            locs[i] = quadratic_integer_to_local(cands[i], spec)
        return locs[i]

    for k in range(len(cands)):
        for j in range(k + 1):
            for i in range(j + 1):
                if ternary_anisotropic(loc(i), loc(j), loc(k), degree=2):
                    return cands[i], cands[j], cands[k]
    raise SearchExhausted(f"no anisotropic triple with coefficients bounded by {bound}")
