"""Semilinear Frobenius modules and their Newton polygons.

A module of rank h over ``W_N(F_{p^f})[[t]]/(t^T)`` is given by a matrix A
(shape ``(h, h, T, f)``) acting by ``F(a) = A tau(a)`` on column vectors.  An
optional grading ``degrees[i] in Z/rZ`` must make F homogeneous of degree 1.

Slopes are computed on one graded piece: the r-fold iterate of F restricts to
a tau^r-semilinear endomorphism Phi of M_0.  Over F_{p^f}, tau^r has order
l = f / gcd(f, r), so the product of l twists of Phi is linear and its
characteristic polynomial gives the slopes (divided by l r, each repeated r
times).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .isogeny import NewtonPolygon, newton_polygon_from_valuations
from .linalg import (
    charpoly,
    determinant,
    inverse_scaled,
    reduce_mod_p,
    stable_rank,
)
from .ring import (
    PrecisionError,
    RingElem,
    RingSpec,
    change_precision,
    embed_constant,
    mat_mul,
    mat_tau,
    mat_twisted_product,
    mat_zeros,
    random_residue,
    teichmuller,
)


class InconsistencyError(ArithmeticError):
    """Independent computations that must agree did not."""


class NonStabilizationError(ArithmeticError):
    """Windowed slope estimates did not settle."""


@dataclass(frozen=True, eq=False)
class FModule:
    spec: RingSpec
    frobenius: np.ndarray
    degrees: tuple[int, ...] | None = None
    r: int = 1
    name: str = ""

    def __post_init__(self):
        A = np.asarray(self.frobenius)
        if A.ndim != 4 or A.shape[0] != A.shape[1] or A.shape[2:] != (self.spec.T, self.spec.f):
            raise ValueError(f"frobenius has shape {A.shape}, expected (h, h, {self.spec.T}, {self.spec.f})")
        object.__setattr__(self, "frobenius", A.astype(self.spec.dtype))
        if self.degrees is None:
            object.__setattr__(self, "degrees", (0,) * A.shape[0])
            object.__setattr__(self, "r", 1)
        else:
            degs = tuple(int(d) % self.r for d in self.degrees)
            if len(degs) != A.shape[0]:
                raise ValueError("one degree per basis vector is required")
            object.__setattr__(self, "degrees", degs)
        self._check_homogeneous()

    def _check_homogeneous(self):
        A = self.frobenius
        for i, j in zip(*np.nonzero(np.any(A.astype(object) != 0, axis=(2, 3)))):
            if self.degrees[i] != (self.degrees[j] + 1) % self.r:
                raise ValueError(f"Frobenius entry ({i},{j}) breaks homogeneity of degree 1")

    @property
    def rank(self) -> int:
        return self.frobenius.shape[0]

    @property
    def graded(self) -> bool:
        return self.r > 1

    def indices(self, sigma: int) -> list[int]:
        return [i for i, d in enumerate(self.degrees) if d == sigma % self.r]

    def block(self, X, target: int, source: int) -> np.ndarray:
        return np.asarray(X)[np.ix_(self.indices(target), self.indices(source))]

    def frobenius_block(self, sigma: int) -> np.ndarray:
        """Matrix of F: M_sigma -> M_{sigma+1}."""
        return self.block(self.frobenius, sigma + 1, sigma)

    def is_t_constant(self) -> bool:
        return self.spec.T == 1 or not np.any(self.frobenius[:, :, 1:].astype(object))

    def constant_part(self) -> "FModule":
        """The fiber at t = 0 as a module over W_N(F_{p^f})."""
        spec = self.spec.with_(T=1)
        return FModule(spec, self.frobenius[:, :, :1, :], self.degrees, self.r, self.name)

    def with_frobenius(self, A) -> "FModule":
        return FModule(self.spec, A, self.degrees, self.r, self.name)

    def verschiebung(self) -> np.ndarray:
        """tau^{-1}(p A^{-1}) for t-constant modules (V with F V = V F = p)."""
        if not self.is_t_constant():
            raise ValueError("V is only formed on t-constant modules (specialise first)")
        spec = self.spec
        inv, lost = inverse_scaled(spec, self.frobenius, 1)
        if lost >= spec.N:
            raise PrecisionError("no digits of V survive")
        return mat_tau(spec, inv, -1)

    # -- serialization ----------------------------------------------------
    def to_dict(self) -> dict:
        d = {"ring": self.spec.to_dict(), "rank": self.rank, "F": matrix_to_json(self.frobenius)}
        if self.graded:
            d["grading"] = list(self.degrees)
            d["r"] = self.r
        if self.name:
            d["name"] = self.name
        return d

    @classmethod
    def from_dict(cls, d: dict, spec: RingSpec | None = None) -> "FModule":
        spec = spec or RingSpec.from_dict(d["ring"])
        A = matrix_from_json(spec, d["F"])
        if "rank" in d and d["rank"] != A.shape[0]:
            raise ValueError("rank does not match the Frobenius matrix")
        grading = d.get("grading")
        r = d.get("r", (max(grading) + 1) if grading else 1)
        return cls(spec, A, tuple(grading) if grading else None, r, d.get("name", ""))


def matrix_to_json(A) -> list:
    """Entries become ints when they are constants of Z/p^N, nested coefficient lists otherwise."""
    A = np.asarray(A).astype(object)
    out = []
    for row in A:
        r = []
        for e in row:
            if not np.any(e.ravel()[1:]):
                r.append(int(e.ravel()[0]))
            else:
                r.append([[int(c) for c in tc] for tc in e])
        out.append(r)
    return out


def matrix_from_json(spec: RingSpec, rows) -> np.ndarray:
    from .ring import int_mod

    A = mat_zeros(spec, len(rows), len(rows[0]))
    for i, row in enumerate(rows):
        if len(row) != len(rows[0]):
            raise ValueError("ragged matrix")
        for j, e in enumerate(row):
            if isinstance(e, list):
                arr = np.array(e, dtype=object)
                if arr.ndim != 2 or arr.shape[0] > spec.T or arr.shape[1] > spec.f:
                    raise ValueError(f"entry ({i},{j}) has shape {arr.shape}")
                for k in range(arr.shape[0]):
                    for x in range(arr.shape[1]):
                        A[i, j, k, x] = int(arr[k, x]) % spec.modulus
            else:
                A[i, j, 0, 0] = int_mod(Fraction(e) if isinstance(e, str) else e, spec)
    return A


# ---------------------------------------------------------------------------
# cycle reduction

def cycle_matrix(module: FModule, X, degree_step: int = 1, tau_step: int = 1) -> np.ndarray:
    """Matrix of the r-fold iterate of x -> X tau^tau_step(x) restricted to M_0.

    X must be homogeneous of degree ``degree_step``.
    """
    r, s = module.r, degree_step
    spec = module.spec
    cur = module.block(X, s, 0)
    for k in range(1, r):
        cur = mat_mul(spec, module.block(X, s * (k + 1), s * k), mat_tau(spec, cur, tau_step))
    return cur


def _check_square_blocks(module: FModule) -> int:
    sizes = {len(module.indices(s)) for s in range(module.r)}
    if len(sizes) != 1:
        raise ValueError(f"graded pieces have unequal ranks {sorted(sizes)}")
    return sizes.pop()


def cycle_order(module: FModule) -> int:
    """Number l of Phi-twists whose product is linear over W(F_{p^f})."""
    return module.spec.f // math.gcd(module.spec.f, module.r)


def linearized_cycle(module: FModule) -> np.ndarray:
    """B = Phi tau^r(Phi) ... (l factors), a linear endomorphism of M_0."""
    _check_square_blocks(module)
    Phi = cycle_matrix(module, module.frobenius)
    return mat_twisted_product(module.spec, Phi, cycle_order(module), module.r)


def determinant_valuation(module: FModule) -> int:
    """v(det Phi) = sum over one grading cycle of v(det F_sigma): the sum of all slopes."""
    _check_square_blocks(module)
    total = 0
    for s in range(module.r):
        v = determinant(module.spec, module.frobenius_block(s)).valuation()
        if v >= module.spec.N:
            raise PrecisionError(f"v(det F_{s}) >= N={module.spec.N}: the degree-{s} Frobenius is "
                                  "singular at working precision; raise N")
        total += v
    return total


def newton_slopes_finite(module: FModule) -> NewtonPolygon:
    if not module.is_t_constant():
        raise ValueError("module depends on t; use newton_slopes_generic or the special fiber")
    if module.spec.T > 1:
        module = module.constant_part()
    spec = module.spec
    d = _check_square_blocks(module)
    ell, r = cycle_order(module), module.r
    B = linearized_cycle(module)
    coeffs = charpoly(spec, B)
    vals = [c.valuation() for c in coeffs]
    if vals[-1] >= spec.N:
        vdet = determinant_valuation(module)
        need = ell * vdet + 1
        raise PrecisionError(f"v(det) of the cycle product is {ell * vdet} >= N={spec.N}; need N >= {need}")
    pts = [v if v < spec.N else None for v in vals]
    mu = newton_polygon_from_valuations(pts)
    assert len(mu) == d
    slopes = []
    for s in mu:
        slopes.extend([s / (ell * r)] * r)
    return NewtonPolygon(tuple(slopes))


# ---------------------------------------------------------------------------
# specialization t -> [lambda]

def extend_and_specialize(module: FModule, target: RingSpec, value: RingElem | None) -> FModule:
    """Base change to ``target`` (T = 1, residue degree a multiple of f) with t -> value."""
    src = module.spec
    if target.T != 1 or target.f % src.f or target.p != src.p:
        raise ValueError("target must be a t-free extension of the base ring")
    const_src = src.with_(T=1)
    A = module.frobenius.astype(object)
    h = module.rank
    powers = [RingElem.one(target)]
    if src.T > 1:
        if value is None:
            raise ValueError("a specialization value is required for t-dependent modules")
        for _ in range(1, src.T):
            powers.append(powers[-1] * value)
    out = mat_zeros(target, h, h)
    cache = {}
    for i in range(h):
        for j in range(h):
            acc = RingElem.zero(target)
            for k in range(src.T):
                vec = tuple(int(c) % target.modulus for c in A[i, j, k])
                if not any(vec):
                    continue
                if vec not in cache:
                    cache[vec] = embed_constant(const_src, vec, target)
                acc = acc + cache[vec] * powers[k]
            out[i, j] = acc.coeffs
    return FModule(target, out, module.degrees, module.r, module.name)


def extension_spec(spec: RingSpec, ext_degree: int, N: int | None = None) -> RingSpec:
    F = math.lcm(spec.f, ext_degree)
    return RingSpec(p=spec.p, f=F, N=spec.N if N is None else N, T=1)


@dataclass
class GenericAnalysis:
    polygon: NewtonPolygon
    trial_polygons: list[NewtonPolygon]
    det_valuation: int
    lambdas: list[tuple[int, ...]]
    ext_degree: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "slopes": self.polygon.to_strings(),
            "trials": [p.to_strings() for p in self.trial_polygons],
            "det_valuation": self.det_valuation,
            "ext_degree": self.ext_degree,
            "seed": self.seed,
        }


def _random_lambdas(target: RingSpec, ext_degree: int, trials: int, seed: int):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < trials:
        lam = random_residue(target, rng, ext_degree)
        if any(lam):
            out.append(lam)
    return out


def generic_analysis(module: FModule, trials: int = 3, ext_degree: int = 24, seed: int = 0) -> GenericAnalysis:
    """Generic-fiber slopes by Teichmueller specialization, with per-trial certificates.

    Each trial substitutes t -> [lambda] for a random lambda in F_{p^ext_degree}
    and computes slopes of the resulting finite-field isocrystal.  The sum of
    slopes of every trial must equal v(det) over one grading cycle of the
    family; the returned polygon is the lower envelope of the trials.
    """
    v_family = determinant_valuation(module)
    target = extension_spec(module.spec, ext_degree)
    lambdas = _random_lambdas(target, ext_degree, trials, seed)
    polys = []
    for lam in lambdas:
        value = teichmuller(lam, target) if module.spec.T > 1 else None
        spec_mod = extend_and_specialize(module, target, value)
        poly = newton_slopes_finite(spec_mod)
        if poly.total() != v_family:
            raise InconsistencyError(
                f"trial lambda={lam}: slope sum {poly.total()} differs from v(det)={v_family}")
        polys.append(poly)
    return GenericAnalysis(lower_envelope(polys), polys, v_family, lambdas, ext_degree, seed)


def newton_slopes_generic(module: FModule, trials: int = 3, ext_degree: int = 24, seed: int = 0) -> NewtonPolygon:
    return generic_analysis(module, trials, ext_degree, seed).polygon


def lower_envelope(polys: list[NewtonPolygon]) -> NewtonPolygon:
    ords = [p.ordinates() for p in polys]
    low = [min(col) for col in zip(*ords)]
    # convex hull of the pointwise minimum; ordinates are rational so scale to integers
    den = math.lcm(*(x.denominator for x in low))
    slopes = newton_polygon_from_valuations([int(x * den) for x in low])
    return NewtonPolygon(tuple(s / den for s in slopes))


def required_precision_generic(module: FModule, ext_degree: int = 24) -> int:
    """Smallest N for which the generic computation can certify a nonzero determinant."""
    F = math.lcm(module.spec.f, ext_degree)
    ell = F // math.gcd(F, module.r)
    return ell * determinant_valuation(module) + 1


# ---------------------------------------------------------------------------
# brute-force oracle

def newton_slopes_bruteforce(module: FModule, k: int | None = None, max_rounds: int = 4) -> NewtonPolygon:
    """Slopes from growth rates of determinantal divisors of iterated Frobenius.

    Only for ungraded t-constant modules of rank at most 4.  The matrix
    entries are read as canonical integer lifts and the products are formed at
    a working precision large enough that no divisor is truncated.
    """
    if module.graded or not module.is_t_constant():
        raise ValueError("brute force handles ungraded t-constant modules only")
    h = module.rank
    if h > 4:
        raise ValueError("brute force is limited to rank <= 4")
    v = determinant(module.spec.with_(T=1), module.constant_part().frobenius).valuation()
    if v >= module.spec.N:
        raise PrecisionError(f"v(det F) >= N={module.spec.N}; raise N")
    L = math.lcm(*range(1, h + 1))
    k = v + 2 if k is None else k
    for _ in range(max_rounds):
        w = L * k
        n_max = 3 * w
        N_work = n_max * v + 1
        spec, A = change_precision(module.spec.with_(T=1), module.constant_part().frobenius, N_work)
        P1 = mat_twisted_product(spec, A, w)
        P2 = mat_mul(spec, P1, mat_tau(spec, P1, w))
        P3 = mat_mul(spec, P2, mat_tau(spec, P1, 2 * w))
        d1, d2, d3 = (_divisor_vals(spec, P) for P in (P1, P2, P3))
        est_a = [_round_to(Fraction(b - a, w), L) for a, b in zip(d1, d2)]
        est_b = [_round_to(Fraction(b - a, w), L) for a, b in zip(d2, d3)]
        if est_a == est_b:
            sums = [Fraction(0)] + est_a
            return NewtonPolygon(tuple(b - a for a, b in zip(sums, sums[1:])))
        k *= 2
    raise NonStabilizationError(f"windowed estimates disagree: {est_a} vs {est_b}")


def _round_to(x: Fraction, L: int) -> Fraction:
    return Fraction(round(x * L), L)


def _divisor_vals(spec: RingSpec, P) -> list[int]:
    h = P.shape[0]
    out = []
    for i in range(1, h + 1):
        best = spec.N
        for rows in itertools.combinations(range(h), i):
            for cols in itertools.combinations(range(h), i):
                best = min(best, determinant(spec, P[np.ix_(rows, cols)]).valuation())
        out.append(best)
    return out


# ---------------------------------------------------------------------------
# p-rank and slope-one rank

def _stable_rank_cycle(module: FModule, X, degree_step: int, tau_step: int) -> int:
    """r times the stable rank of the mod-p cycle map on M_0."""
    Phi = cycle_matrix(module, X, degree_step, tau_step)
    rs, Pbar = reduce_mod_p(module.spec, Phi)
    return module.r * stable_rank(rs, Pbar, tau_step * module.r)


def _finite_p_rank(module: FModule) -> int:
    return _stable_rank_cycle(module, module.frobenius, 1, 1)


def _finite_slope_one_rank(module: FModule) -> int:
    return _stable_rank_cycle(module, module.verschiebung(), -1, -1)


def p_rank(module: FModule, trials: int = 3, ext_degree: int = 24, seed: int = 0) -> int:
    """Multiplicity of the slope 0, via the stable rank of iterated F mod p.

    For t-dependent modules the rank is taken at Teichmueller specializations
    in F_{p^ext_degree} (maximum over trials; a lower bound for the generic
    rank that is exact with high probability).
    """
    _check_square_blocks(module)
    if module.is_t_constant():
        return _finite_p_rank(module.constant_part())
    low = module.spec.with_(N=1)
    reduced = FModule(low, (module.frobenius.astype(object) % module.spec.p).astype(low.dtype),
                      module.degrees, module.r)
    target = extension_spec(low, ext_degree, N=1)
    best = 0
    for lam in _random_lambdas(target, ext_degree, trials, seed):
        value = RingElem.from_residue(target, lam)
        best = max(best, _finite_p_rank(extend_and_specialize(reduced, target, value)))
    return best


def slope_one_rank(module: FModule, trials: int = 3, ext_degree: int = 24, seed: int = 0) -> int:
    """Multiplicity of the slope 1, via the stable rank of iterated V mod p."""
    _check_square_blocks(module)
    if module.is_t_constant():
        return _finite_slope_one_rank(module.constant_part())
    target = extension_spec(module.spec, ext_degree)
    best = 0
    for lam in _random_lambdas(target, ext_degree, trials, seed):
        spec_mod = extend_and_specialize(module, target, teichmuller(lam, target))
        best = max(best, _finite_slope_one_rank(spec_mod))
    return best


# ---------------------------------------------------------------------------
# exterior square with a rank-one twist

def wedge_square_twist(module: FModule, twist: FModule | None = None) -> FModule:
    """Graded pieces Lambda^2(M_sigma) tensored with the dual of a rank-one twist.

    The twist Frobenius N_sigma -> N_{sigma+1} is a scalar c_sigma; the dual
    contributes c_sigma^{-1}, which must keep the result integral.
    """
    spec = module.spec
    r = module.r
    if twist is not None:
        if twist.r != r or twist.spec != spec:
            raise ValueError("twist must share the ring and grading of the module")
        if any(len(twist.indices(s)) != 1 for s in range(r)):
            raise ValueError("twist must have rank one in every degree")
    pairs = {}
    degrees = []
    for s in range(r):
        idx = module.indices(s)
        if len(idx) < 2:
            raise ValueError("every graded piece needs rank at least 2")
        pairs[s] = list(itertools.combinations(idx, 2))
        degrees.extend([s] * len(pairs[s]))
    offsets = {}
    pos = 0
    for s in range(r):
        offsets[s] = pos
        pos += len(pairs[s])
    A = module.frobenius
    out = mat_zeros(spec, pos, pos)
    for s in range(r):
        t_ = (s + 1) % r
        if twist is not None:
            c = RingElem(spec, twist.frobenius[twist.indices(t_)[0], twist.indices(s)[0]])
            vc = c.valuation()
            if vc >= spec.N:
                raise PrecisionError("twist Frobenius vanishes")
            cinv = c.divide_by_p(vc).inverse() if vc else c.inverse()
        else:
            vc, cinv = 0, RingElem.one(spec)
        for a, (j1, j2) in enumerate(pairs[s]):
            for b, (i1, i2) in enumerate(pairs[t_]):
                m = (RingElem(spec, A[i1, j1]) * RingElem(spec, A[i2, j2])
                     - RingElem(spec, A[i1, j2]) * RingElem(spec, A[i2, j1]))
                if vc:
                    if m.valuation() < vc:
                        raise ValueError("twist is not divisible into the exterior square")
                    m = m.divide_by_p(vc)
                out[offsets[t_] + b, offsets[s] + a] = (m * cinv).coeffs
    return FModule(spec, out, tuple(degrees) if r > 1 else None, r, "wedge2")


def cycle_slopes(module: FModule) -> list[Fraction]:
    """The d = rank/r distinct-position slopes of one graded piece (F-slopes)."""
    poly = newton_slopes_finite(module)
    return list(poly.slopes[:: module.r]) if module.r > 1 else list(poly.slopes)


def predicted_wedge_slopes(module: FModule, twist: FModule | None = None) -> NewtonPolygon:
    s = cycle_slopes(module)
    mu = Fraction(0)
    if twist is not None:
        mu = newton_slopes_finite(twist).slopes[0]
    out = []
    for i, j in itertools.combinations(range(len(s)), 2):
        out.extend([s[i] + s[j] - mu] * module.r)
    return NewtonPolygon(tuple(out))


def single_block_module(spec: RingSpec, A) -> FModule:
    """Convenience: an ungraded module from an integer matrix or a ring matrix."""
    from .ring import mat_from_ints

    arr = np.asarray(A) if not isinstance(A, list) else None
    if arr is not None and arr.ndim == 4:
        return FModule(spec, arr.astype(spec.dtype))
    return FModule(spec, mat_from_ints(spec, A))
