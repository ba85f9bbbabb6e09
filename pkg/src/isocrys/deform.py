"""Window families over W(k)[[t]]: the unipotent deformation of the height-6
example and the two-window construction with Z/rZ-gradings.

Frobenius of a family is ``phi'(a) = U A tau(a)``: the unipotent U acts on the
target, so phi'(M_1) = U(pM) = pM and the window axiom survives.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy

from .graded import GradedSymmetricModule, build_paper_example, transpose
from .isocrystal import (
    FModule,
    determinant_valuation,
    generic_analysis,
    newton_slopes_finite,
    p_rank,
    required_precision_generic,
    slope_one_rank,
)
from .isogeny import IsogenyType, NewtonPolygon
from .linalg import reduce_mod_p, residue_rank
from .ring import (
    RingElem,
    RingSpec,
    int_mod,
    mat_from_elems,
    mat_identity,
    mat_mul,
    mat_tau,
    mat_zeros,
)


class FlagLengthError(ValueError):
    """Lattice flags whose quotient lengths differ from the required ones."""


class ConstraintError(ValueError):
    """Grading parameters outside the admissible range."""


class AnchoredPreconditionError(ValueError):
    """The claimed type has several middle blocks; decompose and check summands."""


# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WindowFamily:
    module: FModule                 # Frobenius U A over W_N(F_{p^f})[[t]]/(t^T)
    hodge: np.ndarray               # columns generate M_1 (t-constant)
    unipotent: np.ndarray
    base: FModule                   # the undeformed t-constant module
    gram: np.ndarray | None = None
    name: str = ""

    @property
    def spec(self) -> RingSpec:
        return self.module.spec

    def special_fiber(self) -> FModule:
        return self.module.constant_part()

    def hodge_dims(self) -> list[int]:
        """dim_k (M_sigma / M_sigma,1) at t = 0 for each degree sigma."""
        m = self.module
        out = []
        for s in range(m.r):
            rows = m.indices(s)
            cols = [j for j in range(self.hodge.shape[1])
                    if np.any(self.hodge[rows, j].astype(object) % self.spec.p)]
            rs, H = reduce_mod_p(self.spec, self.hodge[np.ix_(rows, cols)] if cols
                                 else mat_zeros(self.spec, len(rows), 1))
            out.append(len(rows) - residue_rank(rs, H))
        return out

    def window_certificate(self) -> dict:
        """phi(M_1) generates pM: divisibility by p, unit span mod (p, t), and det bookkeeping."""
        spec = self.spec
        m = self.module
        Y = mat_mul(spec, m.frobenius, mat_tau(spec, self.hodge))
        divisible = not np.any(Y.astype(object) % spec.p)
        span_rank = None
        if divisible:
            Yp = (Y.astype(object) // spec.p) % spec.modulus
            rs, Ybar = reduce_mod_p(spec, Yp[:, :, :1, :])
            span_rank = residue_rank(rs, Ybar)
        dims = self.hodge_dims()
        expected_v = sum(len(m.indices(s)) - d for s, d in enumerate(dims))
        v = determinant_valuation(m)
        return {
            "phi_M1_divisible_by_p": divisible,
            "phi_M1_over_p_rank_mod_p_t": span_rank,
            "rank": m.rank,
            "det_valuation": v,
            "expected_det_valuation": expected_v,
            "hodge_dims": dims,
            "pass": bool(divisible and span_rank == m.rank and v == expected_v),
        }

    def unipotent_invertible(self) -> bool:
        from .linalg import determinant

        return determinant(self.spec, self.unipotent).is_unit()

    def pairing_preserved(self) -> bool | None:
        if self.gram is None:
            return None
        spec = self.spec
        G = self.gram
        lhs = mat_mul(spec, mat_mul(spec, transpose(self.unipotent), G), self.unipotent)
        return np.array_equal(lhs.astype(object), np.asarray(G).astype(object))

    def to_dict(self) -> dict:
        from .isocrystal import matrix_to_json

        d = {"base_module": self.base.to_dict(), "U": matrix_to_json(self.unipotent),
             "hodge": matrix_to_json(self.hodge), "T": self.spec.T, "name": self.name}
        if self.gram is not None:
            d["gram"] = matrix_to_json(self.gram)
        return d


def deform(base: FModule, U, hodge, T: int, gram=None, name: str = "") -> WindowFamily:
    """The family with Frobenius U * A_base over W(k)[[t]]/(t^T)."""
    spec = base.spec.with_(T=T)
    A = _lift_t(base.spec, base.frobenius, spec)
    F = mat_mul(spec, U, A)
    mod = FModule(spec, F, base.degrees, base.r, name)
    fam = WindowFamily(mod, _lift_t(base.spec, hodge, spec), U, base,
                       None if gram is None else _lift_t(base.spec, gram, spec), name)
    return fam


def _lift_t(src: RingSpec, A, tgt: RingSpec) -> np.ndarray:
    A = np.asarray(A)
    out = mat_zeros(tgt, A.shape[0], A.shape[1])
    out[:, :, :1, :] = A[:, :, :1, :]
    return out


# ---------------------------------------------------------------------------
# the unipotent deformation of the height-6 example

def prop23_unipotent(spec: RingSpec) -> np.ndarray:
    """x0 -> x0, y0 -> y0 + t x0, z0 -> z0 - t y0 - (t^2/2) x0; identity on degree 1."""
    if spec.T < 3:
        raise ValueError("the unipotent needs T >= 3 (it has a t^2 term)")
    t = RingElem.t_power(spec, 1)
    half_t2 = RingElem.t_power(spec, 2, pow(2, -1, spec.modulus))
    one, zero = RingElem.one(spec), RingElem.zero(spec)
    rows = [[zero] * 6 for _ in range(6)]
    for i in range(6):
        rows[i][i] = one
    x0, y0, z0 = 0, 1, 2
    rows[x0][y0] = t                 # column y0 = y0 + t x0
    rows[y0][z0] = -t                # column z0 = z0 - t y0 - t^2/2 x0
    rows[x0][z0] = -half_t2
    return mat_from_elems(spec, rows)


def build_prop23_deformation(base: GradedSymmetricModule, T: int = 3) -> WindowFamily:
    spec = base.spec.with_(T=T)
    U = prop23_unipotent(spec)
    fam = deform(base.module, U, base.verschiebung, T, base.gram, "unipotent deformation")
    if not fam.unipotent_invertible():
        raise AssertionError("U is not invertible")
    if not fam.pairing_preserved():
        raise AssertionError("U does not preserve the pairing")
    if not np.array_equal(fam.special_fiber().frobenius, base.frobenius):
        raise AssertionError("special fiber differs from the base module")
    return fam


def prop23_family(p: int = 5, f: int = 4, N: int | None = None, ext_degree: int = 24) -> WindowFamily:
    """The deformation at a precision sufficient for its generic-fiber polygon."""
    if N is None:
        probe = build_paper_example(RingSpec(p=p, f=f, N=16))
        N = max(16, required_precision_generic(probe.module, ext_degree))
    return build_prop23_deformation(build_paper_example(RingSpec(p=p, f=f, N=N)))


# ---------------------------------------------------------------------------
# the two-window construction

@dataclass
class FlagData:
    r: int
    sigma1: int
    sigma2: int
    F: list[list[int]]              # exponent vectors of the diagonal lattices F_0..F_5 in M_{sigma2}
    E: list[list[int]]              # E_0..E_2 in M_{sigma1}
    N1: list[list[int]]
    N2: list[list[int]]

    def to_dict(self) -> dict:
        return {"r": self.r, "sigma1": self.sigma1, "sigma2": self.sigma2,
                "F": self.F, "E": self.E, "N1": self.N1, "N2": self.N2}

    @classmethod
    def from_dict(cls, d: dict) -> "FlagData":
        return cls(d["r"], d["sigma1"], d["sigma2"], d["F"], d["E"], d["N1"], d["N2"])


def check_twosl_parameters(r: int, sigma1: int, sigma2: int) -> None:
    if r < 7:
        raise ConstraintError("r must be at least 7")
    if not 5 <= sigma2 - sigma1 <= r - 2:
        raise ConstraintError(f"need 5 <= sigma2 - sigma1 <= r - 2, got {sigma2 - sigma1}")


def _hodge_pattern_K(r, s1, s2):
    return [1 if s in (s1 % r, s2 % r) else 2 for s in range(r)]


def k_step_exponents(r: int, sigma1: int, sigma2: int, sigma: int) -> tuple[int, int]:
    """p-exponents of phi on the (a, b) basis of K from degree sigma to sigma + 1."""
    s = sigma % r
    return int(s == sigma1 % r), int(s == sigma2 % r)


def h_step_exponent(r: int, sigma1: int, sigma: int) -> int:
    return int(sigma % r == sigma1 % r)


def standard_H(spec: RingSpec, r: int, sigma1: int) -> FModule:
    """Rank one per degree, phi(h_s) = p^[s = sigma1] h_{s+1}: type G_{r-1,1}."""
    A = mat_zeros(spec, r, r)
    for s in range(r):
        A[(s + 1) % r, s, 0, 0] = spec.p ** h_step_exponent(r, sigma1, s)
    return FModule(spec, A, tuple(range(r)), r, "H")


def standard_K(spec: RingSpec, r: int, sigma1: int, sigma2: int) -> FModule:
    """Basis (a_s, b_s): a picks up p at sigma1, b at sigma2: type G_{r-1,1}^2."""
    A = mat_zeros(spec, 2 * r, 2 * r)
    for s in range(r):
        ea, eb = k_step_exponents(r, sigma1, sigma2, s)
        t_ = (s + 1) % r
        A[2 * t_, 2 * s, 0, 0] = spec.p ** ea
        A[2 * t_ + 1, 2 * s + 1, 0, 0] = spec.p ** eb
    return FModule(spec, A, tuple(s for s in range(r) for _ in range(2)), r, "K")


def _hodge_from_frobenius(module: FModule) -> np.ndarray:
    """Generators of M_1 = V M: the columns of p A^{-1} (t-constant modules)."""
    return module.verschiebung()


def _ambient_exponents(r, s1, s2, sigma) -> list[int]:
    """p-exponents of phi on the 7 ambient coordinates (a1, b1, a2, b2, h1, h2, h3)."""
    ea, eb = k_step_exponents(r, s1, s2, sigma)
    eh = h_step_exponent(r, s1, sigma)
    return [ea, eb, ea, eb, eh, eh, eh]


def _phi_power_exponents(r, s1, s2, start, k) -> list[int]:
    tot = [0] * 7
    for j in range(k):
        tot = [a + b for a, b in zip(tot, _ambient_exponents(r, s1, s2, start + j))]
    return tot


def standard_flags(r: int, sigma1: int = 0, sigma2: int = 5, N1=None, N2=None) -> FlagData:
    """Coordinate flags: each step removes the factor p from the next coordinate that has one."""
    check_twosl_parameters(r, sigma1, sigma2)
    F0 = _phi_power_exponents(r, sigma1, sigma2, sigma1, sigma2 - sigma1)
    E0 = _phi_power_exponents(r, sigma1, sigma2, sigma2, r - (sigma2 - sigma1))
    F = [list(F0)]
    for i in range(7):
        if F[-1][i]:
            nxt = list(F[-1])
            nxt[i] -= 1
            F.append(nxt)
    E = [list(E0)]
    for i in range(7):
        if E[-1][i]:
            nxt = list(E[-1])
            nxt[i] -= 1
            E.append(nxt)
    return FlagData(r, sigma1, sigma2, F, E,
                    N1 if N1 is not None else [[0, 0], [1, 0]],
                    N2 if N2 is not None else [[0, 1], [0, 0]])


def validate_flags(flags: FlagData) -> tuple[int, int]:
    """Check the flag chains and the nilpotents; returns the two quotient lengths."""
    r, s1, s2 = flags.r, flags.sigma1, flags.sigma2
    check_twosl_parameters(r, s1, s2)
    F0 = _phi_power_exponents(r, s1, s2, s1, s2 - s1)
    E0 = _phi_power_exponents(r, s1, s2, s2, r - (s2 - s1))
    lengths = (sum(F0), sum(E0))
    if lengths != (5, 2):
        raise FlagLengthError(f"quotient lengths {lengths}, expected (5, 2)")
    for chain, start, name in ((flags.F, F0, "F"), (flags.E, E0, "E")):
        if list(chain[0]) != list(start):
            raise FlagLengthError(f"{name}_0 is not the image of phi")
        if any(chain[-1]):
            raise FlagLengthError(f"{name} does not end at the full lattice")
        for a, b in zip(chain, chain[1:]):
            if sum(a) - sum(b) != 1 or any(y > x for x, y in zip(a, b)):
                raise FlagLengthError(f"{name} is not a strictly increasing chain of colength-one steps")
        if any(e > 1 for e in chain[0]):
            raise FlagLengthError(f"{name}_0 does not contain p times the lattice")
    if len(flags.F) != 6 or len(flags.E) != 3:
        raise FlagLengthError(f"flag lengths {len(flags.F) - 1}, {len(flags.E) - 1}; expected 5, 2")
    for N, s, name in ((flags.N1, s1, "N1"), (flags.N2, s2, "N2")):
        _check_nilpotent(N, r, s1, s2, s, flags_p=None, name=name)
    return lengths


def _check_nilpotent(N, r, s1, s2, sigma, flags_p=None, name="N"):
    """N^2 = 0, ker N = im N (rank one), and im N not inside the Hodge part of K_sigma mod p."""
    M = sympy.Matrix(N)
    if M.shape != (2, 2):
        raise ValueError(f"{name} must be 2x2")
    if M * M != sympy.zeros(2, 2) or M.rank() != 1:
        raise ValueError(f"{name} must be square-zero of rank one")
    # Hodge part K_{sigma,1} mod p is spanned by the coordinate without a factor p at sigma
    ea, eb = k_step_exponents(r, s1, s2, sigma)
    hodge_line = [1, 0] if ea else [0, 1]
    col = M[:, 0] if any(M[:, 0]) else M[:, 1]
    if col[0] * hodge_line[1] - col[1] * hodge_line[0] == 0:
        raise ValueError(f"image of {name} lies in the Hodge part")


def _lattice_exponents(flags: FlagData) -> list[list[int]]:
    """Diagonal exponent vector of M_sigma in the ambient coordinates, sigma = 0..r-1."""
    r, s1, s2 = flags.r, flags.sigma1, flags.sigma2
    out: dict[int, list[int]] = {}
    for sig in range(s1, s2 + 1):
        k = min(sig - s1, 5)
        back = _phi_power_exponents(r, s1, s2, sig, s2 - sig)
        out[sig % r] = [e - b for e, b in zip(flags.F[k], back)]
    for sig in range(s2 - r, s1 + 1):
        k = min(sig - s2 + r, 2)
        back = _phi_power_exponents(r, s1, s2, sig, s1 - sig)
        out[sig % r] = [e - b for e, b in zip(flags.E[k], back)]
    exps = [out[s] for s in range(r)]
    if any(e < 0 for ex in exps for e in ex):
        raise FlagLengthError("a lattice leaves the ambient module")
    return exps


@dataclass
class TwoWindowResult:
    K: WindowFamily
    M: WindowFamily
    H: FModule
    flags: FlagData
    quotient_lengths: tuple[int, int]
    hodge_ranks_M: list[int]
    lattice_exponents: list[list[int]]

    def summary(self) -> dict:
        return {
            "r": self.flags.r,
            "sigma1": self.flags.sigma1,
            "sigma2": self.flags.sigma2,
            "quotient_lengths": list(self.quotient_lengths),
            "hodge_ranks_M": self.hodge_ranks_M,
            "N1": self.flags.N1,
            "N2": self.flags.N2,
        }


def _U_block(spec: RingSpec, N, copies: int, zeros_after: int) -> np.ndarray:
    """id + t (N on each of `copies` 2x2 blocks, zero on the remaining coordinates)."""
    n = 2 * copies + zeros_after
    U = mat_identity(spec, n)
    for c in range(copies):
        for i in range(2):
            for j in range(2):
                if N[i][j]:
                    U[2 * c + i, 2 * c + j, 1, 0] = int_mod(N[i][j], spec)
    return U


def _graded_unipotent(spec, module: FModule, blocks: dict[int, np.ndarray]) -> np.ndarray:
    U = mat_identity(spec, module.rank)
    for s, B in blocks.items():
        idx = module.indices(s)
        U[np.ix_(idx, idx)] = B
    return U


def build_twosl(r: int = 8, flags: FlagData | None = None, H: FModule | None = None,
                spec: RingSpec | None = None) -> TwoWindowResult:
    """The windows K~ (rank 2 per degree) and M~ (rank 7 per degree)."""
    flags = flags or standard_flags(r)
    if flags.r != r:
        raise ConstraintError("flag data was built for a different r")
    s1, s2 = flags.sigma1, flags.sigma2
    lengths = validate_flags(flags)
    spec = spec or RingSpec(p=5, f=1, N=16, T=1)
    base_spec = spec.with_(T=1)
    fam_spec = spec.with_(T=max(2, spec.T))
    H = H or standard_H(base_spec, r, s1)
    _check_H(H, r, s1)
    K = standard_K(base_spec, r, s1, s2)

    # K~: U at the target degrees sigma1, sigma2
    UK = _graded_unipotent(fam_spec, K, {s1 % r: _U_block(fam_spec, flags.N1, 1, 0),
                                         s2 % r: _U_block(fam_spec, flags.N2, 1, 0)})
    K_fam = deform(K, UK, _hodge_from_frobenius(K), fam_spec.T, name="K~")

    # M: diagonal sublattices of K^2 + H^3
    exps = _lattice_exponents(flags)
    p = base_spec.p
    A = mat_zeros(base_spec, 7 * r, 7 * r)
    for s in range(r):
        t_ = (s + 1) % r
        amb = _ambient_exponents(r, s1, s2, s)
        for i in range(7):
            e = amb[i] + exps[s][i] - exps[t_][i]
            if e < 0:
                raise FlagLengthError("Frobenius does not preserve the lattice chain")
            A[7 * t_ + i, 7 * s + i, 0, 0] = p ** e
    M = FModule(base_spec, A, tuple(s for s in range(r) for _ in range(7)), r, "M")
    for s in (s1 % r, s2 % r):
        if any(exps[s]):
            raise FlagLengthError(f"M_{s} must equal the ambient lattice")
    UM = _graded_unipotent(fam_spec, M, {s1 % r: _U_block(fam_spec, flags.N1, 2, 3),
                                         s2 % r: _U_block(fam_spec, flags.N2, 2, 3)})
    M_fam = deform(M, UM, _hodge_from_frobenius(M), fam_spec.T, name="M~")
    hodge_M = M_fam.hodge_dims()
    if min(hodge_M) < 6:
        raise FlagLengthError(f"Hodge ranks {hodge_M} fall below 6")
    for fam in (K_fam, M_fam):
        cert = fam.window_certificate()
        if not cert["pass"]:
            raise AssertionError(f"{fam.name} violates the window axiom: {cert}")
    return TwoWindowResult(K_fam, M_fam, H, flags, lengths, hodge_M, exps)


def _check_H(H: FModule, r: int, s1: int) -> None:
    if H.r != r or any(len(H.indices(s)) != 1 for s in range(r)):
        raise ValueError("H must have rank one in every degree")
    vals = []
    for s in range(r):
        v = RingElem(H.spec, H.frobenius_block(s)[0, 0]).valuation()
        vals.append(v)
    expected = [int(s == s1 % r) for s in range(r)]
    if vals != expected:
        raise ValueError(f"H has Frobenius valuations {vals}; expected {expected}")


def search_nilpotents(r: int = 8, sigma1: int = 0, sigma2: int = 5, p: int = 5,
                      trials: int = 3, seed: int = 0) -> tuple[list[list[int]], list[list[int]]]:
    """First admissible pair (N1, N2) in lexicographic order whose K~ has generic p-rank r."""
    cands = []
    for a, b, c, d in itertools.product(range(p), repeat=4):
        M = [[a, b], [c, d]]
        cands.append(M)
    spec = RingSpec(p=p, f=1, N=16)
    ok1, ok2 = [], []
    for M in cands:
        for sig, bucket in ((sigma1, ok1), (sigma2, ok2)):
            try:
                _check_nilpotent(M, r, sigma1, sigma2, sig)
            except ValueError:
                continue
            bucket.append(M)
    for N1 in ok1:
        for N2 in ok2:
            res = build_twosl(r, standard_flags(r, sigma1, sigma2, N1, N2), spec=spec)
            if p_rank(res.K.module, trials=trials, seed=seed) == r:
                return N1, N2
    raise RuntimeError("no admissible nilpotent pair found")


# ---------------------------------------------------------------------------
# anchored verification

@dataclass
class CheckResult:
    name: str
    expected: object
    observed: object

    @property
    def passed(self) -> bool:
        return self.expected == self.observed

    def to_dict(self) -> dict:
        return {"check": self.name, "expected": _jsonable(self.expected),
                "observed": _jsonable(self.observed), "pass": self.passed}


def _jsonable(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (IsogenyType, NewtonPolygon)):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


@dataclass
class AnchoredReport:
    claimed: IsogenyType
    fiber: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"claimed": str(self.claimed), "fiber": self.fiber, "pass": self.passed,
                "checks": [c.to_dict() for c in self.checks]}


def anchored_type_check(family: WindowFamily | FModule, claimed: IsogenyType, fiber: str = "generic",
                        trials: int = 3, seed: int = 0) -> AnchoredReport:
    """Certify a claimed type from det valuation, p-rank, slope-one rank and height.

    With at most one block of slope strictly between 0 and 1 these four
    numbers determine the polygon.
    """
    if len(claimed.middle_blocks()) > 1:
        raise AnchoredPreconditionError(
            f"{claimed} has {len(claimed.middle_blocks())} middle blocks; "
            "decompose along an isogeny and check the summands")
    if fiber not in ("special", "generic"):
        raise ValueError("fiber must be 'special' or 'generic'")
    if isinstance(family, WindowFamily):
        module = family.special_fiber() if fiber == "special" else family.module
    else:
        module = family if fiber == "generic" else family.constant_part()
    rep = AnchoredReport(claimed, fiber)
    rep.checks.append(CheckResult("height", claimed.height, module.rank))
    rep.checks.append(CheckResult("det_valuation", claimed.height - claimed.dimension,
                                  determinant_valuation(module)))
    rep.checks.append(CheckResult("p_rank", claimed.slope_multiplicity(0),
                                  p_rank(module, trials=trials, seed=seed)))
    rep.checks.append(CheckResult("slope_one_rank", claimed.slope_multiplicity(1),
                                  slope_one_rank(module, trials=trials, seed=seed)))
    return rep


def dual_part_type(t: IsogenyType) -> IsogenyType:
    return t.dual()


def special_and_generic_polygons(family: WindowFamily, trials: int = 3, ext_degree: int = 24, seed: int = 0):
    special = newton_slopes_finite(family.special_fiber())
    gen = generic_analysis(family.module, trials, ext_degree, seed)
    return special, gen
