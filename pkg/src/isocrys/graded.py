"""Graded Dieudonne modules with symmetric pairings, skeletons and anisotropy."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .isocrystal import FModule, cycle_matrix, matrix_from_json, matrix_to_json, newton_slopes_finite
from .linalg import int_rank, inverse_scaled, kernel_basis, residue_rank, reduce_mod_p
from .localfield import (
    LocalFieldElem,
    diagonalize,
    forms_equivalent,
    quadratic_integer_to_local,
    ternary_anisotropic,
)
from .ring import (
    PrecisionError,
    RingElem,
    RingSpec,
    mat_from_ints,
    mat_identity,
    mat_mul,
    mat_sub,
    mat_tau,
    mat_zeros,
    nonsquare_in_subfield,
    subfield_basis,
    teichmuller,
)


class InvariantViolation(AssertionError):
    """A construction produced data violating a structural invariant."""


class ActionIncompatibility(ValueError):
    """Quaternionic data whose swap or pairing does not descend."""


def transpose(A) -> np.ndarray:
    return np.transpose(np.asarray(A), (1, 0, 2, 3))


def _sub_block(A, rows, cols):
    return np.asarray(A)[np.ix_(rows, cols)]


# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GradedSymmetricModule:
    module: FModule
    verschiebung: np.ndarray
    gram: np.ndarray

    @property
    def spec(self) -> RingSpec:
        return self.module.spec

    @property
    def rank(self) -> int:
        return self.module.rank

    @property
    def frobenius(self) -> np.ndarray:
        return self.module.frobenius

    def fv_defects(self) -> list[str]:
        spec, A, V = self.spec, self.frobenius, self.verschiebung
        pI = mat_identity(spec, self.rank, spec.p)
        out = []
        if not np.array_equal(mat_mul(spec, A, mat_tau(spec, V, 1)), pI):
            out.append("FV != p")
        if not np.array_equal(mat_mul(spec, V, mat_tau(spec, A, -1)), pI):
            out.append("VF != p")
        return out

    def compatibility_defects(self) -> list[tuple[int, int]]:
        """Basis pairs (i, j) where tau(phi(e_i, V e_j)) != phi(F e_i, e_j)."""
        spec = self.spec
        lhs = mat_tau(spec, mat_mul(spec, self.gram, self.verschiebung), 1)
        rhs = mat_mul(spec, transpose(self.frobenius), self.gram)
        bad = np.any(lhs.astype(object) != rhs.astype(object), axis=(2, 3))
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(bad))]

    def orthogonality_defects(self) -> list[tuple[int, int]]:
        """Basis pairs of distinct degree with nonzero pairing (Z/2Z case)."""
        m = self.module
        G = self.gram.astype(object)
        return [(i, j) for i in range(self.rank) for j in range(self.rank)
                if m.degrees[i] != m.degrees[j] and np.any(G[i, j])]

    def symmetry_defects(self) -> list[tuple[int, int]]:
        G = self.gram.astype(object)
        return [(i, j) for i in range(self.rank) for j in range(i) if np.any(G[i, j] != G[j, i])]

    def v_homogeneity_defects(self) -> list[tuple[int, int]]:
        m = self.module
        V = self.verschiebung.astype(object)
        return [(i, j) for i in range(self.rank) for j in range(self.rank)
                if np.any(V[i, j]) and m.degrees[i] != (m.degrees[j] - 1) % m.r]

    def verify(self) -> None:
        problems = []
        problems += self.fv_defects()
        if self.symmetry_defects():
            problems.append(f"gram not symmetric at {self.symmetry_defects()[:3]}")
        if self.compatibility_defects():
            problems.append(f"pairing compatibility fails at {self.compatibility_defects()[:3]}")
        if self.v_homogeneity_defects():
            problems.append("V is not homogeneous of degree -1")
        if self.module.r == 2 and self.orthogonality_defects():
            problems.append("phi(M_0, M_1) != 0")
        from .linalg import determinant

        if determinant(self.spec, self.gram).valuation() >= self.spec.N:
            problems.append("pairing is degenerate at working precision")
        if problems:
            raise InvariantViolation("; ".join(problems))

    def to_dict(self) -> dict:
        d = self.module.to_dict()
        d["V"] = matrix_to_json(self.verschiebung)
        d["gram"] = matrix_to_json(self.gram)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GradedSymmetricModule":
        m = FModule.from_dict(d)
        out = cls(m, matrix_from_json(m.spec, d["V"]), matrix_from_json(m.spec, d["gram"]))
        out.verify()
        return out


def from_integer_data(spec: RingSpec, F, V, gram, degrees, r: int, name: str = "") -> GradedSymmetricModule:
    mod = FModule(spec, mat_from_ints(spec, F), tuple(degrees), r, name)
    out = GradedSymmetricModule(mod, mat_from_ints(spec, V), mat_from_ints(spec, gram))
    out.verify()
    return out


# ---------------------------------------------------------------------------
# the explicit height-6 example

EXAMPLE_BASIS = ("x0", "y0", "z0", "x1", "y1", "z1")


def paper_example_matrices(p: int):
    """Integer Frobenius, Verschiebung and Gram matrices in the basis x0 y0 z0 x1 y1 z1."""
    ix = {n: k for k, n in enumerate(EXAMPLE_BASIS)}
    F = [[0] * 6 for _ in range(6)]
    V = [[0] * 6 for _ in range(6)]
    G = [[0] * 6 for _ in range(6)]

    def put(M, src, dst, c=1):
        M[ix[dst]][ix[src]] = c

    # F: x0 -> x1, y0 -> y1, z0 -> p z1, x1 -> z0, y1 -> p y0, z1 -> p x0
    for s, d, c in [("x0", "x1", 1), ("y0", "y1", 1), ("z0", "z1", p),
                    ("x1", "z0", 1), ("y1", "y0", p), ("z1", "x0", p)]:
        put(F, s, d, c)
    # V: x0 -> z1, y0 -> y1, z1 -> z0, x1 -> p x0, y1 -> p y0, z0 -> p x1
    for s, d, c in [("x0", "z1", 1), ("y0", "y1", 1), ("z1", "z0", 1),
                    ("x1", "x0", p), ("y1", "y0", p), ("z0", "x1", p)]:
        put(V, s, d, c)
    for a, b, c in [("y0", "y0", 1), ("x0", "z0", 1), ("x1", "z1", 1), ("y1", "y1", p)]:
        G[ix[a]][ix[b]] = c
        G[ix[b]][ix[a]] = c
    return F, V, G


def build_paper_example(spec: RingSpec) -> GradedSymmetricModule:
    if spec.f % 4:
        raise ValueError("the residue degree must be divisible by 4")
    if spec.N < 6:
        raise ValueError("precision N >= 6 is required")
    F, V, G = paper_example_matrices(spec.p)
    return from_integer_data(spec, F, V, G, (0, 0, 0, 1, 1, 1), 2, "height-6 example")


def height2_supersingular(spec: RingSpec) -> GradedSymmetricModule:
    """Rank one per degree: F x = y, F y = p x, V likewise; (x,x) = 1, (y,y) = p."""
    p = spec.p
    F = [[0, p], [1, 0]]
    G = [[1, 0], [0, p]]
    return from_integer_data(spec, F, F, G, (0, 1), 2, "height-2 supersingular")


def ordinary_height4(spec: RingSpec) -> GradedSymmetricModule:
    """Z/2Z-graded module of type G_{1,0}^2 + G_{0,1}^2 (basis a0 b0 a1 b1)."""
    p = spec.p
    F = [[0, 0, 1, 0], [0, 0, 0, p], [1, 0, 0, 0], [0, p, 0, 0]]
    V = [[0, 0, p, 0], [0, 0, 0, 1], [p, 0, 0, 0], [0, 1, 0, 0]]
    G = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
    return from_integer_data(spec, F, V, G, (0, 0, 1, 1), 2, "ordinary height-4")


# ---------------------------------------------------------------------------
# Morita splitting

@dataclass(frozen=True, eq=False)
class QuaternionicModuleData:
    """N of rank 2g with idempotents, swap, skew pairing and an O_K generator action."""

    module: FModule
    verschiebung: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    swap: np.ndarray
    psi: np.ndarray
    action: np.ndarray          # matrix of the generator omega of W(F_{p^2})
    omega: RingElem

    def defects(self) -> list[str]:
        spec = self.module.spec
        n = self.module.rank
        I, Z = mat_identity(spec, n), mat_zeros(spec, n, n)
        mm = lambda a, b: mat_mul(spec, a, b)  # noqa: E731
        eq = np.array_equal
        out = []
        if not eq((self.e1.astype(object) + self.e2) % spec.modulus, I.astype(object)):
            out.append("e1 + e2 != 1")
        if not eq(mm(self.e1, self.e2), Z):
            out.append("e1 e2 != 0")
        if not eq(mm(mm(self.swap, self.e1), self.swap), self.e2):
            out.append("s e1 s != e2")
        if not eq(mm(self.swap, self.swap), I):
            out.append("s^2 != 1")
        if not eq((self.psi.astype(object) + transpose(self.psi)) % spec.modulus, Z.astype(object)):
            out.append("psi not skew")
        A = self.module.frobenius
        for name, X in (("e1", self.e1), ("e2", self.e2), ("s", self.swap), ("omega", self.action)):
            if not eq(mm(A, mat_tau(spec, X)), mm(X, A)):
                out.append(f"{name} does not commute with F")
        return out


def synthetic_double(m: GradedSymmetricModule, omega_residue=None) -> QuaternionicModuleData:
    """N = M + M with e1, e2 the projections, s the swap and psi(x,y) = phi(x2,y1) - phi(x1,y2)."""
    spec = m.spec
    g = m.rank
    if m.module.r != 2:
        raise ValueError("doubling expects a Z/2Z-graded module")
    A, V, G = m.frobenius, m.verschiebung, m.gram
    Z = mat_zeros(spec, g, g)
    I = mat_identity(spec, g)

    def blk(a, b, c, d):
        return np.concatenate([np.concatenate([a, b], axis=1), np.concatenate([c, d], axis=1)], axis=0)

    negG = ((-G.astype(object)) % spec.modulus).astype(spec.dtype)
    omega = omega_generator(spec) if omega_residue is None else teichmuller(omega_residue, spec)
    tw = omega.tau()
    act = mat_zeros(spec, g, g)
    for i, d in enumerate(m.module.degrees):
        act[i, i] = (omega if d == 0 else tw).coeffs
    big = FModule(spec, blk(A, Z, Z, A))
    return QuaternionicModuleData(
        module=big,
        verschiebung=blk(V, Z, Z, V),
        e1=blk(I, Z, Z, Z),
        e2=blk(Z, Z, Z, I),
        swap=blk(Z, I, I, Z),
        psi=blk(Z, negG, G, Z),
        action=blk(act, Z, Z, act),
        omega=omega,
    )


def omega_generator(spec: RingSpec) -> RingElem:
    """Teichmueller lift of the first generator of F_{p^2} over F_p in subfield-basis order."""
    import itertools

    if spec.f % 2:
        raise ValueError("W(F_{p^2}) does not embed")
    const = spec.with_(T=1)
    basis = subfield_basis(const, 2)
    for digits in itertools.product(range(spec.p), repeat=2):
        vec = tuple(sum(c * b[i] for c, b in zip(digits, basis)) % spec.p for i in range(spec.f))
        if any(vec[1:]):
            return teichmuller(vec, spec)
    raise RuntimeError("no generator")  # pragma: no cover


def _independent_columns(spec: RingSpec, P, k: int) -> list[int]:
    """First k columns of P that are independent modulo p."""
    rs, Pbar = reduce_mod_p(spec, P)
    chosen: list[int] = []
    for c in range(P.shape[1]):
        if residue_rank(rs, Pbar[:, chosen + [c]]) == len(chosen) + 1:
            chosen.append(c)
            if len(chosen) == k:
                return chosen
    raise ActionIncompatibility("image of the idempotent is not free of the expected rank")


def morita_split(data: QuaternionicModuleData) -> tuple[GradedSymmetricModule, np.ndarray]:
    """Recover (M = N[e2], phi, grading) with phi(u, v) = psi(u, s v).

    Returns the module and the 2g x g matrix whose columns are the chosen basis
    of M inside N.  The reconstruction identity
    psi(x, y) = phi(e2 x, s e1 y) - phi(s e1 x, e2 y) is verified.
    """
    problems = data.defects()
    if problems:
        raise ActionIncompatibility("; ".join(problems))
    spec = data.module.spec
    n = data.module.rank
    if n % 2:
        raise ActionIncompatibility("rank of N must be even")
    g = n // 2
    mm = lambda a, b: mat_mul(spec, a, b)  # noqa: E731
    # basis of M = e2 N, then split by the O_K eigenvalues omega, tau(omega)
    cols = _independent_columns(spec, data.e2, g)
    Bm = data.e2[:, cols]
    omega, tw = data.omega, data.omega.tau()
    diff_inv = (omega - tw).inverse()

    def scalar(c: RingElem, k):
        S = mat_zeros(spec, k, k)
        for i in range(k):
            S[i, i] = c.coeffs
        return S

    P0 = mm(mat_sub(spec, data.action, scalar(tw, n)), scalar(diff_inv, n))
    P1 = mm(mat_sub(spec, scalar(omega, n), data.action), scalar(diff_inv, n))
    Q0, Q1 = mm(P0, Bm), mm(P1, Bm)
    c0 = _independent_columns(spec, Q0, residue_rank(*reduce_mod_p(spec, Q0)))
    c1 = _independent_columns(spec, Q1, g - len(c0))
    C = np.concatenate([Q0[:, c0], Q1[:, c1]], axis=1)  # n x g, columns in N
    rows = _independent_columns(spec, transpose(C), g)
    Csq = C[rows]
    Cinv, lost = inverse_scaled(spec, Csq, 0)
    if lost:
        raise ActionIncompatibility("eigenbasis is not a lattice basis")

    def coords(X):
        return mm(Cinv, X[rows])

    A = data.module.frobenius
    F_new = coords(mm(A, mat_tau(spec, C)))
    V_new = coords(mm(data.verschiebung, mat_tau(spec, C, -1)))
    gram = mm(mm(transpose(C), data.psi), mm(data.swap, C))
    degrees = tuple([0] * len(c0) + [1] * len(c1))
    out = GradedSymmetricModule(FModule(spec, F_new, degrees, 2, "morita split"), V_new, gram)
    if not _reconstruction_holds(data, C, Cinv, rows, gram):
        raise ActionIncompatibility("psi does not descend to a pairing on N[e2]")
    out.verify()
    return out, C


def _reconstruction_holds(data, C, Cinv, rows, gram) -> bool:
    spec = data.module.spec
    n = data.module.rank
    mm = lambda a, b: mat_mul(spec, a, b)  # noqa: E731
    # coordinates in the M basis of e2 x and of s e1 x, as g x n matrices
    X2 = mm(data.e2, mat_identity(spec, n))
    X1 = mm(data.swap, mm(data.e1, mat_identity(spec, n)))
    c2 = mm(Cinv, X2[rows])
    c1 = mm(Cinv, X1[rows])
    lhs = data.psi
    rhs = mat_sub(spec, mm(transpose(c2), mm(gram, c1)), mm(transpose(c1), mm(gram, c2)))
    # both projections must land back in span(C)
    if not np.array_equal(mm(C, c2), X2) or not np.array_equal(mm(C, c1), X1):
        return False
    return np.array_equal(lhs.astype(object), rhs.astype(object))


def reconstruction_with(data: QuaternionicModuleData, C, gram) -> bool:
    """Does the reconstruction identity hold for a candidate Gram matrix on M?"""
    spec = data.module.spec
    g = C.shape[1]
    rows = _independent_columns(spec, transpose(C), g)
    Cinv, _ = inverse_scaled(spec, C[rows], 0)
    return _reconstruction_holds(data, C, Cinv, rows, gram)


# ---------------------------------------------------------------------------
# skeleton

@dataclass
class Skeleton:
    spec: RingSpec
    basis: list[list[RingElem]]        # coordinates on M_0
    gram: list[list[RingElem]]
    reliable_digits: int
    kernel_rank: int
    subfield_degree: int = 2
    notes: list[str] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def local_gram(self) -> list[list[LocalFieldElem]]:
        return [[LocalFieldElem.from_ring(x) for x in row] for row in self.gram]

    def diagonal(self) -> list[LocalFieldElem]:
        return diagonalize(self.local_gram())


def _degree0_cycle(m: GradedSymmetricModule) -> tuple[np.ndarray, list[int]]:
    mod = m.module
    return cycle_matrix(mod, mod.frobenius), mod.indices(0)


def _vec_from_flat(spec: RingSpec, flat, d: int) -> list[RingElem]:
    f = spec.f
    out = []
    for i in range(d):
        arr = np.zeros((spec.T, f), dtype=object)
        arr[0] = [int(v) % spec.modulus for v in flat[i * f:(i + 1) * f]]
        out.append(RingElem(spec, arr))
    return out


def _flat(vec: list[RingElem]) -> list[int]:
    out = []
    for x in vec:
        out.extend(int(c) for c in x.coeffs[0])
    return out


def apply_cycle(spec: RingSpec, Phi, vec: list[RingElem], step: int) -> list[RingElem]:
    """Phi tau^step(vec)."""
    d = len(vec)
    out = []
    for i in range(d):
        acc = RingElem.zero(spec)
        for j in range(d):
            acc = acc + RingElem(spec, Phi[i, j]) * vec[j].tau(step)
        out.append(acc)
    return out


def skeleton_solve(m: GradedSymmetricModule) -> Skeleton:
    """A W(F_{p^2})[1/p]-basis of {x in M_0[1/p] : F^2 x = p x} with its Gram matrix."""
    spec = m.spec
    if m.module.r != 2:
        raise ValueError("skeletons are defined for Z/2Z-graded modules")
    if spec.f % 2:
        raise ValueError("residue degree must be even")
    if spec.T > 1:
        raise ValueError("t-free modules only")
    Phi, idx0 = _degree0_cycle(m)
    d, f, p = len(idx0), spec.f, spec.p
    tau2 = np.asarray(spec.frob_power(2)).astype(object)
    # Z_p-linear matrix of a -> Phi tau^2(a) - p a on W(F_{p^f})^d
    cols = []
    for i in range(d):
        for k in range(f):
            vec = [RingElem.zero(spec) for _ in range(d)]
            arr = np.zeros((1, f), dtype=object)
            arr[0] = tau2[:, k]
            vec[i] = RingElem(spec, arr)
            flat = _flat(apply_cycle(spec, Phi, vec, 0))  # tau^2 already applied
            flat[i * f + k] -= p
            cols.append(flat)
    M = [[cols[c][r] for c in range(d * f)] for r in range(d * f)]
    kern, reliable = kernel_basis(M, p, spec.N)
    # greedy basis over W(F_{p^2}) = Z_p[omega]
    omega = omega_generator(spec)
    chosen: list[list[RingElem]] = []
    span: list[list[int]] = []
    for v in kern:
        vec = _vec_from_flat(spec, v, d)
        trial = span + [_flat(vec), _flat([omega * x for x in vec])]
        if int_rank(trial, p, spec.N) == len(trial):
            chosen.append(vec)
            span = trial
    if 2 * len(chosen) != len(kern):
        raise PrecisionError("kernel is not a W(F_{p^2})-module at this precision")
    G0 = _sub_block(m.gram, idx0, idx0)
    gram = []
    for a in chosen:
        row = []
        for b in chosen:
            acc = RingElem.zero(spec)
            for i in range(d):
                for j in range(d):
                    acc = acc + a[i] * RingElem(spec, G0[i, j]) * b[j]
            row.append(acc)
        gram.append(row)
    sk = Skeleton(spec, chosen, gram, reliable, len(kern))
    _check_skeleton(m, sk)
    return sk


def _check_skeleton(m: GradedSymmetricModule, sk: Skeleton) -> None:
    spec = sk.spec
    Phi, _ = _degree0_cycle(m)
    prec = min(sk.reliable_digits, spec.N - 2)
    mod = spec.p ** prec
    for vec in sk.basis:
        img = apply_cycle(spec, Phi, vec, 2)
        for a, b in zip(img, vec):
            if np.any((a.coeffs.astype(object) - spec.p * b.coeffs.astype(object)) % mod):
                raise InvariantViolation("skeleton vector violates F^2 = p")
    for row in sk.gram:
        for x in row:
            if x.tau(2) != x:
                raise InvariantViolation("restricted pairing is not tau^2-invariant")


def satisfies_f2_eq_p(m: GradedSymmetricModule, vec: list[RingElem], precision: int | None = None) -> bool:
    spec = m.spec
    Phi, _ = _degree0_cycle(m)
    prec = spec.N if precision is None else precision
    mod = spec.p ** prec
    img = apply_cycle(spec, Phi, vec, 2)
    return all(not np.any((a.coeffs.astype(object) - spec.p * b.coeffs.astype(object)) % mod)
               for a, b in zip(img, vec))


def paper_generator(spec: RingSpec, alpha: RingElem, beta: RingElem) -> list[RingElem]:
    """p alpha x0 + beta y0 + tau^2(alpha) z0 in M_0 coordinates (x0, y0, z0)."""
    return [alpha * spec.p, beta, alpha.tau(2)]


def skeleton_anisotropic(sk: Skeleton) -> bool:
    if sk.dimension != 3:
        raise ValueError(f"skeleton has dimension {sk.dimension}, expected 3")
    diag = sk.diagonal()
    if any(x.is_zero() for x in diag):
        raise ValueError("degenerate form")
    return ternary_anisotropic(*diag, degree=sk.subfield_degree)


def expected_example_form(spec: RingSpec) -> list[LocalFieldElem]:
    """diag(1, 2p, -2p delta) with delta the Teichmueller lift of a fixed non-square of F_{p^2}."""
    delta = teichmuller(nonsquare_in_subfield(spec, 2), spec)
    two_p = LocalFieldElem.from_int(spec, 2 * spec.p)
    return [LocalFieldElem.from_int(spec, 1), two_p, -(two_p * LocalFieldElem.from_ring(delta))]


def skeleton_matches(sk: Skeleton, diag: list[LocalFieldElem]) -> bool:
    return forms_equivalent(sk.diagonal(), diag, sk.subfield_degree)


# ---------------------------------------------------------------------------
# tensor construction from a height-2 base

def tensor_lattice_module(diag, base: GradedSymmetricModule) -> GradedSymmetricModule:
    """Three copies of the height-2 base with pairing scaled by a, b, c.

    ``diag`` holds three elements of W(F_{p^2}) given as RingElem, LocalFieldElem
    units or QuadraticInteger values of a real quadratic order in which p is
    inert.  On a copy scaled by a, the degree-0 line is scaled by a and the
    degree-1 line by tau(a), which keeps the pairing compatible with F and V.
    """
    spec = base.spec
    if base.rank != 2 or base.module.r != 2:
        raise ValueError("base must have rank one in each of two degrees")
    scalars = [_as_ring_scalar(spec, x) for x in diag]
    if len(scalars) != 3:
        raise ValueError("three scalars are required")
    order = [0, 2, 4, 1, 3, 5]  # x-lines first (degree 0), then y-lines
    h = 6
    A = mat_zeros(spec, h, h)
    V = mat_zeros(spec, h, h)
    G = mat_zeros(spec, h, h)
    degrees = []
    pos = {}
    for new, old in enumerate(order):
        pos[old] = new
    for copy, a in enumerate(scalars):
        for i in range(2):
            for j in range(2):
                A[pos[2 * copy + i], pos[2 * copy + j]] = base.frobenius[i, j]
                V[pos[2 * copy + i], pos[2 * copy + j]] = base.verschiebung[i, j]
                scale = a if base.module.degrees[i] == 0 else a.tau()
                G[pos[2 * copy + i], pos[2 * copy + j]] = (RingElem(spec, base.gram[i, j]) * scale).coeffs
    for old in order:
        degrees.append(base.module.degrees[old % 2])
    out = GradedSymmetricModule(FModule(spec, A, tuple(degrees), 2, "tensor lattice"), V, G)
    out.verify()
    return out


def _as_ring_scalar(spec: RingSpec, x) -> RingElem:
    from .localfield import QuadraticInteger

    if isinstance(x, RingElem):
        val = x
    elif isinstance(x, QuadraticInteger):
        loc = quadratic_integer_to_local(x, spec)
        if loc.valuation() != 0:
            raise ValueError(f"{x} is not a p-adic unit")
        val = loc.unit
    elif isinstance(x, LocalFieldElem):
        if x.exp != 0:
            raise ValueError("scalars must be integral")
        val = x.unit
    else:
        val = RingElem.scalar(spec, int(x))
    if val.tau(2) != val:
        raise ValueError("scalars must lie in W(F_{p^2})")
    return val


def base_skeleton_value(base: GradedSymmetricModule) -> LocalFieldElem:
    sk = skeleton_solve(base)
    if sk.dimension != 1:
        raise ValueError("base skeleton must be one-dimensional")
    return LocalFieldElem.from_ring(sk.gram[0][0])


def supersingular_slopes_ok(m: GradedSymmetricModule) -> bool:
    from fractions import Fraction

    return all(s == Fraction(1, 2) for s in newton_slopes_finite(m.module).slopes)
