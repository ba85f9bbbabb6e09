"""Acceptance criteria, one test each.  Every test prints a single line

    ACCEPTANCE <n> PASS|FAIL  <title>  (<seconds>s, limit <limit>s)  <detail>

Run standalone with ``python3 tests/test_acceptance.py`` for just those lines.
"""

import itertools
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
import sympy

sys.path.insert(0, str(Path(__file__).parent))

from test_isocrystal import _oracle_matrix  # noqa: E402
from test_localfield import _isotropic_oracle, _random_local  # noqa: E402

from isocrys.deform import anchored_type_check, build_twosl, prop23_family, prop23_unipotent  # noqa: E402
from isocrys.ghost import ghost_case, ghost_isogeny_type, oort_invariant  # noqa: E402
from isocrys.graded import (build_paper_example, expected_example_form, paper_generator,  # noqa: E402
                            satisfies_f2_eq_p, skeleton_anisotropic, skeleton_matches, skeleton_solve, transpose)
from isocrys.isocrystal import (FModule, generic_analysis, newton_slopes_bruteforce,  # noqa: E402
                                newton_slopes_finite, p_rank, predicted_wedge_slopes, single_block_module,
                                wedge_square_twist)
from isocrys.isogeny import IsogenyType, NewtonPolygon, classify_graded_symmetric  # noqa: E402
from isocrys.localfield import (LocalFieldElem, find_anisotropic_triple, hilbert_symbol,  # noqa: E402
                                quadratic_integer_to_local, ternary_anisotropic)
from isocrys.octonion import (OctonionAlgebra, commutant_dimension, derivation_basis,  # noqa: E402
                              lambda2_split, long_root_sl2_weights, projections_complementary,
                              projections_equivariant)
from isocrys.ring import RingSpec, mat_from_ints, mat_mul, random_elem  # noqa: E402

P = IsogenyType.parse
HALF6 = NewtonPolygon.from_strings(["1/2"] * 6)


def c1():
    spec = RingSpec(p=5, f=4, N=16)
    s = newton_slopes_finite(build_paper_example(spec).module)
    return s == HALF6 and all(isinstance(x, Fraction) for x in s.slopes), f"slopes {s}"


def c2():
    fam = prop23_family()
    special = newton_slopes_finite(fam.special_fiber())
    g = generic_analysis(fam.module, trials=3, seed=0)
    agree = all(t == g.polygon for t in g.trial_polygons)
    certs = all(t.total() == g.det_valuation for t in g.trial_polygons)
    pr = p_rank(fam.module, trials=3, seed=0)
    ok = (special == HALF6 and g.polygon == NewtonPolygon.from_strings(["0", "0", "1/2", "1/2", "1", "1"])
          and agree and certs and pr == 2)
    return ok, f"special {special}, generic {g.polygon}, trials agree {agree}, certificates {certs}, p-rank {pr}"


def c3():
    c6, c4 = classify_graded_symmetric(6), classify_graded_symmetric(4)
    ok = (c6 == {P("G_{1,1}^3"), P("G_{0,1}^2+G_{1,1}+G_{1,0}^2")}
          and c4 == {P("G_{1,1}^2"), P("G_{0,1}^2+G_{1,0}^2")})
    return ok, f"h=4: {sorted(map(str, c4))}; h=6: {sorted(map(str, c6))}"


def c4():
    spec = RingSpec(p=5, f=4, N=16)
    m = build_paper_example(spec)
    sk = skeleton_solve(m)
    aniso = skeleton_anisotropic(sk)
    form = skeleton_matches(sk, expected_example_form(spec))
    rng = np.random.default_rng(0)
    gens = True
    for _ in range(8):
        a, b0 = random_elem(spec, rng), random_elem(spec, rng)
        gens &= satisfies_f2_eq_p(m, paper_generator(spec, a, b0 + b0.tau(2)), spec.N - 2)
    ok = sk.dimension == 3 and aniso and form and gens
    return ok, f"dim {sk.dimension}, anisotropic {aniso}, form ~ diag(1,2p,-2p delta) {form}, generators {gens}"


def c5():
    spec = RingSpec(p=5, f=4, N=16)
    m = build_paper_example(spec)
    compat = m.compatibility_defects() == [] and m.symmetry_defects() == []
    tspec = spec.with_(T=3)
    U = prop23_unipotent(tspec)
    G = np.zeros((6, 6, 3, spec.f), dtype=tspec.dtype)
    G[:, :, :1, :] = m.gram
    preserved = np.array_equal(mat_mul(tspec, mat_mul(tspec, transpose(U), G), U), G)
    return compat and preserved, f"compatibility on all 36 basis pairs {compat}, U^T G U = G {preserved}"


def c6():
    res = build_twosl(8)
    lengths = res.quotient_lengths == (5, 2)
    hodge = len(res.hodge_ranks_M) == 8 and min(res.hodge_ranks_M) >= 6
    ks = anchored_type_check(res.K, P("G_{7,1}^2"), "special").passed
    kg = anchored_type_check(res.K, P("G_{6,2}+G_{1,0}^8"), "generic").passed
    k_type = IsogenyType.from_slopes(generic_analysis(res.K.module).polygon)
    h_type = IsogenyType.from_slopes(newton_slopes_finite(res.H))
    m_type = k_type.scale(2) + h_type.scale(3)
    dual_ok = m_type.dual() == P("G_{0,1}^16+G_{1,7}^3+G_{2,6}^2")
    ok = lengths and hodge and ks and kg and dual_ok
    return ok, (f"lengths {res.quotient_lengths}, hodge ranks {res.hodge_ranks_M}, K special {ks}, "
                f"K generic {kg}, M generic {m_type}, dual {m_type.dual()}")


def c7():
    dims = {c: ghost_case(c, 8).dimension for c in ("so3", "so5", "g2")}
    g = ghost_isogeny_type(8)
    ok = dims == {"so3": 2, "so5": 1, "g2": 8} and g.is_self_dual() and not g.decomposable_into_self_duals()
    return ok, f"ghost dims {dims}, {g} self-dual {g.is_self_dual()}, decomposable {g.decomposable_into_self_duals()}"


def c8():
    notes = []
    ok = True
    for fl in ("division", "split"):
        alg = OctonionAlgebra.of(fl)
        d = derivation_basis(alg)
        s = lambda2_split(alg, d)
        comm = (commutant_dimension(alg, "C0", d), commutant_dimension(alg, "L2", d))
        rng = random.Random(5)
        mult = all(alg.norm(alg.mul(x, y)) == alg.norm(x) * alg.norm(y)
                   for x, y in ((tuple(Fraction(rng.randint(-5, 5)) for _ in range(8)),
                                 tuple(Fraction(rng.randint(-5, 5)) for _ in range(8))) for _ in range(1000)))
        good = (d.dimension == 14 and (s.rank_g, s.rank_c) == (14, 7) and projections_complementary(s)
                and projections_equivariant(s, d) and comm == (1, 2) and mult)
        ok &= good
        notes.append(f"{fl}: der {d.dimension}, split ({s.rank_g},{s.rank_c}), commutants {comm}, norm {mult}")
    w = long_root_sl2_weights(OctonionAlgebra.split()).multiset()
    ok &= w == [-1, -1, 0, 0, 0, 1, 1]
    notes.append(f"weights {w}")
    return ok, "; ".join(notes)


def c9():
    ok = True
    for p, f in itertools.product((3, 5, 13), (1, 2)):
        spec = RingSpec(p=p, f=f, N=8)
        rng = np.random.default_rng(p + 100 * f)
        for _ in range(200):
            a, b, c = (_random_local(spec, rng) for _ in range(3))
            h = hilbert_symbol(a, b, f)
            ok &= h == hilbert_symbol(b, a, f)
            ok &= hilbert_symbol(a, b * c, f) == h * hilbert_symbol(a, c, f)
            ok &= hilbert_symbol(a, -a, f) == 1
    laws = ok
    oracle = True
    for p in (3, 5):
        spec = RingSpec(p=p, f=1, N=8)
        u = next(x for x in range(2, p) if sympy.legendre_symbol(x, p) == -1)
        for combo in itertools.combinations_with_replacement([1, u, p, u * p, 2 * p, -1, -u * p], 3):
            diag = [LocalFieldElem.from_int(spec, c) for c in combo]
            oracle &= ternary_anisotropic(*diag) == (not _isotropic_oracle(combo, p))
    triple = find_anisotropic_triple(2, 5)
    spec2 = RingSpec(p=5, f=2, N=16)
    verified = (all(z.is_totally_positive() for z in triple)
                and ternary_anisotropic(*[quadratic_integer_to_local(z, spec2) for z in triple], degree=2))
    return laws and oracle and verified, (f"laws {laws}, residue oracle {oracle}, "
                                          f"triple {[str(z) for z in triple]} verified {verified}")


def c10():
    spec = RingSpec(p=5, f=2, N=16)
    agree = 0
    total = 0
    for n, count in ((2, 50), (3, 20)):
        rng = np.random.default_rng(1000 + n)
        for k in range(count):
            m = single_block_module(spec, _oracle_matrix(rng, n, spec, conjugate=bool(k % 2)))
            total += 1
            agree += newton_slopes_finite(m) == newton_slopes_bruteforce(m)
    wide = RingSpec(p=5, f=2, N=40)
    rng = np.random.default_rng(77)
    wedge_ok = True
    cases = 0
    for n in (2, 3):
        for k in range(4):
            m = single_block_module(wide, _oracle_matrix(rng, n, wide, conjugate=bool(k % 2)))
            wedge_ok &= newton_slopes_finite(wedge_square_twist(m)) == predicted_wedge_slopes(m)
            cases += 1
    ex_spec = RingSpec(p=5, f=4, N=16)
    ex = build_paper_example(ex_spec)
    twist = FModule(ex_spec, mat_from_ints(ex_spec, [[0, 5], [1, 0]]), (0, 1), 2)
    for tw in (None, twist):
        wedge_ok &= newton_slopes_finite(wedge_square_twist(ex.module, tw)) == predicted_wedge_slopes(ex.module, tw)
        cases += 1
    return agree == total and wedge_ok, f"oracle agreement {agree}/{total}, wedge cases {cases} ok {wedge_ok}"


def c11():
    vals = [oort_invariant(6, 8)] + [oort_invariant(g, 4) for g in range(5, 11)]
    ok = vals[0] == Fraction(3, 2) and all(v == Fraction(g, 2) for v, g in zip(vals[1:], range(5, 11)))
    return ok, f"values {[str(v) for v in vals]}"


CRITERIA = [
    (1, "height-6 example slopes", 10, c1),
    (2, "unipotent deformation fibers", 120, c2),
    (3, "graded symmetric classification", 1, c3),
    (4, "skeleton and anisotropy", 30, c4),
    (5, "pairing compatibility and U-invariance", None, c5),
    (6, "two-window construction r = 8", 300, c6),
    (7, "ghost bookkeeping", None, c7),
    (8, "octonions and G2", 60, c8),
    (9, "Hilbert symbol and quadratic forms", None, c9),
    (10, "Newton oracle and exterior squares", None, c10),
    (11, "Oort fractions", None, c11),
]


def evaluate(num):
    _, title, limit, fn = CRITERIA[num - 1]
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # report, then fail
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    dt = time.perf_counter() - t0
    in_time = limit is None or dt < limit
    passed = bool(ok and in_time)
    lim = f", limit {limit}s" if limit is not None else ""
    line = f"ACCEPTANCE {num:>2} {'PASS' if passed else 'FAIL'}  {title}  ({dt:.2f}s{lim})  {detail}"
    return passed, line


@pytest.mark.parametrize("num", [c[0] for c in CRITERIA])
def test_acceptance(num, capsys):
    passed, line = evaluate(num)
    with capsys.disabled():
        print("\n" + line)
    assert passed, line


if __name__ == "__main__":
    results = [evaluate(c[0]) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(p for p, _ in results) else 1)
