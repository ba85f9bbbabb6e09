from fractions import Fraction

import numpy as np
import pytest

from isocrys.graded import build_paper_example, height2_supersingular, ordinary_height4
from isocrys.isocrystal import (FModule, determinant_valuation, extend_and_specialize, generic_analysis,
                                newton_slopes_bruteforce, newton_slopes_finite, newton_slopes_generic, p_rank,
                                predicted_wedge_slopes, single_block_module, slope_one_rank, wedge_square_twist)
from isocrys.isogeny import NewtonPolygon
from isocrys.linalg import determinant, inverse_scaled
from isocrys.ring import PrecisionError, RingElem, RingSpec, mat_from_ints, mat_mul, mat_tau, random_matrix

SPEC = RingSpec(p=5, f=2, N=16)
WIDE = RingSpec(p=5, f=2, N=40)


def _unit_matrix(spec, rng, n):
    while True:
        R = random_matrix(spec, n, n, rng)
        if determinant(spec, R).is_unit():
            return R


def _oracle_matrix(rng, n, spec=SPEC, conjugate=False):
    """With P a random permutation and D = diag(p^e_i), e_i in {0, 1, 2}: R P D for a random R,
    or R (P D) tau(R)^-1 (same polygon as P D, often fractional) when ``conjugate``."""
    perm = rng.permutation(n)
    e = rng.integers(0, 3, n)
    PD = mat_from_ints(spec, [[5 ** int(e[j]) if perm[i] == j else 0 for j in range(n)] for i in range(n)])
    R = _unit_matrix(spec, rng, n) if conjugate else random_matrix(spec, n, n, rng)
    out = mat_mul(spec, R, PD)
    if conjugate:
        out = mat_mul(spec, out, inverse_scaled(spec, mat_tau(spec, R), 0)[0])
    return out


@pytest.mark.parametrize("n,count", [(2, 50), (3, 20)])
def test_finite_matches_bruteforce(n, count):
    rng = np.random.default_rng(100 + n)
    fractional = 0
    for _ in range(count):
        m = single_block_module(SPEC, _oracle_matrix(rng, n, conjugate=bool(rng.integers(0, 2))))
        a = newton_slopes_finite(m)
        assert a == newton_slopes_bruteforce(m)
        assert a.total() == determinant_valuation(m)
        fractional += any(s.denominator > 1 for s in a.slopes)
    assert fractional > 0


def test_small_examples():
    m = single_block_module(SPEC, [[0, 5], [1, 0]])
    assert newton_slopes_finite(m).to_strings() == ["1/2", "1/2"]
    assert p_rank(m) == 0 and slope_one_rank(m) == 0
    d = single_block_module(SPEC, [[1, 0], [0, 5]])
    assert newton_slopes_finite(d).to_strings() == ["0/1", "1/1"]
    assert p_rank(d) == 1 and slope_one_rank(d) == 1


def test_semilinear_conjugation_invariance():
    rng = np.random.default_rng(7)
    A = _oracle_matrix(rng, 3)
    R = _unit_matrix(SPEC, rng, 3)
    Rinv, _ = inverse_scaled(SPEC, mat_tau(SPEC, R), 0)
    B = mat_mul(SPEC, mat_mul(SPEC, R, A), Rinv)
    assert newton_slopes_finite(single_block_module(SPEC, A)) == newton_slopes_finite(single_block_module(SPEC, B))


def test_graded_examples(spec54):
    ex = build_paper_example(spec54)
    assert newton_slopes_finite(ex.module).to_strings() == ["1/2"] * 6
    o = ordinary_height4(spec54)
    assert newton_slopes_finite(o.module) == NewtonPolygon.from_strings(["0", "0", "1", "1"])
    assert p_rank(o.module) == 2 and slope_one_rank(o.module) == 2


def test_precision_guard():
    spec = RingSpec(p=5, f=1, N=3)
    m = single_block_module(spec, [[125 * 0 + 25, 0], [0, 25]])
    with pytest.raises(PrecisionError, match="N"):
        newton_slopes_finite(m)


def test_json_roundtrip(spec54):
    ex = build_paper_example(spec54)
    back = FModule.from_dict(ex.module.to_dict())
    assert np.array_equal(back.frobenius, ex.module.frobenius)
    assert back.degrees == ex.module.degrees and back.r == ex.module.r


def test_inhomogeneous_frobenius_rejected():
    A = mat_from_ints(SPEC, [[1, 0], [0, 1]])
    with pytest.raises(ValueError):
        FModule(SPEC, A, (0, 1), 2)


@pytest.mark.parametrize("n", [2, 3])
def test_wedge_square_ungraded(n):
    rng = np.random.default_rng(200 + n)
    for k in range(6):
        m = single_block_module(WIDE, _oracle_matrix(rng, n, WIDE, conjugate=bool(k % 2)))
        assert newton_slopes_finite(wedge_square_twist(m)) == predicted_wedge_slopes(m)


def test_wedge_square_unit_and_p_twist():
    rng = np.random.default_rng(9)
    A = mat_mul(WIDE, _oracle_matrix(rng, 3, WIDE, conjugate=True), mat_from_ints(WIDE, [[5, 0, 0], [0, 5, 0], [0, 0, 5]]))
    m = single_block_module(WIDE, A)
    for c in (2, 5):
        tw = single_block_module(WIDE, [[c]])
        w = wedge_square_twist(m, tw)
        assert newton_slopes_finite(w) == predicted_wedge_slopes(m, tw)


def test_wedge_square_graded_with_twist(spec54):
    ex = build_paper_example(spec54)
    # p on the degree 1 -> 0 step: the exterior square there is divisible by p
    twist = FModule(spec54, mat_from_ints(spec54, [[0, 5], [1, 0]]), (0, 1), 2)
    for tw in (None, twist):
        w = wedge_square_twist(ex.module, tw)
        assert newton_slopes_finite(w) == predicted_wedge_slopes(ex.module, tw)
    assert newton_slopes_finite(wedge_square_twist(ex.module, twist)).to_strings() == ["1/2"] * 6
    bad = FModule(spec54, mat_from_ints(spec54, [[0, 1], [5, 0]]), (0, 1), 2)
    with pytest.raises(ValueError):
        wedge_square_twist(ex.module, bad)
    with pytest.raises(ValueError):
        wedge_square_twist(height2_supersingular(spec54).module)


def test_constant_family_generic_equals_special():
    spec = RingSpec(p=5, f=2, N=12, T=3)
    A = mat_from_ints(spec, [[0, 5], [1, 0]])
    m = FModule(spec, A)
    assert newton_slopes_generic(m, ext_degree=4) == newton_slopes_finite(m.constant_part())


def test_generic_family_moves_to_ordinary():
    """[[t, p], [1, 0]] is supersingular at t = 0 and ordinary at t = unit."""
    spec = RingSpec(p=5, f=1, N=12, T=2)
    A = mat_from_ints(spec, [[0, 5], [1, 0]])
    A[0, 0, 1, 0] = 1
    m = FModule(spec, A)
    g = generic_analysis(m, trials=3, ext_degree=4, seed=0)
    assert g.polygon == NewtonPolygon.from_strings(["0", "1"])
    assert all(t.total() == g.det_valuation for t in g.trial_polygons)
    assert p_rank(m, ext_degree=4) == 1
    assert newton_slopes_finite(m.constant_part()).to_strings() == ["1/2", "1/2"]


def test_specialization_at_zero_is_special_fiber():
    spec = RingSpec(p=5, f=1, N=8, T=2)
    A = mat_from_ints(spec, [[0, 5], [1, 0]])
    A[0, 0, 1, 0] = 1
    m = FModule(spec, A)
    tgt = RingSpec(p=5, f=2, N=8)
    s = extend_and_specialize(m, tgt, RingElem.zero(tgt))
    assert newton_slopes_finite(s) == newton_slopes_finite(m.constant_part())
    assert Fraction(1) == newton_slopes_finite(s).total()
