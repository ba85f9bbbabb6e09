import random
from collections import Counter
from fractions import Fraction

import pytest

from isocrys.octonion import (OctonionAlgebra, commutant_dimension, derivation_basis, g2_torus_derivation,
                              g2_torus_weights, is_derivation, lambda2_split, long_root_sl2_weights,
                              pairwise_sum_weights, projections_complementary, projections_equivariant,
                              skew_defects, wedge_weights)

FLAVORS = ["division", "split"]


@pytest.fixture(scope="module", params=FLAVORS)
def alg(request):
    return OctonionAlgebra.of(request.param)


@pytest.fixture(scope="module")
def der(alg):
    return derivation_basis(alg)


def _rand(rng):
    return tuple(Fraction(rng.randint(-4, 4)) for _ in range(8))


def test_alternative_and_moufang(alg):
    rng = random.Random(1)
    m = alg.mul
    for _ in range(1000):
        x, y, z = _rand(rng), _rand(rng), _rand(rng)
        assert m(x, m(x, y)) == m(m(x, x), y)
        assert m(m(y, x), x) == m(y, m(x, x))
        # Moufang: (x y x) z-form  z(x(zy)) = ((zx)z)y
        assert m(z, m(x, m(z, y))) == m(m(m(z, x), z), y)


def test_norm_multiplicative(alg):
    rng = random.Random(2)
    for _ in range(1000):
        x, y = _rand(rng), _rand(rng)
        assert alg.norm(alg.mul(x, y)) == alg.norm(x) * alg.norm(y)


def test_not_associative(alg):
    e = [tuple(Fraction(int(i == k)) for k in range(8)) for i in range(8)]
    assert any(alg.mul(alg.mul(e[a], e[b]), e[c]) != alg.mul(e[a], alg.mul(e[b], e[c]))
               for a in range(1, 8) for b in range(1, 8) for c in range(1, 8))


def test_norm_form_signature(alg):
    assert alg.witt_index() == (0 if alg.flavor == "division" else 4)
    if alg.flavor == "division":
        rng = random.Random(3)
        for _ in range(100):
            x = _rand(rng)
            assert alg.norm(x) > 0 or not any(x)


def test_derivations(alg, der):
    assert der.dimension == 14
    for D in der.basis8:
        assert is_derivation(alg, D)
        assert all(D[a][0] == 0 for a in range(8))
    assert skew_defects(der) == 0
    consts = der.structure_constants()
    assert len(consts) == 14 and all(len(row) == 14 for row in consts)


def test_lambda2_split(alg, der):
    s = lambda2_split(alg, der)
    assert (s.rank_g, s.rank_c) == (14, 7)
    assert s.commutator_rank == 7
    assert projections_complementary(s)
    assert projections_equivariant(s, der)


def test_commutants(alg, der):
    assert commutant_dimension(alg, "C0", der) == 1
    assert commutant_dimension(alg, "L2", der) == 2
    assert commutant_dimension(alg, "C0", constrained=False) == 49


def test_long_root_weights():
    split = OctonionAlgebra.split()
    d = derivation_basis(split)
    w = long_root_sl2_weights(split, d)
    assert w.multiset() == [-1, -1, 0, 0, 0, 1, 1]
    assert sum(w.eigenvalues) == 0
    assert long_root_sl2_weights(split, d, candidate=1).multiset() == w.multiset()
    ww = wedge_weights(w)
    assert ww == pairwise_sum_weights(w.multiset())
    # multiset convolution oracle: zero weight 2*2 (from +1, -1) + C(3, 2) (from 0, 0) = 7
    assert Counter(ww)[0] == 7
    assert Counter(ww) == Counter({0: 7, 1: 6, -1: 6, 2: 1, -2: 1})


def test_weights_need_split_form():
    with pytest.raises(ValueError):
        long_root_sl2_weights(OctonionAlgebra.division())


def test_torus():
    split = OctonionAlgebra.split()
    assert is_derivation(split, g2_torus_derivation(split))
    assert g2_torus_weights(split) == [-3, -2, -1, 0, 1, 2, 3]
    with pytest.raises(ValueError):
        g2_torus_derivation(split, (1, 1, 1))
