from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from isocrys.ghost import (OddInvariantError, ghost_case, ghost_dim, ghost_isogeny_type, oort_invariant,
                           torus_invariant_dim)

weights = st.lists(st.integers(-3, 3), min_size=1, max_size=7)


def test_bundled_cases():
    assert ghost_case("so3").invariants == 4 and ghost_case("so3").dimension == 2
    assert ghost_case("so5").invariants == 2 and ghost_case("so5").dimension == 1
    for r in (7, 8, 9):
        assert ghost_case("g2", r).dimension == r


@given(st.lists(st.tuples(weights, st.integers(0, 4)), max_size=4),
       st.lists(st.tuples(weights, st.integers(0, 4)), max_size=4))
def test_additive_over_factors(a, b):
    def tid(xs):
        return torus_invariant_dim([w for w, _ in xs], [m for _, m in xs])
    assert tid(a + b) == tid(a) + tid(b)


@given(st.lists(st.integers(1, 3), min_size=1, max_size=6), st.integers(1, 5))
def test_zero_on_factors_without_zero_weight(ws, m):
    assert torus_invariant_dim([ws], [m]) == 0


def test_odd_total_rejected():
    with pytest.raises(OddInvariantError):
        ghost_dim([(1, 0, -1)], [1])
    with pytest.raises(ValueError):
        torus_invariant_dim([(0,)], [1, 2])


def test_ghost_type():
    g = ghost_isogeny_type(8)
    assert g.dual() == g
    assert not g.decomposable_into_self_duals()
    assert g.height == 2 * ghost_case("g2", 8).dimension


def test_oort():
    assert oort_invariant(6, 8) == Fraction(3, 2)
    for g in range(5, 11):
        assert oort_invariant(g, 4) == Fraction(g, 2)
    assert oort_invariant(1, 1) == 2
    with pytest.raises(ValueError):
        oort_invariant(1, 0)
