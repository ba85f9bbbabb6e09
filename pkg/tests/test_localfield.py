import itertools
from fractions import Fraction

import numpy as np
import pytest
import sympy

from isocrys.localfield import (LocalFieldElem, QuadraticInteger, find_anisotropic_triple, forms_equivalent,
                                hilbert_symbol, quadratic_integer_to_local, ternary_anisotropic)
from isocrys.ring import RingElem, RingSpec, nonsquare_in_subfield, random_elem, teichmuller


def _random_local(spec, rng, max_exp=3):
    while True:
        u = random_elem(spec.with_(T=1), rng)
        if u.is_unit():
            return LocalFieldElem.from_ring(u, int(rng.integers(0, max_exp + 1)))


def _isotropic_oracle(coeffs, p):
    """Exhaustive search for a primitive zero modulo p^3 of sum a_i x_i^2 that lifts by Hensel.

    Valid for integer coefficients of valuation at most 1 and odd p: a primitive zero x lifts
    when Q(x) = 0 mod p^(2 delta + 1), delta = min_i v(2 a_i x_i) <= 1.
    """
    m = p ** 3
    r = np.arange(m, dtype=np.int64)
    X, Y, Z = np.meshgrid(r, r, r, indexing="ij")
    Q = (coeffs[0] * X * X + coeffs[1] * Y * Y + coeffs[2] * Z * Z) % m
    prim = (X % p != 0) | (Y % p != 0) | (Z % p != 0)
    unit_term = np.zeros_like(prim)
    for c, V in zip(coeffs, (X, Y, Z)):
        if c % p:
            unit_term |= V % p != 0
    ok0 = prim & unit_term & (Q % p == 0)
    ok1 = prim & ~unit_term & (Q == 0)
    return bool(ok0.any() or ok1.any())


def test_hilbert_trivial_and_legendre_example():
    spec = RingSpec(p=5, f=1, N=10)
    one = LocalFieldElem.from_int(spec, 1)
    rng = np.random.default_rng(0)
    for _ in range(20):
        assert hilbert_symbol(one, _random_local(spec, rng)) == 1
    two, five = LocalFieldElem.from_int(spec, 2), LocalFieldElem.from_int(spec, 5)
    assert hilbert_symbol(two, five) == sympy.legendre_symbol(2, 5) == -1


@pytest.mark.parametrize("p", [3, 5, 13])
@pytest.mark.parametrize("f", [1, 2])
def test_hilbert_symbol_laws(p, f):
    spec = RingSpec(p=p, f=f, N=8)
    rng = np.random.default_rng(p * 10 + f)
    for _ in range(200):
        a, b, c = (_random_local(spec, rng) for _ in range(3))
        h = hilbert_symbol(a, b, f)
        assert h in (1, -1)
        assert h == hilbert_symbol(b, a, f)
        assert hilbert_symbol(a, b * c, f) == h * hilbert_symbol(a, c, f)
        assert hilbert_symbol(a, -a, f) == 1


@pytest.mark.parametrize("p", [3, 5])
def test_hilbert_symbol_against_norm_form_search(p):
    """(a, b) = 1 iff a x^2 + b y^2 - z^2 is isotropic."""
    spec = RingSpec(p=p, f=1, N=8)
    u = next(x for x in range(2, p) if sympy.legendre_symbol(x, p) == -1)
    values = [1, u, p, u * p, -1, -p]
    for a, b in itertools.product(values, repeat=2):
        h = hilbert_symbol(LocalFieldElem.from_int(spec, a), LocalFieldElem.from_int(spec, b))
        assert (h == 1) == _isotropic_oracle((a, b, -1), p), (a, b)


@pytest.mark.parametrize("p", [3, 5])
def test_ternary_anisotropic_matches_residue_oracle(p):
    spec = RingSpec(p=p, f=1, N=8)
    u = next(x for x in range(2, p) if sympy.legendre_symbol(x, p) == -1)
    family = [1, u, p, u * p, 2 * p, -1, -u * p]
    for combo in itertools.combinations_with_replacement(family, 3):
        diag = [LocalFieldElem.from_int(spec, c) for c in combo]
        assert ternary_anisotropic(*diag) == (not _isotropic_oracle(combo, p)), combo


def test_ternary_examples():
    spec = RingSpec(p=5, f=1, N=8)
    L = lambda n: LocalFieldElem.from_int(spec, n)  # noqa: E731
    for c in (1, 2, 5, 10):
        assert not ternary_anisotropic(L(1), L(-1), L(c))
    assert not ternary_anisotropic(L(1), L(1), L(1))
    spec2 = RingSpec(p=5, f=2, N=8)
    delta = LocalFieldElem.from_ring(teichmuller(nonsquare_in_subfield(spec2, 2), spec2))
    two_p = LocalFieldElem.from_int(spec2, 10)
    assert ternary_anisotropic(LocalFieldElem.from_int(spec2, 1), two_p, -(two_p * delta), degree=2)


def test_forms_equivalent():
    spec = RingSpec(p=5, f=1, N=8)
    L = lambda n: LocalFieldElem.from_int(spec, n)  # noqa: E731
    assert forms_equivalent([L(1), L(1)], [L(4), L(9)])
    assert forms_equivalent([L(1), L(-1)], [L(5), L(-5)])
    assert not forms_equivalent([L(1), L(1)], [L(1), L(5)])


def test_local_field_arithmetic():
    spec = RingSpec(p=5, f=1, N=10)
    x = LocalFieldElem.from_int(spec, Fraction(3, 25))
    assert x.valuation() == -2
    y = LocalFieldElem.from_int(spec, 50)
    assert (x * y).valuation() == 0
    assert (x * y).residue()[0] == 6 % 5
    assert (x / x).valuation() == 0


def test_quadratic_integer_embedding():
    spec = RingSpec(p=5, f=2, N=10)
    z = QuadraticInteger(0, 1, 2)  # sqrt 2
    loc = quadratic_integer_to_local(z, spec)
    sq = loc * loc
    assert sq.valuation() == 0 and sq.unit == RingElem.scalar(spec.with_(T=1), 2)


def test_find_anisotropic_triple_sqrt2_at_5():
    triple = find_anisotropic_triple(2, 5, bound=50)
    spec = RingSpec(p=5, f=2, N=16)
    assert all(z.is_totally_positive() for z in triple)
    assert all(min(z.embeddings()) > 0 for z in triple)
    assert ternary_anisotropic(*[quadratic_integer_to_local(z, spec) for z in triple], degree=2)


def test_find_triple_rejects_split_prime():
    with pytest.raises(ValueError):
        find_anisotropic_triple(2, 7)  # 2 is a square mod 7
