import numpy as np
import pytest
import sympy

from isocrys.linalg import (adjugate, charpoly, determinant, determinantal_valuations, int_rank, inverse_scaled,
                            kernel_basis, reduce_mod_p, residue_rank, smith_reduce)
from isocrys.ring import (PrecisionError, RingSpec, mat_from_ints, mat_identity, mat_mul,
                          random_matrix)


def _int_matrix(rng, n, lo=-30, hi=30):
    return [[int(v) for v in row] for row in rng.integers(lo, hi, (n, n))]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_charpoly_matches_sympy(n):
    spec = RingSpec(p=5, f=1, N=12)
    rng = np.random.default_rng(n)
    for _ in range(5):
        M = _int_matrix(rng, n)
        ours = [int(c.coeffs[0, 0]) for c in charpoly(spec, mat_from_ints(spec, M))]
        ref = [int(c) % spec.modulus for c in sympy.Matrix(M).charpoly().all_coeffs()]
        assert ours == ref


def test_determinant_and_adjugate(spec52):
    rng = np.random.default_rng(2)
    for n in (2, 3, 4):
        A = random_matrix(spec52, n, n, rng)
        d = determinant(spec52, A)
        lhs = mat_mul(spec52, A, adjugate(spec52, A))
        rhs = np.zeros_like(lhs)
        for i in range(n):
            rhs[i, i] = d.coeffs
        assert np.array_equal(lhs, rhs)


def test_determinant_multiplicative(spec52):
    rng = np.random.default_rng(3)
    A = random_matrix(spec52, 3, 3, rng)
    B = random_matrix(spec52, 3, 3, rng)
    assert determinant(spec52, mat_mul(spec52, A, B)) == determinant(spec52, A) * determinant(spec52, B)


def test_inverse_scaled():
    spec = RingSpec(p=5, f=2, N=10)
    A = mat_from_ints(spec, [[0, 5], [1, 0]])
    Vm, lost = inverse_scaled(spec, A, 1)    # p A^{-1} = [[0, 5], [1, 0]]
    assert lost == 0
    assert np.array_equal(mat_mul(spec, A, Vm), mat_identity(spec, 2, 5))
    with pytest.raises(ArithmeticError):
        inverse_scaled(spec, mat_from_ints(spec, [[25, 0], [0, 1]]), 1)
    with pytest.raises(PrecisionError):
        inverse_scaled(spec, mat_from_ints(spec, [[0, 0], [0, 1]]))


def test_smith_valuations_match_elementary_divisors():
    p, N = 3, 10
    rng = np.random.default_rng(4)
    for _ in range(10):
        D = [1, 3, 27]
        U = _unimodular(rng, 3)
        W = _unimodular(rng, 3)
        M = (sympy.Matrix(U) * sympy.diag(*D) * sympy.Matrix(W)).tolist()
        vals, V = smith_reduce(M, p, N)
        assert sorted(vals) == [0, 1, 3]
        assert int_rank(M, p, N) == 3


def _unimodular(rng, n):
    while True:
        M = sympy.Matrix(_int_matrix(rng, n, -3, 4))
        if M.det() in (1, -1):
            return M.tolist()


def test_kernel_basis():
    p, N = 5, 12
    M = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    basis, digits = kernel_basis(M, p, N)
    assert len(basis) == 1 and digits == N
    m = p ** N
    for v in basis:
        assert all(sum(a * b for a, b in zip(row, v)) % m == 0 for row in M)
        assert any(x % p for x in v)  # saturated


def test_kernel_rank_ambiguity_raises():
    with pytest.raises(PrecisionError):
        kernel_basis([[5 ** 11, 0], [0, 1]], 5, 12)


def test_residue_rank_and_determinantal_valuations():
    spec = RingSpec(p=5, f=2, N=8)
    A = mat_from_ints(spec, [[1, 0, 0], [0, 5, 0], [0, 0, 25]])
    rs, Ab = reduce_mod_p(spec, A)
    assert residue_rank(rs, Ab) == 1
    assert determinantal_valuations(spec, A) == [0, 1, 3]
