from fractions import Fraction

import numpy as np
import pytest

from polympo.mpo import Op, boundary_vectors, build_mpo, build_toeplitz, pair_coefficient, shift_matrix
from polympo.solver import solve_coefficients, to_mpf


@pytest.fixture(scope="module")
def solved():
    return {k: solve_coefficients(k) for k in range(1, 11)}


def test_shift_matrix():
    assert shift_matrix(2).tolist() == [[0, 0], [1, 0]]
    assert not np.linalg.matrix_power(shift_matrix(3), 3).any()
    Z2 = np.linalg.matrix_power(shift_matrix(4), 2)
    assert Z2[2, 0] == 1
    assert not Z2[:2].any()
    assert Z2.sum() == 2


@pytest.mark.parametrize("n", range(1, 8))
def test_shift_matrix_nilpotent_of_degree_n(n):
    Z = shift_matrix(n)
    assert not np.linalg.matrix_power(Z, n).any()
    if n > 1:
        assert np.linalg.matrix_power(Z, n - 1).any()


def test_toeplitz_k1(solved):
    T = build_toeplitz(solved[1])
    assert T.dense.tolist() == [[1, 0], [2, 1]]


@pytest.mark.parametrize("k", range(1, 11))
def test_toeplitz_structure(solved, k):
    a = solved[k]
    T = build_toeplitz(a).dense
    coeffs = [1] + list(a.values)
    # equals sum_i a_i Z^i with a_0 = 1
    Z = shift_matrix(k + 1)
    for i in range(k + 1):
        assert T[i, i] == 1
        for j in range(k + 1):
            expected = coeffs[i - j] if i >= j else 0
            assert T[i, j] == expected
            assert sum(coeffs[p] * int(np.linalg.matrix_power(Z, p)[i, j]) for p in range(k + 1)) == expected
    if k >= 2:
        assert T[2, 0] == a[1]


@pytest.mark.parametrize("k", range(1, 11))
def test_nilpotency(solved, k):
    T = build_toeplitz(solved[k])
    ctx = solved[k].context
    norm = max(abs(x) for x in T.dense)
    assert T.nilpotency_defect() <= k * ctx.mpf(2) ** -(256 - 16) * norm ** (k + 1)


def test_build_mpo_k1(solved):
    mpo = build_mpo(solved[1], 1)
    ctx = solved[1].context
    s = 1 / ctx.sqrt(2)
    expected = [
        [("I", 1), ("0", 0), ("0", 0), ("0", 0)],
        [("Y", s), ("I", 1), ("0", 0), ("0", 0)],
        [("Y", s), ("I", 2), ("I", 1), ("0", 0)],
        [("0", 0), ("X", s), ("X", s), ("I", 1)],
    ]
    got = [[(e.label.value, e.weight) for e in row] for row in mpo.bulk]
    assert got == expected


def test_beta_decoration(solved):
    mpo = build_mpo(solved[1], 0.5)
    ctx = solved[1].context
    assert mpo.bulk[3][1].weight == ctx.mpf(0.5) / ctx.sqrt(2)
    assert mpo.bulk[1][1].weight == 0.5
    assert mpo.bulk[2][1].weight == 1.0
    assert mpo.bulk[1][0].weight == 1 / ctx.sqrt(2)


@pytest.mark.parametrize("k", range(1, 11))
def test_mpo_shape(solved, k):
    mpo = build_mpo(solved[k], 1)
    assert mpo.bond_dim == k + 3
    assert all(len(row) == k + 3 for row in mpo.bulk)
    assert mpo.is_lower_triangular()
    assert mpo.left_boundary == mpo.bulk[-1]
    assert mpo.right_boundary == tuple(row[0] for row in mpo.bulk)
    central = build_toeplitz(solved[k]).dense
    for i in range(k + 1):
        for j in range(k + 1):
            entry = mpo.bulk[i + 1][j + 1]
            if j <= i:
                assert entry.label is Op.I and entry.weight == central[i, j]
            else:
                assert entry.is_zero


def test_boundary_vectors_layout(solved):
    mpo = build_mpo(solved[2], 1)
    factors = boundary_vectors(mpo, 4)
    assert len(factors) == 4
    assert factors[0] == (mpo.bulk[-1],)
    assert factors[1] is mpo.bulk and factors[2] is mpo.bulk
    assert factors[3] == tuple((row[0],) for row in mpo.bulk)
    with pytest.raises(ValueError):
        boundary_vectors(mpo, 1)


def test_pair_coefficients_small_chains(solved):
    # L = 2: nearest neighbours always get 1; L = 3: separation 2 gets 2^k
    for k in range(1, 7):
        mpo = build_mpo(solved[k], 1)
        ctx = solved[k].context
        assert abs(pair_coefficient(mpo, 1) - 1) < ctx.mpf(10) ** -70
        assert abs(pair_coefficient(mpo, 2) - 2**k) / 2**k < ctx.mpf(10) ** -70


def test_pair_coefficient_is_scaled_power_sum(solved):
    k = 4
    a = solved[k]
    ctx = a.context
    beta = to_mpf(ctx, Fraction(7, 10))
    mpo = build_mpo(a, 0.7)
    L = build_toeplitz(a).dense
    ones = ctx.ones(k + 1, 1)
    power = ctx.eye(k + 1)
    for r in range(1, 15):
        expected = beta**r * (ones.T * power * ones)[0, 0] / (k + 1)
        assert abs(pair_coefficient(mpo, r) - expected) / expected < ctx.mpf(10) ** -70
        power = power * L
