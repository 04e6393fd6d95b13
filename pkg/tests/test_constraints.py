import itertools
from collections import Counter
from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polympo.combinatorics import stirling2
from polympo.constraints import (
    build_eta_lhs,
    c_coeffs,
    c_coeffs_convolution,
    eta_equations,
    eta_rhs_general,
    eta_rhs_power,
    xi_target,
)
from polympo.polybasis import PolynomialSpec


def lhs_by_enumeration(m, k):
    """Monomial weights of sum_{j=m}^{k} (k+1-j) sum_{p_1+..+p_m=j} a_{p_1}..a_{p_m}, by brute force."""
    weights = Counter()
    for tup in itertools.product(range(1, k - m + 2), repeat=m):
        j = sum(tup)
        if j > k:
            continue
        key = tuple(sorted(Counter(tup).items()))
        weights[key] += k + 1 - j
    return {key: w for key, w in weights.items() if w}


def lhs_as_dict(m, k):
    out = {}
    for term in build_eta_lhs(m, k):
        assert term.powers not in out
        out[term.powers] = term.weight
    return out


def exact_power_sums(a, n_max):
    """1^T L^n 1 for n = 0..n_max with exact Fraction matrix products."""
    k = len(a)
    coeffs = [Fraction(1)] + [Fraction(x) for x in a]
    L = [[coeffs[i - j] if i >= j else Fraction(0) for j in range(k + 1)] for i in range(k + 1)]
    P = [[Fraction(int(i == j)) for j in range(k + 1)] for i in range(k + 1)]
    sums = []
    for n in range(n_max + 1):
        if n:
            P = [[sum(P[i][t] * L[t][j] for t in range(k + 1)) for j in range(k + 1)] for i in range(k + 1)]
        sums.append(sum(map(sum, P)))
    return sums


def forward_difference(values, order):
    for _ in range(order):
        values = [b - a for a, b in zip(values, values[1:])]
    return values[0]


# --- right-hand sides ---------------------------------------------------

def test_xi_target_examples():
    assert xi_target(1, 1) == 2
    assert xi_target(2, 4) == 400
    assert all(xi_target(0, k) == 0 for k in range(1, 8))


def test_eta_rhs_power_k4_system():
    assert [eta_rhs_power(m, 4) for m in (4, 3, 2, 1)] == [120, 300, 250, 75]


def test_eta_rhs_power_top_is_factorial():
    for k in range(1, 9):
        assert eta_rhs_power(k, k) == factorial(k + 1)
    assert eta_rhs_power(1, 1) == 2


def test_eta_closed_form_all_orders():
    for k in range(1, 16):
        for m in range(1, k + 1):
            assert eta_rhs_power(m, k) == (k + 1) * factorial(m) * stirling2(k + 1, m + 1)


def test_binomial_transform_round_trip():
    for k in range(1, 11):
        for m in range(1, k + 1):
            assert sum(comb(m, j) * eta_rhs_power(j, k) for j in range(1, m + 1)) == xi_target(m, k)


def test_eta_rhs_general_examples():
    for k in range(1, 7):
        assert eta_rhs_general(k, PolynomialSpec.power(k)) == factorial(k + 1)
    assert eta_rhs_general(1, PolynomialSpec((2,))) == 4
    # oracle: (k+1) times the m-th forward difference of P starting at x = 1
    p = PolynomialSpec((1, 1))
    expected = 3 * forward_difference([p(x) for x in range(1, 4)], 2)
    assert expected == 6
    assert eta_rhs_general(2, p) == expected


@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=1, max_size=6))
@settings(max_examples=50, deadline=None)
def test_eta_rhs_general_is_scaled_forward_difference(alphas):
    if alphas[-1] == 0:
        alphas[-1] = Fraction(1)
    poly = PolynomialSpec(tuple(alphas))
    k = poly.k
    values = [poly(x) for x in range(1, k + 2)]
    for m in range(1, k + 1):
        assert eta_rhs_general(m, poly) == (k + 1) * forward_difference(values, m)


def test_eta_rhs_general_matches_power_case():
    for k in range(1, 9):
        poly = PolynomialSpec.power(k)
        for m in range(1, k + 1):
            assert eta_rhs_general(m, poly) == eta_rhs_power(m, k)


def test_constant_term_rejected():
    with pytest.raises(ValueError):
        PolynomialSpec.from_coefficients((1, 1), constant=3)


# --- left-hand sides ----------------------------------------------------

def test_build_eta_lhs_k4():
    assert lhs_as_dict(4, 4) == {((1, 4),): 1}
    assert lhs_as_dict(3, 4) == {((1, 3),): 2, ((1, 2), (2, 1)): 3}
    assert lhs_as_dict(2, 4) == {((1, 2),): 3, ((1, 1), (2, 1)): 4, ((1, 1), (3, 1)): 2, ((2, 2),): 1}
    assert lhs_as_dict(1, 4) == {((1, 1),): 4, ((2, 1),): 3, ((3, 1),): 2, ((4, 1),): 1}


@pytest.mark.parametrize("k", range(1, 8))
def test_build_eta_lhs_matches_enumeration(k):
    for m in range(1, k + 1):
        assert lhs_as_dict(m, k) == lhs_by_enumeration(m, k)


@pytest.mark.parametrize("k", range(1, 11))
def test_lhs_structure(k):
    for m in range(1, k + 1):
        terms = build_eta_lhs(m, k)
        assert terms[0].powers == ((1, m),)
        assert terms[0].weight == k + 1 - m
        for t in terms:
            assert t.degree == m
            assert t.weight > 0
            assert all(p <= k - m + 1 for p in t.indices)
        linear = [t for t in terms if (k - m + 1) in t.indices]
        if m < k:
            assert len(linear) == 1 and linear[0].exponent(k - m + 1) == 1


@given(st.integers(1, 6).flatmap(
    lambda k: st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=5), min_size=k, max_size=k)))
@settings(max_examples=40, deadline=None)
def test_lhs_is_binomial_transform_of_power_sums(a):
    """For arbitrary a, the LHS polynomials equal the binomial transform of 1^T L^n 1 - (k+1)."""
    k = len(a)
    xi = [s - (k + 1) for s in exact_power_sums(a, k)]
    for eq in eta_equations(k):
        m = eq.m
        transformed = sum((-1) ** (n + m) * comb(m, n) * xi[n] for n in range(1, m + 1))
        assert eq.evaluate_lhs(a) == transformed


# --- c coefficients ------------------------------------------------------

def test_c_coeffs_examples():
    a = [Fraction(3), Fraction(-2), Fraction(5, 2)]
    assert c_coeffs(1, 3, a) == [1] + a
    assert c_coeffs(0, 3, a) == [1, 0, 0, 0]
    assert c_coeffs(2, 1, [2]) == [1, 4]


def test_c_coeffs_length_mismatch():
    with pytest.raises(ValueError):
        c_coeffs(2, 3, [1, 2])


@given(st.integers(1, 8).flatmap(
    lambda k: st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=9), min_size=k, max_size=k)),
    st.integers(0, 12))
@settings(max_examples=60, deadline=None)
def test_c_coeff_recursions_agree_exactly(a, n):
    k = len(a)
    miller = c_coeffs(n, k, a)
    conv = c_coeffs_convolution(n, k, a)
    assert miller == conv
    # first column of the exact matrix power
    coeffs = [Fraction(1)] + list(a)
    L = [[coeffs[i - j] if i >= j else Fraction(0) for j in range(k + 1)] for i in range(k + 1)]
    P = [[Fraction(int(i == j)) for j in range(k + 1)] for i in range(k + 1)]
    for _ in range(n):
        P = [[sum(P[i][t] * L[t][j] for t in range(k + 1)) for j in range(k + 1)] for i in range(k + 1)]
    assert [P[j][0] for j in range(k + 1)] == miller
