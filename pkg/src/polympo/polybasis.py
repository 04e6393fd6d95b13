"""Polynomials without constant term in the basis {C(q + x, k)}, q = 0..k-1.

The change of basis goes through a k x k Hankel matrix of binomials whose
inverse is known in closed form, so everything here is exact rational
arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .combinatorics import binomial

__all__ = [
    "PolynomialSpec",
    "BasisWeights",
    "hankel_matrix",
    "hankel_inverse",
    "basis_weights",
    "binomial_basis_value",
]


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        # go through repr so 0.8 means 4/5, not the nearest binary double
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class PolynomialSpec:
    """P(x) = sum_{i=1}^{k} alphas[i-1] x^i, decorated by the decay factor ``beta``.

    The interaction between sites i < j is ``beta**(j-i) * P(j-i)``.
    """

    alphas: tuple[Fraction, ...]
    beta: Fraction = Fraction(1)
    k: int = field(init=False)

    def __post_init__(self):
        alphas = tuple(as_fraction(a) for a in self.alphas)
        if not alphas:
            raise ValueError("polynomial needs at least one coefficient")
        if alphas[-1] == 0:
            raise ValueError("leading coefficient must be nonzero (true degree k)")
        beta = as_fraction(self.beta)
        if beta <= 0:
            raise ValueError(f"beta must be positive, got {beta}")
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "k", len(alphas))

    @classmethod
    def power(cls, k: int, beta=Fraction(1)) -> "PolynomialSpec":
        """P(x) = x**k."""
        if k < 1:
            raise ValueError(f"degree must be >= 1, got {k}")
        return cls((Fraction(0),) * (k - 1) + (Fraction(1),), beta)

    @classmethod
    def from_coefficients(cls, coeffs: Sequence, beta=Fraction(1), constant=0) -> "PolynomialSpec":
        """Build from alpha_1..alpha_k; a nonzero ``constant`` is rejected."""
        if as_fraction(constant) != 0:
            raise ValueError("polynomial must have no constant term")
        return cls(tuple(coeffs), beta)

    @property
    def is_pure_power(self) -> bool:
        return all(a == 0 for a in self.alphas[:-1]) and self.alphas[-1] == 1

    def __call__(self, x):
        """Evaluate P at ``x`` (Horner); exact for int/Fraction input."""
        acc = 0
        for a in reversed(self.alphas):
            acc = (acc + a) * x
        return acc


@dataclass(frozen=True)
class BasisWeights:
    k: int
    W: tuple[Fraction, ...]

    def evaluate(self, x: int) -> Fraction:
        return sum((binomial_basis_value(q, x, self.k) * w for q, w in enumerate(self.W)), Fraction(0))


def binomial_basis_value(q: int, x: int, k: int) -> int:
    """C(q + x, k) for integer q + x >= 0."""
    return binomial(q + x, k)


def hankel_matrix(k: int) -> list[list[int]]:
    """H[i][j] = C(i + j - 1, k) with 1-based i, j = 1..k."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return [[binomial(i + j - 1, k) for j in range(1, k + 1)] for i in range(1, k + 1)]


def _matmul(A, B):
    return [[sum(A[i][t] * B[t][j] for t in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def hankel_inverse(k: int, check: bool = True) -> list[list[int]]:
    """Closed-form inverse of :func:`hankel_matrix`.

    Entry (i, j) is (-1)^(k+1-(i+j)) C(k+1, k+1-(i+j)), zero when the lower
    binomial argument leaves [0, k+1]. With ``check`` the product with the
    Hankel matrix is compared against the identity and a mismatch raises.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    inv = []
    for i in range(1, k + 1):
        row = []
        for j in range(1, k + 1):
            r = k + 1 - (i + j)
            row.append((-1) ** (r % 2) * binomial(k + 1, r))
        inv.append(row)
    if check:
        product = _matmul(hankel_matrix(k), inv)
        ident = [[int(i == j) for j in range(k)] for i in range(k)]
        if product != ident:
            raise ArithmeticError(f"closed-form Hankel inverse failed for k={k}")
    return inv


def basis_weights(poly: PolynomialSpec) -> BasisWeights:
    """W = H^{-1} (P(1), ..., P(k)) so that P(x) = sum_q C(q + x, k) W[q]."""
    k = poly.k
    inv = hankel_inverse(k, check=False)
    rhs = [Fraction(poly(x)) for x in range(1, k + 1)]
    W = tuple(sum((inv[i][j] * rhs[j] for j in range(k)), Fraction(0)) for i in range(k))
    return BasisWeights(k, W)
