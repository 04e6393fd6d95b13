"""Constraint system on the Toeplitz coefficients a_1..a_k.

Requiring 1^T L^n 1 = (k+1) P(n+1) for n = 1..k and taking the binomial
transform of those conditions gives a triangular family of equations: the
order-m equation is a sum of weighted degree-m monomials in a_1..a_{k-m+1}
(left side) equal to an exact number (right side).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .combinatorics import binomial, multiplicity_factor, partitions, stirling2
from .polybasis import PolynomialSpec

__all__ = [
    "PartitionMonomial",
    "EtaEquation",
    "xi_target",
    "eta_rhs_power",
    "eta_rhs_general",
    "build_eta_lhs",
    "eta_equations",
    "c_coeffs",
    "c_coeffs_convolution",
]


@dataclass(frozen=True)
class PartitionMonomial:
    """weight * prod_p a_p ** e_p, with ``powers`` as ascending ``(p, e_p)`` pairs."""

    weight: int
    powers: tuple[tuple[int, int], ...]

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.powers)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.powers)

    def exponent(self, index: int) -> int:
        return dict(self.powers).get(index, 0)

    def evaluate(self, a: Sequence, skip: int | None = None):
        """Value at ``a`` (``a[0]`` is a_1). ``skip`` drops one factor a_skip."""
        val = self.weight
        for p, e in self.powers:
            if p == skip:
                e -= 1
            if e:
                val = val * a[p - 1] ** e
        return val

    def __str__(self):
        factors = "*".join(f"a_{p}" + (f"^{e}" if e > 1 else "") for p, e in self.powers)
        return f"{self.weight}*{factors}"


@dataclass(frozen=True)
class EtaEquation:
    m: int
    k: int
    lhs: tuple[PartitionMonomial, ...]
    rhs: Fraction

    def evaluate_lhs(self, a: Sequence):
        return sum(term.evaluate(a) for term in self.lhs)

    def __str__(self):
        return f"eta_{self.m},{self.k}: " + " + ".join(map(str, self.lhs)) + f" = {self.rhs}"


def xi_target(n: int, k: int) -> int:
    """(k+1) ((n+1)^k - 1), the power-law target of sum_j (k+1-j) c_j^(n)."""
    if n < 0 or k < 1:
        raise ValueError(f"xi_target requires n >= 0, k >= 1 (got n={n}, k={k})")
    return (k + 1) * ((n + 1) ** k - 1)


def _alternating_eta(m: int, k: int, values) -> Fraction | int:
    # (k+1) sum_{j=0}^{m} (-1)^(j+m) C(m, j) [values(j+1) - 1]
    return (k + 1) * sum((-1) ** (j + m) * binomial(m, j) * (values(j + 1) - 1) for j in range(m + 1))


def eta_rhs_power(m: int, k: int) -> int:
    """Right side of the order-m equation for P(x) = x**k.

    Computed by the alternating sum and by (k+1) m! S(k+1, m+1); the two
    must agree exactly.
    """
    if not 1 <= m <= k:
        raise ValueError(f"eta_rhs_power requires 1 <= m <= k (got m={m}, k={k})")
    alternating = _alternating_eta(m, k, lambda x: x**k)
    closed = (k + 1) * factorial(m) * stirling2(k + 1, m + 1)
    if alternating != closed:
        raise ArithmeticError(f"eta_{m},{k}: alternating sum {alternating} != closed form {closed}")
    return closed


def eta_rhs_general(m: int, poly: PolynomialSpec) -> Fraction:
    """Right side of the order-m equation for a general polynomial, exact.

    The sum runs from j = 0, so the result is (k+1) times the m-th forward
    difference of P at 1 and does not depend on the "-1" offset.
    """
    k = poly.k
    if not 1 <= m <= k:
        raise ValueError(f"eta_rhs_general requires 1 <= m <= k (got m={m}, k={k})")
    return Fraction(_alternating_eta(m, k, poly))


def build_eta_lhs(m: int, k: int) -> list[PartitionMonomial]:
    """Weighted monomials on the left of the order-m equation.

    Leading term (k+1-m) a_1^m, then for each excess q = 1..k-m one monomial
    per partition of q into at most m pieces: each part s becomes a factor
    a_{s+1}, the rest of the m factors are a_1, and the weight is
    (k+1-m-q) times the number of orderings of the factors.
    """
    if not 1 <= m <= k:
        raise ValueError(f"build_eta_lhs requires 1 <= m <= k (got m={m}, k={k})")
    terms = [PartitionMonomial(k + 1 - m, ((1, m),))]
    for q in range(1, k - m + 1):
        for part in partitions(q, m):
            powers = {s + 1: mult for s, mult in part.parts}
            ones = m - part.piece_count
            if ones:
                powers[1] = ones
            weight = (k + 1 - m - q) * multiplicity_factor(m, part)
            terms.append(PartitionMonomial(weight, tuple(sorted(powers.items()))))
    return terms


def eta_equations(k: int, poly: PolynomialSpec | None = None) -> list[EtaEquation]:
    """Equations for m = 1..k (ascending m). ``poly=None`` means P(x) = x**k."""
    if poly is not None and poly.k != k:
        raise ValueError(f"polynomial degree {poly.k} does not match k={k}")
    eqs = []
    for m in range(1, k + 1):
        rhs = Fraction(eta_rhs_power(m, k)) if poly is None else eta_rhs_general(m, poly)
        eqs.append(EtaEquation(m, k, tuple(build_eta_lhs(m, k)), rhs))
    return eqs


def _values(a, k: int) -> list:
    values = list(getattr(a, "values", a))
    if len(values) != k:
        raise ValueError(f"coefficient vector has length {len(values)}, expected k={k}")
    # keep integer input exact through the 1/m division
    return [Fraction(v) if isinstance(v, int) else v for v in values]


def c_coeffs(n: int, k: int, a) -> list:
    """Coefficients c_0..c_k of Z^j in L_k(a)^n, by the recursion

    c_0 = 1,  c_m = (1/m) sum_{j=1}^{m} [j (n+1) - m] a_j c_{m-j}.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    vals = _values(a, k)
    c = [vals[0] * 0 + 1]
    for m in range(1, k + 1):
        acc = sum((j * (n + 1) - m) * vals[j - 1] * c[m - j] for j in range(1, m + 1))
        c.append(acc / m)
    return c


def c_coeffs_convolution(n: int, k: int, a) -> list:
    """Same coefficients from c^(n) = c^(n-1) + sum_{p>=1} a_p c^(n-1)_{j-p}."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    vals = _values(a, k)
    one = vals[0] * 0 + 1
    c = [one] + [one * 0] * k
    for _ in range(n):
        c = [c[j] + sum(vals[p - 1] * c[j - p] for p in range(1, j + 1)) for j in range(k + 1)]
    return c
