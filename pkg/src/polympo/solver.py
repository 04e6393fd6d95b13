"""Triangular solve of the constraint equations for a_1..a_k.

Equations are taken in descending order m = k, k-1, ..., 1. The top one is
a_1^k = eta_kk; in every later one the new unknown a_{k-m+1} appears in a
single monomial, linearly, so it is obtained by one division.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .constraints import eta_equations
from .polybasis import PolynomialSpec

__all__ = [
    "DEFAULT_PRECISION",
    "CoefficientVector",
    "UnsolvableError",
    "working_context",
    "to_mpf",
    "solve_coefficients",
]

DEFAULT_PRECISION = 256
# extra bits carried through the triangular substitution, which amplifies rounding error with k
GUARD_BITS = 32


class UnsolvableError(ValueError):
    """Raised when the order-``m`` equation cannot be solved for its unknown."""

    def __init__(self, m: int, k: int, reason: str):
        super().__init__(f"equation eta_{m},{k}: {reason}")
        self.m = m
        self.k = k
        self.reason = reason


@lru_cache(maxsize=None)
def working_context(precision_bits: int) -> mpmath.MPContext:
    """Shared mpmath context at ``precision_bits``, separate from the global ``mp``.

    One context per precision so matrices built in different places can be
    multiplied together. Nothing may change its ``prec`` after creation.
    """
    if precision_bits < 53:
        raise ValueError(f"precision_bits must be >= 53, got {precision_bits}")
    ctx = mpmath.MPContext()
    ctx.prec = precision_bits
    return ctx


def to_mpf(ctx: mpmath.MPContext, value):
    """Convert an int, Fraction or numeric string to ``ctx`` precision."""
    if isinstance(value, Fraction):
        return ctx.mpf(value.numerator) / value.denominator
    return ctx.mpf(value)


@dataclass(frozen=True)
class CoefficientVector:
    """Solved Toeplitz coefficients a_1..a_k (``values[0]`` is a_1).

    ``amplitude`` is P(1): the ansatz always produces a unit nearest-neighbour
    coupling, so the coefficients are solved for P(x)/P(1) and the factor is
    restored on the X row of the MPO. It is 1 for pure powers.
    """

    k: int
    values: tuple
    precision_bits: int
    residuals: tuple
    poly: PolynomialSpec
    amplitude: Fraction = Fraction(1)

    def __post_init__(self):
        if len(self.values) != self.k:
            raise ValueError(f"expected {self.k} coefficients, got {len(self.values)}")

    def __len__(self):
        return self.k

    def __getitem__(self, i):
        return self.values[i]

    @property
    def context(self) -> mpmath.MPContext:
        return working_context(self.precision_bits)

    def table_order(self) -> tuple:
        """Coefficients as a_k, ..., a_1 (the reversed column layout of the published table)."""
        return tuple(reversed(self.values))

    @property
    def max_residual(self):
        return max(self.residuals)


def _kth_root(ctx, value, k: int, m: int):
    if value == 0:
        raise UnsolvableError(m, k, "top equation has zero right-hand side")
    if value < 0 and k % 2 == 0:
        raise UnsolvableError(m, k, f"a_1^{k} = {ctx.nstr(value, 10)} has no real root")
    sign = 1 if value > 0 else -1
    root = sign * ctx.exp(ctx.log(abs(value)) / k)
    # one Newton step on x^k - value
    root -= (root**k - value) / (k * root ** (k - 1))
    return root


def _relative_residual(ctx, lhs, rhs):
    diff = abs(lhs - rhs)
    return diff / abs(rhs) if rhs != 0 else diff


def solve_coefficients(k: int, rhs_source="power", precision_bits: int = DEFAULT_PRECISION) -> CoefficientVector:
    """Solve for a_1..a_k.

    Args:
        k: polynomial degree.
        rhs_source: ``"power"`` for P(x) = x**k, or a :class:`PolynomialSpec` of degree k.
        precision_bits: binary working precision.

    Raises:
        UnsolvableError: P(1) = 0, no real a_1, or a vanishing linear coefficient.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if isinstance(rhs_source, PolynomialSpec):
        poly = rhs_source
        if poly.k != k:
            raise ValueError(f"polynomial degree {poly.k} does not match k={k}")
    elif rhs_source == "power":
        poly = PolynomialSpec.power(k)
    else:
        raise ValueError(f"unknown rhs_source {rhs_source!r}")

    out_ctx = working_context(precision_bits)
    ctx = working_context(precision_bits + GUARD_BITS)
    if poly.is_pure_power:
        amplitude = Fraction(1)
        equations = eta_equations(k)
    else:
        amplitude = Fraction(poly(1))
        if amplitude == 0:
            raise UnsolvableError(k, k, "P(1) = 0; the nearest-neighbour coupling cannot be normalized")
        equations = eta_equations(k, poly)
    rhs = [to_mpf(ctx, eq.rhs / amplitude) for eq in equations]

    a = [ctx.zero] * k
    if poly.is_pure_power:
        # a_1 = ((k+1)!)^(1/k) through log-gamma, then polished
        root = ctx.exp(ctx.loggamma(k + 2) / k)
        a[0] = root - (root**k - rhs[k - 1]) / (k * root ** (k - 1))
    else:
        a[0] = _kth_root(ctx, rhs[k - 1], k, k)

    for m in range(k - 1, 0, -1):
        unknown = k - m + 1
        eq = equations[m - 1]
        remainder = rhs[m - 1]
        sought = None
        for term in eq.lhs:
            if unknown in term.indices:
                if sought is not None or term.exponent(unknown) != 1:
                    raise AssertionError(f"eta_{m},{k} is not linear in a_{unknown}")
                sought = term
            else:
                remainder -= term.evaluate(a)
        if sought is None:
            raise AssertionError(f"eta_{m},{k} does not contain a_{unknown}")
        coeff = sought.evaluate(a, skip=unknown)
        if coeff == 0:
            raise UnsolvableError(m, k, f"linear coefficient of a_{unknown} vanishes")
        a[unknown - 1] = remainder / coeff

    # round to the requested precision; residuals are those of the delivered values
    values = tuple(out_ctx.mpf(v) for v in a)
    residuals = tuple(
        out_ctx.mpf(_relative_residual(ctx, eq.evaluate_lhs(values), r)) for eq, r in zip(equations, rhs)
    )
    return CoefficientVector(k, values, precision_bits, residuals, poly, amplitude)
