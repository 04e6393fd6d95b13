"""Symbolic MPO assembly for beta^r P(r) two-body interactions.

Bulk matrix layout, bond dimension D = k + 3::

    [ I                    0                       0 ]
    [ (Y/sqrt(k+1)) 1      beta L_k(a) I           0 ]
    [ 0                    (c X/sqrt(k+1)) 1^T     I ]

where 1 is the all-ones vector of length k+1 and c = beta * P(1). Open boundaries use the last row on the first site
and the first column on the last site.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import mpmath
import numpy as np

from .polybasis import as_fraction
from .solver import CoefficientVector, to_mpf, working_context

__all__ = [
    "Op",
    "OpEntry",
    "ToeplitzL",
    "SymbolicMPO",
    "shift_matrix",
    "build_toeplitz",
    "build_mpo",
    "boundary_vectors",
    "pair_coefficient",
    "pair_coefficients",
]


class Op(str, Enum):
    ZERO = "0"
    I = "I"
    X = "X"
    Y = "Y"


@dataclass(frozen=True)
class OpEntry:
    label: Op
    weight: object = 0

    @property
    def is_zero(self) -> bool:
        return self.label is Op.ZERO


ZERO = OpEntry(Op.ZERO, 0)


@dataclass(frozen=True)
class ToeplitzL:
    """Lower-triangular Toeplitz matrix with unit diagonal, (i, j) entry a_{i-j}."""

    k: int
    a: CoefficientVector
    dense: mpmath.matrix

    def nilpotency_defect(self):
        """max |(L - I)^(k+1)|; zero in exact arithmetic."""
        ctx = self.a.context
        N = self.dense - ctx.eye(self.k + 1)
        P = N ** (self.k + 1)
        return max(abs(P[i, j]) for i in range(self.k + 1) for j in range(self.k + 1))


@dataclass(frozen=True)
class SymbolicMPO:
    k: int
    beta: Fraction
    bulk: tuple[tuple[OpEntry, ...], ...]
    amplitude: Fraction = Fraction(1)
    precision_bits: int = 256

    @property
    def bond_dim(self) -> int:
        return len(self.bulk)

    @property
    def left_boundary(self) -> tuple[OpEntry, ...]:
        return self.bulk[-1]

    @property
    def right_boundary(self) -> tuple[OpEntry, ...]:
        return tuple(row[0] for row in self.bulk)

    def weights(self, label: Op) -> mpmath.matrix:
        """Matrix of weights carried by ``label`` entries (zero elsewhere)."""
        ctx = working_context(self.precision_bits)
        D = self.bond_dim
        M = ctx.zeros(D, D)
        for i, row in enumerate(self.bulk):
            for j, entry in enumerate(row):
                if entry.label is label:
                    M[i, j] = entry.weight
        return M

    def is_lower_triangular(self) -> bool:
        return all(self.bulk[i][j].is_zero for i in range(self.bond_dim) for j in range(i + 1, self.bond_dim))


def shift_matrix(n: int) -> np.ndarray:
    """n x n matrix with ones on the first subdiagonal."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return np.eye(n, k=-1, dtype=np.int64)


def build_toeplitz(a: CoefficientVector, precision_bits: int | None = None) -> ToeplitzL:
    bits = precision_bits or a.precision_bits
    ctx = working_context(bits)
    k = a.k
    coeffs = [ctx.one] + [ctx.mpf(v) for v in a.values]
    dense = ctx.zeros(k + 1, k + 1)
    for i in range(k + 1):
        for j in range(i + 1):
            dense[i, j] = coeffs[i - j]
    return ToeplitzL(k, a, dense)


def build_mpo(a: CoefficientVector, beta=None) -> SymbolicMPO:
    """Assemble the (k+3) x (k+3) bulk MPO matrix from solved coefficients.

    ``beta`` defaults to the decay factor of the polynomial ``a`` was solved for.
    """
    beta = a.poly.beta if beta is None else as_fraction(beta)
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    ctx = a.context
    k = a.k
    D = k + 3
    b = to_mpf(ctx, beta)
    norm = 1 / ctx.sqrt(k + 1)
    L = build_toeplitz(a).dense

    grid = [[ZERO] * D for _ in range(D)]
    grid[0][0] = OpEntry(Op.I, ctx.one)
    grid[D - 1][D - 1] = OpEntry(Op.I, ctx.one)
    x_weight = b * to_mpf(ctx, a.amplitude) * norm
    for i in range(1, k + 2):
        grid[i][0] = OpEntry(Op.Y, norm)
        grid[D - 1][i] = OpEntry(Op.X, x_weight)
        for j in range(1, i + 1):
            grid[i][j] = OpEntry(Op.I, b * L[i - 1, j - 1])
    return SymbolicMPO(k, beta, tuple(tuple(row) for row in grid), a.amplitude, a.precision_bits)


def boundary_vectors(mpo: SymbolicMPO, L: int) -> list[tuple[tuple[OpEntry, ...], ...]]:
    """Site factors [last row, bulk * (L-2), first column] for an open chain of L sites."""
    if L < 2:
        raise ValueError(f"open chain needs L >= 2, got {L}")
    row = (mpo.left_boundary,)
    col = tuple((entry,) for entry in mpo.right_boundary)
    return [row] + [mpo.bulk] * (L - 2) + [col]


def pair_coefficients(mpo: SymbolicMPO, r_max: int) -> list:
    """Scalars multiplying X_i Y_{i+r} in the contracted open-chain operator, r = 1..r_max.

    Read off the symbolic grid: X weights of the left boundary, r-1 bulk
    sites carrying identities, then the Y weights of the right boundary.
    """
    if r_max < 1:
        raise ValueError(f"separation must be >= 1, got {r_max}")
    ctx = working_context(mpo.precision_bits)
    vec = ctx.matrix([[e.weight if e.label is Op.X else 0 for e in mpo.left_boundary]])
    y_col = ctx.matrix([[e.weight if e.label is Op.Y else 0] for e in mpo.right_boundary])
    ident = mpo.weights(Op.I)
    out = []
    for r in range(1, r_max + 1):
        if r > 1:
            vec = vec * ident
        out.append((vec * y_col)[0, 0])
    return out


def pair_coefficient(mpo: SymbolicMPO, r: int):
    """Coefficient of X_i Y_{i+r}; see :func:`pair_coefficients`."""
    return pair_coefficients(mpo, r)[-1]
