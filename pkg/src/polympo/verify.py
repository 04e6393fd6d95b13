"""Independent checks of a constructed MPO.

Three oracles, each blind to how the coefficients were solved:

* power sums 1^T L^n 1 by repeated matrix multiplication, for n well past k;
* a dense Hamiltonian built pair by pair from Kronecker products, compared
  with the full contraction of the MPO site factors;
* read-off of the Toeplitz power subdiagonals against both c-coefficient
  recursions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .constraints import c_coeffs, c_coeffs_convolution
from .mpo import Op, OpEntry, SymbolicMPO, boundary_vectors, build_toeplitz, pair_coefficients
from .polybasis import PolynomialSpec, as_fraction
from .solver import CoefficientVector, to_mpf, working_context

__all__ = [
    "MAX_DENSE_DIM",
    "LocalOperatorPair",
    "CheckResult",
    "coefficient_tolerance",
    "power_sum_check",
    "c_coeffs_matrix_power",
    "c_coeff_agreement",
    "dense_hamiltonian",
    "contract_mpo",
    "dense_equivalence",
    "pair_coefficient_check",
]

MAX_DENSE_DIM = 4096


@dataclass(frozen=True)
class LocalOperatorPair:
    X: np.ndarray
    Y: np.ndarray
    name: str = "custom"
    d: int = field(init=False)

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        Y = np.asarray(self.Y, dtype=float)
        if X.shape != Y.shape or X.ndim != 2 or X.shape[0] != X.shape[1]:
            raise ValueError("X and Y must be square matrices of the same shape")
        if X.shape[0] < 2:
            raise ValueError("local dimension must be >= 2")
        if not (X.any() or Y.any()):
            raise ValueError("X and Y are both zero")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "d", X.shape[0])

    @classmethod
    def nilpotent(cls, d: int = 2) -> "LocalOperatorPair":
        """X = |0><1| (raising part), Y = |1><0| (lowering part), padded to dimension d."""
        X = np.zeros((d, d))
        Y = np.zeros((d, d))
        X[0, 1] = 1.0
        Y[1, 0] = 1.0
        return cls(X, Y, name="nilpotent")

    @classmethod
    def random(cls, d: int, seed: int) -> "LocalOperatorPair":
        """Dense random symmetric pair drawn from ``seed`` only."""
        rng = np.random.default_rng(seed)
        A = rng.standard_normal((d, d))
        B = rng.standard_normal((d, d))
        return cls((A + A.T) / 2, (B + B.T) / 2, name=f"random(seed={seed})")

    def matrix(self, label: Op) -> np.ndarray | None:
        if label is Op.I:
            return np.eye(self.d)
        if label is Op.X:
            return self.X
        if label is Op.Y:
            return self.Y
        return None


@dataclass(frozen=True)
class CheckResult:
    name: str
    k: int
    param: str
    err: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.err <= self.tol)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"CHECK {self.name} k={self.k} param={self.param} err={self.err:.3e} tol={self.tol:.3e} {status}"

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "k": self.k,
            "param": self.param,
            "err": f"{self.err:.6e}",
            "tol": f"{self.tol:.6e}",
            "passed": self.passed,
        }


def coefficient_tolerance(precision_bits: int) -> float:
    """Relative tolerance for working-precision identities: 1e-20 at 256 bits, looser below ~86 bits."""
    return max(1e-20, 2.0 ** (20 - precision_bits))


def _rel(ctx, value, target):
    diff = abs(value - target)
    return diff / abs(target) if target != 0 else diff


def power_sum_check(a: CoefficientVector, poly: PolynomialSpec | None = None, n_max: int | None = None,
                    tol: float | None = None) -> list[CheckResult]:
    """Compare 1^T L^n 1 with (k+1) P(n+1) / P(1) for n = 0..n_max.

    ``n_max`` defaults to 3k; values of n above k are not constrained by the
    solve and test that the identity propagates.
    """
    poly = a.poly if poly is None else poly
    k = a.k
    n_max = 3 * k if n_max is None else n_max
    if n_max < k:
        raise ValueError(f"n_max must be >= k={k}, got {n_max}")
    tol = coefficient_tolerance(a.precision_bits) if tol is None else tol
    ctx = a.context
    L = build_toeplitz(a).dense
    ones = ctx.ones(k + 1, 1)
    amplitude = to_mpf(ctx, a.amplitude)
    results = []
    power = ctx.eye(k + 1)
    for n in range(0, n_max + 1):
        if n:
            power = power * L
        total = (ones.T * power * ones)[0, 0]
        target = (k + 1) * to_mpf(ctx, Fraction(poly(n + 1))) / amplitude
        results.append(CheckResult("power_sum", k, f"n={n}", float(_rel(ctx, total, target)), tol))
    return results


def c_coeffs_matrix_power(n: int, a: CoefficientVector) -> list:
    """c_j of L^n read off the first column of the explicit matrix power."""
    L = build_toeplitz(a).dense
    P = L**n if n else a.context.eye(a.k + 1)
    return [P[j, 0] for j in range(a.k + 1)]


def c_coeff_agreement(a: CoefficientVector, n: int) -> float:
    """Largest relative disagreement among the three c-coefficient routes at power n."""
    ctx = a.context
    routes = [c_coeffs(n, a.k, a.values), c_coeffs_convolution(n, a.k, a.values), c_coeffs_matrix_power(n, a)]
    worst = ctx.zero
    for j in range(a.k + 1):
        vals = [r[j] for r in routes]
        scale = max(abs(v) for v in vals)
        if scale == 0:
            continue
        worst = max(worst, max(abs(u - v) for u in vals for v in vals) / scale)
    return float(worst)


def _check_dim(d: int, L: int):
    if L < 2:
        raise ValueError(f"L must be >= 2, got {L}")
    if d**L > MAX_DENSE_DIM:
        raise ValueError(f"d^L = {d}^{L} exceeds the dense cap {MAX_DENSE_DIM}")


def _embed(ops: list[np.ndarray]) -> np.ndarray:
    out = ops[0]
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


def dense_hamiltonian(ops: LocalOperatorPair, poly: PolynomialSpec, L: int, beta=None) -> np.ndarray:
    """sum_{i<j} beta^(j-i) P(j-i) X_i Y_j on L sites, in double precision.

    ``beta`` overrides the polynomial's decay factor (zero is allowed here).
    """
    _check_dim(ops.d, L)
    beta = poly.beta if beta is None else as_fraction(beta)
    ident = np.eye(ops.d)
    H = np.zeros((ops.d**L, ops.d**L))
    for i in range(L):
        for j in range(i + 1, L):
            r = j - i
            coupling = float(beta**r * Fraction(poly(r)))
            if coupling == 0:
                continue
            chain = [ident] * L
            chain[i] = ops.X
            chain[j] = ops.Y
            H += coupling * _embed(chain)
    return H


def _site_operator(entry: OpEntry, ops: LocalOperatorPair):
    mat = ops.matrix(entry.label)
    if mat is None:
        return None
    return float(entry.weight) * mat


def contract_mpo(mpo: SymbolicMPO, ops: LocalOperatorPair, L: int) -> np.ndarray:
    """Multiply out the open-chain site factors with concrete local operators."""
    _check_dim(ops.d, L)
    factors = boundary_vectors(mpo, L)
    # carry one operator per open bond index
    (row,) = factors[0]
    carry = [_site_operator(e, ops) for e in row]
    for factor in factors[1:]:
        if len(factor) != len(carry):
            raise RuntimeError(f"bond dimension mismatch: {len(carry)} vs {len(factor)}")
        width = len(factor[0])
        new = [None] * width
        for b, left in enumerate(carry):
            if left is None:
                continue
            for c in range(width):
                local = _site_operator(factor[b][c], ops)
                if local is None:
                    continue
                term = np.kron(left, local)
                new[c] = term if new[c] is None else new[c] + term
        carry = new
    (H,) = carry
    if H is None:
        return np.zeros((ops.d**L, ops.d**L))
    return H


def dense_equivalence(mpo: SymbolicMPO, poly: PolynomialSpec, ops: LocalOperatorPair, L: int) -> CheckResult:
    """max |contract - dense| against 1e-9 max(1, max |dense|); the dense side uses ``poly.beta``."""
    H_mpo = contract_mpo(mpo, ops, L)
    H_ref = dense_hamiltonian(ops, poly, L)
    err = float(np.max(np.abs(H_mpo - H_ref)))
    tol = 1e-9 * max(1.0, float(np.max(np.abs(H_ref))))
    beta = float(poly.beta)
    return CheckResult("dense_equivalence", mpo.k, f"L={L},beta={beta:g},ops={ops.name},d={ops.d}", err, tol)


def pair_coefficient_check(mpo: SymbolicMPO, poly: PolynomialSpec, r_max: int = 60,
                           tol: float | None = None) -> list[CheckResult]:
    """Extracted X_i Y_{i+r} coefficient against beta^r P(r) for r = 1..r_max.

    beta is taken from ``poly``, the target interaction, not from the MPO.
    """
    ctx = working_context(mpo.precision_bits)
    tol = coefficient_tolerance(mpo.precision_bits) if tol is None else tol
    beta = to_mpf(ctx, poly.beta)
    results = []
    for r, value in enumerate(pair_coefficients(mpo, r_max), start=1):
        target = beta**r * to_mpf(ctx, Fraction(poly(r)))
        results.append(CheckResult("pair_coefficient", mpo.k, f"r={r}", float(_rel(ctx, value, target)), tol))
    return results
