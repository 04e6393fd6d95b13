"""Portable JSON document for a built MPO.

All real numbers are decimal strings with enough digits to reproduce the
binary working-precision value exactly, so no float64 rounding enters the
file. Field order is fixed and output is byte-deterministic.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import mpmath
from mpmath.libmp import repr_dps, to_str

from .mpo import Op, OpEntry, SymbolicMPO
from .polybasis import PolynomialSpec
from .solver import CoefficientVector, working_context

__all__ = ["FORMAT_VERSION", "MpoDocument", "format_real", "format_fraction"]

FORMAT_VERSION = "1"


def format_real(value, precision_bits: int) -> str:
    """Shortest-safe decimal for an mpf at ``precision_bits`` (round-trips exactly)."""
    ctx = working_context(precision_bits)
    return to_str(ctx.mpf(value)._mpf_, repr_dps(precision_bits))


def format_fraction(value: Fraction, precision_bits: int) -> str:
    """Exact decimal when the fraction terminates, otherwise a working-precision decimal."""
    den = value.denominator
    for p in (2, 5):
        while den % p == 0:
            den //= p
    if den != 1:
        ctx = working_context(precision_bits)
        return format_real(ctx.mpf(value.numerator) / value.denominator, precision_bits)
    places = 0
    while (value * 10**places).denominator != 1:
        places += 1
    scaled = int(value * 10**places)
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(places + 1, "0")
    if not places:
        return f"{sign}{digits}"
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


@dataclass(frozen=True)
class MpoDocument:
    format_version: str
    k: int
    alphas: tuple[str, ...]
    beta: str
    precision_bits: int
    a: tuple[str, ...]
    bond_dim: int
    bulk: tuple[tuple[tuple[str, str], ...], ...]
    residuals: tuple[str, ...]

    def __post_init__(self):
        if self.bond_dim != self.k + 3:
            raise ValueError(f"bond_dim {self.bond_dim} != k + 3 = {self.k + 3}")
        if len(self.bulk) != self.bond_dim or any(len(row) != self.bond_dim for row in self.bulk):
            raise ValueError("bulk grid does not match bond_dim")
        if len(self.a) != self.k:
            raise ValueError(f"expected {self.k} coefficients, got {len(self.a)}")

    @classmethod
    def from_mpo(cls, a: CoefficientVector, mpo: SymbolicMPO) -> "MpoDocument":
        bits = a.precision_bits
        bulk = tuple(
            tuple((e.label.value, "0" if e.is_zero else format_real(e.weight, bits)) for e in row)
            for row in mpo.bulk
        )
        return cls(
            format_version=FORMAT_VERSION,
            k=a.k,
            alphas=tuple(str(x) for x in a.poly.alphas),
            beta=format_fraction(mpo.beta, bits),
            precision_bits=bits,
            a=tuple(format_real(v, bits) for v in a.values),
            bond_dim=mpo.bond_dim,
            bulk=bulk,
            residuals=tuple(format_real(r, bits) for r in a.residuals),
        )

    def to_dict(self) -> dict:
        return {
            "format_version": self.format_version,
            "k": self.k,
            "alphas": list(self.alphas),
            "beta": self.beta,
            "precision_bits": self.precision_bits,
            "a": list(self.a),
            "bond_dim": self.bond_dim,
            "bulk": [[{"op": op, "w": w} for op, w in row] for row in self.bulk],
            "residuals": list(self.residuals),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "MpoDocument":
        if data.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"unsupported format_version {data.get('format_version')!r}")
        return cls(
            format_version=data["format_version"],
            k=int(data["k"]),
            alphas=tuple(data["alphas"]),
            beta=data["beta"],
            precision_bits=int(data["precision_bits"]),
            a=tuple(data["a"]),
            bond_dim=int(data["bond_dim"]),
            bulk=tuple(tuple((e["op"], e["w"]) for e in row) for row in data["bulk"]),
            residuals=tuple(data["residuals"]),
        )

    @classmethod
    def loads(cls, text: str) -> "MpoDocument":
        return cls.from_dict(json.loads(text))

    def write(self, path) -> None:
        path = Path(path)
        try:
            path.write_text(self.dumps(), encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot write MPO document to {path}: {exc.strerror or exc}") from exc

    @classmethod
    def read(cls, path) -> "MpoDocument":
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot read MPO document {path}: {exc.strerror or exc}") from exc
        return cls.loads(text)

    @property
    def poly(self) -> PolynomialSpec:
        return PolynomialSpec(tuple(Fraction(x) for x in self.alphas), Fraction(self.beta))

    def coefficients(self) -> tuple[mpmath.mpf, ...]:
        ctx = working_context(self.precision_bits)
        return tuple(ctx.mpf(x) for x in self.a)

    def to_symbolic(self) -> SymbolicMPO:
        """Rebuild the symbolic MPO with weights parsed at the stored precision."""
        ctx = working_context(self.precision_bits)
        grid = tuple(
            tuple(OpEntry(Op(op), 0 if op == Op.ZERO.value else ctx.mpf(w)) for op, w in row)
            for row in self.bulk
        )
        poly = self.poly
        return SymbolicMPO(self.k, poly.beta, grid, Fraction(poly(1)), self.precision_bits)
