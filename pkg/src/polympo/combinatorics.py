"""Exact combinatorial primitives: binomials, Stirling and Eulerian numbers,
falling factorials and integer partitions with a piece-count cap.

Everything integer-valued is computed with Python ints, so results are exact
at any size.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial, prod
from typing import Iterator, Mapping

__all__ = [
    "Partition",
    "binomial",
    "stirling2",
    "stirling2_recurrence",
    "stirling1_unsigned",
    "eulerian",
    "falling_factorial",
    "partitions",
    "multiplicity_factor",
]


@dataclass(frozen=True)
class Partition:
    """Integer partition stored as ``(part, multiplicity)`` pairs, largest part first."""

    parts: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for value, mult in self.parts:
            if value < 1 or mult < 1:
                raise ValueError(f"invalid part {value}^{mult}")

    @classmethod
    def from_mapping(cls, parts: Mapping[int, int]) -> "Partition":
        return cls(tuple(sorted(((int(v), int(m)) for v, m in parts.items() if m), reverse=True)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.parts)

    @property
    def weight(self) -> int:
        return sum(v * m for v, m in self.parts)

    @property
    def piece_count(self) -> int:
        return sum(m for _, m in self.parts)

    @property
    def length(self) -> int:
        """Number of distinct part values."""
        return len(self.parts)


def binomial(n: int, r: int) -> int:
    """C(n, r) for n >= 0, zero outside 0 <= r <= n."""
    if n < 0:
        raise ValueError(f"binomial requires n >= 0, got {n}")
    if r < 0 or r > n:
        return 0
    return comb(n, r)


def stirling2(p: int, k: int) -> int:
    """Stirling number of the second kind via the alternating binomial sum

    S(p, k) = (1/k!) * sum_{j=0}^{k} (-1)^(k-j) C(k, j) j^p
    """
    if p < 0 or k < 0:
        raise ValueError("stirling2 requires p, k >= 0")
    total = sum((-1) ** (k - j) * comb(k, j) * j**p for j in range(k + 1))
    q, rem = divmod(total, factorial(k))
    if rem:
        raise ArithmeticError(f"non-integral Stirling sum for ({p}, {k})")
    return q


def stirling2_recurrence(p: int, k: int) -> int:
    """S(p, k) from S(n, k) = k S(n-1, k) + S(n-1, k-1); used to cross-check :func:`stirling2`."""
    if p < 0 or k < 0:
        raise ValueError("stirling2 requires p, k >= 0")
    row = [1] + [0] * k
    for _ in range(p):
        new = [0] * (k + 1)
        for j in range(1, k + 1):
            new[j] = j * row[j] + row[j - 1]
        row = new
    return row[k]


def stirling1_unsigned(n: int, p: int) -> int:
    """Unsigned Stirling number of the first kind [n p]."""
    if n < 0 or p < 0:
        raise ValueError("stirling1_unsigned requires n, p >= 0")
    row = [1] + [0] * p
    for i in range(n):
        new = [0] * (p + 1)
        for j in range(1, p + 1):
            new[j] = i * row[j] + row[j - 1]
        row = new
    return row[p]


def eulerian(n: int, m: int) -> int:
    """Eulerian number <n m> by the explicit sum over k = 0..m of (-1)^k C(n+1, k) (m+1-k)^n."""
    if n < 1:
        raise ValueError(f"eulerian requires n >= 1, got {n}")
    if not 0 <= m <= n - 1:
        raise ValueError(f"eulerian requires 0 <= m <= n-1, got m={m} for n={n}")
    return sum((-1) ** k * comb(n + 1, k) * (m + 1 - k) ** n for k in range(m + 1))


def falling_factorial(x, n: int):
    """x (x-1) ... (x-n+1); the empty product is 1.

    Works for ints, Fractions and floating types; the result type follows ``x``.
    """
    if n < 0:
        raise ValueError(f"falling_factorial requires n >= 0, got {n}")
    result = 1
    for i in range(n):
        result = result * (x - i)
    return result


def partitions(n: int, m: int) -> Iterator[Partition]:
    """Yield every partition of ``n`` into at most ``m`` pieces exactly once.

    ``n == 0`` yields the single empty partition. Partitions are produced with
    their largest part first, in decreasing lexicographic order, though callers
    should not depend on the order.
    """
    if n < 0:
        raise ValueError(f"partitions requires n >= 0, got {n}")
    if m < 1:
        raise ValueError(f"partitions requires m >= 1, got {m}")

    def rec(remaining: int, max_part: int, pieces_left: int, acc: list[int]):
        if remaining == 0:
            yield acc
            return
        if pieces_left == 0:
            return
        # remaining must fit into pieces_left parts of size <= max_part
        if remaining > max_part * pieces_left:
            return
        for part in range(min(remaining, max_part), 0, -1):
            acc.append(part)
            yield from rec(remaining - part, part, pieces_left - 1, acc)
            acc.pop()

    for parts in rec(n, n, m, []):
        counts: dict[int, int] = {}
        for part in parts:
            counts[part] = counts.get(part, 0) + 1
        yield Partition(tuple(counts.items()))


def multiplicity_factor(m: int, p: Partition | Mapping[int, int]) -> int:
    """Number of distinct orderings of the length-``m`` tuple built from ``p``.

    Each part ``s`` of ``p`` becomes an entry ``s + 1`` and the tuple is padded
    with ``1`` entries up to length ``m``. The count is

        (m)_{pieces} / prod_i (m_i)!

    where ``pieces`` is the piece count of ``p`` and ``m_i`` its multiplicities.
    """
    if not isinstance(p, Partition):
        p = Partition.from_mapping(p)
    pieces = p.piece_count
    if pieces > m:
        raise ValueError(f"partition has {pieces} pieces, more than m={m}")
    numer = falling_factorial(m, pieces)
    denom = prod(factorial(mult) for _, mult in p.parts)
    q, rem = divmod(numer, denom)
    assert rem == 0
    return q
