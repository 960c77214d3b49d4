"""Bit-string arithmetic and the exact Walsh-Hadamard transform over Z_2^n.

Every table in this package is indexed by n-bit words, with the entry for
site k stored in bit k-1 (site 1 is least significant).  The transform
kernel is (-1)^<r,s> with <r,s> = sum_k r_k s_k mod 2.  All arithmetic here
is exact integer arithmetic; no floats enter the transforms.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

__all__ = [
    "BitString",
    "DimensionMismatchError",
    "DyadicVector",
    "parity_inner",
    "walsh_hadamard",
]

MAX_SITES = 31


class DimensionMismatchError(ValueError):
    """Operands are defined for different site counts or table lengths."""


@dataclass(frozen=True)
class BitString:
    """n binary entries packed into an integer, site k in bit position k-1."""

    n: int
    bits: int

    def __post_init__(self) -> None:
        n = operator.index(self.n)
        bits = operator.index(self.bits)
        if not 1 <= n <= MAX_SITES:
            raise ValueError(f"site count must be in 1..{MAX_SITES}, got {n}")
        if bits < 0 or bits >> n:
            raise ValueError(f"value {bits} does not fit in {n} bits")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "bits", bits)

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def entry(self, site: int) -> int:
        """The binary entry for one site (1-based)."""
        if not 1 <= site <= self.n:
            raise IndexError(f"site {site} out of range 1..{self.n}")
        return (self.bits >> (site - 1)) & 1


def parity_inner(r: BitString, s: BitString) -> int:
    """<r,s> = sum_k r_k s_k mod 2."""
    if r.n != s.n:
        raise DimensionMismatchError(f"site counts differ: {r.n} vs {s.n}")
    return (r.bits & s.bits).bit_count() & 1


def walsh_hadamard(values: Sequence[int]) -> list[int]:
    """Unnormalized transform w[r] = sum_s (-1)^<r,s> v[s], exact over int.

    In-place butterfly recursion, O(m log m) for a table of length m = 2^n.
    The transform is an involution up to scale: applying it twice multiplies
    the input by 2^n.
    """
    out = [operator.index(v) for v in values]
    m = len(out)
    if m == 0 or m & (m - 1):
        raise DimensionMismatchError(f"table length {m} is not a power of two")
    step = 1
    while step < m:
        for lo in range(0, m, 2 * step):
            for j in range(lo, lo + step):
                a = out[j]
                b = out[j + step]
                out[j] = a + b
                out[j + step] = a - b
        step <<= 1
    return out


@dataclass(frozen=True)
class DyadicVector:
    """2^n exact dyadic rationals: entry s is numerators[s] / 2**log_denominator.

    The representation is kept in lowest terms: either log_denominator is 0
    or at least one numerator is odd.
    """

    n: int
    numerators: tuple[int, ...]
    log_denominator: int

    def __post_init__(self) -> None:
        n = operator.index(self.n)
        if not 1 <= n <= MAX_SITES:
            raise ValueError(f"site count must be in 1..{MAX_SITES}, got {n}")
        nums = tuple(operator.index(v) for v in self.numerators)
        if len(nums) != 1 << n:
            raise DimensionMismatchError(
                f"expected {1 << n} numerators for n={n}, got {len(nums)}"
            )
        d = operator.index(self.log_denominator)
        if d < 0:
            raise ValueError("log_denominator must be non-negative")
        while d > 0 and not any(v & 1 for v in nums):
            nums = tuple(v >> 1 for v in nums)
            d -= 1
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "numerators", nums)
        object.__setattr__(self, "log_denominator", d)

    def value(self, s: int) -> Fraction:
        return Fraction(self.numerators[s], 1 << self.log_denominator)

    def as_fractions(self) -> list[Fraction]:
        den = 1 << self.log_denominator
        return [Fraction(v, den) for v in self.numerators]

    def as_floats(self) -> list[float]:
        scale = float(1 << self.log_denominator)
        return [v / scale for v in self.numerators]
