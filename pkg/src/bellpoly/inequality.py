"""Bell correlation inequalities for two dichotomic observables per site.

An extremal inequality is parameterized by 2^n signs f(r); its coefficient
table beta(s) is the normalized Walsh-Hadamard transform of f and is an
exact dyadic vector with denominator 2^n.  Reading the signs as binary
digits (f(r) = -1 means bit r of the integer is set, site 1 least
significant) numbers all 2^(2^n) inequalities 0 .. 2^(2^n)-1.
"""

from __future__ import annotations

import math
import operator
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .transform import (
    MAX_SITES,
    DimensionMismatchError,
    DyadicVector,
    walsh_hadamard,
)

__all__ = [
    "BellTable",
    "NotExtremalError",
    "SignTable",
    "bell_table_from_id",
    "bell_table_from_json",
    "bell_table_to_json",
    "coefficients_from_signs",
    "evaluate",
    "id_to_signs",
    "is_extremal",
    "mermin_sign_table",
    "parse_polynomial",
    "polynomial_string",
    "signs_from_coefficients",
    "signs_to_id",
]


class NotExtremalError(ValueError):
    """The coefficient table is not a facet: its transform leaves {-1,+1}."""


@dataclass(frozen=True)
class SignTable:
    """2^n signs f(r) in {-1,+1}, indexed by the configuration word r."""

    n: int
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        n = operator.index(self.n)
        if not 1 <= n <= MAX_SITES:
            raise ValueError(f"site count must be in 1..{MAX_SITES}, got {n}")
        signs = tuple(operator.index(v) for v in self.signs)
        if len(signs) != 1 << n:
            raise DimensionMismatchError(
                f"expected {1 << n} signs for n={n}, got {len(signs)}"
            )
        if any(v not in (-1, 1) for v in signs):
            raise ValueError("sign table entries must be exactly -1 or +1")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "signs", signs)

    def __neg__(self) -> "SignTable":
        return SignTable(self.n, tuple(-v for v in self.signs))


@dataclass(frozen=True)
class BellTable:
    """Coefficients beta(s) of a Bell polynomial, stored exactly."""

    coefficients: DyadicVector

    @property
    def n(self) -> int:
        return self.coefficients.n

    @classmethod
    def from_numerators(
        cls, n: int, numerators: Sequence[int], log_denominator: int
    ) -> "BellTable":
        return cls(DyadicVector(n, tuple(numerators), log_denominator))

    def coefficient(self, s: int) -> Fraction:
        return self.coefficients.value(s)

    def __neg__(self) -> "BellTable":
        c = self.coefficients
        return BellTable(
            DyadicVector(c.n, tuple(-v for v in c.numerators), c.log_denominator)
        )


def coefficients_from_signs(f: SignTable) -> BellTable:
    """beta(s) = 2^-n sum_r f(r) (-1)^<r,s>; always an extremal table."""
    return BellTable(DyadicVector(f.n, tuple(walsh_hadamard(f.signs)), f.n))


def signs_from_coefficients(beta: BellTable) -> SignTable:
    """Recover f(r) = sum_s beta(s)(-1)^<r,s>, rejecting non-extremal tables."""
    unit = 1 << beta.coefficients.log_denominator
    signs = []
    for r, w in enumerate(walsh_hadamard(beta.coefficients.numerators)):
        if w == unit:
            signs.append(1)
        elif w == -unit:
            signs.append(-1)
        else:
            raise NotExtremalError(
                f"transform value {Fraction(w, unit)} at r={r} is not +-1"
            )
    return SignTable(beta.n, tuple(signs))


def is_extremal(beta: BellTable) -> bool:
    try:
        signs_from_coefficients(beta)
    except NotExtremalError:
        return False
    return True


def id_to_signs(n: int, value: int) -> SignTable:
    """Decode an inequality number: bit r set means f(r) = -1."""
    value = operator.index(value)
    if n < 1 or n > MAX_SITES:
        raise ValueError(f"site count must be in 1..{MAX_SITES}, got {n}")
    if not 0 <= value < 1 << (1 << n):
        raise ValueError(f"id {value} out of range for n={n}")
    return SignTable(n, tuple(1 - 2 * ((value >> r) & 1) for r in range(1 << n)))


def signs_to_id(f: SignTable) -> int:
    """Encode a sign table as its inequality number (unbounded int)."""
    value = 0
    for r, v in enumerate(f.signs):
        if v < 0:
            value |= 1 << r
    return value


def bell_table_from_id(n: int, value: int) -> BellTable:
    return coefficients_from_signs(id_to_signs(n, value))


def mermin_sign_table(n: int) -> SignTable:
    """The inequality attaining the overall maximal quantum violation 2^((n-1)/2).

    f(r) = -1 exactly where weight(r) mod 4 is 0 or 3.  For n=3 this sits in
    the orbit numbered 23, for n=4 in the orbit numbered 6014.
    """
    if n < 1 or n > MAX_SITES:
        raise ValueError(f"site count must be in 1..{MAX_SITES}, got {n}")
    return SignTable(
        n,
        tuple(-1 if r.bit_count() % 4 in (0, 3) else 1 for r in range(1 << n)),
    )


def evaluate(beta: BellTable, xi) -> float:
    """sum_s beta(s) xi(s) for a correlation vector (any length-2^n sequence)."""
    values = getattr(xi, "xi", xi)
    if len(values) != 1 << beta.n:
        raise DimensionMismatchError(
            f"correlation vector has {len(values)} entries, expected {1 << beta.n}"
        )
    num = beta.coefficients.numerators
    acc = math.fsum(a * float(b) for a, b in zip(num, values))
    return acc / (1 << beta.coefficients.log_denominator)


_SITE_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def _factor(site: int, choice: int, n: int) -> str:
    if n <= len(_SITE_LETTERS):
        return f"{_SITE_LETTERS[site]}{choice + 1}"
    return f"A{site + 1}({choice})"


def polynomial_string(beta: BellTable) -> str:
    """Render e.g. '1/2 a1 b1 + 1/2 a1 b2 + 1/2 a2 b1 - 1/2 a2 b2'.

    Terms are ordered by the choice tuple (s_1, s_2, ...) lexicographically;
    zero terms are dropped and unit coefficients left implicit.
    """
    n = beta.n
    den = 1 << beta.coefficients.log_denominator
    order = sorted(range(1 << n), key=lambda s: tuple((s >> k) & 1 for k in range(n)))
    parts: list[str] = []
    for s in order:
        num = beta.coefficients.numerators[s]
        if num == 0:
            continue
        coef = Fraction(abs(num), den)
        factors = " ".join(_factor(k, (s >> k) & 1, n) for k in range(n))
        body = factors if coef == 1 else f"{coef} {factors}"
        if not parts:
            parts.append(body if num > 0 else f"-{body}")
        else:
            parts.append(("+ " if num > 0 else "- ") + body)
    return " ".join(parts) if parts else "0"


_TOKEN_RE = re.compile(r"\s*([+-]|\d+/\d+|\d+|[a-z]\d+)")


def parse_polynomial(text: str, n: int | None = None) -> BellTable:
    """Parse a flat polynomial like '1/2 a1 b1 - 1/2 a2 b2' back to a table.

    Every term must name each site exactly once (letters a..z, choice
    subscript 1 or 2); coefficients must be dyadic rationals.
    """
    pos = 0
    tokens: list[str] = []
    stripped = text.strip()
    if stripped == "0":
        if n is None:
            raise ValueError("cannot infer the site count of the zero polynomial")
        return BellTable(DyadicVector(n, (0,) * (1 << n), 0))
    while pos < len(stripped):
        m = _TOKEN_RE.match(stripped, pos)
        if not m:
            raise ValueError(f"cannot parse polynomial near {stripped[pos:pos + 12]!r}")
        tokens.append(m.group(1))
        pos = m.end()

    terms: list[tuple[Fraction, dict[int, int]]] = []
    sign, coef, factors = 1, None, {}

    def flush() -> None:
        nonlocal sign, coef, factors
        if not factors:
            raise ValueError("term without site factors")
        terms.append((sign * (coef if coef is not None else Fraction(1)), factors))
        sign, coef, factors = 1, None, {}

    for tok in tokens:
        if tok in "+-":
            if factors:
                flush()
            sign = 1 if tok == "+" else -1
        elif tok[0].isdigit():
            if coef is not None or factors:
                raise ValueError(f"misplaced coefficient {tok!r}")
            if "/" in tok:
                a, b = tok.split("/")
                coef = Fraction(int(a), int(b))
            else:
                coef = Fraction(int(tok))
        else:
            site = _SITE_LETTERS.index(tok[0]) + 1
            choice = int(tok[1:])
            if choice not in (1, 2):
                raise ValueError(f"choice subscript must be 1 or 2 in {tok!r}")
            if site in factors:
                raise ValueError(f"site {tok[0]!r} repeated within one term")
            factors[site] = choice - 1
    flush()

    sites = max(max(f) for _, f in terms)
    if n is not None and n != sites:
        raise ValueError(f"polynomial names sites up to {sites}, expected n={n}")
    n = sites
    table = [Fraction(0)] * (1 << n)
    for coef, f in terms:
        if sorted(f) != list(range(1, n + 1)):
            raise ValueError("every term must name each site exactly once")
        s = sum(choice << (site - 1) for site, choice in f.items())
        table[s] += coef
    den = math.lcm(*(c.denominator for c in table))
    if den & (den - 1):
        raise ValueError(f"coefficients are not dyadic (denominator {den})")
    d = den.bit_length() - 1
    return BellTable(DyadicVector(n, tuple(int(c * den) for c in table), d))


def bell_table_to_json(beta: BellTable) -> dict:
    return {
        "n": beta.n,
        "log_denominator": beta.coefficients.log_denominator,
        "numerators": list(beta.coefficients.numerators),
    }


def bell_table_from_json(obj: dict) -> BellTable:
    try:
        return BellTable.from_numerators(
            obj["n"], obj["numerators"], obj["log_denominator"]
        )
    except KeyError as exc:
        raise ValueError(f"Bell table object is missing key {exc}") from exc
