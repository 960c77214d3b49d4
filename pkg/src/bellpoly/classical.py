"""The classically accessible correlation region.

The region is the convex hull of 2^(n+1) deterministic extreme points and
equals the l1 unit ball in transform coordinates: a vector lies inside iff
sum_r |spectrum(xi)[r]| <= 1.  The sign pattern of the spectrum is the
inequality most strongly violated by xi.  An independent linear-programming
oracle over the extreme points backs the l1 criterion in tests.
"""

from __future__ import annotations

import csv
import operator
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import linprog

from .inequality import SignTable
from .transform import MAX_SITES, BitString, DimensionMismatchError

__all__ = [
    "BOUNDARY_TOL",
    "ClassicalModel",
    "CorrelationVector",
    "MembershipSolverError",
    "correlation_vector_from_json",
    "correlation_vector_to_json",
    "correlation_vectors_from_csv",
    "extreme_point",
    "is_member",
    "l1_margin",
    "lp_membership",
    "mix",
    "spectrum",
    "witness",
]

BOUNDARY_TOL = 1e-10
_ENTRY_TOL = 1e-9
_WEIGHT_TOL = 1e-12
_LP_MAX_SITES = 4


class MembershipSolverError(RuntimeError):
    """The LP solver failed for reasons other than infeasibility."""


@dataclass(frozen=True)
class CorrelationVector:
    """2^n full-correlation expectations xi(s), each in [-1, 1]."""

    n: int
    xi: tuple[float, ...]

    def __post_init__(self) -> None:
        n = operator.index(self.n)
        if not 1 <= n <= MAX_SITES:
            raise ValueError(f"site count must be in 1..{MAX_SITES}, got {n}")
        xi = tuple(float(v) for v in self.xi)
        if len(xi) != 1 << n:
            raise DimensionMismatchError(
                f"expected {1 << n} entries for n={n}, got {len(xi)}"
            )
        if any(abs(v) > 1.0 + _ENTRY_TOL for v in xi):
            raise ValueError("correlation entries must lie in [-1, 1]")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "xi", xi)

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "CorrelationVector":
        m = len(values)
        if m == 0 or m & (m - 1):
            raise DimensionMismatchError(f"length {m} is not a power of two")
        return cls(m.bit_length() - 1, tuple(values))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.xi, dtype=float)

    def scaled(self, factor: float) -> "CorrelationVector":
        return CorrelationVector(self.n, tuple(factor * v for v in self.xi))


@dataclass(frozen=True)
class ClassicalModel:
    """Probability weights on the deterministic extreme points (r, sign)."""

    n: int
    weights: Mapping[tuple[int, int], float]

    def __post_init__(self) -> None:
        n = operator.index(self.n)
        if not 1 <= n <= MAX_SITES:
            raise ValueError(f"site count must be in 1..{MAX_SITES}, got {n}")
        cleaned: dict[tuple[int, int], float] = {}
        total = 0.0
        for (r, sign), w in self.weights.items():
            r = operator.index(r)
            if not 0 <= r < 1 << n:
                raise ValueError(f"configuration {r} out of range for n={n}")
            if sign not in (-1, 1):
                raise ValueError("extreme-point sign must be -1 or +1")
            w = float(w)
            if w < -_WEIGHT_TOL:
                raise ValueError(f"negative weight {w} for ({r}, {sign:+d})")
            cleaned[(r, sign)] = cleaned.get((r, sign), 0.0) + max(w, 0.0)
            total += w
        if abs(total - 1.0) > _WEIGHT_TOL:
            raise ValueError(f"weights sum to {total!r}, expected 1")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "weights", cleaned)


def _wht_rows(a: np.ndarray) -> np.ndarray:
    """Float Walsh-Hadamard butterfly along the last axis."""
    out = np.array(a, dtype=float, copy=True)
    m = out.shape[-1]
    if m == 0 or m & (m - 1):
        raise DimensionMismatchError(f"table length {m} is not a power of two")
    lead = out.shape[:-1]
    step = 1
    while step < m:
        shaped = out.reshape(-1, m // (2 * step), 2, step)
        top = shaped[:, :, 0, :].copy()
        bot = shaped[:, :, 1, :]
        shaped[:, :, 0, :] = top + bot
        shaped[:, :, 1, :] = top - bot
        step *= 2
    return out.reshape(*lead, m)


def _parity_column(n: int, r: int) -> np.ndarray:
    s = np.arange(1 << n, dtype=np.uint32)
    return (np.bitwise_count(s & np.uint32(r)) & 1).astype(np.int8)


def extreme_point(n: int, r: int | BitString, sign: int = 1) -> CorrelationVector:
    """The deterministic correlation vector xi(s) = sign * (-1)^<r,s>."""
    if isinstance(r, BitString):
        if r.n != n:
            raise DimensionMismatchError(f"site counts differ: {r.n} vs {n}")
        r = r.bits
    BitString(n, r)  # validates the range
    if sign not in (-1, 1):
        raise ValueError("sign must be -1 or +1")
    xi = sign * (1.0 - 2.0 * _parity_column(n, r))
    return CorrelationVector(n, tuple(xi))


def mix(model: ClassicalModel) -> CorrelationVector:
    """Convex combination of extreme points according to the model weights."""
    acc = np.zeros(1 << model.n)
    for (r, sign), w in model.weights.items():
        acc += w * extreme_point(model.n, r, sign).as_array()
    np.clip(acc, -1.0, 1.0, out=acc)
    return CorrelationVector(model.n, tuple(acc))


def spectrum(xi: CorrelationVector) -> np.ndarray:
    """Transform coordinates: spectrum[r] = 2^-n sum_s (-1)^<r,s> xi(s)."""
    return _wht_rows(xi.as_array()) / (1 << xi.n)


def l1_margin(xi: CorrelationVector) -> float:
    """sum_r |spectrum(xi)[r]|; xi is classical iff the value is <= 1."""
    return float(np.abs(spectrum(xi)).sum())


def is_member(xi: CorrelationVector, tol: float = BOUNDARY_TOL) -> bool:
    return l1_margin(xi) <= 1.0 + tol


def witness(xi: CorrelationVector) -> SignTable:
    """The sign table whose inequality xi violates most strongly.

    f(r) is the sign of spectrum(xi)[r], with exact zeroes resolved to +1;
    the value of that inequality on xi equals l1_margin(xi).
    """
    sp = spectrum(xi)
    return SignTable(xi.n, tuple(1 if v >= 0.0 else -1 for v in sp))


def lp_membership(xi: CorrelationVector) -> bool:
    """Linear-feasibility oracle over the 2^(n+1) extreme points.

    Kept independent of the l1 criterion; limited to n <= 4 where the LP
    stays small.  Solver failures raise MembershipSolverError rather than
    masquerading as infeasibility.
    """
    n = xi.n
    if n > _LP_MAX_SITES:
        raise ValueError(f"the LP oracle is limited to n <= {_LP_MAX_SITES}")
    m = 1 << n
    columns = np.empty((m, 2 * m))
    for r in range(m):
        col = 1.0 - 2.0 * _parity_column(n, r)
        columns[:, 2 * r] = col
        columns[:, 2 * r + 1] = -col
    a_eq = np.vstack([columns, np.ones((1, 2 * m))])
    b_eq = np.append(xi.as_array(), 1.0)
    res = linprog(
        c=np.zeros(2 * m),
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=(0.0, None),
        method="highs",
    )
    if res.status == 0:
        return True
    if res.status == 2:
        return False
    raise MembershipSolverError(f"LP solver status {res.status}: {res.message}")


def correlation_vector_to_json(xi: CorrelationVector) -> dict:
    return {"n": xi.n, "xi": list(xi.xi)}


def correlation_vector_from_json(obj: dict) -> CorrelationVector:
    try:
        return CorrelationVector(obj["n"], tuple(obj["xi"]))
    except KeyError as exc:
        raise ValueError(f"correlation vector object is missing key {exc}") from exc


def correlation_vectors_from_csv(lines: Iterable[str]) -> list[CorrelationVector]:
    """Parse CSV rows of 2^n columns ordered by the integer value of s."""
    vectors = []
    for row in csv.reader(lines):
        if not row or all(not cell.strip() for cell in row):
            continue
        vectors.append(CorrelationVector.from_values([float(c) for c in row]))
    return vectors
