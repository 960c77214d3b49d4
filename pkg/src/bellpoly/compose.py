"""Substitution of inequalities into inequalities, and its inverse.

Substituting an extremal polynomial for each observable slot of an extremal
polynomial yields an extremal polynomial on the combined sites.  Running
the construction backwards splits off the last site as a CHSH shell around
two tables on one site fewer; iterating this decomposes every inequality
into nested CHSH form with single-site leaves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .inequality import BellTable, NotExtremalError, signs_from_coefficients
from .transform import MAX_SITES, DyadicVector

__all__ = [
    "NestingLeaf",
    "NestingNode",
    "chsh_decompose",
    "chsh_prototype",
    "evaluate_nesting",
    "full_nesting",
    "nesting_from_json",
    "nesting_to_json",
    "substitute",
]


def chsh_prototype() -> BellTable:
    """The CHSH table (1/2, 1/2, 1/2, -1/2)."""
    return BellTable.from_numerators(2, (1, 1, 1, -1), 1)


def _require_extremal(beta: BellTable, role: str) -> None:
    try:
        signs_from_coefficients(beta)
    except NotExtremalError as exc:
        raise NotExtremalError(f"{role} table is not extremal: {exc}") from exc


def substitute(outer: BellTable, inner: Sequence[BellTable]) -> BellTable:
    """Fill each observable slot of the outer polynomial with an inner one.

    inner holds one table per (outer site, choice) slot in the order
    (site1/choice0, site1/choice1, site2/choice0, ...); the two tables of
    one outer site must have the same site count.  Site blocks are laid out
    in outer-site order, so absolute sites 1..n_1 come from outer site 1 and
    so on.  All inputs must be extremal and the result then is as well.
    """
    k_sites = outer.n
    if len(inner) != 2 * k_sites:
        raise ValueError(
            f"expected {2 * k_sites} inner tables (two per outer site), got {len(inner)}"
        )
    _require_extremal(outer, "outer")
    for i, table in enumerate(inner):
        _require_extremal(table, f"inner slot {i}")

    block_sizes = []
    for k in range(k_sites):
        a, b = inner[2 * k], inner[2 * k + 1]
        if a.n != b.n:
            raise ValueError(
                f"slot tables of outer site {k + 1} differ in size: {a.n} vs {b.n}"
            )
        block_sizes.append(a.n)
    n_total = sum(block_sizes)
    if n_total > MAX_SITES:
        raise ValueError(f"site-count overflow: {n_total} > {MAX_SITES}")

    # lift each slot pair to a common power-of-two denominator
    lifted: list[tuple[int, ...]] = []
    pair_log_den = []
    for k in range(k_sites):
        a, b = inner[2 * k].coefficients, inner[2 * k + 1].coefficients
        d = max(a.log_denominator, b.log_denominator)
        lifted.append(tuple(v << (d - a.log_denominator) for v in a.numerators))
        lifted.append(tuple(v << (d - b.log_denominator) for v in b.numerators))
        pair_log_den.append(d)

    out = [0] * (1 << n_total)
    for s in range(1 << k_sites):
        coeff = outer.coefficients.numerators[s]
        if coeff == 0:
            continue
        part = [coeff]
        width = 0
        for k in range(k_sites):
            slot = lifted[2 * k + ((s >> k) & 1)]
            part = [p * q for q in slot for p in part]
            width += block_sizes[k]
        for t, v in enumerate(part):
            out[t] += v
    log_den = outer.coefficients.log_denominator + sum(pair_log_den)
    return BellTable(DyadicVector(n_total, tuple(out), log_den))


def chsh_decompose(beta: BellTable) -> tuple[BellTable, BellTable]:
    """Split off the last site: (beta(.,0) + beta(.,1), beta(.,0) - beta(.,1)).

    Both halves are extremal on n-1 sites, and wiring them into the two
    slots of one CHSH site reconstructs beta exactly.
    """
    if beta.n < 2:
        raise ValueError("need at least two sites to split one off")
    _require_extremal(beta, "input")
    c = beta.coefficients
    half = 1 << (beta.n - 1)
    low = c.numerators[:half]
    high = c.numerators[half:]
    b0 = tuple(a + b for a, b in zip(low, high))
    b1 = tuple(a - b for a, b in zip(low, high))
    d = c.log_denominator
    return (
        BellTable(DyadicVector(beta.n - 1, b0, d)),
        BellTable(DyadicVector(beta.n - 1, b1, d)),
    )


@dataclass(frozen=True)
class NestingLeaf:
    """A single-site polynomial: sign * A_site(choice)."""

    site: int
    choice: int
    sign: int


@dataclass(frozen=True)
class NestingNode:
    """A CHSH shell: 1/2 a0 (A(0)+A(1)) + 1/2 a1 (A(0)-A(1)) on the split site."""

    a0: "Nesting"
    a1: "Nesting"


Nesting = Union[NestingLeaf, NestingNode]

_LEAVES = {
    (1, 0): (1, 0, 1),
    (0, 1): (1, 1, 1),
    (-1, 0): (1, 0, -1),
    (0, -1): (1, 1, -1),
}


def full_nesting(beta: BellTable) -> Nesting:
    """Recursively decompose down to single-site leaves.

    Every intermediate table is verified extremal along the way, which
    certifies constructively that beta arises from CHSH substitutions.
    """
    if beta.n == 1:
        c = beta.coefficients
        key = c.numerators if c.log_denominator == 0 else None
        if key not in _LEAVES:
            raise NotExtremalError(f"{c.numerators}/2^{c.log_denominator} is not a single-site facet")
        site, choice, sign = _LEAVES[key]
        return NestingLeaf(site=site, choice=choice, sign=sign)
    b0, b1 = chsh_decompose(beta)
    return NestingNode(a0=full_nesting(b0), a1=full_nesting(b1))


def evaluate_nesting(tree: Nesting) -> BellTable:
    """Expand a nesting tree back into a flat coefficient table, exactly."""
    if isinstance(tree, NestingLeaf):
        if tree.site != 1:
            raise ValueError("leaves of a full nesting sit on site 1")
        if tree.choice not in (0, 1) or tree.sign not in (-1, 1):
            raise ValueError(f"malformed leaf {tree}")
        nums = (tree.sign, 0) if tree.choice == 0 else (0, tree.sign)
        return BellTable(DyadicVector(1, nums, 0))
    e0 = evaluate_nesting(tree.a0)
    e1 = evaluate_nesting(tree.a1)
    if e0.n != e1.n:
        raise ValueError(f"branch site counts differ: {e0.n} vs {e1.n}")
    c0, c1 = e0.coefficients, e1.coefficients
    d = max(c0.log_denominator, c1.log_denominator)
    low = tuple(v << (d - c0.log_denominator) for v in c0.numerators)
    high = tuple(v << (d - c1.log_denominator) for v in c1.numerators)
    nums = tuple(a + b for a, b in zip(low, high)) + tuple(
        a - b for a, b in zip(low, high)
    )
    return BellTable(DyadicVector(e0.n + 1, nums, d + 1))


def nesting_to_json(tree: Nesting) -> dict:
    if isinstance(tree, NestingLeaf):
        return {"site": tree.site, "choice": tree.choice, "sign": tree.sign}
    return {
        "op": "chsh",
        "a0": nesting_to_json(tree.a0),
        "a1": nesting_to_json(tree.a1),
    }


def nesting_from_json(obj: dict) -> Nesting:
    if obj.get("op") == "chsh":
        return NestingNode(
            a0=nesting_from_json(obj["a0"]), a1=nesting_from_json(obj["a1"])
        )
    try:
        return NestingLeaf(site=obj["site"], choice=obj["choice"], sign=obj["sign"])
    except KeyError as exc:
        raise ValueError(f"nesting object is missing key {exc}") from exc
