"""Monomials in x, y, z, w as exponent tuples, ordered by grevlex."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement
from typing import List, Optional, Tuple

from ._types import Exponents

__all__ = [
    "VARIABLES",
    "NVARS",
    "Monomial",
    "ONE",
    "degree",
    "grevlex_key",
    "grevlex_compare",
    "divides",
    "mono_mul",
    "mono_div",
    "mono_lcm",
    "is_pure_power",
    "monomials_of_degree",
    "format_monomial",
]

VARIABLES: Tuple[str, ...] = ("x", "y", "z", "w")
NVARS = len(VARIABLES)

Monomial = Exponents

ONE: Monomial = (0,) * NVARS


def degree(m: Monomial) -> int:
    return sum(m)


def grevlex_key(m: Monomial) -> Tuple[int, Tuple[int, ...]]:
    """Sort key such that a > b in grevlex iff key(a) > key(b).

    Equal degree: the larger monomial has the smaller exponent at the last
    index where the two differ, so compare negated exponents read backwards.
    """
    return (sum(m), tuple(-e for e in reversed(m)))


def grevlex_compare(a: Monomial, b: Monomial) -> int:
    """Three-way grevlex comparison: -1, 0 or 1"""
    if len(a) != len(b):
        raise ValueError(f"monomials have different variable counts: {len(a)} != {len(b)}")
    da, db = sum(a), sum(b)
    if da != db:
        return 1 if da > db else -1
    for ea, eb in zip(reversed(a), reversed(b)):
        if ea != eb:
            return 1 if ea < eb else -1
    return 0


def divides(a: Monomial, b: Monomial) -> bool:
    """True when a divides b"""
    return all(ea <= eb for ea, eb in zip(a, b))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(ea + eb for ea, eb in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    """a / b, assuming b divides a"""
    return tuple(ea - eb for ea, eb in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(ea, eb) for ea, eb in zip(a, b))


def is_pure_power(m: Monomial) -> Optional[int]:
    """Index of the variable if m is a nonconstant pure power, else None"""
    support = [i for i, e in enumerate(m) if e]
    return support[0] if len(support) == 1 else None


@lru_cache(maxsize=64)
def _monomials_of_degree(d: int, nvars: int) -> Tuple[Monomial, ...]:
    out: List[Monomial] = []
    for combo in combinations_with_replacement(range(nvars), d):
        exps = [0] * nvars
        for i in combo:
            exps[i] += 1
        out.append(tuple(exps))
    out.sort(key=grevlex_key, reverse=True)
    return tuple(out)


def monomials_of_degree(d: int, nvars: int = NVARS) -> Tuple[Monomial, ...]:
    """All monomials of total degree d, grevlex descending"""
    if d < 0:
        return ()
    return _monomials_of_degree(d, nvars)


def format_monomial(m: Monomial) -> str:
    parts = []
    for name, e in zip(VARIABLES, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"
