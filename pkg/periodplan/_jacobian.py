from __future__ import annotations

import json
import logging
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from ._budget import BudgetMeter
from ._exceptions import (
    IdealError,
    IdealMembershipError,
    SingularHypersurfaceError,
)
from ._groebner import Division, GroebnerBasis, buchberger
from ._monomial import NVARS, Monomial, format_monomial, monomials_of_degree
from ._polynomial import Polynomial

__all__ = [
    "GriffithsBasis",
    "JacobianRing",
    "RingCache",
    "jacobian_ideal",
    "is_smooth",
    "griffiths_basis",
    "express_in_ideal",
    "residue_degree",
]

logger = logging.getLogger(__name__)


def jacobian_ideal(f: Polynomial) -> Tuple[Polynomial, ...]:
    """The partial derivatives (d_0 f, ..., d_3 f)"""
    if not f:
        raise IdealError("the zero polynomial has no Jacobian ideal")
    if f.homogeneous_degree() is None:
        raise IdealError(f"polynomial is not homogeneous: {f}")
    return tuple(f.partial_derivative(i) for i in range(NVARS))


def residue_degree(pole_order: int, d: int, nvars: int = NVARS) -> int:
    """Numerator degree k*d - (n + 2) of a residue p / f^k in n + 2 variables"""
    return pole_order * d - nvars


@dataclass(frozen=True)
class GriffithsBasis:
    """Ordered rows (monomial p_i, pole order k_i).

    Rows run by pole order ascending and, inside one degree, by grevlex
    descending. Every connection and translate matrix uses this order for
    both rows and columns.
    """

    rows: Tuple[Tuple[Monomial, int], ...]
    _index: Dict[Tuple[Monomial, int], int] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {row: i for i, row in enumerate(self.rows)})

    @property
    def m0(self) -> int:
        return len(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def index(self, monomial: Monomial, pole_order: int) -> int:
        return self._index[(monomial, pole_order)]

    def pole_orders(self) -> List[int]:
        return sorted({k for _, k in self.rows})

    def rows_of_order(self, pole_order: int) -> List[int]:
        return [i for i, (_, k) in enumerate(self.rows) if k == pole_order]

    def counts(self) -> Tuple[int, ...]:
        return tuple(len(self.rows_of_order(k)) for k in self.pole_orders())

    def monomials(self) -> List[Monomial]:
        return [m for m, _ in self.rows]

    def describe(self) -> List[str]:
        return [f"{format_monomial(m)} / f^{k}" for m, k in self.rows]


class JacobianRing:
    """Jacobian ring R = S / jac(f) through a Groebner basis of the partials.

    Zero partials (a variable missing from f) are dropped before the basis
    computation and get zero cofactors, so ``express`` always returns one
    cofactor per variable.
    """

    def __init__(self, f: Polynomial, *, meter: Optional[BudgetMeter] = None) -> None:
        self.f = f
        self.degree = f.homogeneous_degree()
        self.partials = jacobian_ideal(f)
        self._live = [i for i, p in enumerate(self.partials) if p]
        if not self._live:
            raise IdealError(f"all partial derivatives of {f} vanish")
        self.gb: GroebnerBasis = buchberger([self.partials[i] for i in self._live], meter=meter)
        self._standard: Dict[int, Tuple[Monomial, ...]] = {}
        self._griffiths: Optional[GriffithsBasis] = None

    def __repr__(self) -> str:
        return f"JacobianRing(f={str(self.f)!r}, basis_size={len(self.gb)})"

    def is_zero_dimensional(self) -> bool:
        return len(self._live) == NVARS and self.gb.is_zero_dimensional()

    def standard_monomials(self, d: int) -> Tuple[Monomial, ...]:
        """Monomials of degree d outside lt(jac(f)), grevlex descending"""
        if d not in self._standard:
            self._standard[d] = tuple(m for m in monomials_of_degree(d) if self.gb.is_standard(m))
        return self._standard[d]

    @property
    def standard_monomials_by_degree(self) -> Dict[int, Tuple[Monomial, ...]]:
        """Every nonempty graded piece; only finite for zero-dimensional rings"""
        if not self.is_zero_dimensional():
            raise SingularHypersurfaceError(
                f"Jacobian ring of {self.f} is infinite dimensional",
                leading_terms=self.gb.leading_terms_str(),
            )
        out: Dict[int, Tuple[Monomial, ...]] = {}
        d = 0
        while True:
            mons = self.standard_monomials(d)
            if not mons:
                break
            out[d] = mons
            d += 1
        return out

    def dimension(self) -> int:
        return sum(len(v) for v in self.standard_monomials_by_degree.values())

    def require_smooth(self) -> None:
        if not self.is_zero_dimensional():
            raise SingularHypersurfaceError(
                f"hypersurface {self.f} is singular",
                leading_terms=self.gb.leading_terms_str(),
            )

    def griffiths_basis(self) -> GriffithsBasis:
        if self._griffiths is None:
            self.require_smooth()
            assert self.degree is not None
            rows: List[Tuple[Monomial, int]] = []
            for k in range(1, NVARS):
                deg = residue_degree(k, self.degree)
                if deg < 0:
                    continue
                rows.extend((m, k) for m in self.standard_monomials(deg))
            self._griffiths = GriffithsBasis(rows=tuple(rows))
        return self._griffiths

    def divide(self, p: Polynomial, meter: Optional[BudgetMeter] = None) -> Division:
        return self.gb.divide(p, meter)

    def normal_form(self, p: Polynomial, meter: Optional[BudgetMeter] = None) -> Polynomial:
        return self.gb.normal_form(p, meter)

    def cofactors_from(self, quotients: Tuple[Polynomial, ...]) -> Tuple[Polynomial, ...]:
        """Map basis quotients to one cofactor per partial derivative"""
        lifted = self.gb.lift(quotients)
        out = [Polynomial.zero() for _ in range(NVARS)]
        for i, c in zip(self._live, lifted):
            out[i] = c
        return tuple(out)

    def express(self, p: Polynomial, meter: Optional[BudgetMeter] = None) -> Tuple[Polynomial, ...]:
        div = self.gb.divide(p, meter)
        if div.remainder:
            raise IdealMembershipError(
                f"{p} is not in jac(f); its normal form is {div.remainder}"
            )
        return self.cofactors_from(div.quotients)


def is_smooth(f: Polynomial, *, meter: Optional[BudgetMeter] = None) -> bool:
    """True iff jac(f) is zero-dimensional, i.e. Z(f) is smooth"""
    if not f or f.homogeneous_degree() is None:
        return False
    if any(not p for p in jacobian_ideal(f)):
        return False
    return JacobianRing(f, meter=meter).is_zero_dimensional()


def griffiths_basis(f: Polynomial) -> GriffithsBasis:
    return JacobianRing(f).griffiths_basis()


def express_in_ideal(p: Polynomial, ring: JacobianRing) -> Tuple[Polynomial, ...]:
    """Cofactors (a_0..a_3) with p = sum(a_i * d_i f)"""
    return ring.express(p)


class RingCache:
    """Jacobian rings keyed by canonical polynomial string.

    Reads are lock-free; a single lock serialises insertion so one ring is
    built per distinct quartic even with many workers.
    """

    def __init__(self, persist_path: Optional[Path] = None) -> None:
        self._rings: Dict[str, JacobianRing] = {}
        self._lock = threading.Lock()
        self.persist_path = Path(persist_path) if persist_path else None

    def __len__(self) -> int:
        return len(self._rings)

    def __contains__(self, f: Polynomial) -> bool:
        return f.canonical_key() in self._rings

    def get(self, f: Polynomial) -> JacobianRing:
        key = f.canonical_key()
        ring = self._rings.get(key)
        if ring is not None:
            return ring
        with self._lock:
            ring = self._rings.get(key)
            if ring is None:
                ring = JacobianRing(f)
                self._rings[key] = ring
                logger.debug("cached Jacobian ring for %s", key)
        return ring

    def save(self) -> None:
        """Persist each cached basis as JSON keyed by the polynomial string"""
        if self.persist_path is None:
            return
        self.persist_path.parent.mkdir(parents=True, exist_ok=True)
        data = {
            key: {
                "basis": [str(g) for g in ring.gb.generators],
                "leading_terms": ring.gb.leading_terms_str(),
            }
            for key, ring in self._rings.items()
            if ring.f.is_rational()
        }
        with open(self.persist_path, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2)

    def load_bases(self) -> Dict[str, List[Polynomial]]:
        """Read a persisted basis file (bases only, without cofactors)"""
        if self.persist_path is None or not self.persist_path.exists():
            return {}
        with open(self.persist_path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        return {key: [Polynomial.parse(s) for s in entry["basis"]] for key, entry in data.items()}
