"""Buchberger's algorithm for grevlex with cofactor tracking.

Every basis element keeps its expression as a combination of the input
generators, so ideal membership comes with explicit cofactors.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple

from ._budget import BudgetMeter
from ._exceptions import IdealError
from ._monomial import (
    NVARS,
    Monomial,
    divides,
    format_monomial,
    grevlex_key,
    is_pure_power,
    mono_div,
    mono_lcm,
    mono_mul,
)
from ._polynomial import Polynomial

__all__ = ["GroebnerBasis", "Division", "buchberger"]

logger = logging.getLogger(__name__)

Coefficient = Any
_Dict = Dict[Monomial, Coefficient]


def _leading(terms: _Dict) -> Monomial:
    return max(terms, key=grevlex_key)


def _sub_scaled(target: _Dict, g: Polynomial, mono: Monomial, coef: Coefficient) -> None:
    """target -= coef * mono * g, in place"""
    for m, c in g.items():
        key = mono_mul(m, mono)
        v = target.get(key)
        if v is None:
            target[key] = -(coef * c)
        else:
            v = v - coef * c
            if v:
                target[key] = v
            else:
                del target[key]


def _sub_scaled_dict(target: _Dict, g: _Dict, mono: Monomial, coef: Coefficient) -> None:
    for m, c in g.items():
        key = mono_mul(m, mono)
        v = target.get(key)
        if v is None:
            target[key] = -(coef * c)
        else:
            v = v - coef * c
            if v:
                target[key] = v
            else:
                del target[key]


def _scale(terms: _Dict, c: Coefficient) -> _Dict:
    return {m: v * c for m, v in terms.items()}


@dataclass(frozen=True)
class Division:
    """Certificate of p = sum(quotients[j] * basis[j]) + remainder"""

    quotients: Tuple[Polynomial, ...]
    remainder: Polynomial


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced grevlex Groebner basis with cofactors.

    Attributes:
        generators: monic basis elements sorted by leading monomial (ascending)
        cofactors: cofactors[j][i] is the coefficient of inputs[i] in generators[j]
        inputs: the original generators, in the order they were given
    """

    generators: Tuple[Polynomial, ...]
    cofactors: Tuple[Tuple[Polynomial, ...], ...]
    inputs: Tuple[Polynomial, ...]
    steps: int = 0
    _lms: Tuple[Monomial, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_lms", tuple(g.lm for g in self.generators))

    @property
    def leading_monomials(self) -> Tuple[Monomial, ...]:
        return self._lms

    def leading_terms_str(self) -> List[str]:
        return [format_monomial(m) for m in self._lms]

    def __len__(self) -> int:
        return len(self.generators)

    def is_standard(self, m: Monomial) -> bool:
        """True when m lies outside the leading-term ideal"""
        return not any(divides(lm, m) for lm in self._lms)

    def is_zero_dimensional(self) -> bool:
        """Some leading monomial is a pure power of every variable"""
        covered: Set[int] = set()
        for lm in self._lms:
            i = is_pure_power(lm)
            if i is not None:
                covered.add(i)
        return len(covered) == NVARS

    def divide(self, p: Polynomial, meter: Optional[BudgetMeter] = None) -> Division:
        """Multivariate division of p by the basis, with quotients"""
        h: _Dict = p.terms
        quotients: List[_Dict] = [{} for _ in self.generators]
        remainder: _Dict = {}
        while h:
            lm = _leading(h)
            lc = h[lm]
            for j, glm in enumerate(self._lms):
                if divides(glm, lm):
                    g = self.generators[j]
                    mono = mono_div(lm, glm)
                    coef = lc / g.lc
                    q = quotients[j]
                    q[mono] = q.get(mono, 0) + coef
                    _sub_scaled(h, g, mono, coef)
                    if meter is not None:
                        meter.tick()
                    break
            else:
                remainder[lm] = lc
                del h[lm]
        return Division(
            quotients=tuple(Polynomial(q) for q in quotients),
            remainder=Polynomial(remainder),
        )

    def normal_form(self, p: Polynomial, meter: Optional[BudgetMeter] = None) -> Polynomial:
        return self.divide(p, meter).remainder

    def express(self, p: Polynomial, meter: Optional[BudgetMeter] = None) -> Tuple[Polynomial, ...]:
        """Cofactors a with p = sum(a[i] * inputs[i]); p must reduce to zero"""
        div = self.divide(p, meter)
        if div.remainder:
            raise IdealError(f"polynomial is not in the ideal; normal form {div.remainder}")
        return self.lift(div.quotients)

    def lift(self, quotients: Sequence[Polynomial]) -> Tuple[Polynomial, ...]:
        """Turn quotients with respect to the basis into cofactors of the inputs"""
        out = [Polynomial.zero() for _ in self.inputs]
        for q, cof in zip(quotients, self.cofactors):
            if not q:
                continue
            for i, c in enumerate(cof):
                if c:
                    out[i] = out[i] + q * c
        return tuple(out)

    def check_cofactors(self) -> bool:
        """Each generator equals its recorded combination of the inputs"""
        for g, cof in zip(self.generators, self.cofactors):
            total = Polynomial.zero()
            for c, f in zip(cof, self.inputs):
                total = total + c * f
            if total != g:
                return False
        return True

    def s_polynomials_reduce_to_zero(self) -> bool:
        """Definitional Groebner test over every pair of basis elements"""
        gens = self.generators
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                lcm = mono_lcm(gens[i].lm, gens[j].lm)
                s = gens[i].mul_term(mono_div(lcm, gens[i].lm), 1 / gens[i].lc) - gens[j].mul_term(
                    mono_div(lcm, gens[j].lm), 1 / gens[j].lc
                )
                if self.normal_form(s):
                    return False
        return True


class _Builder:
    def __init__(self, inputs: Sequence[Polynomial], meter: BudgetMeter) -> None:
        self.inputs = tuple(inputs)
        self.meter = meter
        self.basis: List[_Dict] = []
        self.cofs: List[List[_Dict]] = []
        self.lms: List[Monomial] = []
        self.alive: List[bool] = []

    def _reduce(self, h: _Dict, hcof: List[_Dict]) -> _Dict:
        """Full reduction of h by the live basis, updating its cofactors"""
        remainder: _Dict = {}
        while h:
            lm = _leading(h)
            lc = h[lm]
            for k, glm in enumerate(self.lms):
                if self.alive[k] and divides(glm, lm):
                    g = self.basis[k]
                    mono = mono_div(lm, glm)
                    coef = lc / g[glm]
                    _sub_scaled_dict(h, g, mono, coef)
                    for cof_i, gcof_i in zip(hcof, self.cofs[k]):
                        if gcof_i:
                            _sub_scaled_dict(cof_i, gcof_i, mono, coef)
                    self.meter.tick()
                    break
            else:
                remainder[lm] = lc
                del h[lm]
        return remainder

    def _add(self, h: _Dict, hcof: List[_Dict]) -> int:
        lm = _leading(h)
        inv = 1 / h[lm]
        self.basis.append(_scale(h, inv))
        self.cofs.append([_scale(c, inv) for c in hcof])
        self.lms.append(lm)
        self.alive.append(True)
        return len(self.basis) - 1

    def run(self) -> None:
        pairs: Set[Tuple[int, int]] = set()
        for i, f in enumerate(self.inputs):
            hcof: List[_Dict] = [{} for _ in self.inputs]
            hcof[i] = {(0,) * NVARS: Fraction(1)}
            h = self._reduce(f.terms, hcof)
            if not h:
                continue
            new = self._add(h, hcof)
            pairs |= {(k, new) for k in range(new)}

        while pairs:
            i, j = min(
                pairs,
                key=lambda p: (grevlex_key(mono_lcm(self.lms[p[0]], self.lms[p[1]])), p),
            )
            pairs.discard((i, j))
            lm_i, lm_j = self.lms[i], self.lms[j]
            lcm = mono_lcm(lm_i, lm_j)
            # Buchberger's first criterion: coprime leading monomials
            if mono_mul(lm_i, lm_j) == lcm:
                continue
            # chain criterion
            if any(
                k != i
                and k != j
                and divides(self.lms[k], lcm)
                and (min(i, k), max(i, k)) not in pairs
                and (min(j, k), max(j, k)) not in pairs
                for k in range(len(self.basis))
            ):
                continue
            mi, mj = mono_div(lcm, lm_i), mono_div(lcm, lm_j)
            h: _Dict = {}
            _sub_scaled_dict(h, self.basis[i], mi, Fraction(-1))
            _sub_scaled_dict(h, self.basis[j], mj, Fraction(1))
            hcof = []
            for ci, cj in zip(self.cofs[i], self.cofs[j]):
                c: _Dict = {}
                _sub_scaled_dict(c, ci, mi, Fraction(-1))
                _sub_scaled_dict(c, cj, mj, Fraction(1))
                hcof.append(c)
            self.meter.tick()
            h = self._reduce(h, hcof)
            if not h:
                continue
            new = self._add(h, hcof)
            logger.debug("basis grew to %d elements, new leading term %s", new + 1, format_monomial(self.lms[new]))
            pairs |= {(k, new) for k in range(new)}

    def reduced(self) -> Tuple[List[Polynomial], List[Tuple[Polynomial, ...]]]:
        # drop elements whose leading monomial is divisible by another one's
        n = len(self.basis)
        keep: List[int] = []
        for k in sorted(range(n), key=lambda k: (grevlex_key(self.lms[k]), k)):
            if not any(divides(self.lms[j], self.lms[k]) for j in keep):
                keep.append(k)
        for k in range(n):
            self.alive[k] = k in keep
        gens: List[Polynomial] = []
        cofs: List[Tuple[Polynomial, ...]] = []
        for k in keep:
            # tail-reduce against the other kept elements
            self.alive[k] = False
            lm = self.lms[k]
            tail = dict(self.basis[k])
            lc = tail.pop(lm)
            hcof = [dict(c) for c in self.cofs[k]]
            rem = self._reduce(tail, hcof)
            self.alive[k] = True
            rem[lm] = lc
            inv = 1 / lc
            rem = _scale(rem, inv)
            hcof = [_scale(c, inv) for c in hcof]
            self.basis[k] = rem
            self.cofs[k] = hcof
            gens.append(Polynomial(rem))
            cofs.append(tuple(Polynomial(c) for c in hcof))
        return gens, cofs


def buchberger(
    gens: Sequence[Polynomial],
    *,
    meter: Optional[BudgetMeter] = None,
) -> GroebnerBasis:
    """Reduced grevlex Groebner basis of the ideal generated by gens.

    Uses the normal selection strategy (pair with the smallest lcm first)
    with Buchberger's coprime and chain criteria.

    Args:
        gens: nonempty list of nonzero polynomials over Q or Q(t)
        meter: optional budget; BudgetExceededError propagates to the caller

    Returns:
        GroebnerBasis carrying cofactors with respect to ``gens``
    """
    if not gens:
        raise IdealError("buchberger needs at least one generator")
    if any(not g for g in gens):
        raise IdealError("buchberger generators must be nonzero")
    meter = meter or BudgetMeter.unlimited()
    builder = _Builder(gens, meter)
    builder.run()
    basis, cofactors = builder.reduced()
    logger.debug("reduced basis has %d elements after %d steps", len(basis), meter.steps)
    return GroebnerBasis(
        generators=tuple(basis),
        cofactors=tuple(cofactors),
        inputs=tuple(gens),
        steps=meter.steps,
    )
