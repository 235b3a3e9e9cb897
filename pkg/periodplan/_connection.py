"""Griffiths-Dwork reduction and the two exactly computable matrices.

Row/column convention: row i of a matrix holds the coordinates of the
image of Griffiths-basis row i; column j indexes the target basis.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

from ._budget import BudgetMeter
from ._exceptions import AlgebraError, ReductionError
from ._jacobian import GriffithsBasis, JacobianRing, RingCache, residue_degree
from ._linalg import determinant
from ._monomial import NVARS, Monomial, monomials_of_degree
from ._polynomial import Polynomial, evaluate_t, pencil_family, substitute_linear
from ._types import RationalMatrix
from .types.matrices import ConnectionRecord, TranslateRecord, format_rational, parse_rational

__all__ = [
    "Pencil",
    "PoleForm",
    "ConnectionMatrix",
    "TranslateMatrix",
    "griffiths_dwork_reduce",
    "gm_connection_at",
    "translate_matrix",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Pencil:
    """The family f_t = (1 - t) f + t g"""

    f: Polynomial
    g: Polynomial

    @property
    def direction(self) -> Polynomial:
        """d/dt of f_t, i.e. g - f"""
        return self.g - self.f

    def family(self) -> Polynomial:
        return pencil_family(self.f, self.g)

    def member(self, t0: Fraction) -> Polynomial:
        return evaluate_t(self.family(), Fraction(t0))

    def reversed(self) -> Pencil:
        return Pencil(self.g, self.f)

    @property
    def edge_id(self) -> str:
        return edge_key(self.f.canonical_key(), self.g.canonical_key())

    @classmethod
    def parse(cls, f: str, g: str) -> Pencil:
        return cls(Polynomial.parse(f), Polynomial.parse(g))


def edge_key(f: str, g: str) -> str:
    return f"{f} | {g}"


@dataclass(frozen=True)
class PoleForm:
    """numerator / base^pole_order times the volume form"""

    numerator: Polynomial
    pole_order: int
    base: Polynomial

    def __post_init__(self) -> None:
        if self.pole_order < 1:
            raise ReductionError(f"pole order must be at least 1, got {self.pole_order}")
        d = self.base.homogeneous_degree()
        if self.numerator and d is not None:
            expected = residue_degree(self.pole_order, d)
            actual = self.numerator.homogeneous_degree()
            if actual != expected:
                raise ReductionError(
                    f"numerator of degree {actual} at pole order {self.pole_order} "
                    f"(expected degree {expected})"
                )


def _random_form(degree: int, rng: random.Random) -> Polynomial:
    mons = monomials_of_degree(degree)
    picks = rng.sample(list(mons), k=min(3, len(mons)))
    return Polynomial({m: Fraction(rng.randint(-3, 3) or 1) for m in picks})


def _koszul_perturb(
    cofactors: Tuple[Polynomial, ...], ring: JacobianRing, rng: random.Random
) -> Tuple[Polynomial, ...]:
    """Add a random Koszul syzygy: a_i += r d_j f, a_j -= r d_i f"""
    if not any(cofactors):
        return cofactors
    deg = max(c.total_degree() for c in cofactors) - (ring.degree or 0) + 1
    if deg < 0:
        return cofactors
    i, j = rng.sample(range(NVARS), 2)
    r = _random_form(deg, rng)
    out = list(cofactors)
    out[i] = out[i] + r * ring.partials[j]
    out[j] = out[j] - r * ring.partials[i]
    return tuple(out)


def griffiths_dwork_reduce(
    form: PoleForm,
    ring: JacobianRing,
    *,
    basis: Optional[GriffithsBasis] = None,
    meter: Optional[BudgetMeter] = None,
    perturb: Optional[random.Random] = None,
) -> List[Any]:
    """Coordinates of res(form) in the Griffiths basis of ring.f.

    At pole order k the numerator q splits as h + sum(a_i d_i f) with h the
    normal form. h lands on the basis rows of order k and the ideal part
    drops to sum(d_i a_i) / (k - 1) at order k - 1, until order 1.

    Args:
        form: the pole form to reduce; its base must be ring.f
        ring: Jacobian ring of a smooth base
        basis: Griffiths basis of the ring (computed when omitted)
        meter: optional budget shared with the caller
        perturb: when given, random Koszul syzygies are added to the
            cofactors; the coordinates must come out the same

    Returns:
        list of m0 exact coefficients (Fractions over Q, RationalFunctions over Q(t))
    """
    basis = basis or ring.griffiths_basis()
    coords: List[Any] = [Fraction(0)] * basis.m0
    q, k = form.numerator, form.pole_order
    while q:
        if meter is not None:
            meter.tick()
        div = ring.divide(q, meter)
        for m, c in div.remainder.items():
            try:
                idx = basis.index(m, k)
            except KeyError:
                raise ReductionError(
                    f"nonzero normal form at pole order {k} outside the basis"
                ) from None
            coords[idx] = coords[idx] + c
        if k == 1:
            if any(div.quotients):
                raise ReductionError("ideal part left over at pole order 1")
            break
        a = ring.cofactors_from(div.quotients)
        if perturb is not None:
            a = _koszul_perturb(a, ring, perturb)
        lowered = Polynomial.zero()
        for i, ai in enumerate(a):
            if ai:
                lowered = lowered + ai.partial_derivative(i)
        q = lowered.scalar_mul(Fraction(1, k - 1))
        k -= 1
    return coords


@dataclass(frozen=True)
class ConnectionMatrix:
    """First-order Gauss-Manin matrix of a pencil at t0"""

    entries: Tuple[Tuple[Fraction, ...], ...]
    t0: Fraction
    pencil: Pencil
    basis: GriffithsBasis

    @property
    def size(self) -> int:
        return len(self.entries)

    def rows(self) -> RationalMatrix:
        return [list(r) for r in self.entries]

    def is_zero(self) -> bool:
        return all(not v for row in self.entries for v in row)

    def scaled(self, c: Fraction) -> RationalMatrix:
        return [[v * c for v in row] for row in self.entries]

    def to_record(self) -> ConnectionRecord:
        return ConnectionRecord(
            f=str(self.pencil.f),
            g=str(self.pencil.g),
            t0=format_rational(self.t0),
            size=self.size,
            entries=[format_rational(v) for row in self.entries for v in row],
        )

    @classmethod
    def from_record(cls, record: ConnectionRecord) -> ConnectionMatrix:
        pencil = Pencil.parse(record.f, record.g)
        t0 = parse_rational(record.t0)
        values = [parse_rational(s) for s in record.entries]
        n = record.size
        entries = tuple(tuple(values[i * n : (i + 1) * n]) for i in range(n))
        basis = JacobianRing(pencil.member(t0)).griffiths_basis()
        return cls(entries=entries, t0=t0, pencil=pencil, basis=basis)


def gm_connection_at(
    pencil: Pencil,
    t0: Fraction,
    *,
    cache: Optional[RingCache] = None,
    meter: Optional[BudgetMeter] = None,
    perturb: Optional[random.Random] = None,
) -> ConnectionMatrix:
    """First-order Gauss-Manin matrix of the pencil at t = t0.

    Row i is the reduction of d/dt (p_i / f_t^k_i) = -k_i p_i (g - f) / f_t^(k_i + 1)
    evaluated at t0.

    Raises:
        SingularHypersurfaceError: f_t0 is singular; carries the basis leading terms
    """
    t0 = Fraction(t0)
    member = pencil.member(t0)
    ring = cache.get(member) if cache is not None else JacobianRing(member, meter=meter)
    ring.require_smooth()
    basis = ring.griffiths_basis()
    direction = pencil.direction
    rows: List[Tuple[Fraction, ...]] = []
    for p, k in basis.rows:
        if not direction:
            rows.append(tuple(Fraction(0) for _ in range(basis.m0)))
            continue
        numerator = direction.mul_term(p, Fraction(-k))
        coords = griffiths_dwork_reduce(
            PoleForm(numerator, k + 1, member), ring, basis=basis, meter=meter, perturb=perturb
        )
        rows.append(tuple(coords))
    logger.debug("connection matrix at t0=%s computed for %s", t0, pencil.edge_id)
    return ConnectionMatrix(entries=tuple(rows), t0=t0, pencil=pencil, basis=basis)


@dataclass(frozen=True)
class TranslateMatrix:
    """N with row i = coordinates of res(u . p_i) in the Griffiths basis of u . f"""

    N: Tuple[Tuple[Fraction, ...], ...]
    u: Tuple[Tuple[Fraction, ...], ...]
    f: Polynomial
    image: Polynomial

    def rows(self) -> RationalMatrix:
        return [list(r) for r in self.N]

    def to_record(self) -> TranslateRecord:
        return TranslateRecord(
            f=str(self.f),
            image=str(self.image),
            u=[format_rational(v) for row in self.u for v in row],
            size=len(self.N),
            entries=[format_rational(v) for row in self.N for v in row],
        )


def translate_matrix(
    u: Sequence[Sequence[Any]],
    f: Polynomial,
    *,
    cache: Optional[RingCache] = None,
) -> TranslateMatrix:
    """Basis-change matrix N for the linear translate u . f.

    Raises:
        SingularMatrixError: u is not invertible
        SingularHypersurfaceError: f is singular
    """
    u_rat = tuple(tuple(Fraction(v) for v in row) for row in u)
    image = substitute_linear(u_rat, f)
    source = cache.get(f) if cache is not None else JacobianRing(f)
    source.require_smooth()
    target = cache.get(image) if cache is not None else JacobianRing(image)
    target.require_smooth()
    source_basis = source.griffiths_basis()
    target_basis = target.griffiths_basis()
    if source_basis.counts() != target_basis.counts():
        raise ReductionError("source and image have different Griffiths basis shapes")
    rows: List[Tuple[Fraction, ...]] = []
    for p, k in source_basis.rows:
        moved = substitute_linear(u_rat, Polynomial.monomial(p, Fraction(1)))
        coords = griffiths_dwork_reduce(PoleForm(moved, k, image), target, basis=target_basis)
        rows.append(tuple(coords))
    if not determinant(rows):
        raise AlgebraError("translate matrix is singular")
    return TranslateMatrix(N=tuple(rows), u=u_rat, f=f, image=image)
