"""The budgeted first Picard-Fuchs ODE of a pencil: the ground-truth cost oracle."""

from __future__ import annotations

import logging
import socket
import threading
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Any, List, Literal, Optional, Sequence, Tuple

from ._budget import Budget, BudgetMeter
from ._connection import Pencil, PoleForm, griffiths_dwork_reduce
from ._exceptions import (
    BudgetExceededError,
    NotZeroDimensionalError,
    PoleError,
    SingularHypersurfaceError,
)
from ._jacobian import GriffithsBasis, JacobianRing, is_smooth
from ._monomial import ONE
from ._polynomial import Polynomial
from ._stores import JsonlStore
from ._univariate import RationalFunction, UPoly, as_coefficient
from .types.labels import EdgeLabel

__all__ = [
    "PicardFuchsOperator",
    "FirstOdeOutcome",
    "first_ode",
    "check_specialization",
    "label_edge",
    "LabelStore",
    "host_tag",
]

logger = logging.getLogger(__name__)


def host_tag() -> str:
    """Labels are hardware relative; tag them with the labeling host"""
    return socket.gethostname()


@dataclass(frozen=True)
class PicardFuchsOperator:
    """sum_j c_j(t) (d/dt)^j with integer-coefficient c_j of content 1"""

    coefficients: Tuple[UPoly, ...]

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.coefficients)

    def __str__(self) -> str:
        parts = []
        for j, c in enumerate(self.coefficients):
            if not c:
                continue
            d = "" if j == 0 else ("*D" if j == 1 else f"*D^{j}")
            parts.append(f"({c}){d}")
        return " + ".join(parts) or "0"

    def evaluate(self, t0: Fraction) -> List[Fraction]:
        return [c.evaluate(t0) for c in self.coefficients]


@dataclass(frozen=True)
class FirstOdeOutcome:
    """Success with an operator and its witness chain, Timeout, or SingularFamily"""

    status: Literal["success", "timeout", "singular"]
    elapsed: float
    steps: int = 0
    operator: Optional[PicardFuchsOperator] = None
    chain: Tuple[Tuple[Any, ...], ...] = field(default=(), repr=False)
    basis: Optional[GriffithsBasis] = field(default=None, repr=False)
    message: str = ""

    @property
    def success(self) -> bool:
        return self.status == "success"


def _dt(c: Any) -> Any:
    return c.derivative() if isinstance(c, RationalFunction) else Fraction(0)


def _chain_step(
    v: Sequence[Any],
    ring: JacobianRing,
    basis: GriffithsBasis,
    direction: Polynomial,
    meter: BudgetMeter,
) -> List[Any]:
    """Coordinates of d/dt of the class sum_i v_i p_i / f_t^k_i"""
    out: List[Any] = [_dt(c) for c in v]
    if not direction:
        return out
    for k in basis.pole_orders():
        numerator = Polynomial.zero()
        for i in basis.rows_of_order(k):
            if v[i]:
                numerator = numerator + Polynomial.monomial(basis.rows[i][0], v[i])
        if not numerator:
            continue
        numerator = (numerator * direction).scalar_mul(Fraction(-k))
        coords = griffiths_dwork_reduce(
            PoleForm(numerator, k + 1, ring.f), ring, basis=basis, meter=meter
        )
        out = [a + b for a, b in zip(out, coords)]
    return out


def _column(v: Sequence[Any]) -> Tuple[List[UPoly], UPoly]:
    """Clear denominators of a Q(t) vector: returns (polynomial entries, scale)"""
    rf = [as_coefficient(c) for c in v]
    scale = UPoly.constant(1)
    for c in rf:
        if c.den.degree > 0:
            scale = (scale * c.den) // scale.gcd(c.den)
    entries = [c.num * (scale // c.den) for c in rf]
    return entries, scale


def _bareiss(matrix: List[List[UPoly]], meter: BudgetMeter) -> Tuple[List[List[UPoly]], List[int]]:
    """Fraction-free row echelon form over Q[t]; returns (matrix, pivot columns)"""
    m = [list(row) for row in matrix]
    rows = len(m)
    cols = len(m[0]) if m else 0
    prev = UPoly.constant(1)
    r = 0
    pivots: List[int] = []
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        for i in range(r + 1, rows):
            mic = m[i][c]
            for j in range(c + 1, cols):
                num = piv * m[i][j] - mic * m[r][j]
                q, rem = num.divmod(prev)
                assert not rem, "Bareiss division must be exact"
                m[i][j] = q
            m[i][c] = UPoly()
        meter.tick()
        prev = piv
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def _dependence(chain: Sequence[Sequence[Any]], meter: BudgetMeter) -> Optional[List[UPoly]]:
    """Kernel vector of the columns v_0..v_r if they are dependent over Q(t).

    Assumes v_0..v_{r-1} are independent, which the caller guarantees by
    testing after every new vector.
    """
    r = len(chain) - 1
    cols = [_column(v) for v in chain]
    m0 = len(chain[0])
    matrix = [[cols[j][0][i] for j in range(r + 1)] for i in range(m0)]
    echelon, pivots = _bareiss(matrix, meter)
    if len(pivots) == r + 1:
        return None
    if pivots != list(range(r)):
        raise AssertionError("earlier chain vectors were not independent")
    # back substitution in Q(t) with c'_r = 1
    sol: List[RationalFunction] = [as_coefficient(0)] * (r + 1)
    sol[r] = as_coefficient(1)
    for i in range(r - 1, -1, -1):
        acc = RationalFunction(-echelon[i][r])
        for l in range(i + 1, r):
            acc = acc - RationalFunction(echelon[i][l]) * sol[l]
        sol[i] = acc / RationalFunction(echelon[i][i])
    # undo the column scaling: M_j = s_j v_j
    coeffs = [s * RationalFunction(cols[j][1]) for j, s in enumerate(sol)]
    return _normalize(coeffs)


def _normalize(coeffs: Sequence[RationalFunction]) -> List[UPoly]:
    """Clear denominators, divide out the polynomial gcd and the integer content"""
    den = UPoly.constant(1)
    for c in coeffs:
        if c.den.degree > 0:
            den = (den * c.den) // den.gcd(c.den)
    polys = [c.num * (den // c.den) for c in coeffs]
    g = UPoly()
    for p in polys:
        g = g.gcd(p) if g else p.monic()
    if g and g.degree > 0:
        polys = [p // g for p in polys]
    scale = 1
    for p in polys:
        scale = lcm(scale, p.denominator_lcm())
    polys = [p * scale for p in polys]
    content = 0
    for p in polys:
        content = gcd(content, p.numerator_gcd())
    if content > 1:
        polys = [p * Fraction(1, content) for p in polys]
    if polys[-1].lc < 0:
        polys = [-p for p in polys]
    return polys


def first_ode(
    pencil: Pencil,
    budget: Optional[Budget] = None,
    *,
    cancel: Optional[threading.Event] = None,
    check_endpoints: bool = True,
) -> FirstOdeOutcome:
    """Derive the Picard-Fuchs operator annihilating res(1 / f_t) along the pencil.

    Builds v_0 = res(1/f_t) over Q(t) and v_{j+1} = d/dt v_j by Griffiths-Dwork
    reduction, stopping at the first r with v_0..v_r dependent over Q(t).

    Args:
        pencil: the pencil (f, g)
        budget: wall-clock/step budget; timeouts discard partial work
        cancel: optional event a coordinator may set to abort the job
        check_endpoints: verify that f and g are smooth first

    Returns:
        FirstOdeOutcome with status "success", "timeout" or "singular"
    """
    meter = BudgetMeter(budget, cancel=cancel)
    try:
        if check_endpoints:
            for end in (pencil.f, pencil.g):
                if not is_smooth(end, meter=meter):
                    raise SingularHypersurfaceError(f"endpoint {end} is singular")
        family = pencil.family()
        ring = JacobianRing(family, meter=meter)
        if not ring.is_zero_dimensional():
            raise NotZeroDimensionalError(
                "generic member of the pencil is singular",
                leading_terms=ring.gb.leading_terms_str(),
            )
        basis = ring.griffiths_basis()
        direction = pencil.direction
        v0: List[Any] = [as_coefficient(0)] * basis.m0
        v0[basis.index(ONE, 1)] = as_coefficient(1)
        chain: List[List[Any]] = [v0]
        while True:
            kernel = _dependence(chain, meter)
            if kernel is not None:
                break
            if len(chain) > basis.m0:
                raise AssertionError("no dependence among more than m0 vectors")
            chain.append(_chain_step(chain[-1], ring, basis, direction, meter))
            logger.debug("chain length %d for %s", len(chain), pencil.edge_id)
    except BudgetExceededError as exc:
        logger.info("first ODE timed out after %.3fs (%s)", exc.elapsed, exc.reason)
        return FirstOdeOutcome(
            status="timeout", elapsed=meter.elapsed, steps=meter.steps, message=exc.message
        )
    except NotZeroDimensionalError as exc:
        return FirstOdeOutcome(
            status="singular", elapsed=meter.elapsed, steps=meter.steps, message=exc.message
        )
    operator = PicardFuchsOperator(coefficients=tuple(kernel))
    logger.info(
        "first ODE of order %d and degree %d in %.3fs",
        operator.order,
        operator.degree,
        meter.elapsed,
    )
    return FirstOdeOutcome(
        status="success",
        elapsed=meter.elapsed,
        steps=meter.steps,
        operator=operator,
        chain=tuple(tuple(v) for v in chain),
        basis=basis,
    )


def check_specialization(outcome: FirstOdeOutcome, pencil: Pencil, t0: Fraction) -> bool:
    """Specialise a successful derivation at a rational t0 and re-check it.

    Checks that sum_j c_j(t0) v_j(t0) = 0. When the Griffiths basis of f_t0
    uses the same monomials as the generic one, every v_j(t0) is also
    recomputed at the fixed member: d^j/dt^j (1/f_t) = (-1)^j j! (g - f)^j / f_t^(j+1),
    reduced over Q against f_t0, must equal the stored chain value.

    Raises:
        PoleError: t0 is a root of c_r or a pole of the chain
        SingularHypersurfaceError: f_t0 is singular
    """
    if not outcome.success or outcome.operator is None or outcome.basis is None:
        raise ValueError("specialization needs a successful outcome")
    t0 = Fraction(t0)
    op = outcome.operator
    if not op.coefficients[-1].evaluate(t0):
        raise PoleError(f"t0 = {t0} is a root of the leading coefficient", point=t0)
    values = [[as_coefficient(c).evaluate(t0) for c in v] for v in outcome.chain]
    cs = op.evaluate(t0)
    total = [sum((cs[j] * values[j][i] for j in range(len(cs))), Fraction(0)) for i in range(len(values[0]))]
    if any(total):
        return False
    member = pencil.member(t0)
    ring = JacobianRing(member)
    ring.require_smooth()
    basis = ring.griffiths_basis()
    if basis.rows != outcome.basis.rows:
        logger.debug("basis of f_t0 differs at t0=%s, chain not recomputed", t0)
        return True
    direction = pencil.direction
    power = Polynomial.constant(1)
    sign = Fraction(1)
    for j, stored in enumerate(values):
        if j:
            power = power * direction
            sign *= -j
        if not power:
            recomputed = [Fraction(0)] * basis.m0
        else:
            recomputed = griffiths_dwork_reduce(
                PoleForm(power.scalar_mul(sign), j + 1, member), ring, basis=basis
            )
        if list(recomputed) != stored:
            logger.debug("chain value %d disagrees at t0=%s", j, t0)
            return False
    return True


class LabelStore(JsonlStore[EdgeLabel]):
    """JSON-Lines label store; re-labeling appends, the newest timestamp wins"""

    def __init__(self, path: Any) -> None:
        super().__init__(path, EdgeLabel, key=lambda r: r.edge)

    def latest(self) -> dict:
        out: dict = {}
        for record in self.iter_records():
            current = out.get(record.edge)
            if current is None or record.timestamp >= current.timestamp:
                out[record.edge] = record
        return out


def label_edge(
    pencil: Pencil,
    budget: Optional[Budget] = None,
    *,
    store: Optional[LabelStore] = None,
    host: Optional[str] = None,
) -> EdgeLabel:
    """Run first_ode under the budget (30s by default) and record an EdgeLabel"""
    budget = budget or Budget(wall_clock=30.0)
    started = time.monotonic()
    try:
        outcome = first_ode(pencil, budget)
    except SingularHypersurfaceError as exc:
        outcome = FirstOdeOutcome(status="singular", elapsed=time.monotonic() - started, message=exc.message)
    if outcome.success and outcome.operator is not None:
        label = EdgeLabel(
            edge=pencil.edge_id,
            elapsed_s=outcome.elapsed,
            success=True,
            order=outcome.operator.order,
            degree=outcome.operator.degree,
            host=host or host_tag(),
            budget_s=budget.wall_clock,
        )
    else:
        label = EdgeLabel(
            edge=pencil.edge_id,
            elapsed_s=outcome.elapsed,
            success=False,
            failure="timeout" if outcome.status == "timeout" else "singular",
            host=host or host_tag(),
            budget_s=budget.wall_clock,
        )
    if store is not None:
        store.append(label)
    return label
