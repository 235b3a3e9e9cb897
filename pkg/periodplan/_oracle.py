from __future__ import annotations

import hashlib
import logging
import math
import time
from typing import Dict, FrozenSet, Iterable, Mapping, Optional

from ._budget import Budget
from ._connection import Pencil
from ._exceptions import OracleFault, PeriodPlanError
from ._picard_fuchs import LabelStore, first_ode, host_tag
from ._types import Edge
from .types.labels import AttemptOutcome, EdgeLabel

__all__ = ["SyntheticOracle", "AlgebraicOracle", "canonical_edge"]

logger = logging.getLogger(__name__)


def canonical_edge(edge: Edge) -> Edge:
    """Unordered edge identity: endpoints in canonical string order"""
    a, b = edge
    return (a, b) if a <= b else (b, a)


class SyntheticOracle:
    """
    Deterministic stand-in for the first-ODE oracle

    Features:
    - Cost is read from an explicit table, else derived from a SHA-256 of the edge id
    - ``math.inf`` costs never finish
    - Edges in ``faults`` raise OracleFault, like a crashed worker
    - ``sleep=True`` spends real wall time, capped by the budget
    """

    def __init__(
        self,
        costs: Optional[Mapping[Edge, float]] = None,
        *,
        faults: Iterable[Edge] = (),
        max_cost: float = 60.0,
        sleep: bool = False,
    ) -> None:
        self.costs: Dict[Edge, float] = {canonical_edge(e): float(c) for e, c in (costs or {}).items()}
        self.faults: FrozenSet[Edge] = frozenset(canonical_edge(e) for e in faults)
        self.max_cost = max_cost
        self.sleep = sleep
        self.calls = 0

    def __repr__(self) -> str:
        return f"SyntheticOracle(costs={len(self.costs)}, faults={len(self.faults)}, sleep={self.sleep})"

    def cost(self, edge: Edge) -> float:
        key = canonical_edge(edge)
        if key in self.costs:
            return self.costs[key]
        digest = hashlib.sha256(f"{key[0]} | {key[1]}".encode("utf-8")).digest()
        fraction = int.from_bytes(digest[:8], "big") / 2**64
        return fraction * self.max_cost

    def attempt(self, edge: Edge, budget_seconds: float) -> AttemptOutcome:
        self.calls += 1
        key = canonical_edge(edge)
        if key in self.faults:
            raise OracleFault(f"injected fault on edge {key[0]} -- {key[1]}")
        cost = self.cost(key)
        spent = min(cost, budget_seconds)
        if self.sleep and math.isfinite(spent):
            time.sleep(spent)
        status = "success" if cost < budget_seconds else "timeout"
        return AttemptOutcome(edge=key, status=status, elapsed=spent)


class AlgebraicOracle:
    """The real oracle: derive the first Picard-Fuchs ODE of the edge's pencil"""

    def __init__(
        self,
        *,
        step_limit: Optional[int] = None,
        store: Optional[LabelStore] = None,
        host: Optional[str] = None,
    ) -> None:
        self.step_limit = step_limit
        self.store = store
        self.host = host or host_tag()

    def attempt(self, edge: Edge, budget_seconds: float) -> AttemptOutcome:
        key = canonical_edge(edge)
        budget = Budget(wall_clock=budget_seconds, step_limit=self.step_limit)
        try:
            pencil = Pencil.parse(*key)
            outcome = first_ode(pencil, budget)
        except PeriodPlanError as exc:
            raise OracleFault(f"oracle failed on {key[0]} -- {key[1]}: {exc.message}") from exc
        if self.store is not None:
            if outcome.success and outcome.operator is not None:
                label = EdgeLabel(
                    edge=pencil.edge_id,
                    elapsed_s=outcome.elapsed,
                    success=True,
                    order=outcome.operator.order,
                    degree=outcome.operator.degree,
                    host=self.host,
                    budget_s=budget_seconds,
                )
            else:
                label = EdgeLabel(
                    edge=pencil.edge_id,
                    elapsed_s=outcome.elapsed,
                    success=False,
                    failure="timeout" if outcome.status == "timeout" else "singular",
                    host=self.host,
                    budget_s=budget_seconds,
                )
            self.store.append(label)
        return AttemptOutcome(
            edge=key, status=outcome.status, elapsed=outcome.elapsed, detail=outcome.message or None
        )
