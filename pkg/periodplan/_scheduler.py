"""Brute force with thresholding, its informed variant, and the worker pool.

One coordinator owns the queue, the forest and the checkpoint. Workers only
run oracle attempts and hand back terminal outcomes.
"""

from __future__ import annotations

import logging
import math
import multiprocessing
import time
from concurrent.futures import FIRST_COMPLETED, Future, ThreadPoolExecutor, wait
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, Literal, Mapping, Optional, Sequence

import numpy as np

from ._checkpoint import Checkpoint
from ._exceptions import SearchError
from ._forest import ForestState, extract_path, extract_tree
from ._oracle import canonical_edge
from ._types import Edge, EdgeOracle, Scorer
from .types.labels import AttemptOutcome
from .types.search import (
    SearchCounts,
    SearchReport,
    StrategyComparison,
    StrategyStats,
)

__all__ = [
    "SearchProblem",
    "SearchResult",
    "Isolation",
    "attempt_edge",
    "queue_order",
    "brute_force",
    "informed_brute_force",
    "resume",
    "run_rounds",
    "compare_strategies",
]

logger = logging.getLogger(__name__)

Isolation = Literal["thread", "process"]

# grace factor on the budget for hard cancellation
HARD_LIMIT = 1.2


@dataclass
class SearchProblem:
    """
    Inputs of a search

    Attributes:
        targets: V, the vertices to connect
        waypoints: W, a superset of V
        edges: E, candidate edges inside W
        budget: per-edge wall clock k in seconds
        oracle: edge-attempt interface
        scorer: optional computability score; ranks E when present
    """

    targets: List[str]
    waypoints: List[str]
    edges: List[Edge]
    budget: float = 30.0
    oracle: Optional[EdgeOracle] = field(default=None, repr=False)
    scorer: Optional[Scorer] = field(default=None, repr=False)
    workers: int = 1
    isolation: Isolation = "thread"
    retries: int = 0
    seed: int = 0

    def __post_init__(self) -> None:
        w = set(self.waypoints)
        missing = [v for v in self.targets if v not in w]
        if missing:
            raise SearchError(f"targets outside the waypoint set: {missing}")
        for a, b in self.edges:
            if a not in w or b not in w:
                raise SearchError(f"edge {a} -- {b} leaves the waypoint set")
        if self.budget <= 0:
            raise SearchError(f"budget must be positive, got {self.budget}")
        if self.workers < 1:
            raise SearchError(f"need at least one worker, got {self.workers}")
        self.edges = [canonical_edge(e) for e in self.edges]
        if len(set(self.edges)) != len(self.edges):
            raise SearchError("candidate edges contain duplicates")


@dataclass
class SearchResult:
    status: Literal["success", "fail"]
    state: ForestState
    targets: List[str]
    order: List[Edge] = field(default_factory=list)
    new_outcomes: List[AttemptOutcome] = field(default_factory=list)

    @property
    def success(self) -> bool:
        return self.status == "success"

    @property
    def accepted(self) -> List[Edge]:
        return list(self.state.accepted)

    @property
    def attempts(self) -> List[AttemptOutcome]:
        """Every terminal outcome, including ones replayed from a checkpoint"""
        return self.state.outcomes()

    def tree(self) -> List[Edge]:
        return extract_tree(self.state.accepted, self.targets)

    def report(self, provenance: Optional[Mapping[str, Any]] = None) -> SearchReport:
        counts = SearchCounts()
        for o in self.attempts:
            counts.attempted += 1
            if o.status == "success":
                counts.succeeded += 1
            elif o.status == "timeout":
                counts.timeouts += 1
            elif o.status == "singular":
                counts.singular += 1
            else:
                counts.faulted += 1
        tree: List[Edge] = []
        paths: List[List[str]] = []
        if self.success:
            tree = self.tree()
            paths = [extract_path(tree, self.targets[0], t) for t in self.targets[1:]]
        return SearchReport(
            status=self.status,
            targets=list(self.targets),
            accepted=self.accepted,
            tree=tree,
            paths=paths,
            attempts=self.attempts,
            counts=counts,
            provenance=dict(provenance or {}),
        )


def _faulted(edge: Edge, started: float, detail: str) -> AttemptOutcome:
    return AttemptOutcome(
        edge=edge, status="faulted", elapsed=time.monotonic() - started, detail=detail
    )


def _threshold(outcome: AttemptOutcome, budget: float) -> AttemptOutcome:
    update: Dict[str, Any] = {"budget": budget if math.isfinite(budget) else None}
    # abort if phi(e) >= k
    if outcome.status == "success" and outcome.elapsed >= budget:
        update["status"] = "timeout"
    return outcome.model_copy(update=update)


def _child(oracle: EdgeOracle, edge: Edge, budget: float, queue: Any) -> None:
    try:
        queue.put(("ok", oracle.attempt(edge, budget).model_dump_json()))
    except Exception as exc:  # the parent logs it as a faulted attempt
        queue.put(("error", f"{type(exc).__name__}: {exc}"))


def _attempt_in_process(oracle: EdgeOracle, edge: Edge, budget: float) -> AttemptOutcome:
    methods = multiprocessing.get_all_start_methods()
    ctx = multiprocessing.get_context("fork" if "fork" in methods else None)
    queue = ctx.Queue()
    proc = ctx.Process(target=_child, args=(oracle, edge, budget, queue), daemon=True)
    started = time.monotonic()
    proc.start()
    limit = budget * HARD_LIMIT if math.isfinite(budget) else None
    proc.join(limit)
    if proc.is_alive():
        proc.terminate()
        proc.join()
        return AttemptOutcome(edge=edge, status="timeout", elapsed=time.monotonic() - started)
    try:
        kind, payload = queue.get(timeout=1.0)
    except Exception:
        return _faulted(edge, started, f"worker exited with code {proc.exitcode}")
    if kind == "error":
        return _faulted(edge, started, payload)
    return AttemptOutcome.model_validate_json(payload)


def attempt_edge(
    oracle: EdgeOracle,
    edge: Edge,
    budget: float,
    *,
    isolation: Isolation = "thread",
    retries: int = 0,
) -> AttemptOutcome:
    """Run one oracle attempt to a terminal outcome; never raises for oracle faults.

    ``thread`` isolation relies on the oracle honoring its budget; ``process``
    isolation runs it in a child that is terminated after 1.2x the budget.
    """
    edge = canonical_edge(edge)
    outcome: Optional[AttemptOutcome] = None
    for attempt in range(retries + 1):
        started = time.monotonic()
        if isolation == "process":
            outcome = _attempt_in_process(oracle, edge, budget)
        else:
            try:
                outcome = oracle.attempt(edge, budget)
            except Exception as exc:
                logger.warning("oracle fault on %s -- %s: %s", edge[0], edge[1], exc)
                outcome = _faulted(edge, started, f"{type(exc).__name__}: {exc}")
        if outcome.status != "faulted":
            break
        logger.info("retrying faulted edge %s -- %s (%d/%d)", edge[0], edge[1], attempt + 1, retries)
    assert outcome is not None
    return _threshold(outcome, budget)


def queue_order(problem: SearchProblem, scorer: Optional[Scorer] = None) -> List[Edge]:
    """Q for the informed search.

    With a scorer: descending score, ties by canonical edge id. Without one:
    a shuffle seeded by ``problem.seed`` of the canonically sorted edges.
    """
    scorer = scorer if scorer is not None else problem.scorer
    edges = sorted(problem.edges)
    if scorer is None:
        rng = np.random.default_rng(problem.seed)
        return [edges[int(i)] for i in rng.permutation(len(edges))]
    scores = scorer.score(edges)
    ranked = sorted(zip(edges, scores), key=lambda pair: (-pair[1], pair[0]))
    return [e for e, _ in ranked]


def brute_force(
    problem: SearchProblem,
    order: Sequence[Edge],
    *,
    checkpoint: Optional[Checkpoint] = None,
    state: Optional[ForestState] = None,
    on_outcome: Optional[Callable[[AttemptOutcome], None]] = None,
) -> SearchResult:
    """Attempt edges in Q order until V lies in one component of the accepted graph.

    Edges already present in ``state`` are skipped, which is how a resumed
    search avoids re-attempting anything.

    Args:
        problem: the search inputs; ``problem.oracle`` must be set
        order: Q, a bijection onto problem.edges
        checkpoint: attempt log; each outcome is flushed before the loop proceeds
        state: forest to continue from (resume and multi-round searches)
        on_outcome: callback for every fresh outcome

    Returns:
        SearchResult with status "success" or "fail"
    """
    if problem.oracle is None:
        raise SearchError("search problem has no oracle")
    order = [canonical_edge(e) for e in order]
    if sorted(order) != sorted(problem.edges):
        raise SearchError("queue order is not a permutation of the candidate edges")
    state = state or ForestState(problem.waypoints)
    result = SearchResult(status="fail", state=state, targets=list(problem.targets), order=order)

    def record(outcome: AttemptOutcome) -> None:
        if checkpoint is not None:
            checkpoint.append(outcome)
        state.apply(outcome)
        result.new_outcomes.append(outcome)
        if on_outcome is not None:
            on_outcome(outcome)
        logger.debug("%s -- %s: %s in %.3fs", outcome.edge[0], outcome.edge[1], outcome.status, outcome.elapsed)

    pending = [e for e in order if e not in state]
    if state.connects(problem.targets):
        result.status = "success"
        return result
    if problem.workers == 1:
        for edge in pending:
            record(
                attempt_edge(
                    problem.oracle,
                    edge,
                    problem.budget,
                    isolation=problem.isolation,
                    retries=problem.retries,
                )
            )
            if state.connects(problem.targets):
                result.status = "success"
                break
    else:
        _run_pool(problem, pending, state, record, result)
    logger.info(
        "search %s after %d attempts (%d accepted)",
        result.status,
        len(state.attempts),
        len(state.accepted),
    )
    return result


def _run_pool(
    problem: SearchProblem,
    pending: List[Edge],
    state: ForestState,
    record: Callable[[AttemptOutcome], None],
    result: SearchResult,
) -> None:
    # early stop is best effort: in-flight attempts still finish and get logged
    queue = list(reversed(pending))
    assert problem.oracle is not None
    with ThreadPoolExecutor(max_workers=problem.workers, thread_name_prefix="periodplan-worker") as pool:
        in_flight: Dict[Future, Edge] = {}

        def submit() -> None:
            while queue and len(in_flight) < problem.workers and result.status != "success":
                edge = queue.pop()
                fut = pool.submit(
                    attempt_edge,
                    problem.oracle,
                    edge,
                    problem.budget,
                    isolation=problem.isolation,
                    retries=problem.retries,
                )
                in_flight[fut] = edge

        submit()
        while in_flight:
            done, _ = wait(list(in_flight), return_when=FIRST_COMPLETED)
            for fut in sorted(done, key=lambda f: in_flight[f]):
                in_flight.pop(fut)
                record(fut.result())
            if state.connects(problem.targets):
                result.status = "success"
            submit()


def informed_brute_force(
    problem: SearchProblem,
    *,
    checkpoint: Optional[Checkpoint] = None,
    state: Optional[ForestState] = None,
) -> SearchResult:
    """Brute force over Q = edges ranked by the scorer (or shuffled without one).

    The fresh outcomes of the run are the new labels for retraining.
    """
    return brute_force(problem, queue_order(problem), checkpoint=checkpoint, state=state)


def _carry_over(outcomes: Sequence[AttemptOutcome], problem: SearchProblem) -> List[AttemptOutcome]:
    """Outcomes that stand under ``problem``: inside E and not a timeout under a smaller budget"""
    known = set(problem.edges)
    return [
        o
        for o in outcomes
        if canonical_edge(tuple(o.edge)) in known
        and not (o.status == "timeout" and o.budget is not None and o.budget < problem.budget)
    ]


def resume(
    checkpoint: Checkpoint,
    problem: SearchProblem,
    order: Optional[Sequence[Edge]] = None,
) -> SearchResult:
    """Continue a search from its attempt log without re-attempting logged edges.

    Timeouts logged under a smaller budget than ``problem.budget`` are
    attempted again, so an interrupted later round of ``run_rounds`` resumes
    with that round's problem.

    Raises:
        CheckpointError: a corrupt or repeated line, with its number
        SearchError: a logged edge is not in E
    """
    outcomes = checkpoint.outcomes()
    known = set(problem.edges)
    for o in outcomes:
        if canonical_edge(tuple(o.edge)) not in known:
            raise SearchError(f"checkpoint edge {o.edge[0]} -- {o.edge[1]} is not a candidate edge")
    kept = _carry_over(outcomes, problem)
    state = ForestState.replay(problem.waypoints, kept)
    logger.info("resuming with %d logged attempts (%d to retry)", len(outcomes), len(outcomes) - len(kept))
    return brute_force(
        problem,
        list(order) if order is not None else queue_order(problem),
        checkpoint=checkpoint,
        state=state,
    )


def run_rounds(
    problem: SearchProblem,
    rounds: int,
    *,
    retrain: Optional[Callable[[List[AttemptOutcome]], Scorer]] = None,
    enlarge: Optional[Callable[[SearchProblem, SearchResult], SearchProblem]] = None,
    checkpoint: Optional[Checkpoint] = None,
) -> List[SearchResult]:
    """The multi-round informed search.

    After a failed round the collected outcomes go to ``retrain`` for a new
    scorer and ``enlarge`` may grow W, E or the budget. Accepted edges carry
    over; timed-out edges are retried only when the budget grew. Every
    round logs to ``checkpoint``; a retry supersedes the logged timeout.
    """
    results: List[SearchResult] = []
    labels: List[AttemptOutcome] = []
    state: Optional[ForestState] = None
    for n in range(rounds):
        result = informed_brute_force(problem, checkpoint=checkpoint, state=state)
        results.append(result)
        labels.extend(result.new_outcomes)
        if result.success or n == rounds - 1:
            break
        if retrain is not None:
            problem = replace(problem, scorer=retrain(list(labels)))
        if enlarge is not None:
            problem = enlarge(problem, result)
        state = ForestState.replay(problem.waypoints, _carry_over(result.attempts, problem))
        logger.info("round %d failed; next round has %d edges", n + 1, len(problem.edges))
    return results


def _stats(name: str, successes_per_source: List[int], attempts: int, top_n: int) -> StrategyStats:
    histogram = [0] * (top_n + 1)
    for s in successes_per_source:
        histogram[s] += 1
    total = sum(successes_per_source)
    return StrategyStats(
        name=name,
        attempts=attempts,
        successes=total,
        failure_rate=(attempts - total) / attempts if attempts else None,
        histogram=histogram,
    )


def compare_strategies(
    edges_by_source: Mapping[str, Sequence[Edge]],
    oracle: EdgeOracle,
    scorer: Scorer,
    *,
    top_n: int = 10,
    budget: float = 30.0,
    seed: int = 0,
    isolation: Isolation = "thread",
) -> StrategyComparison:
    """Aided (top-N by score) versus unaided (N at random) edge picks per source vertex"""
    rng = np.random.default_rng(seed)
    cache: Dict[Edge, AttemptOutcome] = {}

    def run(edge: Edge) -> bool:
        edge = canonical_edge(edge)
        if edge not in cache:
            cache[edge] = attempt_edge(oracle, edge, budget, isolation=isolation)
        return cache[edge].success

    aided: List[int] = []
    unaided: List[int] = []
    aided_attempts = unaided_attempts = 0
    for source in sorted(edges_by_source):
        candidates = sorted(canonical_edge(e) for e in edges_by_source[source])
        if not candidates:
            aided.append(0)
            unaided.append(0)
            continue
        n = min(top_n, len(candidates))
        scores = scorer.score(candidates)
        ranked = [e for e, _ in sorted(zip(candidates, scores), key=lambda p: (-p[1], p[0]))]
        picks = [candidates[int(i)] for i in rng.choice(len(candidates), size=n, replace=False)]
        aided.append(sum(run(e) for e in ranked[:n]))
        unaided.append(sum(run(e) for e in picks))
        aided_attempts += n
        unaided_attempts += n
    return StrategyComparison(
        top_n=top_n,
        aided=_stats("aided", aided, aided_attempts, top_n),
        unaided=_stats("unaided", unaided, unaided_attempts, top_n),
    )
