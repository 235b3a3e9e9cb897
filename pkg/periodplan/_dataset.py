"""Fewnomial vertex sets, variable-permutation orbits, edge policies and splits."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, islice, permutations
from pathlib import Path
from typing import (
    Callable,
    Dict,
    Iterable,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    TypeVar,
    Union,
)

import numpy as np

from ._exceptions import BalancingError, DatasetError, UnknownPolicyError
from ._jacobian import is_smooth
from ._monomial import NVARS, Monomial, monomials_of_degree
from ._polynomial import Polynomial
from ._stores import JsonlStore
from ._types import Edge
from .types.dataset import EdgePolicy, EdgeRecord, OrbitRecord, SplitSpec, VertexRecord

__all__ = [
    "QUARTIC_MONOMIALS",
    "VertexSet",
    "OrbitTable",
    "EdgeSet",
    "passes_prefilter",
    "enumerate_fewnomials",
    "permute_variables",
    "s4_orbits",
    "build_edges",
    "complete_edge_count",
    "iter_complete_edges",
    "companion_neighbors",
    "sample_orbit_representatives",
    "split",
    "balance_oversample",
    "VertexStore",
    "EdgeStore",
    "OrbitStore",
]

logger = logging.getLogger(__name__)

T = TypeVar("T")

QUARTIC_MONOMIALS: Tuple[Monomial, ...] = monomials_of_degree(4)

POLICIES: Tuple[str, ...] = ("complete", "monomial-difference", "custom")


@dataclass(frozen=True)
class VertexSet:
    """Smooth k-term fewnomial quartics, sorted by canonical string"""

    k: int
    members: Tuple[Polynomial, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Polynomial]:
        return iter(self.members)

    def ids(self) -> List[str]:
        return [p.canonical_key() for p in self.members]

    def records(self) -> List[VertexRecord]:
        return [VertexRecord(vertex=v, k=self.k) for v in self.ids()]

    @classmethod
    def from_records(cls, records: Sequence[VertexRecord]) -> VertexSet:
        if not records:
            return cls(k=0, members=())
        ks = {r.k for r in records}
        if len(ks) != 1:
            raise DatasetError(f"vertex store mixes term counts {sorted(ks)}")
        members = sorted((Polynomial.parse(r.vertex) for r in records), key=Polynomial.canonical_key)
        return cls(k=ks.pop(), members=tuple(members))


def passes_prefilter(support: Sequence[Monomial]) -> bool:
    """Necessary condition for smoothness of a coefficient-1 quartic.

    At the coordinate point e_i every partial derivative of f is the
    coefficient of x_i^4 or x_i^3 x_j, so some monomial must have x_i-degree
    at least 3 or e_i is a singular point.
    """
    return all(any(m[i] >= 3 for m in support) for i in range(NVARS))


def _smooth_subsets(k: int, start: int, stop: int) -> List[str]:
    out: List[str] = []
    for subset in islice(combinations(QUARTIC_MONOMIALS, k), start, stop):
        if not passes_prefilter(subset):
            continue
        f = Polynomial.from_monomials(subset)
        if is_smooth(f):
            out.append(f.canonical_key())
    return out


def enumerate_fewnomials(k: int, *, jobs: int = 1, chunk: int = 20000) -> VertexSet:
    """All smooth quartics that are sums of k distinct monomials with coefficient 1.

    Args:
        k: number of terms, 1 <= k <= 35
        jobs: worker processes for the smoothness checks
        chunk: candidate subsets per worker task

    Returns:
        VertexSet sorted by canonical string (independent of ``jobs``)
    """
    if not 1 <= k <= len(QUARTIC_MONOMIALS):
        raise DatasetError(f"term count must lie in 1..{len(QUARTIC_MONOMIALS)}, got {k}")
    total = math.comb(len(QUARTIC_MONOMIALS), k)
    bounds = [(s, min(s + chunk, total)) for s in range(0, total, chunk)]
    keys: List[str] = []
    if jobs <= 1 or len(bounds) <= 1:
        for start, stop in bounds:
            keys.extend(_smooth_subsets(k, start, stop))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_smooth_subsets, k, s, e) for s, e in bounds]
            for fut in futures:
                keys.extend(fut.result())
    keys.sort()
    logger.info("enumerated %d smooth %d-nomials out of %d candidates", len(keys), k, total)
    return VertexSet(k=k, members=tuple(Polynomial.parse(s) for s in keys))


def permute_variables(f: Polynomial, sigma: Sequence[int]) -> Polynomial:
    """Image of f under x_i -> x_sigma(i)"""
    out: Dict[Monomial, object] = {}
    for m, c in f.items():
        image = [0] * NVARS
        for i, e in enumerate(m):
            image[sigma[i]] = e
        out[tuple(image)] = c
    return Polynomial(out)


@dataclass(frozen=True)
class OrbitTable:
    """Partition of a vertex set into variable-permutation orbits"""

    orbit_of: Dict[str, int]
    representatives: Tuple[str, ...]
    members: Tuple[Tuple[str, ...], ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.representatives)

    def representative(self, vertex: str) -> str:
        return self.representatives[self.orbit_of[vertex]]

    def sizes(self) -> List[int]:
        return [len(m) for m in self.members]

    def records(self) -> List[OrbitRecord]:
        return [
            OrbitRecord(vertex=v, orbit=i, representative=self.representatives[i])
            for i, vs in enumerate(self.members)
            for v in vs
        ]


def s4_orbits(vertices: Union[VertexSet, Iterable[Polynomial]]) -> OrbitTable:
    """Group vertices into orbits of the 24 variable permutations.

    The representative of an orbit is its smallest canonical string; orbits
    are numbered in representative order.
    """
    polys = list(vertices)
    keys = {p.canonical_key() for p in polys}
    seen: Dict[str, Tuple[str, ...]] = {}
    for p in polys:
        key = p.canonical_key()
        if key in seen:
            continue
        images = {permute_variables(p, sigma).canonical_key() for sigma in permutations(range(NVARS))}
        orbit = tuple(sorted(images & keys))
        for member in orbit:
            seen[member] = orbit
    orbits = sorted(set(seen.values()), key=lambda o: o[0])
    orbit_of = {v: i for i, orbit in enumerate(orbits) for v in orbit}
    return OrbitTable(
        orbit_of=orbit_of,
        representatives=tuple(o[0] for o in orbits),
        members=tuple(orbits),
    )


def sample_orbit_representatives(table: OrbitTable, n: int, seed: int) -> List[str]:
    """n distinct orbit representatives drawn uniformly without replacement"""
    if n > len(table):
        raise DatasetError(f"cannot sample {n} orbits out of {len(table)}")
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(table), size=n, replace=False)
    return [table.representatives[int(i)] for i in picks]


@dataclass(frozen=True)
class EdgeSet:
    policy: str
    edges: Tuple[Edge, ...]

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges)

    def records(self) -> List[EdgeRecord]:
        return [EdgeRecord(f=f, g=g, policy=self.policy) for f, g in self.edges]  # type: ignore[arg-type]


def complete_edge_count(n: int) -> int:
    return math.comb(n, 2)


def iter_complete_edges(ids: Sequence[str]) -> Iterator[Edge]:
    """Unordered pairs in canonical order, without materialising the list"""
    yield from combinations(sorted(ids), 2)


def _support(p: Polynomial) -> frozenset:
    return frozenset(p.monomials())


def companion_neighbors(f: Polynomial, direction: int = 1) -> List[Polynomial]:
    """Smooth coefficient-1 quartics whose support differs from f's by one monomial.

    direction=+1 adds a monomial (the k+1 companions), -1 removes one.
    """
    support = _support(f)
    if direction not in (1, -1):
        raise DatasetError(f"direction must be +1 or -1, got {direction}")
    candidates: List[Polynomial] = []
    if direction == 1:
        for m in QUARTIC_MONOMIALS:
            if m not in support:
                candidates.append(Polynomial.from_monomials(support | {m}))
    else:
        for m in support:
            rest = support - {m}
            if rest:
                candidates.append(Polynomial.from_monomials(rest))
    out = [c for c in candidates if passes_prefilter(c.monomials()) and is_smooth(c)]
    return sorted(out, key=Polynomial.canonical_key)


def build_edges(
    vertices: Union[VertexSet, Sequence[Polynomial]],
    policy: EdgePolicy = "complete",
    *,
    companions: Optional[Sequence[Polynomial]] = None,
    pairs: Optional[Iterable[Edge]] = None,
) -> EdgeSet:
    """Candidate edges over the waypoint set W.

    Args:
        vertices: the waypoint set W
        policy: "complete" (all unordered pairs), "monomial-difference"
            (pairs (f, g) with g a companion whose support differs from f's
            by one monomial; companions default to the +1 neighbors) or
            "custom" (explicit ``pairs``)
        companions: companion set for the monomial-difference policy
        pairs: explicit edges for the custom policy

    Raises:
        UnknownPolicyError: policy is not one of the three above
    """
    polys = list(vertices)
    if policy not in POLICIES:
        raise UnknownPolicyError(f"unknown edge policy {policy!r}; expected one of {POLICIES}")
    if not polys:
        raise DatasetError("edge building needs a nonempty vertex set")
    ids = sorted(p.canonical_key() for p in polys)
    if policy == "complete":
        edges = tuple(iter_complete_edges(ids))
    elif policy == "monomial-difference":
        out: List[Edge] = []
        for f in sorted(polys, key=Polynomial.canonical_key):
            support = _support(f)
            if companions is None:
                cands = companion_neighbors(f, 1)
            else:
                cands = [g for g in companions if len(support ^ _support(g)) == 1]
            out.extend((f.canonical_key(), g.canonical_key()) for g in cands)
        edges = tuple(out)
    else:
        known = set(ids) | {p.canonical_key() for p in companions or ()}
        out = []
        for a, b in pairs or ():
            if a not in known or b not in known:
                raise DatasetError(f"custom edge ({a}, {b}) leaves the vertex set")
            if a == b:
                raise DatasetError(f"custom edge ({a}, {b}) is a self-loop")
            out.append((a, b))
        edges = tuple(out)
    logger.info("built %d %s edges over %d vertices", len(edges), policy, len(ids))
    return EdgeSet(policy=policy, edges=edges)


def split(edge_ids: Sequence[str], alpha: float, seed: int) -> SplitSpec:
    """Uniform train/test split without replacement, |train| = round(alpha * n)"""
    if not edge_ids:
        raise DatasetError("cannot split an empty labeled set")
    if not 0 < alpha < 1:
        raise DatasetError(f"alpha must lie in (0, 1), got {alpha}")
    ordered = sorted(edge_ids)
    n_train = int(math.floor(alpha * len(ordered) + 0.5))
    rng = np.random.default_rng(seed)
    perm = rng.permutation(len(ordered))
    train = [ordered[int(i)] for i in perm[:n_train]]
    test = [ordered[int(i)] for i in perm[n_train:]]
    return SplitSpec(alpha=alpha, seed=seed, train=train, test=test)


def balance_oversample(
    samples: Sequence[T],
    seed: int,
    *,
    label: Callable[[T], bool] = lambda s: bool(getattr(s, "success")),
) -> List[T]:
    """Duplicate minority-class samples uniformly at random until classes are equal.

    Returns the original samples followed by the drawn duplicates.

    Raises:
        BalancingError: only one class is present
    """
    pos = [s for s in samples if label(s)]
    neg = [s for s in samples if not label(s)]
    if not pos or not neg:
        raise BalancingError(
            f"cannot balance a single-class set ({len(pos)} positive, {len(neg)} negative)"
        )
    minority = pos if len(pos) < len(neg) else neg
    deficit = abs(len(pos) - len(neg))
    rng = np.random.default_rng(seed)
    extra = rng.integers(0, len(minority), size=deficit)
    return list(samples) + [minority[int(i)] for i in extra]


class VertexStore(JsonlStore[VertexRecord]):
    def __init__(self, path: Union[str, Path]) -> None:
        super().__init__(path, VertexRecord)


class EdgeStore(JsonlStore[EdgeRecord]):
    def __init__(self, path: Union[str, Path]) -> None:
        super().__init__(path, EdgeRecord)


class OrbitStore(JsonlStore[OrbitRecord]):
    def __init__(self, path: Union[str, Path]) -> None:
        super().__init__(path, OrbitRecord)
