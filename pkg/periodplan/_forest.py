from __future__ import annotations

from collections import deque
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from ._exceptions import CheckpointError, DisconnectedTargetsError
from ._types import Edge
from .types.labels import AttemptOutcome

__all__ = ["UnionFind", "ForestState", "extract_tree", "extract_path", "path_edges"]


class UnionFind:
    """Disjoint sets with path compression and union by rank"""

    def __init__(self, elements: Iterable[str] = ()) -> None:
        self.parent: Dict[str, str] = {}
        self.rank: Dict[str, int] = {}
        for e in elements:
            self.add(e)

    def add(self, element: str) -> None:
        if element not in self.parent:
            self.parent[element] = element
            self.rank[element] = 0

    def find(self, element: str) -> str:
        self.add(element)
        root = element
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[element] != root:
            self.parent[element], element = root, self.parent[element]
        return root

    def union(self, a: str, b: str) -> bool:
        """Merge the sets of a and b; False when they were already joined"""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True

    def connected(self, elements: Sequence[str]) -> bool:
        if not elements:
            return True
        root = self.find(elements[0])
        return all(self.find(e) == root for e in elements[1:])

    def components(self) -> List[Set[str]]:
        groups: Dict[str, Set[str]] = {}
        for e in self.parent:
            groups.setdefault(self.find(e), set()).add(e)
        return sorted(groups.values(), key=lambda s: min(s))


class ForestState:
    """Union-find over W, the accepted edges and one terminal outcome per attempted edge"""

    def __init__(self, waypoints: Iterable[str]) -> None:
        self.uf = UnionFind(waypoints)
        self.accepted: List[Edge] = []
        self.attempts: Dict[Edge, AttemptOutcome] = {}

    def __contains__(self, edge: Edge) -> bool:
        return tuple(edge) in self.attempts

    def apply(self, outcome: AttemptOutcome) -> None:
        edge = tuple(outcome.edge)
        if edge in self.attempts:
            raise CheckpointError(f"edge {edge[0]} -- {edge[1]} has two terminal outcomes")
        self.attempts[edge] = outcome
        if outcome.success:
            self.accepted.append(edge)
            self.uf.union(*edge)

    def connects(self, targets: Sequence[str]) -> bool:
        return self.uf.connected(list(targets))

    def outcomes(self) -> List[AttemptOutcome]:
        return list(self.attempts.values())

    @classmethod
    def replay(cls, waypoints: Iterable[str], outcomes: Iterable[AttemptOutcome]) -> ForestState:
        state = cls(waypoints)
        for outcome in outcomes:
            state.apply(outcome)
        return state


def _adjacency(edges: Iterable[Edge]) -> Dict[str, List[str]]:
    adj: Dict[str, List[str]] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    for v in adj:
        adj[v].sort()
    return adj


def extract_tree(edges: Sequence[Edge], targets: Sequence[str]) -> List[Edge]:
    """Breadth-first spanning tree of the targets' component, pruned to leaves in V.

    Raises:
        DisconnectedTargetsError: the targets do not lie in one component
    """
    targets = list(targets)
    if len(targets) <= 1:
        return []
    adj = _adjacency(edges)
    root = targets[0]
    parent: Dict[str, Optional[str]] = {root: None}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in adj.get(v, ()):
            if w not in parent:
                parent[w] = v
                queue.append(w)
    missing = [t for t in targets if t not in parent]
    if missing:
        raise DisconnectedTargetsError(f"targets not connected to {root}: {missing}")
    tree_adj: Dict[str, Set[str]] = {v: set() for v in parent}
    for v, p in parent.items():
        if p is not None:
            tree_adj[v].add(p)
            tree_adj[p].add(v)
    keep = set(targets)
    leaves = deque(v for v, nbrs in tree_adj.items() if len(nbrs) <= 1 and v not in keep)
    while leaves:
        v = leaves.popleft()
        if v not in tree_adj:
            continue
        for w in tree_adj.pop(v):
            tree_adj[w].discard(v)
            if len(tree_adj[w]) <= 1 and w not in keep:
                leaves.append(w)
    out = []
    for v, p in parent.items():
        if p is not None and v in tree_adj and p in tree_adj:
            out.append((p, v))
    return out


def extract_path(tree: Sequence[Edge], f: str, g: str) -> List[str]:
    """Vertex sequence f = s_0, ..., s_k = g along the tree"""
    if f == g:
        return [f]
    adj = _adjacency(tree)
    prev: Dict[str, Optional[str]] = {f: None}
    queue = deque([f])
    while queue:
        v = queue.popleft()
        if v == g:
            break
        for w in adj.get(v, ()):
            if w not in prev:
                prev[w] = v
                queue.append(w)
    if g not in prev:
        raise DisconnectedTargetsError(f"no path from {f} to {g} in the tree")
    path = [g]
    while path[-1] != f:
        step = prev[path[-1]]
        assert step is not None
        path.append(step)
    return path[::-1]


def path_edges(path: Sequence[str]) -> List[Tuple[str, str]]:
    return list(zip(path, path[1:]))
