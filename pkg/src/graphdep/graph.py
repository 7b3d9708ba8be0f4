"""Simple undirected graphs on the vertex set ``0..n-1``.

Graphs are immutable once built.  Every constructor funnels through
:func:`make_graph`, which rejects loops and out-of-range endpoints and
deduplicates repeated or reversed pairs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Raised for malformed graph input."""


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]
    adj: tuple[frozenset[int], ...] = field(repr=False, compare=False)
    _edge_set: frozenset[tuple[int, int]] = field(repr=False, compare=False)

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self._edge_set

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, data: dict) -> "Graph":
        try:
            n = int(data["n"])
            edges = [tuple(e) for e in data["edges"]]
        except (KeyError, TypeError) as exc:
            raise GraphError(f"bad graph document: {exc}") from exc
        return make_graph(n, edges)


def make_graph(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Build a validated :class:`Graph`.

    Raises
    ------
    GraphError
        On a negative vertex count, a loop ``{u, u}``, a pair that is not of
        length two, or an endpoint outside ``[0, n)``.
    """
    if n < 0:
        raise GraphError(f"vertex count must be non-negative, got {n}")
    pairs = set()
    for e in edges:
        if len(e) != 2:
            raise GraphError(f"edge {e!r} is not a pair")
        u, v = int(e[0]), int(e[1])
        if u == v:
            raise GraphError(f"loop at vertex {u}")
        for x in (u, v):
            if not 0 <= x < n:
                raise GraphError(f"endpoint {x} out of range [0, {n})")
        pairs.add((u, v) if u < v else (v, u))
    ordered = tuple(sorted(pairs))
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for u, v in ordered:
        nbrs[u].add(v)
        nbrs[v].add(u)
    return Graph(n, ordered, tuple(frozenset(s) for s in nbrs), frozenset(ordered))


def _check_vertices(g: Graph, s: Iterable[int]) -> list[int]:
    out = sorted(set(s))
    for v in out:
        if not 0 <= v < g.n:
            raise GraphError(f"vertex {v} out of range [0, {g.n})")
    return out


def max_degree(g: Graph) -> int:
    return max((len(a) for a in g.adj), default=0)


def is_independent(g: Graph, s: Iterable[int]) -> bool:
    members = _check_vertices(g, s)
    chosen = set(members)
    return not any(g.adj[v] & chosen for v in members)


def are_sets_adjacent(g: Graph, s: Iterable[int], t: Iterable[int]) -> bool:
    """True iff some edge of ``g`` joins a vertex of ``s`` to one of ``t``.

    The two sets must be disjoint.
    """
    s_set = set(_check_vertices(g, s))
    t_set = set(_check_vertices(g, t))
    if s_set & t_set:
        raise GraphError("vertex sets are not disjoint")
    return any(g.adj[v] & t_set for v in s_set)


def connected_components(g: Graph) -> list[list[int]]:
    """Components as sorted vertex lists, ordered by smallest member."""
    seen = [False] * g.n
    comps = []
    for root in range(g.n):
        if seen[root]:
            continue
        seen[root] = True
        comp = [root]
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in g.adj[u]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def is_forest(g: Graph) -> bool:
    return g.num_edges == g.n - len(connected_components(g))


def bfs_distances(g: Graph, root: int) -> list[int]:
    """Hop distances from ``root``; ``-1`` marks unreachable vertices."""
    dist = [-1] * g.n
    dist[root] = 0
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in g.adj[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def induced_subgraph(g: Graph, vertices: Sequence[int]) -> tuple[Graph, list[int]]:
    """Subgraph on ``vertices`` relabelled ``0..k-1`` in the given order."""
    index = {v: i for i, v in enumerate(vertices)}
    edges = [(index[u], index[v]) for u, v in g.edges if u in index and v in index]
    return make_graph(len(vertices), edges), list(vertices)


# --- generators -----------------------------------------------------------


def _positive(**sizes: int) -> None:
    for name, value in sizes.items():
        if int(value) != value or value < 1:
            raise GraphError(f"{name} must be a positive integer, got {value}")


def empty_graph(n: int) -> Graph:
    _positive(n=n)
    return make_graph(n, [])


def path_graph(n: int) -> Graph:
    _positive(n=n)
    return make_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    _positive(n=n)
    if n < 3:
        raise GraphError(f"a simple cycle needs at least 3 vertices, got {n}")
    return make_graph(n, [(i, (i + 1) % n) for i in range(n)])


def grid_graph(m: int, k: int | None = None) -> Graph:
    """``m`` x ``k`` grid (square when ``k`` is omitted), numbered row-major."""
    k = m if k is None else k
    _positive(m=m, k=k)
    edges = []
    for r in range(m):
        for col in range(k):
            v = r * k + col
            if col + 1 < k:
                edges.append((v, v + 1))
            if r + 1 < m:
                edges.append((v, v + k))
    return make_graph(m * k, edges)


def complete_graph(n: int) -> Graph:
    _positive(n=n)
    return make_graph(n, combinations(range(n), 2))


def complete_bipartite(a: int, b: int) -> Graph:
    """``K_{a,b}``: vertices ``0..a-1`` on one side, ``a..a+b-1`` on the other."""
    _positive(a=a, b=b)
    return make_graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def star_graph(leaves: int) -> Graph:
    """Centre 0 joined to ``leaves`` further vertices."""
    _positive(leaves=leaves)
    return make_graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def m_dependent_chain(n: int, m: int) -> Graph:
    """Edge ``{i, j}`` iff ``0 < |i - j| <= m``.  ``m = 0`` gives the empty graph."""
    _positive(n=n)
    if m < 0:
        raise GraphError(f"dependence range must be non-negative, got {m}")
    return make_graph(n, [(i, j) for i in range(n) for j in range(i + 1, min(n, i + m + 1))])


def line_graph(g: Graph) -> Graph:
    """Vertices are the edges of ``g`` in lexicographic order; adjacent iff
    the underlying edges share an endpoint."""
    if g.num_edges == 0:
        raise GraphError("line graph of an edgeless graph is undefined")
    incident: list[list[int]] = [[] for _ in range(g.n)]
    for idx, (u, v) in enumerate(g.edges):
        incident[u].append(idx)
        incident[v].append(idx)
    edges = [pair for group in incident for pair in combinations(group, 2)]
    return make_graph(g.num_edges, edges)


def rook_graph(a: int, b: int) -> Graph:
    """Line graph of ``K_{a,b}``; pair ``(i, j)`` sits at index ``i * b + j``."""
    return line_graph(complete_bipartite(a, b))


def multiclass_graph(m: int, k_classes: int) -> Graph:
    """Dependency graph of the ``m * (K-1)`` class pairs of ``m`` examples.

    Pair ``(x_i^1, x_i^{k+1})`` sits at index ``i * (K-1) + (k-1)``; pairs
    built from the same example form a clique.
    """
    _positive(m=m)
    if k_classes < 2:
        raise GraphError(f"need at least 2 classes, got {k_classes}")
    width = k_classes - 1
    edges = [
        (i * width + a, i * width + b)
        for i in range(m)
        for a, b in combinations(range(width), 2)
    ]
    return make_graph(m * width, edges)


FAMILIES = {
    "empty": empty_graph,
    "path": path_graph,
    "cycle": cycle_graph,
    "grid": grid_graph,
    "complete": complete_graph,
    "complete_bipartite": complete_bipartite,
    "m_dependent_chain": m_dependent_chain,
    "star": star_graph,
    "rook": rook_graph,
    "multiclass": multiclass_graph,
}


def generate(family: str, *args: int, **kwargs: int) -> Graph:
    """Dispatch to a named generator, e.g. ``generate("cycle", 6)``."""
    try:
        builder = FAMILIES[family]
    except KeyError:
        raise GraphError(
            f"unknown family {family!r}; choose from {', '.join(sorted(FAMILIES))}"
        ) from None
    return builder(*args, **kwargs)
