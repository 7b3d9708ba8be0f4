"""Tree-partitions, forest complexity and the weighted partition cost.

A tree-partition splits the vertices into bags so that contracting every bag
leaves a forest (the quotient).  Its cost is

    sum over quotient trees T of  min_{u in T} s_u**2
  + sum over quotient edges {u, v} of  (s_u + s_v)**2

where ``s_u`` is the bag size (uniform cost, giving the forest complexity
when minimised) or the sum of the bag's Lipschitz coefficients (weighted
cost).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Sequence

from .covers import SizeLimitError
from .graph import (
    Graph,
    bfs_distances,
    connected_components,
    induced_subgraph,
    is_forest,
    make_graph,
)

DEFAULT_LAMBDA_LIMIT = 10


class TreePartitionError(ValueError):
    pass


def lambda_exact_limit() -> int:
    return int(os.environ.get("GRAPHDEP_LAMBDA_LIMIT", DEFAULT_LAMBDA_LIMIT))


@dataclass(frozen=True)
class TreePartition:
    bags: tuple[tuple[int, ...], ...]
    quotient: Graph
    host_n: int
    construction: str = ""


@dataclass(frozen=True)
class PartitionCost:
    lambda_value: int
    weighted_value: float | None
    width: int

    def value(self, weighted: bool = False) -> float:
        return self.weighted_value if weighted else self.lambda_value


def _quotient_edges(g: Graph, owner: Sequence[int]) -> set[tuple[int, int]]:
    out = set()
    for u, v in g.edges:
        a, b = owner[u], owner[v]
        if a != b:
            out.add((a, b) if a < b else (b, a))
    return out


def validate_tree_partition(g: Graph, bags: Sequence[Sequence[int]], construction: str = "") -> TreePartition:
    """Check that ``bags`` partition ``V(g)`` and contract to a forest.

    Raises
    ------
    TreePartitionError
        For a bag that is empty, a vertex in two bags or none, or a quotient
        containing a cycle.
    """
    owner = [-1] * g.n
    norm = []
    for idx, bag in enumerate(bags):
        members = tuple(sorted(int(v) for v in bag))
        if not members:
            raise TreePartitionError(f"bag {idx} is empty")
        for v in members:
            if not 0 <= v < g.n:
                raise TreePartitionError(f"bag {idx} holds vertex {v} outside [0, {g.n})")
            if owner[v] != -1:
                raise TreePartitionError(f"vertex {v} appears in bags {owner[v]} and {idx}")
            owner[v] = idx
        norm.append(members)
    missing = [v for v in range(g.n) if owner[v] == -1]
    if missing:
        raise TreePartitionError(f"vertex {missing[0]} is in no bag")
    quotient = make_graph(len(norm), _quotient_edges(g, owner))
    if not is_forest(quotient):
        raise TreePartitionError("quotient graph contains a cycle")
    return TreePartition(tuple(norm), quotient, g.n, construction)


def _cost(sizes: Sequence[float], quotient: Graph) -> float:
    total = 0
    for tree in connected_components(quotient):
        total += min(sizes[u] for u in tree) ** 2
    for u, v in quotient.edges:
        total += (sizes[u] + sizes[v]) ** 2
    return total


def partition_cost(tp: TreePartition, c: Sequence[float] | None = None) -> PartitionCost:
    sizes = [len(b) for b in tp.bags]
    weighted = None
    if c is not None:
        if len(c) != tp.host_n:
            raise ValueError(f"need {tp.host_n} Lipschitz coefficients, got {len(c)}")
        weighted = float(_cost([math.fsum(c[i] for i in b) for b in tp.bags], tp.quotient))
    return PartitionCost(int(_cost(sizes, tp.quotient)), weighted, max(sizes, default=0))


def tree_partition_width(tp: TreePartition) -> int:
    return max((len(b) for b in tp.bags), default=0)


def width_cost_bound(tp: TreePartition) -> int:
    """``(|V(F)| + 3|E(F)|) * width**2``, an upper bound on the cost of ``tp``."""
    return (tp.quotient.n + 3 * tp.quotient.num_edges) * tree_partition_width(tp) ** 2


def partition_to_dict(tp: TreePartition, cost: PartitionCost, exact: bool) -> dict:
    return {
        "bags": [list(b) for b in tp.bags],
        "quotient_edges": [list(e) for e in tp.quotient.edges],
        "lambda": cost.lambda_value,
        "weighted": cost.weighted_value,
        "width": cost.width,
        "exact": exact,
        "construction": tp.construction,
    }


# --- exact search ---------------------------------------------------------


def forest_complexity_exact(
    g: Graph, c: Sequence[float] | None = None, limit: int | None = None
) -> tuple[PartitionCost, TreePartition]:
    """Minimum-cost tree-partition by exhaustive search.

    Set partitions are generated as restricted-growth strings and a branch is
    cut as soon as the partial quotient contains a cycle (later vertices can
    only add quotient edges).  With ``c`` the weighted cost is minimised.
    Ties go to fewer bags, then to the lexicographically smaller bag list.
    """
    limit = lambda_exact_limit() if limit is None else limit
    if g.n > limit:
        raise SizeLimitError(f"exact forest complexity is limited to n <= {limit} vertices (graph has {g.n})")
    if c is not None and len(c) != g.n:
        raise ValueError(f"need {g.n} Lipschitz coefficients, got {len(c)}")
    if g.n == 0:
        tp = TreePartition((), make_graph(0, []), 0, "exact")
        return partition_cost(tp, c), tp

    weights = list(c) if c is not None else [1] * g.n
    below = [sorted(u for u in g.adj[v] if u < v) for v in range(g.n)]
    owner = [0] * g.n
    best: list = [None]  # (cost, nbags, bags, edges)

    def consider(nblocks: int, qedges: set, mass: list) -> None:
        quotient = make_graph(nblocks, qedges)
        bags = [[] for _ in range(nblocks)]
        for v, b in enumerate(owner):
            bags[b].append(v)
        # same arithmetic as partition_cost so the two agree bit for bit
        if c is not None:
            mass = [math.fsum(weights[v] for v in bag) for bag in bags]
        cost = _cost(mass, quotient)
        key = (cost, nblocks, bags)
        if best[0] is None or key < best[0]:
            best[0] = key

    def place(v: int, nblocks: int, qedges: set, root: list, mass: list) -> None:
        if v == g.n:
            consider(nblocks, qedges, mass)
            return
        for b in range(nblocks + 1):
            new_edges = {(min(b, owner[u]), max(b, owner[u])) for u in below[v] if owner[u] != b}
            new_edges -= qedges
            lab = root if b < nblocks else root + [nblocks]
            ok = True
            if new_edges:
                lab = list(lab)
                for x, y in new_edges:
                    rx, ry = lab[x], lab[y]
                    if rx == ry:
                        ok = False
                        break
                    lab = [rx if r == ry else r for r in lab]
            if not ok:
                continue
            owner[v] = b
            m2 = list(mass) if b < nblocks else mass + [0]
            m2[b] += weights[v]
            place(v + 1, max(nblocks, b + 1), qedges | new_edges, lab, m2)

    place(0, 0, set(), [], [])
    _, _, bags = best[0]
    tp = validate_tree_partition(g, bags, "exact")
    return partition_cost(tp, c), tp


# --- constructive heuristics ----------------------------------------------


def _cycle_order(g: Graph) -> list[int] | None:
    if g.n < 3 or g.num_edges != g.n or any(g.degree(v) != 2 for v in range(g.n)):
        return None
    order = [0]
    prev, cur = -1, 0
    while True:
        nxt = min(w for w in g.adj[cur] if w != prev) if prev < 0 else next(w for w in g.adj[cur] if w != prev)
        if nxt == 0:
            break
        order.append(nxt)
        prev, cur = cur, nxt
    return order if len(order) == g.n else None


def _cycle_bags(order: list[int]) -> list[list[int]]:
    """End vertex, then mirror pairs around the cycle; the far end is a single
    vertex for even length and a pair for odd length."""
    n = len(order)
    bags = [[order[0]]]
    for i in range(1, n // 2 + 1):
        j = n - i
        bags.append([order[i]] if i == j else [order[i], order[j]])
        if j == i + 1:
            break
    return bags


def _grid_layers(g: Graph) -> list[list[int]] | None:
    m = math.isqrt(g.n)
    if m < 2 or m * m != g.n or g.num_edges != 2 * m * (m - 1):
        return None
    corners = [v for v in range(g.n) if g.degree(v) == 2]
    if len(corners) != 4 and m > 2:
        return None
    a = corners[0]
    da = bfs_distances(g, a)
    side = [v for v in corners if da[v] == m - 1]
    if not side:
        return None
    db = bfs_distances(g, side[0])
    coord = {}
    for v in range(g.n):
        s, d = da[v] + db[v] - (m - 1), da[v] - db[v] + (m - 1)
        if s < 0 or d < 0 or s % 2 or d % 2:
            return None
        x, y = s // 2, d // 2
        if not (0 <= x < m and 0 <= y < m) or (x, y) in coord:
            return None
        coord[(x, y)] = v
    expected = set()
    for (x, y), v in coord.items():
        for nx_, ny_ in ((x + 1, y), (x, y + 1)):
            if (nx_, ny_) in coord:
                w = coord[(nx_, ny_)]
                expected.add((min(v, w), max(v, w)))
    if expected != set(g.edges):
        return None
    layers: list[list[int]] = [[] for _ in range(2 * m - 1)]
    for v in range(g.n):
        layers[da[v]].append(v)
    return layers


def _chain_order(g: Graph) -> tuple[list[int], int] | None:
    """Recover ``(order, m)`` when ``g`` is an m-dependent chain with
    ``m >= 2`` and ``n >= m + 2``."""
    n, e = g.n, g.num_edges
    m = next((k for k in range(2, n - 1) if k * n - k * (k + 1) // 2 == e), None)
    if m is None:
        return None
    ends = [v for v in range(n) if g.degree(v) == m]
    for start in ends:
        order, seen = [start], {start}
        while len(order) < n:
            k = len(order)
            recent, old = order[max(0, k - m) :], order[: max(0, k - m)]
            cand = [
                w
                for w in g.adj[order[-1]] | g.adj[recent[0]]
                if w not in seen
                and all(g.has_edge(w, u) for u in recent)
                and not any(g.has_edge(w, u) for u in old)
            ]
            if not cand:
                break
            w = min(cand, key=lambda x: (len(g.adj[x] - seen), x))
            order.append(w)
            seen.add(w)
        if len(order) == n:
            pos = {v: i for i, v in enumerate(order)}
            if all(0 < abs(pos[u] - pos[v]) <= m for u, v in g.edges):
                return order, m
    return None


def _layered_bags(g: Graph, root: int, split: bool) -> list[list[int]]:
    dist = bfs_distances(g, root)
    depth = max(dist)
    layers = [[v for v in range(g.n) if dist[v] == d] for d in range(depth + 1)]
    if not split:
        return layers
    bags = []
    for d, layer in enumerate(layers):
        deeper = [v for v in range(g.n) if dist[v] >= d]
        sub, labels = induced_subgraph(g, deeper)
        comps = connected_components(sub)
        for comp in comps:
            members = {labels[i] for i in comp}
            piece = [v for v in layer if v in members]
            if piece:
                bags.append(piece)
    return bags


def _fallback_bags(g: Graph) -> tuple[list[list[int]], str]:
    """Best of: split BFS layering, plain BFS layering, one bag (connected ``g``)."""
    root = min(range(g.n), key=lambda v: (g.degree(v), v))
    options = [
        (_layered_bags(g, root, split=True), "bfs-split"),
        (_layered_bags(g, root, split=False), "bfs-layers"),
        ([list(range(g.n))], "single-bag"),
    ]
    scored = []
    for bags, name in options:
        tp = validate_tree_partition(g, bags, name)
        scored.append((partition_cost(tp).lambda_value, len(bags), name, bags))
    _, _, name, bags = min(scored, key=lambda t: t[:3])
    return bags, name


def _connected_heuristic(g: Graph) -> tuple[list[list[int]], str]:
    order = _cycle_order(g)
    if order is not None:
        return _cycle_bags(order), "cycle"
    layers = _grid_layers(g)
    if layers is not None:
        return layers, "grid"
    chain = _chain_order(g)
    if chain is not None:
        order, m = chain
        return [order[i : i + m] for i in range(0, g.n, m)], "m_dependent_chain"
    return _fallback_bags(g)


def forest_complexity_heuristic(g: Graph) -> tuple[PartitionCost, TreePartition]:
    """Upper bound on the forest complexity from a structural construction.

    Forests use singleton bags.  Cycles, square grids and m-dependent chains
    (recognised up to relabelling) use their mirror-pair, anti-diagonal and
    consecutive-block layouts.  Anything else falls back to a BFS layering.
    Disconnected non-forests are handled component by component.
    """
    if g.n == 0 or is_forest(g):
        tp = validate_tree_partition(g, [[v] for v in range(g.n)], "forest")
        return partition_cost(tp), tp
    comps = connected_components(g)
    if len(comps) == 1:
        bags, name = _connected_heuristic(g)
    else:
        bags, names = [], set()
        for comp in comps:
            sub, labels = induced_subgraph(g, comp)
            if sub.num_edges == sub.n - 1:
                sub_bags, sub_name = [[i] for i in range(sub.n)], "forest"
            else:
                sub_bags, sub_name = _connected_heuristic(sub)
            bags.extend([labels[i] for i in b] for b in sub_bags)
            names.add(sub_name)
        name = "components:" + "+".join(sorted(names))
    tp = validate_tree_partition(g, bags, name)
    return partition_cost(tp), tp


def construction_value(family: str, **params: int) -> int | None:
    """Closed-form cost of the layouts above for recognised families."""
    if family == "path":
        return 4 * params["n"] - 3
    if family == "cycle":
        n = params["n"]
        return 8 * n - 13 if n % 2 == 0 else 8 * n - 14
    if family == "grid":
        m = params["m"]
        return (2 * m * (2 * m + 1) * (2 * m - 1) - 3) // 3
    if family == "m_dependent_chain":
        n, m = params["n"], params["m"]
        sizes = [m] * (n // m) + ([n % m] if n % m else [])
        return min(sizes) ** 2 + sum((a + b) ** 2 for a, b in zip(sizes, sizes[1:]))
    if family == "empty":
        return params["n"]
    return None
