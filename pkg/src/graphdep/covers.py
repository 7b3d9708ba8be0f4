"""Fractional independent vertex covers and the fractional chromatic number."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph, GraphError, is_independent, max_degree
from .lp import cover_lp_min

COVER_TOL = 1e-9
DEFAULT_CHIF_LIMIT = 24


class SizeLimitError(ValueError):
    """An exact computation was refused because the graph is too large."""


class CoverError(ValueError):
    pass


def chif_exact_limit() -> int:
    return int(os.environ.get("GRAPHDEP_CHIF_LIMIT", DEFAULT_CHIF_LIMIT))


def _check_limit(g: Graph, limit: int | None, what: str) -> int:
    limit = chif_exact_limit() if limit is None else limit
    if g.n > limit:
        raise SizeLimitError(f"{what} is limited to n <= {limit} vertices (graph has {g.n})")
    return limit


@dataclass(frozen=True)
class FractionalCover:
    parts: tuple[tuple[tuple[int, ...], float], ...]
    host_n: int
    meta: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_parts(cls, parts: Iterable[tuple[Iterable[int], float]], host_n: int, **meta):
        return cls(tuple((tuple(sorted(s)), float(w)) for s, w in parts), host_n, dict(meta))

    @property
    def total_weight(self) -> float:
        return math.fsum(w for _, w in self.parts)

    def coverage(self) -> np.ndarray:
        cov = np.zeros(self.host_n)
        for s, w in self.parts:
            cov[list(s)] += w
        return cov

    def to_dict(self, exact: bool = False) -> dict:
        doc = {
            "parts": [{"set": list(s), "weight": w} for s, w in self.parts],
            "total_weight": self.total_weight,
            "exact": exact,
        }
        if self.meta:
            doc["meta"] = self.meta
        return doc

    @classmethod
    def from_dict(cls, data: dict, host_n: int) -> "FractionalCover":
        return cls.from_parts(((p["set"], p["weight"]) for p in data["parts"]), host_n)


@dataclass(frozen=True)
class CoverCheck:
    valid: bool
    reason: str = ""
    vertex: int | None = None
    part: int | None = None

    def __bool__(self) -> bool:
        return self.valid


@dataclass(frozen=True)
class ChiF:
    value: float
    certificate: FractionalCover
    exact: bool

    def to_dict(self) -> dict:
        doc = self.certificate.to_dict(exact=self.exact)
        doc["value"] = self.value
        return doc


def validate_cover(g: Graph, cover: FractionalCover, tol: float = COVER_TOL) -> CoverCheck:
    """Check independence of every part and exact unit coverage of every vertex.

    Returns a falsy :class:`CoverCheck` naming the first offending part or
    vertex instead of raising.
    """
    if cover.host_n != g.n:
        return CoverCheck(False, f"cover is over {cover.host_n} vertices, graph has {g.n}")
    cov = np.zeros(g.n)
    for k, (s, w) in enumerate(cover.parts):
        if w < 0 or not math.isfinite(w):
            return CoverCheck(False, f"part {k} has invalid weight {w}", part=k)
        if any(not 0 <= v < g.n for v in s):
            return CoverCheck(False, f"part {k} has a vertex out of range", part=k)
        if len(set(s)) != len(s):
            return CoverCheck(False, f"part {k} repeats a vertex", part=k)
        if not is_independent(g, s):
            return CoverCheck(False, f"part {k} is not an independent set", part=k)
        cov[list(s)] += w
    for v in range(g.n):
        if abs(cov[v] - 1.0) > tol:
            return CoverCheck(False, f"vertex {v} is covered with weight {cov[v]:.12g}, not 1", vertex=v)
    return CoverCheck(True)


# --- independent sets -----------------------------------------------------


def _non_neighbour_masks(g: Graph) -> list[int]:
    full = (1 << g.n) - 1
    masks = []
    for v in range(g.n):
        nb = 0
        for w in g.adj[v]:
            nb |= 1 << w
        masks.append(full & ~nb & ~(1 << v))
    return masks


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def maximal_independent_sets(g: Graph) -> list[tuple[int, ...]]:
    """Bron-Kerbosch with pivoting on the complement graph, sorted output."""
    if g.n == 0:
        return [()]
    comp = _non_neighbour_masks(g)
    found: list[tuple[int, ...]] = []

    def expand(r: int, p: int, x: int) -> None:
        if not p and not x:
            found.append(tuple(_bits(r)))
            return
        pivot = max(_bits(p | x), key=lambda u: (comp[u] & p).bit_count())
        for v in _bits(p & ~comp[pivot]):
            bit = 1 << v
            expand(r | bit, p & comp[v], x & comp[v])
            p &= ~bit
            x |= bit

    expand(0, (1 << g.n) - 1, 0)
    found.sort()
    return found


def enumerate_independent_sets(
    g: Graph, maximal_only: bool = False, limit: int | None = None
) -> list[tuple[int, ...]]:
    """All (or all maximal) independent sets in lexicographic order.

    The empty set is included when ``maximal_only`` is false.
    """
    _check_limit(g, limit, "independent-set enumeration")
    if maximal_only:
        return maximal_independent_sets(g)
    comp = _non_neighbour_masks(g)
    found: list[tuple[int, ...]] = []

    def grow(current: list[int], allowed: int) -> None:
        found.append(tuple(current))
        for v in _bits(allowed):
            current.append(v)
            grow(current, allowed & comp[v] & ~((1 << (v + 1)) - 1))
            current.pop()

    grow([], (1 << g.n) - 1)
    found.sort()
    return found


# --- chi_f ----------------------------------------------------------------


def equalize_cover(parts: Sequence[tuple[Sequence[int], float]], host_n: int, tol: float = COVER_TOL):
    """Turn a ``>= 1`` cover into an exact one without changing total weight.

    For each over-covered vertex (in index order) the excess is removed by
    splitting parts that contain it, in part order: weight ``x`` of part
    ``I`` moves to ``I minus {v}``.  Subsets of independent sets stay
    independent, so the result is still a valid independent cover.
    """
    work: dict[tuple[int, ...], float] = {}
    for s, w in parts:
        if w > tol:
            key = tuple(sorted(s))
            work[key] = work.get(key, 0.0) + w
    for v in range(host_n):
        excess = sum(w for s, w in work.items() if v in s) - 1.0
        if excess <= tol:
            continue
        for s in list(work):
            if excess <= 0:
                break
            if v not in s:
                continue
            moved = min(work[s], excess)
            excess -= moved
            work[s] -= moved
            rest = tuple(u for u in s if u != v)
            if rest:
                work[rest] = work.get(rest, 0.0) + moved
            if work[s] <= 0.0:
                del work[s]
    return sorted(work.items())


def chi_f_exact(g: Graph, limit: int | None = None) -> ChiF:
    """Fractional chromatic number via the covering LP over maximal independent sets.

    Raises
    ------
    SizeLimitError
        If ``g.n`` exceeds the exact limit (``GRAPHDEP_CHIF_LIMIT``, default 24).
    """
    _check_limit(g, limit, "exact chi_f")
    if g.n == 0:
        return ChiF(0.0, FractionalCover((), 0), True)
    sets = maximal_independent_sets(g)
    incidence = np.zeros((g.n, len(sets)))
    for j, s in enumerate(sets):
        incidence[list(s), j] = 1.0
    res = cover_lp_min(np.ones(len(sets)), incidence, np.ones(g.n))
    parts = equalize_cover([(s, w) for s, w in zip(sets, res.x)], g.n)
    cover = FractionalCover.from_parts(parts, g.n, method="lp")
    # Report the LP optimum; the certificate carries the identical total.
    return ChiF(cover.total_weight, cover, True)


def greedy_coloring(g: Graph) -> list[int]:
    """Largest-first greedy colouring; degree ties go to the lower index."""
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    colour = [-1] * g.n
    for v in order:
        used = {colour[w] for w in g.adj[v]}
        c = 0
        while c in used:
            c += 1
        colour[v] = c
    return colour


def chi_f_upper(g: Graph) -> ChiF:
    if g.n == 0:
        return ChiF(0.0, FractionalCover((), 0), False)
    colour = greedy_coloring(g)
    k = max(colour) + 1
    assert k <= max_degree(g) + 1
    classes = [[v for v in range(g.n) if colour[v] == c] for c in range(k)]
    cover = FractionalCover.from_parts(((cl, 1.0) for cl in classes), g.n, method="greedy")
    return ChiF(float(k), cover, False)


# --- closed-form covers ---------------------------------------------------


def ranking_cover(m_plus: int, m_minus: int) -> FractionalCover:
    """Cyclic-shift cover of the ``m_plus x m_minus`` Rook's graph.

    Part ``k`` (1-based) pairs positive ``i`` with negative
    ``sigma_k(i) = (k + i - 1) mod M``, reading a zero remainder as ``M``,
    where ``M = max(m_plus, m_minus)`` indexes the larger class.  Vertex
    ``(i, j)`` is ``i * m_minus + j`` (0-based) as in :func:`graph.rook_graph`.
    """
    if m_plus < 1 or m_minus < 1:
        raise GraphError("both classes need at least one instance")
    swapped = m_plus > m_minus
    small, big = (m_minus, m_plus) if swapped else (m_plus, m_minus)
    parts = []
    for k in range(1, big + 1):
        members = []
        for i in range(1, small + 1):
            r = (k + i - 1) % big
            j = r if r != 0 else big
            pos, neg = (j, i) if swapped else (i, j)
            members.append((pos - 1) * m_minus + (neg - 1))
        parts.append((members, 1.0))
    return FractionalCover.from_parts(parts, m_plus * m_minus, swapped=swapped)


def multiclass_cover(m: int, k_classes: int) -> FractionalCover:
    """``K - 1`` unit parts; part ``k`` takes pair ``(x_i^1, x_i^{k+1})`` of every example."""
    if k_classes < 2:
        raise GraphError(f"need at least 2 classes, got {k_classes}")
    if m < 1:
        raise GraphError("need at least one example")
    width = k_classes - 1
    parts = [([i * width + k for i in range(m)], 1.0) for k in range(width)]
    return FractionalCover.from_parts(parts, m * width)


def chain_cover(n: int, m: int) -> FractionalCover:
    """Residue classes mod ``m + 1``: an optimal cover of the m-dependent chain.

    The first ``m + 1`` vertices form a clique, so ``m + 1`` is also a lower
    bound on chi_f.
    """
    k = min(m + 1, n)
    return FractionalCover.from_parts(((range(r, n, m + 1), 1.0) for r in range(k)), n)


def rook_chi_f(m_plus: int, m_minus: int) -> float:
    return float(max(m_plus, m_minus))


def decompose_sum(values: Sequence[float], cover: FractionalCover, tol: float = COVER_TOL):
    """Split ``sum(values)`` into per-part sums of independent coordinates.

    Returns ``(inner_sums, total)`` where ``total = sum_k w_k * inner_sums[k]``.

    Raises
    ------
    CoverError
        If the cover does not cover every vertex with weight exactly 1, or the
        recombined total disagrees with the direct sum.
    """
    x = np.asarray(values, dtype=float)
    if x.shape != (cover.host_n,):
        raise CoverError(f"expected {cover.host_n} values, got shape {x.shape}")
    cov = cover.coverage()
    if np.any(np.abs(cov - 1.0) > tol) or any(w < 0 for _, w in cover.parts):
        raise CoverError("cover is not an exact fractional cover")
    inner = [math.fsum(x[list(s)]) for s, _ in cover.parts]
    total = math.fsum(w * v for (_, w), v in zip(cover.parts, inner))
    direct = math.fsum(x)
    scale = max(1.0, math.fsum(np.abs(x)))
    if abs(total - direct) > 1e-9 * scale:
        raise CoverError(f"recombined total {total} differs from direct sum {direct}")
    return inner, total


__all__ = [
    "ChiF",
    "CoverCheck",
    "CoverError",
    "FractionalCover",
    "SizeLimitError",
    "chain_cover",
    "chi_f_exact",
    "chi_f_upper",
    "decompose_sum",
    "enumerate_independent_sets",
    "equalize_cover",
    "greedy_coloring",
    "maximal_independent_sets",
    "multiclass_cover",
    "ranking_cover",
    "validate_cover",
]
