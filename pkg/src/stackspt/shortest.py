"""Tie-broken shortest path trees and the naive revenue evaluator.

Followers compare routes by a composite weight ``(w, -p, -chi)`` ordered
lexicographically: ``w`` is the total of costs and prices along the route,
``p`` the priced part alone, and ``chi`` a signature that is injective on sets
of priceable edges (edge label i contributes 2^i).  Minimizing this composite
weight means: cheapest route first; among equally cheap routes the one paying
the leader most; among those, the one whose priceable-edge set has the largest
signature.  The last component makes every tie resolution reproducible, so
the revenue of "the" shortest path tree is well defined.

Two interchangeable cores implement the Dijkstra sweep: a general one over
weight triples of exact scalars, and a fast one that packs the triple into a
single integer key when every cost and price is an int.  Packing is safe
because every key the sweep ever stores belongs to a simple path, so the low
components are bounded by the sum of all prices and by 2^(k+1)-2.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Union

from .errors import UnreachableVertexError, ValidationError
from .instance import Edge, Fixed, Instance, Priceable, PriceFunction
from .rational import INF, ExtScalar, Infinity, Scalar

__all__ = [
    "CompositeWeight",
    "ZERO_WEIGHT",
    "UNREACHABLE_WEIGHT",
    "SptResult",
    "chi",
    "chi_sum",
    "composite_weight",
    "lex_dijkstra",
    "fixed_cost_sssp",
    "naive_revenue",
    "last_priceable_labels",
]


class CompositeWeight(NamedTuple):
    """Lexicographically ordered route weight ``(w, -p, -chi)``."""

    w: ExtScalar
    neg_p: Scalar
    neg_chi: int

    def __add__(self, other: "CompositeWeight") -> "CompositeWeight":  # type: ignore[override]
        return CompositeWeight(
            self.w + other.w, self.neg_p + other.neg_p, self.neg_chi + other.neg_chi
        )

    @property
    def price_paid(self) -> Scalar:
        return -self.neg_p


ZERO_WEIGHT = CompositeWeight(0, 0, 0)
UNREACHABLE_WEIGHT = CompositeWeight(INF, 0, 0)


def chi(edge: Edge) -> int:
    """Signature of a single edge: 0 if fixed, 2^i for the edge labeled i."""
    if isinstance(edge.kind, Priceable):
        return 1 << edge.kind.index
    return 0


def chi_sum(labels: Iterable[int]) -> int:
    """Signature of a set of priceable labels; injective on label sets."""
    return sum(1 << i for i in set(labels))


def composite_weight(edge: Edge, prices: PriceFunction) -> CompositeWeight:
    """Composite weight of one edge under the given prices."""
    kind = edge.kind
    if isinstance(kind, Fixed):
        return CompositeWeight(kind.cost, 0, 0)
    p = prices.price(kind.index)
    return CompositeWeight(p, -p, -(1 << kind.index))


@dataclass(frozen=True)
class SptResult:
    """A shortest path tree: per-vertex distance and parent edge.

    ``dist[v]`` is the composite weight of the tree route to v, or
    ``UNREACHABLE_WEIGHT`` when no route exists.  ``parent_edge[v]`` is the
    position (in ``Instance.edges``) of v's tree edge, None for the source
    and for unreachable vertices.  Distances are unique; parent edges are one
    valid choice among ties.
    """

    source: int
    dist: tuple[CompositeWeight, ...]
    parent_edge: tuple[Union[int, None], ...]

    def reachable(self, v: int) -> bool:
        return not isinstance(self.dist[v].w, Infinity)

    def price_paid(self, v: int) -> Scalar:
        """Total price collected on the tree route to v."""
        return -self.dist[v].neg_p

    def tree_path_edges(self, inst: "Instance", v: int) -> tuple[int, ...]:
        """Edge positions of the tree route source -> v, in route order."""
        path: list[int] = []
        while self.parent_edge[v] is not None:
            pos = self.parent_edge[v]
            path.append(pos)
            v = inst.edges[pos].tail
        return tuple(reversed(path))


def _normalize_prices(inst: Instance, prices) -> PriceFunction:
    pf = prices if isinstance(prices, PriceFunction) else PriceFunction(tuple(prices))
    if len(pf) != inst.k:
        raise ValidationError(f"instance has k = {inst.k} priceable edges, got {len(pf)} prices")
    return pf


# -- cores -------------------------------------------------------------------
#
# Both cores work on the instance's cached CSR adjacency:
#   starts[u]..starts[u+1] index parallel arrays heads / epos,
#   costs[j] is the fixed cost at slot j or None, labels[j] the priceable
#   label at slot j or 0.


def _csr(inst: Instance):
    n, m = inst.n, inst.m
    cached = inst.__dict__.get("_csr_cache")
    if cached is not None:
        return cached
    counts = [0] * (n + 1)
    for e in inst.edges:
        counts[e.tail + 1] += 1
    for u in range(n):
        counts[u + 1] += counts[u]
    starts = list(counts)
    heads = [0] * m
    epos = [0] * m
    costs: list = [None] * m
    labels = [0] * m
    fill = list(starts)
    for pos, e in enumerate(inst.edges):
        j = fill[e.tail]
        fill[e.tail] = j + 1
        heads[j] = e.head
        epos[j] = pos
        if isinstance(e.kind, Fixed):
            costs[j] = e.kind.cost
        else:
            labels[j] = e.kind.index
    cached = (starts, heads, epos, costs, labels)
    inst.__dict__["_csr_cache"] = cached
    return cached


def _run_packed(inst: Instance, prices: PriceFunction, source: int):
    """Integer-key Dijkstra.  Requires every cost and price to be an int.

    Returns (dist, parent, m1, m2, pcap, chicap); dist[v] is a packed int or
    float inf for unreachable vertices.
    """
    starts, heads, epos, costs, labels = _csr(inst)
    n = inst.n
    k = inst.k
    pvals = prices.values
    pcap = sum(pvals)
    chicap = (1 << (k + 1)) - 2 if k else 0
    m2 = chicap + 1
    m1 = (pcap + 1) * m2

    inc = [0] * inst.m
    for j, c in enumerate(costs):
        if c is not None:
            inc[j] = c * m1
        else:
            p = pvals[labels[j] - 1]
            inc[j] = p * (m1 - m2) - (1 << labels[j])

    infinity = float("inf")
    dist: list = [infinity] * n
    parent: list = [None] * n
    start = pcap * m2 + chicap
    dist[source] = start
    heap = [(start, source)]
    push = heapq.heappush
    pop = heapq.heappop
    while heap:
        d, u = pop(heap)
        if d != dist[u]:
            continue
        for j in range(starts[u], starts[u + 1]):
            v = heads[j]
            nd = d + inc[j]
            if nd < dist[v]:
                dist[v] = nd
                parent[v] = epos[j]
                push(heap, (nd, v))
    return dist, parent, m1, m2, pcap, chicap


def _run_tuples(inst: Instance, prices: PriceFunction, source: int):
    """General Dijkstra over (w, -p, -chi) triples of exact scalars."""
    starts, heads, epos, costs, labels = _csr(inst)
    n = inst.n
    pvals = prices.values

    wv: list = [0] * inst.m
    npv: list = [0] * inst.m
    ncv = [0] * inst.m
    for j, c in enumerate(costs):
        if c is not None:
            wv[j] = c
        else:
            p = pvals[labels[j] - 1]
            wv[j] = p
            npv[j] = -p
            ncv[j] = -(1 << labels[j])

    dist: list = [None] * n
    parent: list = [None] * n
    start = (0, 0, 0)
    dist[source] = start
    heap = [(start, source)]
    push = heapq.heappush
    pop = heapq.heappop
    while heap:
        d, u = pop(heap)
        if d != dist[u]:
            continue
        dw, dp, dc = d
        for j in range(starts[u], starts[u + 1]):
            v = heads[j]
            nd = (dw + wv[j], dp + npv[j], dc + ncv[j])
            dv = dist[v]
            if dv is None or nd < dv:
                dist[v] = nd
                parent[v] = epos[j]
                push(heap, (nd, v))
    return dist, parent


def _all_int_prices(prices: PriceFunction) -> bool:
    return all(isinstance(p, int) for p in prices.values)


def lex_dijkstra(inst: Instance, prices, source: int | None = None) -> SptResult:
    """Compute a shortest path tree under the composite weight order.

    The returned distances are the unique componentwise minima over all
    routes; the parent choices realize one shortest path tree.  Which parents
    are reported may depend on edge order, the distances never do.
    """
    pf = _normalize_prices(inst, prices)
    src = inst.root if source is None else source
    if not 0 <= src < inst.n:
        raise ValidationError(f"source {src} out of range [0, {inst.n})")

    if inst.all_integer and _all_int_prices(pf):
        dist_raw, parent, m1, m2, pcap, chicap = _run_packed(inst, pf, src)
        dist = []
        for d in dist_raw:
            if isinstance(d, float):
                dist.append(UNREACHABLE_WEIGHT)
            else:
                low = d % m1
                dist.append(
                    CompositeWeight(d // m1, (low // m2) - pcap, (low % m2) - chicap)
                )
    else:
        dist_raw, parent = _run_tuples(inst, pf, src)
        dist = [
            UNREACHABLE_WEIGHT if d is None else CompositeWeight(*d) for d in dist_raw
        ]

    return SptResult(source=src, dist=tuple(dist), parent_edge=tuple(parent))


def fixed_cost_sssp(inst: Instance, source: int) -> tuple[ExtScalar, ...]:
    """Shortest-path distances using fixed-cost edges only.

    This is the "priceable edges removed" metric: the cost of the best route
    no leader decision can touch.  Unreachable vertices get ``INF``.
    """
    if not 0 <= source < inst.n:
        raise ValidationError(f"source {source} out of range [0, {inst.n})")
    starts, heads, _epos, costs, _labels = _csr(inst)
    n = inst.n
    dist: list = [None] * n
    dist[source] = 0
    heap = [(0, source)]
    push = heapq.heappush
    pop = heapq.heappop
    while heap:
        d, u = pop(heap)
        if d != dist[u]:
            continue
        for j in range(starts[u], starts[u + 1]):
            c = costs[j]
            if c is None:
                continue
            v = heads[j]
            nd = d + c
            dv = dist[v]
            if dv is None or nd < dv:
                dist[v] = nd
                push(heap, (nd, v))
    return tuple(INF if d is None else d for d in dist)


def naive_revenue(inst: Instance, prices) -> Scalar:
    """Revenue of a composite-weight shortest path tree, computed directly.

    Runs one full Dijkstra sweep per call, so it is the slow-but-simple
    reference the preprocessing oracle is checked against.  Raises
    ``UnreachableVertexError`` if a vertex with positive demand has no route
    from the root.
    """
    pf = _normalize_prices(inst, prices)
    demand = inst.demand
    revenue: Scalar = 0

    if inst.all_integer and _all_int_prices(pf):
        dist_raw, _parent, m1, m2, pcap, _chicap = _run_packed(inst, pf, inst.root)
        for v, d in enumerate(dist_raw):
            phi = demand[v]
            if isinstance(d, float):
                if phi > 0:
                    raise UnreachableVertexError(
                        f"vertex {v} has demand {phi} but no route from root {inst.root}"
                    )
                continue
            if phi:
                revenue += phi * (pcap - (d % m1) // m2)
    else:
        dist_raw, _parent = _run_tuples(inst, pf, inst.root)
        for v, d in enumerate(dist_raw):
            phi = demand[v]
            if d is None:
                if phi > 0:
                    raise UnreachableVertexError(
                        f"vertex {v} has demand {phi} but no route from root {inst.root}"
                    )
                continue
            if phi:
                revenue += phi * (-d[1])
    return revenue


def last_priceable_labels(inst: Instance, spt: SptResult) -> tuple[Union[int, None], ...]:
    """For each vertex, the label of the last priceable edge on its tree route.

    None for vertices whose route is priceable-free, for the source, and for
    unreachable vertices.  This is the classification that decides which
    priceable edge collects each vertex's demand.
    """
    n = inst.n
    children: list[list[int]] = [[] for _ in range(n)]
    for v, pe in enumerate(spt.parent_edge):
        if pe is not None:
            children[inst.edges[pe].tail].append(v)
    last: list = [None] * n
    stack = [spt.source]
    while stack:
        u = stack.pop()
        for v in children[u]:
            kind = inst.edges[spt.parent_edge[v]].kind
            last[v] = kind.index if isinstance(kind, Priceable) else last[u]
            stack.append(v)
    return tuple(last)
