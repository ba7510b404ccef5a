"""Problem instances and their text format.

An instance is a directed multigraph with a root, per-vertex demand, and two
kinds of edges: fixed-cost edges the leader cannot touch, and priceable edges
labeled 1..k whose prices the leader sets.  Followers at each vertex buy their
shortest route from the root, paying the prices on it.

The text format is line-oriented::

    stackspt 1
    graph <n> <m> <k>
    root <r>
    demand <v> <phi>        # optional, default demand is 1
    edge <u> <v> F <cost>   # fixed-cost edge
    edge <u> <v> P <i>      # priceable edge with label i

``#`` starts a comment, blank lines are ignored, and numeric literals are
integers, exact decimals, or ``a/b`` ratios.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

from .errors import ParseError, ValidationError
from .rational import FINITE_TYPES, Scalar, ensure_scalar, format_scalar, parse_scalar

__all__ = [
    "MAX_PRICEABLE_EDGES",
    "FORMAT_MAGIC",
    "FORMAT_VERSION",
    "Fixed",
    "Priceable",
    "Edge",
    "Instance",
    "PriceFunction",
    "parse_instance",
    "serialize_instance",
    "random_instance",
]

# Cap on the number of priceable edges accepted at validation time.  Point
# dimensions and signature values grow with k, so raising this is a deliberate
# act, not a tuning knob.
MAX_PRICEABLE_EDGES = 16

FORMAT_MAGIC = "stackspt"
FORMAT_VERSION = 1


@dataclass(frozen=True, slots=True)
class Fixed:
    """Fixed-cost edge payload; the cost is exact and strictly positive."""

    cost: Scalar


@dataclass(frozen=True, slots=True)
class Priceable:
    """Priceable edge payload; ``index`` is the 1-based label."""

    index: int


@dataclass(frozen=True, slots=True)
class Edge:
    tail: int
    head: int
    kind: Union[Fixed, Priceable]

    @property
    def is_priceable(self) -> bool:
        return isinstance(self.kind, Priceable)


@dataclass(frozen=True)
class Instance:
    """A validated pricing instance.

    Attributes:
        n: number of vertices, identified as 0..n-1.
        root: the followers' common source vertex.
        edges: all edges in file order (parallel edges are allowed).
        demand: per-vertex demand, length n, each entry >= 0 and exact.
    """

    n: int
    root: int
    edges: tuple[Edge, ...]
    demand: tuple[Scalar, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"n must be >= 1, got {self.n}")
        if not 0 <= self.root < self.n:
            raise ValidationError(f"root {self.root} out of range [0, {self.n})")
        if len(self.demand) != self.n:
            raise ValidationError(
                f"demand has {len(self.demand)} entries, expected n = {self.n}"
            )
        for v, phi in enumerate(self.demand):
            if isinstance(phi, bool) or not isinstance(phi, FINITE_TYPES):
                raise ValidationError(f"demand of vertex {v} must be an exact scalar")
            if phi < 0:
                raise ValidationError(f"demand of vertex {v} is negative: {phi}")
        labels: set[int] = set()
        for pos, e in enumerate(self.edges):
            if not (0 <= e.tail < self.n and 0 <= e.head < self.n):
                raise ValidationError(f"edge {pos} endpoint out of range: {e.tail}->{e.head}")
            if e.tail == e.head:
                raise ValidationError(f"edge {pos} is a self-loop at vertex {e.tail}")
            if isinstance(e.kind, Fixed):
                c = e.kind.cost
                if isinstance(c, bool) or not isinstance(c, FINITE_TYPES):
                    raise ValidationError(f"edge {pos} cost must be an exact scalar")
                if c <= 0:
                    raise ValidationError(f"edge {pos} cost must be > 0, got {c}")
            elif isinstance(e.kind, Priceable):
                i = e.kind.index
                if not isinstance(i, int) or isinstance(i, bool):
                    raise ValidationError(f"edge {pos} priceable label must be an int")
                if i in labels:
                    raise ValidationError(f"duplicate priceable label {i}")
                labels.add(i)
            else:
                raise ValidationError(f"edge {pos} has unknown kind {e.kind!r}")
        k = len(labels)
        if labels and (min(labels) != 1 or max(labels) != k):
            raise ValidationError(
                f"priceable labels must be exactly 1..k, got {sorted(labels)}"
            )
        if k > MAX_PRICEABLE_EDGES:
            raise ValidationError(
                f"k = {k} exceeds the cap of {MAX_PRICEABLE_EDGES} priceable edges"
            )

    # -- derived views -----------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def k(self) -> int:
        return sum(1 for e in self.edges if e.is_priceable)

    @cached_property
    def priceable(self) -> tuple[Edge, ...]:
        """The priceable edges ordered by label, so ``priceable[i-1]`` is e_i."""
        by_label = {e.kind.index: e for e in self.edges if isinstance(e.kind, Priceable)}
        return tuple(by_label[i] for i in range(1, self.k + 1))

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per-tail ``(head, edge_position)`` pairs, in edge order."""
        out: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for pos, e in enumerate(self.edges):
            out[e.tail].append((e.head, pos))
        return tuple(tuple(lst) for lst in out)

    @cached_property
    def all_integer(self) -> bool:
        """True when every fixed cost is a plain int (fast-path eligible)."""
        return all(
            isinstance(e.kind.cost, int)
            for e in self.edges
            if isinstance(e.kind, Fixed)
        )

    def source_of(self, i: int) -> int:
        return self.priceable[i - 1].tail

    def target_of(self, i: int) -> int:
        return self.priceable[i - 1].head


@dataclass(frozen=True)
class PriceFunction:
    """Strictly positive exact prices for the k priceable edges.

    ``values[i-1]`` is the price of the edge labeled i.
    """

    values: tuple[Scalar, ...]

    def __post_init__(self):
        normalized = []
        for pos, p in enumerate(self.values):
            try:
                p = ensure_scalar(p, f"price {pos + 1}")
            except TypeError as exc:
                raise ValidationError(str(exc)) from None
            if p <= 0:
                raise ValidationError(f"price {pos + 1} must be > 0, got {p}")
            normalized.append(p)
        object.__setattr__(self, "values", tuple(normalized))

    @classmethod
    def parse(cls, text: str, k: int | None = None) -> "PriceFunction":
        """Parse a comma- or whitespace-separated price list."""
        parts = [t for t in text.replace(",", " ").split() if t]
        try:
            values = tuple(parse_scalar(t) for t in parts)
        except ValueError as exc:
            raise ParseError(str(exc)) from None
        pf = cls(values)
        if k is not None and len(pf) != k:
            raise ValidationError(f"expected {k} prices, got {len(pf)}")
        return pf

    def price(self, i: int) -> Scalar:
        """Price of the edge labeled ``i`` (1-based)."""
        return self.values[i - 1]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __str__(self) -> str:
        return " ".join(format_scalar(p) for p in self.values)


# -- text format -----------------------------------------------------------


def _tokenize(text: str) -> Iterable[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        yield lineno, body.split()


def _parse_int(token: str, lineno: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {token!r}", lineno) from None


def _parse_cost(token: str, lineno: int, what: str) -> Scalar:
    try:
        return parse_scalar(token)
    except ValueError as exc:
        raise ParseError(f"bad {what}: {exc}", lineno) from None


def parse_instance(text: str) -> Instance:
    """Parse the instance text format.

    Raises ``ParseError`` with a line number on malformed input and
    ``ValidationError`` when the parsed instance violates a semantic
    constraint (label gaps, nonpositive costs, ...).
    """
    lines = _tokenize(text)

    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise ParseError("empty input, expected magic line") from None
    if len(tokens) != 2 or tokens[0] != FORMAT_MAGIC:
        raise ParseError(f"expected '{FORMAT_MAGIC} {FORMAT_VERSION}' magic line", lineno)
    version = _parse_int(tokens[1], lineno, "format version")
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported format version {version}", lineno)

    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise ParseError("missing 'graph' line") from None
    if tokens[0] != "graph" or len(tokens) != 4:
        raise ParseError("expected 'graph <n> <m> <k>'", lineno)
    n = _parse_int(tokens[1], lineno, "n")
    m = _parse_int(tokens[2], lineno, "m")
    k = _parse_int(tokens[3], lineno, "k")

    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise ParseError("missing 'root' line") from None
    if tokens[0] != "root" or len(tokens) != 2:
        raise ParseError("expected 'root <r>'", lineno)
    root = _parse_int(tokens[1], lineno, "root")

    if n < 1:
        raise ParseError(f"n must be >= 1, got {n}", lineno)

    demand: list[Scalar] = [1] * n
    demand_seen: set[int] = set()
    edges: list[Edge] = []

    for lineno, tokens in lines:
        if tokens[0] == "demand":
            if len(tokens) != 3:
                raise ParseError("expected 'demand <v> <phi>'", lineno)
            v = _parse_int(tokens[1], lineno, "vertex")
            if not 0 <= v < n:
                raise ParseError(f"demand vertex {v} out of range [0, {n})", lineno)
            if v in demand_seen:
                raise ParseError(f"duplicate demand line for vertex {v}", lineno)
            demand_seen.add(v)
            phi = _parse_cost(tokens[2], lineno, "demand")
            if phi < 0:
                raise ParseError(f"demand must be >= 0, got {phi}", lineno)
            demand[v] = phi
        elif tokens[0] == "edge":
            if len(tokens) != 5:
                raise ParseError("expected 'edge <u> <v> F <cost>' or 'edge <u> <v> P <i>'", lineno)
            u = _parse_int(tokens[1], lineno, "edge tail")
            v = _parse_int(tokens[2], lineno, "edge head")
            tag = tokens[3]
            if tag == "F":
                cost = _parse_cost(tokens[4], lineno, "cost")
                kind: Union[Fixed, Priceable] = Fixed(cost)
            elif tag == "P":
                kind = Priceable(_parse_int(tokens[4], lineno, "priceable label"))
            else:
                raise ParseError(f"edge kind must be F or P, got {tag!r}", lineno)
            edges.append(Edge(u, v, kind))
        else:
            raise ParseError(f"unknown directive {tokens[0]!r}", lineno)

    if len(edges) != m:
        raise ParseError(f"header declares m = {m} edges, found {len(edges)}")

    inst = Instance(n=n, root=root, edges=tuple(edges), demand=tuple(demand))
    if inst.k != k:
        raise ParseError(f"header declares k = {k} priceable edges, found {inst.k}")
    return inst


def serialize_instance(inst: Instance) -> str:
    """Canonical text for an instance; ``parse_instance`` inverts it exactly."""
    out = [f"{FORMAT_MAGIC} {FORMAT_VERSION}"]
    out.append("# demand defaults to 1")
    out.append(f"graph {inst.n} {inst.m} {inst.k}")
    out.append(f"root {inst.root}")
    for v, phi in enumerate(inst.demand):
        if phi != 1:
            out.append(f"demand {v} {format_scalar(phi)}")
    for e in inst.edges:
        if isinstance(e.kind, Fixed):
            out.append(f"edge {e.tail} {e.head} F {format_scalar(e.kind.cost)}")
        else:
            out.append(f"edge {e.tail} {e.head} P {e.kind.index}")
    return "\n".join(out) + "\n"


def random_instance(
    n: int,
    m: int,
    k: int,
    *,
    seed: int,
    cost_max: int = 10,
    demand_max: int = 1,
) -> Instance:
    """Generate a random instance whose fixed edges alone span the graph.

    The first n-1 edges form a random arborescence from vertex 0 and stay
    fixed, so every vertex keeps a priceable-free route from the root: revenue
    is bounded in the prices and no demand is ever stranded.  The remaining
    edges are uniform random non-loop edges (parallel edges allowed), k of
    which are made priceable with labels assigned in random order.  Costs are
    integers in [1, cost_max].  With ``demand_max <= 1`` every demand is 1;
    otherwise demands are integers in [0, demand_max].

    Deterministic for a fixed argument tuple.
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if m < n - 1:
        raise ValidationError(f"m = {m} cannot reach all {n} vertices (need >= {n - 1})")
    if n == 1 and m > 0:
        raise ValidationError("a single-vertex instance admits no edges (self-loops are forbidden)")
    if not 0 <= k <= m - (n - 1):
        raise ValidationError(
            f"k = {k} priceable edges do not fit: the first n-1 = {n - 1} edges "
            f"form the fixed skeleton, leaving {max(0, m - (n - 1))} of m = {m}"
        )
    if k > MAX_PRICEABLE_EDGES:
        raise ValidationError(f"k = {k} exceeds the cap of {MAX_PRICEABLE_EDGES}")
    if cost_max < 1:
        raise ValidationError(f"cost_max must be >= 1, got {cost_max}")

    rng = random.Random(seed)
    endpoints: list[tuple[int, int]] = []
    order = list(range(1, n))
    rng.shuffle(order)
    connected = [0]
    for v in order:
        u = connected[rng.randrange(len(connected))]
        endpoints.append((u, v))
        connected.append(v)
    while len(endpoints) < m:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        endpoints.append((u, v))

    priceable_pos = rng.sample(range(n - 1, m), k)
    labels = list(range(1, k + 1))
    rng.shuffle(labels)
    label_at = dict(zip(priceable_pos, labels))

    edges = []
    for pos, (u, v) in enumerate(endpoints):
        if pos in label_at:
            edges.append(Edge(u, v, Priceable(label_at[pos])))
        else:
            edges.append(Edge(u, v, Fixed(rng.randint(1, cost_max))))

    if demand_max <= 1:
        demand: tuple[Scalar, ...] = (1,) * n
    else:
        demand = tuple(rng.randint(0, demand_max) for _ in range(n))

    return Instance(n=n, root=0, edges=tuple(edges), demand=demand)
