"""Price search over finite candidate sets, plus the equivalence test driver.

The solver evaluates every vector in a candidate cross product (or an
explicit vector list) through the fast oracle and keeps the best, breaking
revenue ties toward the lexicographically smallest vector so results are
reproducible, including under parallel evaluation.

Candidate generation ships as a breakpoint heuristic: for each priceable
edge, the prices at which routing some vertex through that edge exactly ties
its priceable-free alternative.  For a single priceable edge this set is
exact (the revenue function is piecewise linear in the price with its maxima
at breakpoints); for several edges it is a practical grid, not a proof of
optimality.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from random import Random
from typing import Optional, Sequence, Union

from .errors import ParseError, ValidationError
from .instance import Fixed, Instance, PriceFunction, ensure_scalar, serialize_instance
from .model import reduced_tree_of_spt
from .oracle import RevenueOracle, build_oracle
from .rational import Scalar, format_scalar, is_finite, parse_scalar
from .shortest import fixed_cost_sssp, last_priceable_labels, lex_dijkstra, naive_revenue

__all__ = [
    "CandidateSet",
    "SolveResult",
    "VerifyFailure",
    "VerifyReport",
    "fallback_price",
    "heuristic_candidates",
    "parse_candidates",
    "random_prices",
    "solve",
    "verify_oracle",
]


def _exact_positive(v, what: str) -> Scalar:
    try:
        v = ensure_scalar(v, what)
    except TypeError as exc:
        raise ValidationError(str(exc)) from exc
    if v <= 0:
        raise ValidationError(f"{what} must be strictly positive, got {v}")
    return v


def _clean_candidates(values, what: str) -> tuple[Scalar, ...]:
    seen = set()
    out = []
    for v in values:
        v = _exact_positive(v, what)
        if v not in seen:
            seen.add(v)
            out.append(v)
    return tuple(out)


@dataclass(frozen=True)
class CandidateSet:
    """Per-edge price candidates, or an explicit list of full vectors."""

    k: int
    per_edge: tuple[tuple[Scalar, ...], ...]
    vectors: Optional[tuple[tuple[Scalar, ...], ...]] = None

    def __post_init__(self):
        if self.k < 1:
            raise ValidationError("candidate set needs k >= 1")
        if len(self.per_edge) != self.k:
            raise ValidationError(
                f"expected {self.k} per-edge candidate lists, got {len(self.per_edge)}"
            )
        object.__setattr__(
            self,
            "per_edge",
            tuple(_clean_candidates(lst, "candidate price") for lst in self.per_edge),
        )
        if self.vectors is not None:
            cleaned = []
            for vec in self.vectors:
                if len(vec) != self.k:
                    raise ValidationError(
                        f"candidate vector {vec!r} does not have {self.k} entries"
                    )
                cleaned.append(tuple(_exact_positive(v, "candidate price") for v in vec))
            object.__setattr__(self, "vectors", tuple(cleaned))

    @classmethod
    def from_vectors(cls, k: int, vectors) -> "CandidateSet":
        return cls(k=k, per_edge=((),) * k, vectors=tuple(tuple(v) for v in vectors))


@dataclass(frozen=True)
class SolveResult:
    """Outcome of a candidate sweep.

    ``wall_time`` is informational; equality of interest is on the price
    vector, the revenue, and the evaluation count.
    """

    best_price: PriceFunction
    best_revenue: Scalar
    evaluations: int
    wall_time: float


def fallback_price(inst: Instance) -> Scalar:
    """A price no follower route ever pays: one above all fixed costs combined.

    Used for edges with no candidates; any such edge is effectively switched
    off (or serves only vertices with no priceable-free alternative).
    """
    total: Scalar = 1
    for e in inst.edges:
        if isinstance(e.kind, Fixed):
            total = total + e.kind.cost
    return total


def heuristic_candidates(inst: Instance) -> CandidateSet:
    """Breakpoint prices per edge: where serving some vertex becomes tight.

    For edge i and vertex v the breakpoint is
    d(root, v) - d(root, tail_i) - d(head_i, v), all on fixed edges only;
    kept when finite and strictly positive, deduplicated, ascending.
    """
    d_root = fixed_cost_sssp(inst, inst.root)
    per_edge = []
    for i in range(1, inst.k + 1):
        d_head = fixed_cost_sssp(inst, inst.target_of(i))
        d_tail = d_root[inst.source_of(i)]
        found = set()
        if is_finite(d_tail):
            for v in range(inst.n):
                if not is_finite(d_head[v]) or not is_finite(d_root[v]):
                    continue
                b = d_root[v] - d_tail - d_head[v]
                if b > 0:
                    found.add(b)
        per_edge.append(tuple(sorted(found)))
    return CandidateSet(k=inst.k, per_edge=tuple(per_edge))


def parse_candidates(text: str, k: int) -> CandidateSet:
    """Candidate file: ``cand <i> <price>`` lines or ``vector <p1> .. <pk>`` lines.

    The two forms cannot be mixed in one file.
    """
    per_edge: list[list[Scalar]] = [[] for _ in range(k)]
    vectors: list[tuple[Scalar, ...]] = []
    saw_cand = saw_vector = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        try:
            if fields[0] == "cand":
                if len(fields) != 3:
                    raise ParseError("expected: cand <edge> <price>", lineno)
                saw_cand = True
                i = int(fields[1])
                if not 1 <= i <= k:
                    raise ParseError(f"edge label {i} out of range 1..{k}", lineno)
                per_edge[i - 1].append(parse_scalar(fields[2]))
            elif fields[0] == "vector":
                if len(fields) != k + 1:
                    raise ParseError(f"expected {k} prices after 'vector'", lineno)
                saw_vector = True
                vectors.append(tuple(parse_scalar(f) for f in fields[1:]))
            else:
                raise ParseError(f"unknown directive {fields[0]!r}", lineno)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from exc
    if saw_cand and saw_vector:
        raise ParseError("cannot mix 'cand' and 'vector' lines in one candidate file")
    try:
        if saw_vector:
            return CandidateSet.from_vectors(k, vectors)
        return CandidateSet(k=k, per_edge=tuple(tuple(lst) for lst in per_edge))
    except ValidationError as exc:
        raise ParseError(str(exc)) from exc


def _magnitude_bucket(x: Scalar) -> int:
    if isinstance(x, int):
        return x.bit_length()
    return x.numerator.bit_length() - x.denominator.bit_length()


def _warmup_vectors(lists: Sequence[tuple[Scalar, ...]]) -> list[tuple[Scalar, ...]]:
    """One representative per per-edge magnitude bucket, aligned index-wise."""
    reps = []
    for lst in lists:
        by_bucket: dict[int, Scalar] = {}
        for x in lst:
            by_bucket.setdefault(_magnitude_bucket(x), x)
        reps.append([by_bucket[b] for b in sorted(by_bucket)])
    width = max(len(r) for r in reps)
    return [
        tuple(r[min(i, len(r) - 1)] for r in reps) for i in range(width)
    ]


def _sweep(evaluate, vectors) -> tuple[Optional[tuple], Optional[Scalar], int]:
    best_vec = None
    best_rev: Optional[Scalar] = None
    count = 0
    for vec in vectors:
        rev = evaluate(vec)
        count += 1
        if best_rev is None or rev > best_rev or (rev == best_rev and vec < best_vec):
            best_rev = rev
            best_vec = vec
    return best_vec, best_rev, count


def solve(
    inst: Instance,
    cands: Union[CandidateSet, None] = None,
    *,
    jobs: int = 1,
) -> SolveResult:
    """Evaluate every candidate price vector and return the best.

    With ``jobs > 1`` the cross product is split into contiguous blocks
    evaluated by worker threads; the block-ordered reduction makes the result
    identical to a sequential run.
    """
    t0 = time.perf_counter()
    if inst.k < 1:
        raise ValidationError("instance has no priceable edges to solve for")
    if cands is None:
        cands = heuristic_candidates(inst)
    if cands.k != inst.k:
        raise ValidationError(f"candidate set is for k = {cands.k}, instance has k = {inst.k}")

    if cands.vectors is not None:
        if not cands.vectors:
            raise ValidationError("empty candidate space")
        total = len(cands.vectors)

        def vectors_slice(lo, hi):
            return cands.vectors[lo:hi]

        lists = None
    else:
        lists = [lst if lst else (fallback_price(inst),) for lst in cands.per_edge]
        total = prod(len(lst) for lst in lists)

        def vectors_slice(lo, hi):
            return itertools.islice(itertools.product(*lists), lo, hi)

    if inst.k == 1:
        def evaluate(vec):
            return naive_revenue(inst, vec)
    else:
        oracle = build_oracle(inst)
        evaluate = oracle.revenue

    jobs = max(1, min(jobs, total))
    if jobs == 1:
        best_vec, best_rev, count = _sweep(evaluate, vectors_slice(0, total))
    else:
        if lists is not None:
            for vec in _warmup_vectors(lists):
                evaluate(vec)
        bounds = [total * j // jobs for j in range(jobs + 1)]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_sweep, evaluate, vectors_slice(bounds[j], bounds[j + 1]))
                for j in range(jobs)
            ]
            parts = [f.result() for f in futures]
        best_vec, best_rev, count = None, None, 0
        for vec, rev, c in parts:
            count += c
            if vec is None:
                continue
            if best_rev is None or rev > best_rev or (rev == best_rev and vec < best_vec):
                best_rev = rev
                best_vec = vec

    return SolveResult(
        best_price=PriceFunction(tuple(best_vec)),
        best_revenue=best_rev,
        evaluations=count,
        wall_time=time.perf_counter() - t0,
    )


# -- equivalence verification --------------------------------------------------


@dataclass(frozen=True)
class VerifyFailure:
    trial: int
    prices: tuple[Scalar, ...]
    kind: str
    detail: str
    instance_text: str

    def __str__(self) -> str:
        prices = " ".join(format_scalar(p) for p in self.prices)
        return (
            f"trial {self.trial}: {self.kind} check failed ({self.detail})\n"
            f"prices: {prices}\n{self.instance_text}"
        )


@dataclass(frozen=True)
class VerifyReport:
    trials: int
    failures: tuple[VerifyFailure, ...]
    rows: tuple[tuple[int, bool, Scalar, Scalar], ...]  # (trial, ok, fast, naive)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def first_counterexample(self) -> Optional[str]:
        return str(self.failures[0]) if self.failures else None


def random_prices(inst: Instance, rng: Random, integer_only: bool = False) -> list[Scalar]:
    """Small random prices, mixing integers and non-integers unless told not to."""
    out: list[Scalar] = []
    for _ in range(inst.k):
        if not integer_only and rng.random() < 0.3:
            out.append(Fraction(rng.randint(1, 24), rng.randint(1, 5)))
        else:
            out.append(rng.randint(1, 12))
    return out


def verify_oracle(
    inst: Instance,
    trials: int,
    seed: int,
    *,
    integer_only: bool = False,
    oracle: Optional[RevenueOracle] = None,
) -> VerifyReport:
    """Cross-check the fast path against first principles on random prices.

    Per trial: fast revenue vs naive revenue, model-graph reduced tree vs
    full-graph contraction, per-edge served weights vs the full-graph
    classification, and the partition of total demand.  Failures carry the
    serialized instance so they can be replayed.
    """
    if oracle is None:
        oracle = build_oracle(inst)
    rng = Random(seed)
    failures: list[VerifyFailure] = []
    rows = []

    def fail(trial, prices, kind, detail):
        failures.append(
            VerifyFailure(
                trial=trial,
                prices=tuple(prices),
                kind=kind,
                detail=detail,
                instance_text=serialize_instance(inst),
            )
        )

    for trial in range(trials):
        prices = random_prices(inst, rng, integer_only)
        p = PriceFunction(tuple(prices))
        fast = oracle.revenue(p)
        naive = naive_revenue(inst, p)
        ok = fast == naive
        if not ok:
            fail(trial, prices, "revenue", f"fast {fast} != naive {naive}")

        spt = lex_dijkstra(inst, p)
        rt_full = reduced_tree_of_spt(inst, spt)
        rt_model = oracle.reduced_tree_for(p)
        if rt_model != rt_full:
            ok = False
            fail(
                trial, prices, "reduced-tree",
                f"model {rt_model.parents} != full graph {rt_full.parents}",
            )
        else:
            _, breakdown_rows = oracle.revenue_breakdown(p)
            last = last_priceable_labels(inst, spt)
            counts = {label: 0 for label in rt_full.edges}
            free: Scalar = 0
            for v in range(inst.n):
                if last[v] is None:
                    free = free + inst.demand[v]
                else:
                    counts[last[v]] += inst.demand[v]
            served_total: Scalar = 0
            recomputed: Scalar = 0
            for label, price, served in breakdown_rows:
                served_total = served_total + served
                recomputed = recomputed + price * served
                if served != counts[label]:
                    ok = False
                    fail(
                        trial, prices, "classification",
                        f"edge {label}: fast weight {served} != tree weight {counts[label]}",
                    )
            if served_total + free != sum(inst.demand):
                ok = False
                fail(
                    trial, prices, "partition",
                    f"served {served_total} + free {free} != total {sum(inst.demand)}",
                )
            if recomputed != fast:
                ok = False
                fail(trial, prices, "breakdown", f"rows sum {recomputed} != revenue {fast}")

        rows.append((trial, ok, fast, naive))

    return VerifyReport(trials=trials, failures=tuple(failures), rows=tuple(rows))
