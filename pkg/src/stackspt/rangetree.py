"""Weighted orthogonal range searching over a static point set.

A layered range tree: a balanced hierarchy of canonical subsets, sorted per
axis, with prefix-summed weights at the innermost level.  The last two
dimensions share coordinated orderings (each node stores, for every boundary
position in its own order, the matching position in each child's order), so a
d-dimensional rectangle query resolves its final two axes with a single
binary search and finishes in O(log^{d-1} n) exact arithmetic comparisons.
Builds for d >= 3 re-sort each canonical subset, trading a log factor of
build time for simplicity; queries are unaffected.

Coordinates and query bounds are exact rationals, with -infinity (and
+infinity) usable as sentinels.  Every interval end is independently open,
closed, or absent, and all comparisons are exact, so points lying precisely
on a boundary are included or excluded per the interval, never by rounding.
"""

from __future__ import annotations

from array import array
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .errors import ValidationError
from .rational import FINITE_TYPES, ExtScalar, Infinity, Scalar

__all__ = [
    "Interval",
    "QueryRect",
    "WeightedPointSet",
    "RangeTree",
    "build_range_tree",
    "query_weight",
]

Bound = tuple[ExtScalar, bool]  # (value, end is closed)

_I64 = 1 << 62


def _check_bound(bound: Optional[Bound], what: str) -> Optional[Bound]:
    if bound is None:
        return None
    value, closed = bound
    if not isinstance(value, FINITE_TYPES + (Infinity,)) or isinstance(value, bool):
        raise ValidationError(f"{what} must be an exact scalar, got {value!r}")
    return (value, bool(closed))


@dataclass(frozen=True)
class Interval:
    """One axis of a query rectangle; either end may be absent (unbounded)."""

    lower: Optional[Bound] = None
    upper: Optional[Bound] = None

    def __post_init__(self):
        object.__setattr__(self, "lower", _check_bound(self.lower, "lower bound"))
        object.__setattr__(self, "upper", _check_bound(self.upper, "upper bound"))

    @classmethod
    def at_most(cls, value: ExtScalar, closed: bool = True) -> "Interval":
        """Dominance form: unbounded below."""
        return cls(lower=None, upper=(value, closed))

    def contains(self, x: ExtScalar) -> bool:
        if self.lower is not None:
            v, closed = self.lower
            if x < v or (x == v and not closed):
                return False
        if self.upper is not None:
            v, closed = self.upper
            if x > v or (x == v and not closed):
                return False
        return True


@dataclass(frozen=True)
class QueryRect:
    """Cartesian product of per-axis intervals."""

    intervals: tuple[Interval, ...]

    def __post_init__(self):
        for iv in self.intervals:
            if not isinstance(iv, Interval):
                raise ValidationError(f"rectangle axes must be Interval, got {iv!r}")

    @classmethod
    def dominance(cls, uppers: Sequence[Optional[Bound]]) -> "QueryRect":
        """Rectangle with every axis unbounded below."""
        return cls(tuple(Interval(lower=None, upper=u) for u in uppers))

    @property
    def dim(self) -> int:
        return len(self.intervals)

    def contains(self, point: Sequence[ExtScalar]) -> bool:
        return all(iv.contains(x) for iv, x in zip(self.intervals, point))


@dataclass(frozen=True)
class WeightedPointSet:
    """Static points with nonnegative weights; duplicates are allowed."""

    dim: int
    points: tuple[tuple[ExtScalar, ...], ...]
    weights: tuple[Scalar, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise ValidationError(f"dimension must be >= 1, got {self.dim}")
        if len(self.points) != len(self.weights):
            raise ValidationError("points and weights differ in length")
        for pt in self.points:
            if len(pt) != self.dim:
                raise ValidationError(f"point {pt!r} is not {self.dim}-dimensional")
            for x in pt:
                if not isinstance(x, FINITE_TYPES + (Infinity,)) or isinstance(x, bool):
                    raise ValidationError(f"coordinate {x!r} is not an exact scalar")
        for w in self.weights:
            if not isinstance(w, FINITE_TYPES) or isinstance(w, bool):
                raise ValidationError(f"weight {w!r} is not an exact finite scalar")
            if w < 0:
                raise ValidationError(f"weights must be nonnegative, got {w!r}")

    def __len__(self) -> int:
        return len(self.points)


def _compact(values: list) -> Sequence:
    """array('q') when everything is a machine-sized int, else a tuple."""
    if all(type(v) is int and -_I64 < v < _I64 for v in values):
        return array("q", values)
    return tuple(values)


def _prefix(weights: list) -> Sequence:
    pref = [0] * (len(weights) + 1)
    acc: Scalar = 0
    for i, w in enumerate(weights):
        acc = acc + w
        pref[i + 1] = acc
    return _compact(pref)


def _lo_index(arr: Sequence, bound: Optional[Bound]) -> int:
    if bound is None:
        return 0
    value, closed = bound
    return bisect_left(arr, value) if closed else bisect_right(arr, value)


def _hi_index(arr: Sequence, bound: Optional[Bound]) -> int:
    if bound is None:
        return len(arr)
    value, closed = bound
    return bisect_right(arr, value) if closed else bisect_left(arr, value)


class _Tree1:
    __slots__ = ("xs", "pref")

    def __init__(self, pts: list[tuple], ws: list, axis: int):
        order = sorted(range(len(pts)), key=lambda i: pts[i][axis])
        self.xs = _compact([pts[i][axis] for i in order])
        self.pref = _prefix([ws[i] for i in order])

    def query(self, ivs: tuple[Interval, ...]) -> Scalar:
        (iv,) = ivs
        lo = _lo_index(self.xs, iv.lower)
        hi = _hi_index(self.xs, iv.upper)
        if hi <= lo:
            return 0
        return self.pref[hi] - self.pref[lo]


class _Node2:
    __slots__ = ("pref", "lpos", "left", "right")

    def __init__(self, pref, lpos, left, right):
        self.pref = pref
        self.lpos = lpos
        self.left = left
        self.right = right


class _Tree2:
    """Index-range tree on the first axis, coordinated orders on the second.

    Each node covers a contiguous range of the axis-0 order and keeps the
    prefix weights of its points in axis-1 order.  ``lpos[q]`` maps boundary
    position q of the node's order to the matching boundary in the left
    child's order (the right child's is q - lpos[q]), so positions found once
    at the root stay exact all the way down, whatever mix of open and closed
    ends produced them.
    """

    __slots__ = ("xs", "ys", "root")

    def __init__(self, pts: list[tuple], ws: list, axis: int):
        order = sorted(range(len(pts)), key=lambda i: pts[i][axis])
        self.xs = _compact([pts[i][axis] for i in order])
        root, ys, _ = self._build(order, 0, len(order), pts, ws, axis + 1)
        self.root = root
        self.ys = _compact(ys)

    def _build(self, order, lo, hi, pts, ws, yaxis):
        if hi - lo == 1:
            i = order[lo]
            w = ws[i]
            return _Node2(_compact([0, w]), None, None, None), [pts[i][yaxis]], [w]
        mid = (lo + hi) // 2
        left, lys, lws = self._build(order, lo, mid, pts, ws, yaxis)
        right, rys, rws = self._build(order, mid, hi, pts, ws, yaxis)
        nl, nr = len(lys), len(rys)
        ys = []
        wsm = []
        lpos = array("q", bytes(8 * (nl + nr + 1)))
        i = j = 0
        while i < nl or j < nr:
            if j >= nr or (i < nl and not rys[j] < lys[i]):
                ys.append(lys[i])
                wsm.append(lws[i])
                i += 1
            else:
                ys.append(rys[j])
                wsm.append(rws[j])
                j += 1
            lpos[i + j] = i
        node = _Node2(_prefix(wsm), lpos, left, right)
        return node, ys, wsm

    def query(self, ivs: tuple[Interval, ...]) -> Scalar:
        iv0, iv1 = ivs
        lo = _lo_index(self.xs, iv0.lower)
        hi = _hi_index(self.xs, iv0.upper)
        if hi <= lo:
            return 0
        ylo = _lo_index(self.ys, iv1.lower)
        yhi = _hi_index(self.ys, iv1.upper)
        if yhi <= ylo:
            return 0
        return self._visit(self.root, 0, len(self.xs), lo, hi, ylo, yhi)

    def _visit(self, node, nl, nr, lo, hi, ylo, yhi) -> Scalar:
        if hi <= nl or nr <= lo or ylo >= yhi:
            return 0
        if lo <= nl and hi >= nr:
            return node.pref[yhi] - node.pref[ylo]
        mid = (nl + nr) // 2
        ll, lh = node.lpos[ylo], node.lpos[yhi]
        return self._visit(node.left, nl, mid, lo, hi, ll, lh) + self._visit(
            node.right, mid, nr, lo, hi, ylo - ll, yhi - lh
        )


class _NodeK:
    __slots__ = ("sub", "left", "right")

    def __init__(self, sub, left, right):
        self.sub = sub
        self.left = left
        self.right = right


class _TreeK:
    """Index-range tree on the first axis; canonical nodes hold lower-dim trees."""

    __slots__ = ("xs", "root")

    def __init__(self, pts: list[tuple], ws: list, axis: int, dim: int):
        order = sorted(range(len(pts)), key=lambda i: pts[i][axis])
        self.xs = _compact([pts[i][axis] for i in order])
        self.root = self._build(order, 0, len(order), pts, ws, axis, dim)

    def _build(self, order, lo, hi, pts, ws, axis, dim):
        ids = order[lo:hi]
        sub = _build_impl([pts[i] for i in ids], [ws[i] for i in ids], axis + 1, dim - 1)
        if hi - lo == 1:
            return _NodeK(sub, None, None)
        mid = (lo + hi) // 2
        left = self._build(order, lo, mid, pts, ws, axis, dim)
        right = self._build(order, mid, hi, pts, ws, axis, dim)
        return _NodeK(sub, left, right)

    def query(self, ivs: tuple[Interval, ...]) -> Scalar:
        lo = _lo_index(self.xs, ivs[0].lower)
        hi = _hi_index(self.xs, ivs[0].upper)
        if hi <= lo:
            return 0
        return self._visit(self.root, 0, len(self.xs), lo, hi, ivs[1:])

    def _visit(self, node, nl, nr, lo, hi, rest) -> Scalar:
        if hi <= nl or nr <= lo:
            return 0
        if lo <= nl and hi >= nr:
            return node.sub.query(rest)
        mid = (nl + nr) // 2
        return self._visit(node.left, nl, mid, lo, hi, rest) + self._visit(
            node.right, mid, nr, lo, hi, rest
        )


def _build_impl(pts: list[tuple], ws: list, axis: int, dim: int):
    if dim == 1:
        return _Tree1(pts, ws, axis)
    if dim == 2:
        return _Tree2(pts, ws, axis)
    return _TreeK(pts, ws, axis, dim)


class RangeTree:
    """Immutable weighted range-search structure over a fixed point set."""

    __slots__ = ("dim", "size", "total_weight", "_impl")

    def __init__(self, pts: WeightedPointSet):
        self.dim = pts.dim
        self.size = len(pts)
        total: Scalar = 0
        for w in pts.weights:
            total = total + w
        self.total_weight = total
        if self.size:
            self._impl = _build_impl(list(pts.points), list(pts.weights), 0, pts.dim)
        else:
            self._impl = None

    def query(self, rect: Union[QueryRect, Sequence[Interval]]) -> Scalar:
        ivs = rect.intervals if isinstance(rect, QueryRect) else tuple(rect)
        if len(ivs) != self.dim:
            raise ValidationError(
                f"rectangle has {len(ivs)} axes, tree has {self.dim}"
            )
        if self._impl is None:
            return 0
        return self._impl.query(ivs)


def build_range_tree(pts: WeightedPointSet) -> RangeTree:
    """Preprocess a weighted point set for rectangle weight-sum queries."""
    return RangeTree(pts)


def query_weight(rt: RangeTree, rect: Union[QueryRect, Sequence[Interval]]) -> Scalar:
    """Exact total weight of the points inside the rectangle."""
    return rt.query(rect)
