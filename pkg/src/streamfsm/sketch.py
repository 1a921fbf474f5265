"""Per-vertex bottom-k neighborhood sketches with deletion support."""

from __future__ import annotations

import hashlib
import heapq
from bisect import bisect_left, insort


class SketchError(ValueError):
    pass


class VertexHasher:
    """Salted, seeded map from vertex ids to floats in [0, 1).

    64-bit resolution before normalization; values are cached per vertex so
    repeat lookups are a dict hit.
    """

    __slots__ = ("_salt", "_cache")

    def __init__(self, seed: int) -> None:
        self._salt = f"vh:{seed}:".encode()
        self._cache: dict[int, float] = {}

    def value(self, vertex: int) -> float:
        h = self._cache.get(vertex)
        if h is None:
            digest = hashlib.blake2b(
                self._salt + str(vertex).encode(), digest_size=8
            ).digest()
            h = int.from_bytes(digest, "big") / 2.0**64
            self._cache[vertex] = h
        return h


class BottomKSketch:
    """The ``size`` smallest hash values of a set, deletion-tolerant.

    The retained minima live in a sorted list (``size`` is small, so insort
    is effectively free); everything larger overflows into a lazy-deletion
    min-heap so deletions from the bottom part can promote the next value up.
    """

    __slots__ = ("size", "hasher", "_plus", "_plus_set", "_minus_heap", "_minus_live")

    def __init__(self, size: int, hasher: VertexHasher | None = None) -> None:
        if size < 2:
            raise SketchError(f"sketch size must be >= 2, got {size}")
        self.size = size
        self.hasher = hasher
        self._plus: list[float] = []
        self._plus_set: set[float] = set()  # mirrors _plus for O(1) membership
        self._minus_heap: list[float] = []
        self._minus_live: set[float] = set()

    def __len__(self) -> int:
        return len(self._plus) + len(self._minus_live)

    @property
    def is_full(self) -> bool:
        return len(self._plus) >= self.size

    @property
    def threshold(self) -> float:
        """Largest retained value; only meaningful when the sketch is full."""
        if not self._plus:
            raise SketchError("empty sketch has no threshold")
        return self._plus[-1]

    def smallest(self) -> list[float]:
        return list(self._plus)

    def insert(self, value: float) -> None:
        """Add one hash value (caller guarantees it is not already present)."""
        plus = self._plus
        if len(plus) < self.size:
            insort(plus, value)
            self._plus_set.add(value)
        elif value < plus[-1]:
            demoted = plus.pop()
            self._plus_set.remove(demoted)
            insort(plus, value)
            self._plus_set.add(value)
            heapq.heappush(self._minus_heap, demoted)
            self._minus_live.add(demoted)
        else:
            heapq.heappush(self._minus_heap, value)
            self._minus_live.add(value)

    def delete(self, value: float) -> None:
        """Remove one hash value, promoting from the overflow if needed."""
        plus = self._plus
        idx = bisect_left(plus, value)
        if idx < len(plus) and plus[idx] == value:
            plus.pop(idx)
            self._plus_set.remove(value)
            promoted = self._pop_min_overflow()
            if promoted is not None:
                insort(plus, promoted)
                self._plus_set.add(promoted)
            return
        if value in self._minus_live:
            self._minus_live.remove(value)  # heap entry reaped lazily
            return
        raise SketchError(f"value {value!r} not present in sketch")

    def _pop_min_overflow(self) -> float | None:
        heap = self._minus_heap
        live = self._minus_live
        while heap:
            v = heapq.heappop(heap)
            if v in live:
                live.remove(v)
                return v
        return None

    def size_estimate(self) -> float:
        """Estimated cardinality of the summarized set.

        Underfull sketches hold the whole set, so the answer is exact there;
        a full sketch reports (size - 1) / threshold.
        """
        if len(self._plus) < self.size:
            return float(len(self._plus) + len(self._minus_live))
        return (self.size - 1) / self._plus[-1]

    def check(self) -> None:
        """Debug invariants; raises on breakage."""
        plus = self._plus
        if len(plus) > self.size:
            raise SketchError("retained part exceeds sketch size")
        if any(plus[i] >= plus[i + 1] for i in range(len(plus) - 1)):
            raise SketchError("retained part not strictly sorted")
        if self._plus_set != set(plus):
            raise SketchError("membership mirror out of sync")
        if self._minus_live:
            if len(plus) < self.size:
                raise SketchError("overflow nonempty while sketch underfull")
            lo = min(self._minus_live)
            if lo < plus[-1]:
                raise SketchError("overflow value below threshold")


def _check_compatible(a: BottomKSketch, b: BottomKSketch) -> None:
    if a.size != b.size:
        raise SketchError(f"sketch sizes differ: {a.size} vs {b.size}")
    if a.hasher is not None and b.hasher is not None and a.hasher is not b.hasher:
        raise SketchError("sketches built from different hashers")


def _merged_smallest(a: BottomKSketch, b: BottomKSketch) -> list[float]:
    """Up to ``size`` smallest distinct values of the union of two sketches."""
    size = a.size
    xs, ys = a._plus, b._plus
    out: list[float] = []
    i = j = 0
    nx, ny = len(xs), len(ys)
    while len(out) < size and (i < nx or j < ny):
        if j >= ny or (i < nx and xs[i] <= ys[j]):
            v = xs[i]
            i += 1
            if j < ny and ys[j] == v:
                j += 1
        else:
            v = ys[j]
            j += 1
        out.append(v)
    return out


def union_estimate(a: BottomKSketch, b: BottomKSketch) -> float:
    """Estimated cardinality of the union of the two summarized sets."""
    _check_compatible(a, b)
    merged = _merged_smallest(a, b)
    if len(merged) < a.size:
        # only possible when both sketches are underfull, i.e. lossless
        return float(len(merged))
    return (a.size - 1) / merged[-1]


def intersection_estimate(a: BottomKSketch, b: BottomKSketch) -> float:
    """Intersection cardinality from the conditioned common sample.

    Every hash value below the smaller retained threshold is fully visible
    in both sketches, so the common ones are counted exactly and scaled by
    the threshold. Lossless when both sketches are underfull. Much tighter
    than inclusion-exclusion over three cardinality estimates, whose error
    compounds (see intersection_estimate_ie, kept for reference).
    """
    _check_compatible(a, b)
    pa, pb = a._plus, b._plus
    if not pa or not pb:
        return 0.0
    common = a._plus_set & b._plus_set
    if not a.is_full and not b.is_full:
        return float(len(common))
    if a.is_full and b.is_full:
        tau = pa[-1] if pa[-1] < pb[-1] else pb[-1]
    elif a.is_full:
        tau = pa[-1]
    else:
        tau = pb[-1]
    x = 0
    for v in common:
        if v < tau:
            x += 1
    return x / tau


def intersection_estimate_ie(a: BottomKSketch, b: BottomKSketch) -> float:
    """Inclusion-exclusion intersection estimate, clamped at zero."""
    _check_compatible(a, b)
    est = a.size_estimate() + b.size_estimate() - union_estimate(a, b)
    return est if est > 0.0 else 0.0


def union_sketch(a: BottomKSketch, b: BottomKSketch) -> BottomKSketch:
    """A (static) sketch summarizing the union of the two inputs."""
    _check_compatible(a, b)
    out = BottomKSketch(a.size, a.hasher or b.hasher)
    out._plus = _merged_smallest(a, b)
    out._plus_set = set(out._plus)
    return out


class SketchStore:
    """One bottom-k sketch per vertex, tracking immediate neighborhoods."""

    __slots__ = ("size", "hasher", "_sketches")

    def __init__(self, size: int, hasher: VertexHasher) -> None:
        self.size = size
        self.hasher = hasher
        self._sketches: dict[int, BottomKSketch] = {}

    def sketch(self, vertex: int) -> BottomKSketch:
        sk = self._sketches.get(vertex)
        if sk is None:
            sk = BottomKSketch(self.size, self.hasher)
            self._sketches[vertex] = sk
        return sk

    def on_edge_added(self, u: int, v: int) -> None:
        value = self.hasher.value
        self.sketch(u).insert(value(v))
        self.sketch(v).insert(value(u))

    def on_edge_deleted(self, u: int, v: int) -> None:
        value = self.hasher.value
        self.sketch(u).delete(value(v))
        self.sketch(v).delete(value(u))
