"""Population deltas per edge event: exact and sketch-based counts of the
subgraphs an insertion creates or a deletion destroys, and uniform sampling
of the newly created ones."""

from __future__ import annotations

import random
from math import comb

from .graph import DynamicLabeledGraph, GraphError, SubgraphInstance, is_connected
from .sketch import (
    BottomKSketch,
    SketchStore,
    intersection_estimate,
    union_sketch,
)


def _exclusive_thirds(g: DynamicLabeledGraph, u: int, v: int):
    """Vertices adjacent to exactly one endpoint (the size-3 delta carriers)."""
    nu = g.adj.get(u) or {}
    nv = g.adj.get(v) or {}
    ex_u = nu.keys() - nv.keys() - {v}
    ex_v = nv.keys() - nu.keys() - {u}
    return ex_u, ex_v


def new_vertex_sets(g: DynamicLabeledGraph, u: int, v: int, k: int) -> list[tuple[int, ...]]:
    """Vertex sets whose induced subgraph is connected only through (u, v).

    ``g`` may hold the (u, v) edge or not; either way the answer is the set
    of k-sets that the edge's presence newly connects. Sorted deterministic
    order.
    """
    if k == 3:
        ex_u, ex_v = _exclusive_thirds(g, u, v)
        out = [tuple(sorted((u, v, w))) for w in ex_u]
        out.extend(tuple(sorted((u, v, w))) for w in ex_v)
        out.sort()
        return out
    edge_present = g.has_edge(u, v)
    out = []
    for vset in g.candidate_vertex_sets(u, v, k):
        inst = g.induced_subgraph(vset)
        if edge_present:
            inst = inst.without_edge(u, v)
        if not is_connected(inst):
            out.append(vset)
    return out


def compute_w_exact(g: DynamicLabeledGraph, u: int, v: int, k: int) -> int:
    """Exact count of k-subgraphs that inserting (u, v) newly connects.

    ``g`` is the state before the insertion (the edge must be absent).
    """
    if g.has_edge(u, v):
        raise GraphError(f"edge ({u}, {v}) already present")
    if k == 3:
        ex_u, ex_v = _exclusive_thirds(g, u, v)
        return len(ex_u) + len(ex_v)
    return len(new_vertex_sets(g, u, v, k))


def compute_d_exact(g: DynamicLabeledGraph, u: int, v: int, k: int) -> int:
    """Exact count of k-subgraphs that deleting (u, v) disconnected.

    ``g`` is the state after the deletion; the computation mirrors the
    insertion count on the edge-absent graph.
    """
    if g.has_edge(u, v):
        raise GraphError(f"edge ({u}, {v}) still present")
    if k == 3:
        ex_u, ex_v = _exclusive_thirds(g, u, v)
        return len(ex_u) + len(ex_v)
    return len(new_vertex_sets(g, u, v, k))


def materialize_new_instance(
    g: DynamicLabeledGraph,
    vset: tuple[int, ...],
    u: int,
    v: int,
    edge_label: int,
) -> SubgraphInstance:
    """Induced instance for a newly connected set, including the (u, v) edge."""
    inst = g.induced_subgraph(vset)
    if not g.has_edge(u, v):
        inst = inst.with_edge(u, v, edge_label)
    return inst


def sample_new_subgraph(
    g: DynamicLabeledGraph,
    u: int,
    v: int,
    k: int,
    count: int,
    rng: random.Random,
    edge_label: int,
) -> list[SubgraphInstance]:
    """Uniformly sample, without replacement, ``count`` of the subgraphs the
    (u, v) insertion newly connects, materialized with their post-insertion
    induced edges."""
    sets = new_vertex_sets(g, u, v, k)
    if count > len(sets):
        raise ValueError(f"asked for {count} new subgraphs, only {len(sets)} exist")
    chosen = rng.sample(sets, count)
    return [materialize_new_instance(g, vset, u, v, edge_label) for vset in chosen]


def _exact_delta_current(g: DynamicLabeledGraph, u: int, v: int) -> int:
    """Size-3 delta from the current adjacency, edge present or not: the
    vertices adjacent to exactly one endpoint, per side."""
    nu = g.adj.get(u)
    nv = g.adj.get(v)
    du = len(nu) if nu else 0
    dv = len(nv) if nv else 0
    if du == 0 and dv == 0:
        return 0
    if du == 0 or dv == 0:
        delta = du + dv
    else:
        delta = len(nu.keys() - nv.keys()) + len(nv.keys() - nu.keys())
    if nu and v in nu:
        delta -= 2  # the endpoints sit in each other's exclusive sets
    return max(0, delta)


def _multi_hop_sketch(
    store: SketchStore, g: DynamicLabeledGraph, root: int, hops: int
) -> BottomKSketch:
    """Sketch of the 1..hops-hop neighborhood of ``root``.

    Folds the per-vertex sketches along a breadth-first frontier; coarse by
    construction (frontier membership is read from the graph, values from
    the sketches)."""
    acc = store.sketch(root)
    if hops <= 1:
        return acc
    seen = {root}
    frontier = [root]
    for _ in range(hops - 1):
        nxt: list[int] = []
        for x in frontier:
            for y in g.adj.get(x, {}):
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        for y in nxt:
            acc = union_sketch(acc, store.sketch(y))
        if not nxt:
            break
        frontier = nxt
    return acc


def _approx_delta(
    store: SketchStore, g: DynamicLabeledGraph, u: int, v: int, k: int, edge_present: bool
) -> float:
    if k == 3:
        deg_u, deg_v = g.degree(u), g.degree(v)
        if deg_u <= store.size and deg_v <= store.size:
            # both sketches are underfull, hence lossless; count exactly
            return float(_exact_delta_current(g, u, v))
        sk_u = store.sketch(u)
        sk_v = store.sketch(v)
        inter = intersection_estimate(sk_u, sk_v)
        est = sk_u.size_estimate() + sk_v.size_estimate() - 2.0 * inter
        if edge_present:
            est -= 2.0
        return max(0.0, est)
    # Larger sizes: coarse composition over the hop splits. Per split, count
    # vertex choices from each endpoint's exclusive reach; tight only for
    # size 3, which is the supported hot path.
    total = 0.0
    for h in range(k - 1):
        j = k - 2 - h
        sk_u = _multi_hop_sketch(store, g, u, max(h, 1))
        sk_v = _multi_hop_sketch(store, g, v, max(j, 1))
        inter = intersection_estimate(sk_u, sk_v)
        n_u = max(0.0, sk_u.size_estimate() - inter - (1.0 if edge_present else 0.0))
        n_v = max(0.0, sk_v.size_estimate() - inter - (1.0 if edge_present else 0.0))
        x = comb(int(n_u), h) if h > 0 else 1
        y = comb(int(n_v), j) if j > 0 else 1
        total += x * y
    return total


def compute_w_approx(
    store: SketchStore, g: DynamicLabeledGraph, u: int, v: int, k: int
) -> float:
    """Sketch-based estimate of the insertion delta.

    Expects the current state: the (u, v) edge and the sketch updates for it
    are already applied, hence the degree correction for the endpoints."""
    if not g.has_edge(u, v):
        raise GraphError(f"edge ({u}, {v}) not present; apply the insertion first")
    return _approx_delta(store, g, u, v, k, edge_present=True)


def compute_d_approx(
    store: SketchStore, g: DynamicLabeledGraph, u: int, v: int, k: int
) -> float:
    """Sketch-based estimate of the deletion delta (edge already removed)."""
    if g.has_edge(u, v):
        raise GraphError(f"edge ({u}, {v}) still present; apply the deletion first")
    return _approx_delta(store, g, u, v, k, edge_present=False)
