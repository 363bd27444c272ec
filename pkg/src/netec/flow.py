"""Unit-capacity max-flow and edge-disjoint path extraction."""

from collections import deque

from .errors import InfeasibleError, NetworkError
from .network import check_path, sort_paths


def _augment(net, a, b, flow, blocked):
    """One BFS augmenting path in the residual graph; True if flow grew.

    Edges are scanned in total order so the result is deterministic.
    """
    out_by, in_by = {}, {}
    for k, e in enumerate(net.edges):
        if k in blocked:
            continue
        out_by.setdefault(e.tail, []).append(k)
        in_by.setdefault(e.head, []).append(k)
    prev = {a: None}
    queue = deque([a])
    while queue:
        v = queue.popleft()
        if v == b:
            break
        for k in out_by.get(v, ()):
            w = net.edges[k].head
            if not flow[k] and w not in prev:
                prev[w] = (k, +1)
                queue.append(w)
        for k in in_by.get(v, ()):
            w = net.edges[k].tail
            if flow[k] and w not in prev:
                prev[w] = (k, -1)
                queue.append(w)
    if b not in prev:
        return False
    v = b
    while prev[v] is not None:
        k, sign = prev[v]
        flow[k] = sign > 0
        v = net.edges[k].tail if sign > 0 else net.edges[k].head
    return True


def _max_flow(net, a, b, blocked=frozenset(), limit=None):
    flow = [False] * net.n_edges
    value = 0
    while (limit is None or value < limit) and _augment(net, a, b, flow, blocked):
        value += 1
    return value, flow


def maxflow(net, a, b):
    """Maximum number of edge-disjoint a -> b paths."""
    if a == b:
        raise NetworkError("maxflow needs two distinct nodes")
    return _max_flow(net, a, b)[0]


def _decompose(net, a, b, flow):
    """Split a 0/1 acyclic flow into paths, always following the lowest edge."""
    flow = list(flow)
    paths = []
    while True:
        start = [k for k in net.out_edges(a) if flow[k]]
        if not start:
            return paths
        path, k = [], start[0]
        while True:
            flow[k] = False
            path.append(k)
            v = net.edges[k].head
            if v == b:
                break
            k = next(k2 for k2 in net.out_edges(v) if flow[k2])
        paths.append(tuple(path))


def disjoint_paths(net, t, r, pinned=()):
    """``r`` edge-disjoint source -> ``t`` paths, containing every pinned path.

    Remaining flow is routed around the pinned edges.  Paths come back
    ordered by their first edge.
    """
    pinned = [tuple(p) for p in pinned]
    used = set()
    for p in pinned:
        check_path(net, p, t)
        if used & set(p):
            raise NetworkError(f"pinned paths to {t!r} share an edge")
        used |= set(p)
    if len(pinned) > r:
        raise NetworkError(f"{len(pinned)} pinned paths but rank {r} for {t!r}")
    need = r - len(pinned)
    value, flow = _max_flow(net, net.source, t, blocked=frozenset(used), limit=need)
    if value < need:
        mf = maxflow(net, net.source, t)
        raise InfeasibleError(
            f"cannot route {r} edge-disjoint paths to {t!r} "
            f"(maxflow {mf}, {len(pinned)} pinned)"
        )
    paths = pinned + _decompose(net, net.source, t, flow)
    return sorted(paths, key=lambda p: p[0])


def path_set(net, ranks, pinned=None):
    """PathSet for every sink in ``ranks`` (``{sink: r_t}``)."""
    pinned = pinned or {}
    out = {}
    for t in net.sinks:
        if t not in ranks:
            continue
        out[t] = disjoint_paths(net, t, ranks[t], pinned.get(t, ()))
    return sort_paths(out)


def maxflows(net):
    return {t: maxflow(net, net.source, t) for t in net.sinks}
