"""Acyclic multicast networks, edge ordering, indicator matrices and the
prefix-network sequence used by the distance-preserving construction.

Edges are referred to by their position in the network's total order
(0-based) everywhere inside the package; string identifiers are kept only
for I/O.
"""

import heapq
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import NetworkError


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str


@dataclass(frozen=True)
class Network:
    """A DAG with a source and sinks; ``edges`` is already in total order.

    The first ``n_s`` edges are exactly ``Out(source)``.  Build instances with
    :func:`parse_network` or :meth:`from_edges` so the order is validated.
    """

    nodes: tuple
    edges: tuple
    source: str
    sinks: tuple
    _index: dict = field(default=None, repr=False, compare=False)

    @classmethod
    def from_edges(cls, edges, source, sinks, nodes=()):
        """Validate and put raw ``(id, tail, head)`` triples into total order."""
        raw = [e if isinstance(e, Edge) else Edge(*map(str, e)) for e in edges]
        ids = [e.id for e in raw]
        dup = {i for i in ids if ids.count(i) > 1}
        if dup:
            raise NetworkError(f"duplicate edge identifiers: {sorted(dup)}")
        node_list = list(dict.fromkeys([str(n) for n in nodes] + [source]))
        for e in raw:
            for v in (e.tail, e.head):
                if v not in node_list:
                    node_list.append(v)
        source = str(source)
        sinks = tuple(dict.fromkeys(str(t) for t in sinks))
        for t in sinks:
            if t not in node_list:
                raise NetworkError(f"unknown sink {t!r}")
            if t == source:
                raise NetworkError("the source cannot also be a sink")
        if any(e.head == source for e in raw):
            raise NetworkError(f"source {source!r} has incoming edges")
        if any(e.tail == e.head for e in raw):
            raise NetworkError("self-loops are cycles")
        order = _stable_edge_order(raw, source)
        ordered = tuple(raw[i] for i in order)
        index = {e.id: k for k, e in enumerate(ordered)}
        return cls(tuple(node_list), ordered, source, sinks, index)

    # -- basic queries -------------------------------------------------------

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def n_s(self):
        return sum(1 for e in self.edges if e.tail == self.source)

    def index(self, edge_id):
        try:
            return self._index[str(edge_id)]
        except KeyError:
            raise NetworkError(f"unknown edge {edge_id!r}") from None

    def edge_ids(self, indices):
        return [self.edges[i].id for i in indices]

    def in_edges(self, node):
        return [k for k, e in enumerate(self.edges) if e.head == node]

    def out_edges(self, node):
        return [k for k, e in enumerate(self.edges) if e.tail == node]

    def predecessors(self, k):
        """In(tail(e_k)): the edges whose symbols edge ``k`` may combine."""
        return self.in_edges(self.edges[k].tail)

    def to_text(self):
        lines = [f"node {v}" for v in self.nodes]
        lines += [f"edge {e.id} {e.tail} {e.head}" for e in self.edges]
        lines.append(f"source {self.source}")
        lines += [f"sink {t}" for t in self.sinks]
        return "\n".join(lines) + "\n"


def _stable_edge_order(edges, source):
    """Total order extending the edge partial order.

    Out(source) comes first in input order; afterwards the ready edge with
    the smallest input position is taken, so an input listing that already
    is a valid order is returned unchanged.
    """
    n = len(edges)
    incoming = {}
    for k, e in enumerate(edges):
        incoming.setdefault(e.head, []).append(k)
    remaining_in = {v: len(ks) for v, ks in incoming.items()}
    placed = [False] * n
    order = [k for k, e in enumerate(edges) if e.tail == source]
    for k in order:
        placed[k] = True
    for k in order:
        remaining_in[edges[k].head] -= 1
    heap = [k for k, e in enumerate(edges) if not placed[k] and remaining_in.get(e.tail, 0) == 0]
    heapq.heapify(heap)
    queued = set(heap)
    while heap:
        k = heapq.heappop(heap)
        order.append(k)
        placed[k] = True
        head = edges[k].head
        remaining_in[head] -= 1
        if remaining_in[head] == 0:
            for k2, e2 in enumerate(edges):
                if e2.tail == head and not placed[k2] and k2 not in queued:
                    heapq.heappush(heap, k2)
                    queued.add(k2)
    if len(order) != n:
        stuck = sorted({edges[k].tail for k in range(n) if not placed[k]})
        raise NetworkError(f"network has a directed cycle through nodes {stuck}")
    return order


def edge_total_order(net):
    """Positions (into ``net.edges``) listing the edges in total order.

    For a :class:`Network` this is the identity, since construction already
    canonicalises; exposed for checking arbitrary edge lists.
    """
    if isinstance(net, Network):
        return _stable_edge_order(list(net.edges), net.source)
    edges, source = net
    return _stable_edge_order([e if isinstance(e, Edge) else Edge(*e) for e in edges], source)


def parse_network(text):
    """Parse the line-oriented network format.

    ``node <id>``, ``edge <id> <tail> <head>``, ``source <id>``,
    ``sink <id>`` (repeatable); ``#`` starts a comment.  Edge listing
    order is the tie-break order.
    """
    nodes, edges, sinks, source = [], [], [], None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kw = parts[0]
        if kw == "node" and len(parts) == 2:
            nodes.append(parts[1])
        elif kw == "edge" and len(parts) == 4:
            edges.append(tuple(parts[1:]))
        elif kw == "source" and len(parts) == 2:
            if source is not None and source != parts[1]:
                raise NetworkError(f"line {lineno}: second source {parts[1]!r}")
            source = parts[1]
        elif kw == "sink" and len(parts) >= 2:
            sinks.extend(parts[1:])
        else:
            raise NetworkError(f"line {lineno}: cannot parse {raw.strip()!r}")
    if source is None:
        raise NetworkError("no source declared")
    if not sinks:
        raise NetworkError("no sink declared")
    return Network.from_edges(edges, source, sinks, nodes)


def load_network(path):
    with open(path) as fh:
        return parse_network(fh.read())


def fixture_text(name):
    """Text of a bundled fixture file (``butterfly.net``, ``two_sink.net``, ...)."""
    return resources.files("netec.data").joinpath(name).read_text()


def load_fixture(name):
    return parse_network(fixture_text(name if name.endswith(".net") else name + ".net"))


def indicator_matrix(net_or_size, rho):
    """A |rho| x |E| 0/1 matrix; row i marks the i-th edge of ``rho`` in edge order."""
    n = net_or_size.n_edges if isinstance(net_or_size, Network) else int(net_or_size)
    rows = sorted(rho)
    A = np.zeros((len(rows), n), dtype=np.int64)
    for i, k in enumerate(rows):
        A[i, k] = 1
    return A


# -- paths -----------------------------------------------------------------


def check_path(net, path, sink):
    """Raise unless ``path`` (edge indices) is a directed s -> sink path."""
    if not path:
        raise NetworkError("empty path")
    if net.edges[path[0]].tail != net.source:
        raise NetworkError(f"path {net.edge_ids(path)} does not start at the source")
    if net.edges[path[-1]].head != sink:
        raise NetworkError(f"path {net.edge_ids(path)} does not end at {sink!r}")
    for a, b in zip(path, path[1:]):
        if net.edges[a].head != net.edges[b].tail:
            raise NetworkError(f"path {net.edge_ids(path)} is not contiguous")


def check_path_set(net, paths):
    """Validate a ``{sink: [path, ...]}`` mapping (edge-disjoint per sink)."""
    for t, plist in paths.items():
        seen = set()
        for path in plist:
            check_path(net, path, t)
            if seen & set(path):
                raise NetworkError(f"paths to {t!r} share an edge")
            seen |= set(path)


def sort_paths(paths):
    """Order each sink's paths by the position of their first edge."""
    return {t: sorted((tuple(p) for p in plist), key=lambda p: p[0]) for t, plist in paths.items()}


def parse_paths(text, net):
    """``path <sink> <edge-id> <edge-id> ...`` lines -> ``{sink: [edge indices]}``."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != "path" or len(parts) < 3:
            raise NetworkError(f"line {lineno}: expected 'path <sink> <edge> ...'")
        sink = parts[1]
        if sink not in net.sinks:
            raise NetworkError(f"line {lineno}: unknown sink {sink!r}")
        out.setdefault(sink, []).append(tuple(net.index(e) for e in parts[2:]))
    check_path_set(net, out)
    return out


def paths_to_text(net, paths):
    lines = []
    for t in net.sinks:
        for p in paths.get(t, ()):
            lines.append("path " + t + " " + " ".join(net.edge_ids(p)))
    return "\n".join(lines) + "\n"


def prune_to_paths(net, paths):
    """Drop edges on no chosen path; Out(source) is always kept.

    Returns ``(pruned, kept, new_paths)`` where ``kept[i]`` is the original
    index of pruned edge ``i``.  Kernels of dropped edges are implicitly zero.
    """
    used = {k for plist in paths.values() for p in plist for k in p}
    kept = [k for k, e in enumerate(net.edges) if k in used or e.tail == net.source]
    sub = Network.from_edges([net.edges[k] for k in kept], net.source, net.sinks)
    remap = {net.edges[k].id: sub.index(net.edges[k].id) for k in kept}
    new_paths = {
        t: [tuple(remap[net.edges[k].id] for k in p) for p in plist] for t, plist in paths.items()
    }
    kept = [net.index(e.id) for e in sub.edges]
    nodes = tuple(v for v in net.nodes if any(v in (e.tail, e.head) for e in sub.edges) or v in net.sinks)
    sub = Network(nodes, sub.edges, sub.source, sub.sinks, sub._index)
    return sub, kept, sort_paths(new_paths)


# -- prefix networks G^i -----------------------------------------------------


@dataclass(frozen=True)
class PrefixNetwork:
    """G^i: Out(s) plus the next ``i`` edges; ``inputs[t][j]`` is the most
    downstream present edge of path ``j`` to sink ``t``."""

    base: Network
    paths: dict
    i: int
    inputs: dict

    @property
    def n_edges(self):
        return self.base.n_s + self.i

    @property
    def last_edge(self):
        return self.n_edges - 1

    def is_complete(self):
        return self.n_edges == self.base.n_edges

    def path_position(self, k):
        """``{sink: j}`` for each sink whose j-th path uses edge ``k``."""
        return {t: j for t, plist in self.paths.items() for j, p in enumerate(plist) if k in p}

    def indicator(self, t):
        """A_In(t) for G^i: one row per path, columns over the n_s+i edges."""
        A = np.zeros((len(self.inputs[t]), self.n_edges), dtype=np.int64)
        for j, k in enumerate(self.inputs[t]):
            A[j, k] = 1
        return A


def prefix_start(net, paths):
    """G^0 for ``net`` with the chosen (sorted) paths."""
    paths = sort_paths(paths)
    n_s = net.n_s
    for t, plist in paths.items():
        for p in plist:
            if p[0] >= n_s:
                raise NetworkError("path does not start in Out(s)")
    inputs = {t: tuple(p[0] for p in plist) for t, plist in paths.items()}
    return PrefixNetwork(net, paths, 0, inputs)


def prefix_expand(prev):
    """Append the next edge; update In(t) entries of the paths it lies on."""
    if prev.is_complete():
        raise NetworkError("prefix network is already complete")
    k = prev.n_edges
    inputs = dict(prev.inputs)
    for t, j in prev.path_position(k).items():
        row = list(inputs[t])
        row[j] = k
        inputs[t] = tuple(row)
    return PrefixNetwork(prev.base, prev.paths, prev.i + 1, inputs)
