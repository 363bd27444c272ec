"""Local encoding kernels and the transfer matrices they induce."""

import numpy as np

from .errors import NetworkError, ValidationError


class KernelSet:
    """Sparse map ``(e_in, e_out) -> scalar`` over edge indices.

    Missing pairs are zero.  Entries are only legal when ``e_in`` enters the
    tail of ``e_out`` and ``e_out`` does not leave the source.
    """

    def __init__(self, entries=None):
        self.beta = {}
        for (a, b), v in dict(entries or {}).items():
            if int(v):
                self.beta[(int(a), int(b))] = int(v)

    def __getitem__(self, pair):
        return self.beta.get(pair, 0)

    def __setitem__(self, pair, value):
        if int(value):
            self.beta[pair] = int(value)
        else:
            self.beta.pop(pair, None)

    def __eq__(self, other):
        return isinstance(other, KernelSet) and self.beta == other.beta

    def __len__(self):
        return len(self.beta)

    def __repr__(self):
        return f"KernelSet({dict(sorted(self.beta.items()))})"

    def copy(self):
        return KernelSet(self.beta)

    def column(self, net, e):
        """k_e restricted to In(tail(e)), in edge order."""
        return np.array([self[(a, e)] for a in net.predecessors(e)], dtype=np.int64)

    def set_column(self, net, e, values):
        for a, v in zip(net.predecessors(e), values):
            self[(a, e)] = int(v)

    def validate(self, net, field=None):
        n_s = net.n_s
        for (a, b), v in self.beta.items():
            if not (0 <= a < net.n_edges and 0 <= b < net.n_edges):
                raise NetworkError(f"kernel references unknown edge index ({a}, {b})")
            if b < n_s:
                raise NetworkError(f"edge {net.edges[b].id} leaves the source and takes no kernel")
            if net.edges[a].head != net.edges[b].tail:
                raise NetworkError(
                    f"kernel on non-adjacent pair ({net.edges[a].id}, {net.edges[b].id})"
                )
            if field is not None and not (0 <= v < field.q):
                raise ValidationError(f"kernel value {v} is not an element of {field}")

    def restrict(self, kept):
        """Kernels of a pruned network; ``kept[i]`` is the original index of edge i."""
        back = {old: new for new, old in enumerate(kept)}
        return KernelSet(
            {(back[a], back[b]): v for (a, b), v in self.beta.items() if a in back and b in back}
        )

    def lift(self, kept):
        """Inverse of :meth:`restrict`: re-index onto the unpruned network."""
        return KernelSet({(kept[a], kept[b]): v for (a, b), v in self.beta.items()})


def copy_forward(net, kernels=None, overrides=()):
    """Fill kernel 1 on edges whose tail has exactly one incoming edge.

    Pairs already present, or listed in ``overrides``, are left alone.
    """
    ks = kernels.copy() if kernels is not None else KernelSet()
    skip = set(overrides)
    for e in range(net.n_s, net.n_edges):
        pred = net.predecessors(e)
        if len(pred) == 1 and (pred[0], e) not in ks.beta and (pred[0], e) not in skip:
            ks[(pred[0], e)] = 1
    return ks


def parse_kernels(text, net):
    """``kernel <e_in> <e_out> <scalar>`` lines, edge ids as in the network file."""
    ks = KernelSet()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != "kernel" or len(parts) != 4:
            raise ValidationError(f"line {lineno}: expected 'kernel <e_in> <e_out> <scalar>'")
        try:
            value = int(parts[3])
        except ValueError:
            raise ValidationError(f"line {lineno}: scalar {parts[3]!r} is not an integer") from None
        ks[(net.index(parts[1]), net.index(parts[2]))] = value
    ks.validate(net)
    return ks


def kernels_to_text(ks, net):
    lines = [
        f"kernel {net.edges[a].id} {net.edges[b].id} {v}"
        for (a, b), v in sorted(ks.beta.items(), key=lambda kv: (kv[0][1], kv[0][0]))
    ]
    return "\n".join(lines) + "\n"


def one_step_matrix(net, kernels, field):
    K = field.zeros(net.n_edges, net.n_edges)
    for (a, b), v in kernels.beta.items():
        K[a, b] = v
    return K


def transfer_matrix(net, kernels, field):
    """F = (I - K)^-1 by forward substitution: F[:, j] = e_j + sum_c beta[c, j] F[:, c]."""
    n = net.n_edges
    F = field.eye(n)
    incoming = {}
    for (a, b), v in kernels.beta.items():
        incoming.setdefault(b, []).append((a, v))
    for j in range(n):
        col = F[:, j]
        for a, v in incoming.get(j, ()):
            col = field.add(col, field.mul(v, F[:, a]))
        F[:, j] = col
    return F


def block_update(field, F_prev, k_e):
    """Extend F by one edge whose kernel column (over all previous edges) is ``k_e``."""
    F_prev = np.asarray(F_prev, dtype=np.int64)
    k_e = np.asarray(k_e, dtype=np.int64).reshape(-1)
    n = F_prev.shape[0]
    if F_prev.shape != (n, n) or k_e.shape[0] != n:
        raise ValidationError(f"block update size mismatch: F is {F_prev.shape}, k_e has {k_e.shape[0]}")
    out = field.zeros(n + 1, n + 1)
    out[:n, :n] = F_prev
    out[:n, n] = field.matmul(F_prev, k_e)
    out[n, n] = 1
    return out


class TransferSet:
    """K, F and the per-sink views F_{s,t} = F[Out(s), In(t)] and F_t = F[:, In(t)].

    ``inputs[t]`` lists the edges observed by sink t; by default every edge
    entering t, or the path-terminal edges when a path set is supplied.
    """

    def __init__(self, net, kernels, field, inputs=None):
        kernels.validate(net, field)
        self.net = net
        self.field = field
        self.kernels = kernels
        self.K = one_step_matrix(net, kernels, field)
        self.F = transfer_matrix(net, kernels, field)
        if inputs is None:
            inputs = {t: tuple(net.in_edges(t)) for t in net.sinks}
        self.inputs = {t: tuple(v) for t, v in inputs.items()}
        self._cache = {}

    @property
    def n_s(self):
        return self.net.n_s

    @property
    def n_edges(self):
        return self.net.n_edges

    @property
    def sinks(self):
        return tuple(t for t in self.net.sinks if t in self.inputs)

    def F_st(self, t):
        key = ("st", t)
        if key not in self._cache:
            self._cache[key] = self.F[: self.n_s][:, list(self.inputs[t])]
        return self._cache[key]

    def F_t(self, t):
        key = ("t", t)
        if key not in self._cache:
            self._cache[key] = self.F[:, list(self.inputs[t])]
        return self._cache[key]

    def rank(self, t):
        key = ("rank", t)
        if key not in self._cache:
            self._cache[key] = self.field.rank(self.F_st(t))
        return self._cache[key]

    def ranks(self):
        return {t: self.rank(t) for t in self.sinks}

    def received(self, t, x, z=None):
        return received(self, t, x, z)


def build_transfer(net, kernels, field, paths=None):
    """TransferSet for ``net``; with ``paths`` the sinks observe path-terminal edges."""
    inputs = None
    if paths is not None:
        inputs = {t: tuple(p[-1] for p in plist) for t, plist in paths.items()}
    return TransferSet(net, kernels, field, inputs)


def received(ts, t, x, z=None):
    """x F_{s,t} + z F_t."""
    f = ts.field
    x = np.asarray(x, dtype=np.int64).reshape(-1)
    if x.shape[0] != ts.n_s:
        raise ValidationError(f"codeword has length {x.shape[0]}, expected {ts.n_s}")
    y = f.matmul(x, ts.F_st(t))
    if z is not None:
        z = np.asarray(z, dtype=np.int64).reshape(-1)
        if z.shape[0] != ts.n_edges:
            raise ValidationError(f"error vector has length {z.shape[0]}, expected {ts.n_edges}")
        y = f.add(y, f.matmul(z, ts.F_t(t)))
    return y
