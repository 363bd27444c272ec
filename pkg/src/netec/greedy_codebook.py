"""Kernel construction for rank targets, then a greedy codebook whose span
avoids every low-weight confusion set (refined-Singleton tight codes)."""

from math import comb

import numpy as np

from .budget import as_budget
from .combinatorics import colex_subsets
from .errors import FieldTooSmallError, InfeasibleError
from .flow import path_set
from .metric import Codebook, delta_union
from .subspaces import avoid_subspaces, in_subspace
from .transfer import KernelSet, build_transfer


def build_kernels(net, ranks, field, paths=None):
    """Kernels giving rank(F_{s,t}) = r_t at every sink in ``ranks``.

    Each sink keeps one frontier edge per path; a new edge's kernel keeps the
    frontier coding vectors independent for every sink routing through it.
    Edges on no path get zero kernels.  Returns ``(kernels, paths)``.
    """
    if paths is None:
        paths = path_set(net, ranks)
    n_s = net.n_s
    gcv = {k: np.eye(n_s, dtype=np.int64)[k] for k in range(n_s)}
    frontier = {t: [p[0] for p in paths[t]] for t in paths}
    position = {}
    for t, plist in paths.items():
        for j, p in enumerate(plist):
            for k in p:
                position.setdefault(k, []).append((t, j))
    kernels = KernelSet()
    for e in range(n_s, net.n_edges):
        pred = net.predecessors(e)
        if e not in position or not pred:
            gcv[e] = np.zeros(n_s, dtype=np.int64)
            continue
        M = np.array([gcv[a] for a in pred])
        avoid = []
        for t, j in position[e]:
            others = [gcv[k] for i, k in enumerate(frontier[t]) if i != j]
            W = np.array(others).reshape(-1, n_s)
            N = field.right_null_space(W) if W.shape[0] else field.eye(n_s)
            avoid.append(field.left_null_space(field.matmul(M, N.T)))
        try:
            beta = avoid_subspaces(field, avoid, len(pred), required_q=len(net.sinks) + 1)
        except FieldTooSmallError as exc:
            raise FieldTooSmallError(
                f"edge {net.edges[e].id}: {exc}", required_q=len(net.sinks) + 1
            ) from exc
        kernels.set_column(net, e, beta)
        gcv[e] = field.matmul(beta, M)
        for t, j in position[e]:
            frontier[t][j] = e
    return kernels, paths


def sufficient_field_size(net, spec):
    """Field size above which a greedy codebook is guaranteed to exist."""
    return sum(comb(net.n_edges, spec.ranks[t] - spec.omega) for t in spec.sinks) + 1


def confusion_subspaces(ts, spec, budget=None):
    """Delta_t(0, d_t - 1) decomposed as a list of subspaces (bases as rows).

    One subspace per sink and error pattern of size d_t - 1: the inputs whose
    image is explained by errors on that pattern.  Duplicates are dropped.
    """
    budget = as_budget(budget)
    f = ts.field
    seen, out = set(), []
    for t in spec.sinks:
        Fst, Ft = ts.F_st(t), ts.F_t(t)
        for rho in colex_subsets(ts.n_edges, spec.dists[t] - 1):
            budget.spend(1, "confusion subspace enumeration")
            stacked = np.vstack([Fst, Ft[list(rho)]])
            N = f.left_null_space(stacked)
            S = f.row_basis(N[:, : ts.n_s]) if N.shape[0] else N[:, : ts.n_s]
            key = S.tobytes() + bytes([S.shape[0]])
            if key not in seen:
                seen.add(key)
                out.append(S)
    return out


def build_codebook(ts, spec, randomized=False, seed=None, budget=None, tries=1000):
    """Generator rows g_1..g_omega with span(g_1..g_i) meeting no confusion set.

    The default search is the deterministic hyperplane construction with an
    exhaustive-scan fallback; ``randomized`` draws candidates from a seeded
    generator instead.  The field is never enlarged silently: failure raises
    :class:`FieldTooSmallError` carrying the guaranteed-sufficient size.
    """
    budget = as_budget(budget)
    f = ts.field
    n_s = ts.n_s
    need_q = sufficient_field_size(ts.net, spec)
    spaces = confusion_subspaces(ts, spec, budget)
    for S in spaces:
        if S.shape[0] == n_s:
            raise InfeasibleError(
                "for some sink every input is confusable with zero; rank target not met"
            )
    rng = np.random.default_rng(seed) if randomized else None
    rows = []
    for i in range(spec.omega):
        G = np.array(rows).reshape(-1, n_s)
        shifted = [np.vstack([S, G]) for S in spaces] or [G]
        try:
            if randomized:
                g = _random_outside(f, shifted, n_s, rng, tries, budget)
            else:
                g = avoid_subspaces(f, shifted, n_s, required_q=need_q)
        except (FieldTooSmallError, InfeasibleError) as exc:
            raise FieldTooSmallError(
                f"no eligible generator row {i + 1} of {spec.omega} over GF({f.q}): {exc}; "
                f"q >= {need_q} suffices",
                required_q=need_q,
            ) from exc
        rows.append(g)
    return Codebook(f, np.array(rows))


def _random_outside(field, bases, n, rng, tries, budget):
    for _ in range(tries):
        budget.spend(1, "random generator search")
        u = rng.integers(0, field.q, size=n)
        if np.any(u) and not any(in_subspace(field, u, B) for B in bases):
            return u
    raise FieldTooSmallError(f"no candidate found in {tries} random draws")


def greedy_gilbert_codebook(ts, dists, budget=None):
    """Nonlinear greedy code: scan F^{n_s} in packed order, keeping x whenever
    x - c lies outside Delta(0) for every kept codeword c.

    On termination every vector is within the confusion ball of some
    codeword, so the size is at least q^{n_s} / |Delta(0)|.
    """
    budget = as_budget(budget)
    f = ts.field
    delta = np.fromiter(delta_union(ts, {t: d - 1 for t, d in dists.items()}, budget), dtype=np.int64)
    X = f.all_vectors(ts.n_s)
    budget.spend(len(X), "greedy codebook scan")
    kept = []
    for x in X:
        if kept:
            diffs = f.pack(f.sub(x[None, :], np.array(kept)))
            if np.isin(diffs, delta).any():
                continue
        kept.append(x)
    return Codebook(f, codewords=np.array(kept))


def construct_greedy(net, spec, field, paths=None, randomized=False, seed=None, budget=None):
    """Kernels for the rank targets, then a codebook for the distance targets.

    Returns ``(kernels, paths, transfer set, codebook)``.
    """
    spec.check_network(net)
    kernels, paths = build_kernels(net, spec.ranks, field, paths)
    ts = build_transfer(net, kernels, field, paths)
    code = build_codebook(ts, spec, randomized=randomized, seed=seed, budget=budget)
    return kernels, paths, ts, code
