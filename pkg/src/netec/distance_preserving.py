"""Distance-preserving kernel construction.

Start from a classical code on the source edges and grow the network one
edge at a time.  Each new kernel column must avoid a finite set of
hyperplanes, which keeps every sink's distance guarantee intact.
"""

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from math import comb

import numpy as np

from .budget import as_budget
from .combinatorics import colex_subsets
from .errors import FieldTooSmallError, InfeasibleError, InvariantError, ValidationError
from .flow import path_set
from .metric import Codebook, _member_mask, distance_report
from .network import prefix_expand, prefix_start, prune_to_paths
from .subspaces import avoid_hyperplanes
from .transfer import KernelSet, block_update, build_transfer


def rs_codebook(field, n_s, omega):
    """Generalized Reed-Solomon code of length ``n_s`` and dimension ``omega``.

    Points are powers of the primitive element (and 0 when n_s = q); column
    multipliers equal the point, or 1 at the zero point.  Row i holds
    v_j * a_j^i, so omega = 1 gives (1, g, g^2, ...).
    """
    q = field.q
    if n_s > q:
        raise InfeasibleError(
            f"a Reed-Solomon code of length {n_s} needs q >= {n_s}; use an extension field"
        )
    if not 1 <= omega <= n_s:
        raise ValidationError(f"dimension {omega} must lie in [1, {n_s}]")
    g = field.primitive
    points = [field.pow(g, j) for j in range(min(n_s, q - 1))]
    mult = list(points)
    if n_s == q:
        points.append(0)
        mult.append(1)
    G = np.array(
        [[field.mul(v, field.pow(a, i)) for a, v in zip(points, mult)] for i in range(omega)],
        dtype=np.int64,
    )
    return Codebook(field, G)


@dataclass
class IterationState:
    """F and the prefix network G^i after i appended edges."""

    prefix: object
    F: np.ndarray
    kernels: KernelSet

    @property
    def i(self):
        return self.prefix.i

    @property
    def n_edges(self):
        return self.prefix.n_edges


@dataclass
class Constraint:
    """New kernel column k must satisfy ``normal . k != 0``."""

    sink: str
    deleted: tuple
    pattern: tuple
    codeword: np.ndarray
    error: np.ndarray
    normal: np.ndarray


def _deletion_sets(r, j, d, mode):
    others = [c for c in range(r) if c != j]
    if mode == "empty":
        return [()]
    if mode != "all":
        raise ValidationError(f"unknown deletion-set mode {mode!r}")
    out = []
    for size in range(min(d - 1, len(others)) + 1):
        out.extend(combinations(others, size))
    return out


def forbidden_set(state, e, code, dists, deletion_sets="all", strict=True, budget=None):
    """Constraints on the kernel column of edge ``e`` (the edge being appended).

    ``state`` describes G^{i-1}.  For every sink whose j-th path uses ``e``,
    every deletion set L not containing j and every error pattern rho on the
    existing edges with |rho| = d_t - 1 - |L|, a nonzero codeword x0 and
    error z0 on rho that cancel at the surviving sink coordinates give the
    forbidden hyperplane with normal (x0 - z0) F restricted to In(tail(e)).
    Returns ``(distinct constraints, number found before de-duplication)``.
    """
    budget = as_budget(budget)
    f = code.field
    prefix = state.prefix
    net = prefix.base
    n_s = net.n_s
    n = state.n_edges
    pred = net.predecessors(e)
    G = code.generator
    omega = G.shape[0]
    F = state.F
    found = []
    for t, j in prefix.path_position(e).items():
        if t not in dists:
            continue
        d = dists[t]
        cols = list(prefix.inputs[t])
        X = f.matmul(G, F[:n_s][:, cols])
        Ft = F[:, cols]
        for L in _deletion_sets(len(cols), j, d, deletion_sets):
            keep = [c for c in range(len(cols)) if c not in L and c != j]
            for rho in colex_subsets(n, d - 1 - len(L)):
                budget.spend(1, "forbidden-set enumeration")
                M = np.vstack([X[:, keep], Ft[list(rho)][:, keep]])
                N = f.left_null_space(M)
                with_msg = [v for v in N if np.any(v[:omega])]
                if not with_msg:
                    continue
                if strict and N.shape[0] != 1:
                    raise InvariantError(
                        f"solution space of dimension {N.shape[0]} at sink {t!r}, "
                        f"L={L}, pattern {net.edge_ids(rho)}"
                    )
                sol = with_msg[0]
                a, v = sol[:omega], sol[omega:]
                if strict and not np.all(v != 0):
                    raise InvariantError(
                        f"error on pattern {net.edge_ids(rho)} has weight below |pattern|"
                    )
                x0 = f.matmul(a, G)
                z = np.zeros(n, dtype=np.int64)
                z[list(rho)] = f.neg(v)
                padded = np.zeros(n, dtype=np.int64)
                padded[:n_s] = x0
                w = f.matmul(f.sub(padded, z), F)[pred]
                if not np.any(w) and strict:
                    raise InvariantError(
                        f"constraint from sink {t!r}, L={L} has a zero normal on In(tail(e))"
                    )
                found.append(Constraint(t, tuple(L), tuple(rho), x0, z, w))
    distinct, seen = [], set()
    for c in found:
        key = f.normalize(c.normal).tobytes()
        if key not in seen:
            seen.add(key)
            distinct.append(c)
    return distinct, len(found)


def choose_kernel(field, constraints, in_degree, required_q=None):
    """Kernel column over In(tail(e)) meeting every ``normal . k != 0``.

    Zero normals (only produced in non-strict runs, once feasibility is
    already lost) cannot be met by any column and are skipped.
    """
    normals = [c.normal if isinstance(c, Constraint) else c for c in constraints]
    normals = [w for w in normals if np.any(w)]
    return avoid_hyperplanes(field, normals, in_degree, required_q=required_q)


def violated(field, constraints, column):
    return [c for c in constraints if field.dot(c.normal, column) == 0]


def feasible_check(state, code, dists, deletion_sets="all", budget=None):
    """Exhaustive check of the per-iteration invariant on G^i.

    For every sink, deletion set L with |L| <= d_t - 1, codeword class x and
    error pattern rho of size d_t - 1 - |L| on the present edges, the
    surviving coordinates of x F_{s,t} must not be explained by errors on rho.
    Returns ``(True, None)`` or ``(False, witness dict)``.
    """
    budget = as_budget(budget)
    f = code.field
    prefix = state.prefix
    net = prefix.base
    n_s = net.n_s
    n = state.n_edges
    F = state.F
    X = code.projective_codewords()
    for t, d in dists.items():
        if t not in prefix.inputs:
            continue
        cols = list(prefix.inputs[t])
        Y = f.matmul(X, F[:n_s][:, cols])
        Ft = F[:, cols]
        r = len(cols)
        Ls = [()] if deletion_sets == "empty" else [
            L for size in range(min(d - 1, r) + 1) for L in combinations(range(r), size)
        ]
        for L in Ls:
            keep = [c for c in range(r) if c not in L]
            for rho in colex_subsets(n, d - 1 - len(L)):
                budget.spend(len(X), "feasibility check")
                hit = _member_mask(f, Y[:, keep], Ft[list(rho)][:, keep])
                if hit.any():
                    row = int(np.flatnonzero(hit)[0])
                    z = np.zeros(n, dtype=np.int64)
                    if rho:
                        z[list(rho)] = f.solve_left(Ft[list(rho)][:, keep], Y[row, keep])
                    return False, {
                        "sink": t,
                        "deleted": tuple(L),
                        "codeword": X[row],
                        "pattern": tuple(rho),
                        "error": z,
                        "iteration": prefix.i,
                    }
    return True, None


def constraint_count_bound(spec, n_s, i):
    """Upper bound on distinct constraints at iteration i."""
    return sum(comb(spec.ranks[t] + n_s + i - 2, spec.dists[t] - 1) for t in spec.sinks)


def sufficient_field_size(net, spec):
    """Field size above which every iteration is guaranteed to find a kernel."""
    return sum(comb(spec.ranks[t] + net.n_edges - 2, spec.dists[t] - 1) for t in spec.sinks) + 1


@dataclass
class ConstructionResult:
    network: object
    pruned: object
    kept: list
    paths: dict
    kernels: KernelSet
    pruned_kernels: KernelSet
    transfer: object
    code: Codebook
    report: object
    trace: list = dc_field(default_factory=list)
    notes: list = dc_field(default_factory=list)
    feasible: bool = True


def construct_distance_preserving(
    net,
    spec,
    field,
    code=None,
    paths=None,
    prune=True,
    deletion_sets="all",
    kernel_overrides=None,
    strict=True,
    check=True,
    copy_forward=True,
    budget=None,
):
    """Build kernels edge by edge so that ``code`` keeps distance d_t at every sink.

    ``kernel_overrides`` maps an edge id to a forced kernel column over
    In(tail(e)); forced columns are recorded in the trace together with the
    constraints they break.  With ``strict`` the structural invariants and
    the per-iteration feasibility check raise :class:`InvariantError`.
    """
    budget = as_budget(budget)
    spec.check_network(net)
    if paths is None:
        paths = path_set(net, spec.ranks)
    paths = {t: paths[t] for t in spec.sinks}
    if prune:
        pruned, kept, ppaths = prune_to_paths(net, paths)
    else:
        pruned, kept, ppaths = net, list(range(net.n_edges)), paths
    n_s = pruned.n_s
    if code is None:
        code = rs_codebook(field, n_s, spec.omega)
    if code.n_s != n_s or not code.is_linear or code.omega != spec.omega:
        raise ValidationError(
            f"codebook must be linear with length {n_s} and dimension {spec.omega}"
        )
    overrides = {}
    for eid, col in (kernel_overrides or {}).items():
        overrides[pruned.index(eid)] = np.asarray(col, dtype=np.int64)

    notes = []
    need_q = sufficient_field_size(pruned, spec)
    if field.q < need_q:
        notes.append(
            f"below sufficient field size: q = {field.q} < {need_q}; success is not guaranteed"
        )
    state = IterationState(prefix_start(pruned, ppaths), field.eye(n_s), KernelSet())
    ok, wit = feasible_check(state, code, spec.dists, budget=budget)
    if not ok:
        raise InfeasibleError(
            f"codebook does not meet the distance targets on the source edges (sink {wit['sink']!r})"
        )
    trace, feasible = [], True
    for k in range(1, pruned.n_edges - n_s + 1):
        e = n_s + k - 1
        pred = pruned.predecessors(e)
        on_paths = state.prefix.path_position(e)
        constraints, raw = forbidden_set(
            state, e, code, spec.dists, deletion_sets=deletion_sets, strict=strict, budget=budget
        )
        bound = constraint_count_bound(spec, n_s, k)
        if len(constraints) > bound:
            raise InvariantError(f"{len(constraints)} constraints exceed the count bound {bound}")
        if e in overrides:
            col, how = overrides[e], "override"
            if col.shape[0] != len(pred):
                raise ValidationError(
                    f"override for edge {pruned.edges[e].id} needs {len(pred)} entries"
                )
        elif not on_paths or not pred:
            col, how = np.zeros(len(pred), dtype=np.int64), "zero"
        elif copy_forward and len(pred) == 1:
            col, how = np.ones(1, dtype=np.int64), "copy"
        else:
            try:
                col = choose_kernel(field, constraints, len(pred), required_q=need_q)
            except FieldTooSmallError as exc:
                raise FieldTooSmallError(
                    f"iteration {k}, edge {pruned.edges[e].id}: {exc}; q >= {need_q} suffices",
                    required_q=need_q,
                ) from exc
            how = "avoid"
        broken = violated(field, constraints, col)
        unsatisfiable = sum(1 for c in constraints if not np.any(c.normal))
        if len(broken) > unsatisfiable and how != "override":
            raise InvariantError(f"kernel for edge {pruned.edges[e].id} breaks {len(broken)} constraints")
        k_full = np.zeros(state.n_edges, dtype=np.int64)
        k_full[pred] = col
        kernels = state.kernels.copy()
        kernels.set_column(pruned, e, col)
        state = IterationState(prefix_expand(state.prefix), block_update(field, state.F, k_full), kernels)
        entry = {
            "iteration": k,
            "edge": pruned.edges[e].id,
            "gamma": len(constraints),
            "gamma_raw": raw,
            "bound": bound,
            "kernel": col.tolist(),
            "predecessors": pruned.edge_ids(pred),
            "how": how,
            "violated": len(broken),
            "unsatisfiable": unsatisfiable,
        }
        if check:
            ok, wit = feasible_check(state, code, spec.dists, deletion_sets=deletion_sets, budget=budget)
            entry["feasible"] = ok
            if not ok:
                feasible = False
                if strict:
                    raise InvariantError(f"feasibility lost at iteration {k}: {wit}")
        trace.append(entry)
    ts = build_transfer(pruned, state.kernels, field, ppaths)
    if not np.array_equal(ts.F, state.F):
        raise InvariantError("incremental transfer matrix disagrees with direct computation")
    report = distance_report(ts, code, budget)
    return ConstructionResult(
        network=net,
        pruned=pruned,
        kept=kept,
        paths=ppaths,
        kernels=state.kernels.lift(kept),
        pruned_kernels=state.kernels,
        transfer=ts,
        code=code,
        report=report,
        trace=trace,
        notes=notes,
        feasible=feasible,
    )
