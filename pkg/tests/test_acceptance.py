"""End-to-end acceptance checks.

Each test records one PASS/FAIL line; the lines are printed in the terminal
summary (and by running this file directly).
"""

import functools
import time
from itertools import combinations, product
from math import comb

import numpy as np
import pytest

from netec.bounds import bounds_report, gilbert_varshamov, refined_hamming
from netec.codespec import CodeSpec
from netec.decode import error_sweep
from netec.distance_preserving import (
    IterationState,
    construct_distance_preserving,
    feasible_check,
    forbidden_set,
    constraint_count_bound,
)
from netec.flow import maxflows
from netec.gf import GF
from netec.greedy_codebook import construct_greedy, build_kernels, greedy_gilbert_codebook
from netec.metric import Codebook, delta_set, distance_report, dmin, hamming_dmin, phi_set
from netec.network import fixture_text, load_fixture, parse_network, parse_paths, prefix_expand, prefix_start
from netec.transfer import KernelSet, block_update, build_transfer, parse_kernels, received

RESULTS = {}

A, A2 = 2, 3  # alpha and alpha^2 in GF(4)
TWO_SINK_SPEC = CodeSpec.singleton_tight(1, {"t": 3, "u": 3})
EDGE6 = [(1, 0, 0), (A2, 1, 0), (A2, 0, A), (A2, 1, A), (0, 1, 0), (0, 1, A), (A2, 1, 0), (A2, 1, A)]
EDGE7 = [(0, 0, 1), (A2, 0, A), (1, 1, A), (A2, A2, A), (A2, 0, A), (A2, 1, A),
         (1, 1, 0), (A2, 1, 0), (A2, A2, A), (A2, 1, A)]


def criterion(number, title, seconds=None):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            try:
                fn(*args, **kwargs)
                elapsed = time.perf_counter() - start
                if seconds is not None:
                    assert elapsed < seconds, f"took {elapsed:.2f} s, limit {seconds} s"
            except BaseException as exc:
                RESULTS[number] = f"FAIL criterion {number}: {title} ({exc})"
                raise
            RESULTS[number] = f"PASS criterion {number}: {title} ({elapsed:.2f} s)"

        return run

    return wrap


def projective(field, vectors):
    return {tuple(field.normalize(np.asarray(v, dtype=np.int64)).tolist()) for v in vectors}


def two_sink_setup():
    net = load_fixture("two_sink")
    paths = parse_paths(fixture_text("two_sink.paths"), net)
    f = GF(2, 2)
    return net, paths, f, Codebook(f, [[1, A, A2]])


def state_before(net, paths, kernels, field, edge_id):
    state = IterationState(prefix_start(net, paths), field.eye(net.n_s), KernelSet())
    for e in range(net.n_s, net.index(edge_id)):
        col = np.zeros(e, dtype=np.int64)
        for a in net.predecessors(e):
            col[a] = kernels[(a, e)]
        state = IterationState(prefix_expand(state.prefix), block_update(field, state.F, col), kernels)
    return state


def explicit_dmin(ts, t, code, max_weight):
    """Distance by enumerating concrete error vectors, independent of the metric module."""
    f = ts.field
    targets = {tuple(f.matmul(x, ts.F_st(t)).tolist()) for x in code.codewords() if np.any(x)}
    if (0,) * ts.F_st(t).shape[1] in targets:
        return 0
    Ft = ts.F_t(t)
    for w in range(1, max_weight + 1):
        for S in combinations(range(ts.n_edges), w):
            rows = Ft[list(S)]
            for vals in product(range(1, f.q), repeat=w):
                if tuple(f.matmul(np.array(vals), rows).tolist()) in targets:
                    return w
    return None


@criterion(1, "two-sink worked example: iteration constraints and kernels", seconds=5)
def test_criterion_1_worked_example():
    net, paths, f, code = two_sink_setup()
    res = construct_distance_preserving(net, TWO_SINK_SPEC, f, code=code, paths=paths)
    steps = {e["edge"]: e for e in res.trace}
    assert steps["6"]["kernel"] == [1, 1, 0]
    assert steps["7"]["kernel"] == [1, 0, 1]
    for edge, expected, count in (("6", EDGE6, 6), ("7", EDGE7, 7)):
        state = state_before(net, paths, res.pruned_kernels, f, edge)
        cons, _ = forbidden_set(state, net.index(edge), code, TWO_SINK_SPEC.dists)
        assert steps[edge]["gamma"] == len(cons) == count
        assert projective(f, [c.normal for c in cons]) == projective(f, expected)
        col = np.array(steps[edge]["kernel"])
        assert all(f.dot(w, col) != 0 for w in expected)


@criterion(2, "certified distances and the explicit low-weight error of the ablation", seconds=30)
def test_criterion_2_certified_distances():
    net, paths, f, code = two_sink_setup()
    res = construct_distance_preserving(net, TWO_SINK_SPEC, f, code=code, paths=paths)
    ts = res.transfer
    for t in ("t", "u"):
        assert explicit_dmin(ts, t, code, 3) == 3
        assert dmin(ts, t, code).dmin == 3
    ks = parse_kernels(fixture_text("two_sink.kernels"), net)
    ks[(net.index("5"), net.index("6"))] = A
    weak = build_transfer(net, ks, f, paths)
    b37 = ks[(net.index("3"), net.index("7"))]
    b57 = ks[(net.index("5"), net.index("7"))]
    z = np.zeros(net.n_edges, dtype=np.int64)
    z[net.index("1")] = 1
    z[net.index("7")] = f.neg(f.add(f.mul(b37, A2), f.mul(b57, A)))
    assert not np.any(received(weak, "t", [1, A, A2], z))
    assert explicit_dmin(weak, "t", code, 2) <= 2


@criterion(3, "refined Singleton tightness on the butterfly", seconds=10)
def test_criterion_3_singleton_tight():
    net = load_fixture("butterfly")
    spec = CodeSpec.singleton_tight(1, {"t": 2, "u": 2})
    for f in (GF(19), GF(2, 5)):
        _, _, ts, code = construct_greedy(net, spec, f)
        for t in ("t", "u"):
            assert ts.rank(t) == 2
            assert dmin(ts, t, code).dmin == 2 == ts.rank(t) - code.omega + 1
            assert explicit_dmin(ts, t, code, 2) == 2


@criterion(4, "classical reduction on three parallel edges")
def test_criterion_4_classical_reduction():
    net = load_fixture("parallel3")
    f = GF(2, 2)
    spec = CodeSpec.singleton_tight(1, {"t": 3})
    _, _, ts1, code1 = construct_greedy(net, spec, f)
    res = construct_distance_preserving(net, spec, f)
    for ts, code in ((ts1, code1), (res.transfer, res.code)):
        assert np.array_equal(ts.F, f.eye(3))
        assert dmin(ts, "t", code).dmin == hamming_dmin(f, code.codewords()) == 3


@criterion(5, "ball sizes and their bracketing on butterfly and two-sink fixtures")
def test_criterion_5_ball_sizes():
    for name in ("butterfly", "two_sink"):
        net = load_fixture(name)
        for f in (GF(2), GF(2, 2)):
            ks, paths = build_kernels(net, maxflows(net), f)
            instances = [build_transfer(net, ks, f, paths)]
            if name == "two_sink" and f.q == 4:
                fixed = parse_kernels(fixture_text("two_sink.kernels"), net)
                instances.append(build_transfer(net, fixed, f, parse_paths(fixture_text("two_sink.paths"), net)))
            for ts in instances:
                for t in ts.sinks:
                    r = ts.rank(t)
                    for d in range(0, 3):
                        phi = len(phi_set(ts, t, d))
                        assert len(delta_set(ts, t, d)) == f.q ** (ts.n_s - r) * phi
                        assert sum(comb(r, i) * (f.q - 1) ** i for i in range(d + 1)) <= phi
                        if d >= 1:
                            assert phi < comb(ts.n_edges, d) * f.q**d


@criterion(6, "refined Hamming value grows with rank")
def test_criterion_6_monotone_sweep():
    violations = []
    for q in (2, 3, 4, 8):
        for m in range(1, 13):
            for tau in range(m // 2 + 1):
                if not refined_hamming(q, m, 2 * tau + 1) < refined_hamming(q, m + 1, 2 * tau + 1):
                    violations.append((q, m, tau))
    assert violations == []


@criterion(7, "exhaustive decoding of the two-sink code", seconds=120)
def test_criterion_7_decoding():
    net, paths, f, code = two_sink_setup()
    ts = construct_distance_preserving(net, TWO_SINK_SPEC, f, code=code, paths=paths).transfer
    mwd1 = error_sweep(ts, code, c_max=2, decoder="mwd1")
    for row in mwd1:
        if row.weight == 1:
            assert row.corrected == row.trials == 4 * 13 * 3
    assert any(r.weight == 2 and r.corrected < r.trials for r in mwd1)
    for row in error_sweep(ts, code, c_max=2, decoder="mwd2", radius=0):
        assert row.miscorrected == 0
        assert row.trials == 4 * comb(13, row.weight) * 3**row.weight


ALG2_RUNS = [
    ("two_sink", (2, 2), TWO_SINK_SPEC, True),
    ("two_sink", (2, 3), TWO_SINK_SPEC, False),
    ("two_sink", (3, 2), TWO_SINK_SPEC, False),
    ("two_sink", (2, 2), CodeSpec.uniform(3, ("t", "u"), 3, 1), False),
    ("butterfly", (2, 2), CodeSpec.singleton_tight(1, {"t": 2, "u": 2}), False),
    ("parallel3", (2, 2), CodeSpec.singleton_tight(1, {"t": 3}), False),
    ("parallel3", (2, 2), CodeSpec.singleton_tight(2, {"t": 3}), False),
]


@criterion(8, "per-iteration feasibility and constraint counts of the distance-preserving construction")
def test_criterion_8_feasibility():
    for name, pm, spec, pinned in ALG2_RUNS:
        net = load_fixture(name)
        f = GF(*pm)
        paths = parse_paths(fixture_text("two_sink.paths"), net) if pinned else None
        res = construct_distance_preserving(net, spec, f, paths=paths)
        n_s = res.pruned.n_s
        for e in res.trace:
            assert e["feasible"], (name, e)
            assert e["gamma"] <= constraint_count_bound(spec, n_s, e["iteration"])
        # Independent re-check on the final kernels, outside the algorithm loop.
        state = IterationState(prefix_start(res.pruned, res.paths), res.transfer.F, res.pruned_kernels)
        while not state.prefix.is_complete():
            state = IterationState(prefix_expand(state.prefix), state.F, state.kernels)
        ok, wit = feasible_check(state, res.code, spec.dists)
        assert ok, wit


@criterion(9, "bounds consistency on every fixture and greedy Gilbert size")
def test_criterion_9_bounds():
    net, paths, f, code = two_sink_setup()
    cases = [(construct_distance_preserving(net, TWO_SINK_SPEC, f, code=code, paths=paths).transfer, code)]
    butterfly = load_fixture("butterfly")
    _, _, ts_b, code_b = construct_greedy(butterfly, CodeSpec.singleton_tight(1, {"t": 2, "u": 2}), GF(2, 5))
    cases.append((ts_b, code_b))
    par = construct_distance_preserving(load_fixture("parallel3"), CodeSpec.singleton_tight(1, {"t": 3}), f)
    cases.append((par.transfer, par.code))
    for ts, c in cases:
        rep = bounds_report(ts, c)
        rep.check()
        for s in rep.sinks.values():
            assert not s.flag
            assert c.size <= s.sphere_packing <= s.refined_hamming
            assert c.size <= s.refined_singleton
        assert min(s.refined_hamming for s in rep.sinks.values()) <= rep.original_hamming
        assert min(s.refined_singleton for s in rep.sinks.values()) <= rep.original_singleton
    g2 = GF(2)
    identity4 = parse_network("".join(f"edge {i} s t\n" for i in range(1, 5)) + "source s\nsink t\n")
    two_sink = load_fixture("two_sink")
    ks, pth = build_kernels(two_sink, maxflows(two_sink), g2)
    for ts in (build_transfer(identity4, KernelSet(), g2), build_transfer(two_sink, ks, g2, pth)):
        for d in (2, 3):
            dists = {t: d for t in ts.sinks}
            greedy = greedy_gilbert_codebook(ts, dists)
            bound, _ = gilbert_varshamov(ts, dists)
            assert greedy.size >= bound
            if greedy.size > 1:
                assert min(distance_report(ts, greedy).dmins().values()) >= d


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
