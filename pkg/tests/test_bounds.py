from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from netec.bounds import (
    bounds_report,
    gilbert_varshamov,
    refined_hamming,
    refined_singleton,
    sphere_packing,
)
from netec.errors import InfeasibleError, ValidationError
from netec.gf import GF
from netec.metric import Codebook
from netec.network import parse_network
from netec.transfer import KernelSet, build_transfer


def hamming_ratio(q, m, tau):
    return Fraction(q**m, sum(comb(m, i) * (q - 1) ** i for i in range(tau + 1)))


@pytest.mark.parametrize(
    "q, r, d, expected",
    [(2, 3, 1, 8), (2, 7, 3, 16), (4, 3, 3, Fraction(64, 10)), (4, 2, 2, 16)],
)
def test_refined_hamming_examples(q, r, d, expected):
    assert refined_hamming(q, r, d) == expected


@pytest.mark.parametrize("q, r, d, expected", [(4, 3, 3, 4), (4, 2, 2, 4), (2, 5, 6, 1), (3, 4, 1, 81)])
def test_refined_singleton_examples(q, r, d, expected):
    assert refined_singleton(q, r, d) == expected


def test_singleton_infeasible_and_bad_input():
    with pytest.raises(InfeasibleError):
        refined_singleton(4, 3, 5)
    with pytest.raises(ValidationError):
        refined_hamming(4, 0, 1)
    with pytest.raises(ValidationError):
        refined_singleton(4, 3, 0)


def test_monotone_in_rank_sweep():
    violations = [
        (q, m, tau)
        for q in (2, 3, 4, 8)
        for m in range(1, 13)
        for tau in range(m // 2 + 1)
        if not hamming_ratio(q, m, tau) < hamming_ratio(q, m + 1, tau)
    ]
    assert violations == []


@given(st.sampled_from([2, 3, 4, 5, 7, 8, 9]), st.integers(1, 10), st.integers(1, 11))
def test_singleton_is_power_and_hamming_at_least_one(q, r, d):
    if d > r + 1:
        return
    s = refined_singleton(q, r, d)
    assert s >= 1 and q ** (r - d + 1) == s
    assert refined_hamming(q, r, d) >= 1


def test_two_sink_report(two_sink_ts, rs_code):
    rep = bounds_report(two_sink_ts, rs_code)
    for t in ("t", "u"):
        s = rep.sinks[t]
        assert (s.rank, s.dmin) == (3, 3)
        assert s.refined_singleton == 4 == rs_code.size
        assert s.refined_hamming == Fraction(32, 5)
        assert rs_code.size <= s.sphere_packing <= s.refined_hamming
    assert rep.n == 3 and rep.original_singleton == 4
    assert rep.varshamov.delta_size == 58
    assert rep.gilbert == Fraction(64, 58)
    assert rep.to_table().startswith("sink")
    assert '"sink": "t"' in rep.to_jsonl()


def test_sphere_packing_trivial_radius(two_sink_ts):
    assert sphere_packing(two_sink_ts, "t", 1) == 64
    assert sphere_packing(two_sink_ts, "t", 2) == 64


def test_sphere_packing_butterfly(butterfly, butterfly_ts):
    # Over GF(2) with XOR coding, single-edge errors reach every nonzero
    # observation at t, so the sphere bound collapses to one codeword.
    assert sphere_packing(butterfly_ts, "t", 3) == 1
    assert refined_hamming(2, 2, 3) == Fraction(4, 3)


def test_gilbert_identity_network_is_classical():
    net = parse_network("".join(f"edge {i} s t\n" for i in range(1, 5)) + "source s\nsink t\n")
    ts = build_transfer(net, KernelSet(), GF(2))
    g, var = gilbert_varshamov(ts, {"t": 2})
    assert g == Fraction(16, 5)
    assert var.delta_size == 5 and var.exact is None and var.guaranteed_dimension == 2
    g1, var1 = gilbert_varshamov(ts, {"t": 1})
    assert g1 == 16 and var1.exact == 4


def test_targets_only_mode(two_sink_ts):
    rep = bounds_report(two_sink_ts, targets={"t": 3, "u": 2})
    assert rep.sinks["u"].refined_singleton == 16
    with pytest.raises(ValidationError, match="exceeds rank"):
        bounds_report(two_sink_ts, targets={"t": 5})
    with pytest.raises(ValidationError):
        bounds_report(two_sink_ts)


def test_degenerate_sink_flagged(butterfly, gf2):
    ts = build_transfer(butterfly, KernelSet(), gf2)
    assert ts.rank("t") == 0
    rep = bounds_report(ts, Codebook(gf2, [[1, 1]]))
    assert all(s.flag == "degenerate" for s in rep.sinks.values())
    assert any("degenerate" in n for n in rep.notes)


def test_refined_below_original(butterfly_ts):
    code = Codebook(butterfly_ts.field, [[1, 0]])
    rep = bounds_report(butterfly_ts, code)
    valid = [s for s in rep.sinks.values() if not s.flag]
    assert min(s.refined_hamming for s in valid) <= rep.original_hamming
    assert min(s.refined_singleton for s in valid) <= rep.original_singleton
