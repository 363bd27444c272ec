import numpy as np
import pytest

from netec.gf import GF
from netec.metric import Codebook
from netec.network import fixture_text, load_fixture, parse_paths
from netec.transfer import KernelSet, build_transfer, parse_kernels

# GF(4) as integers: alpha = 2, alpha^2 = 3 = alpha + 1.
ALPHA, ALPHA2 = 2, 3


@pytest.fixture(scope="session")
def gf4():
    return GF(2, 2)


@pytest.fixture(scope="session")
def gf2():
    return GF(2)


@pytest.fixture(scope="session")
def two_sink():
    return load_fixture("two_sink")


@pytest.fixture(scope="session")
def two_sink_paths(two_sink):
    return parse_paths(fixture_text("two_sink.paths"), two_sink)


@pytest.fixture(scope="session")
def two_sink_kernels(two_sink):
    return parse_kernels(fixture_text("two_sink.kernels"), two_sink)


@pytest.fixture(scope="session")
def two_sink_ts(two_sink, two_sink_kernels, two_sink_paths, gf4):
    return build_transfer(two_sink, two_sink_kernels, gf4, two_sink_paths)


@pytest.fixture(scope="session")
def rs_code(gf4):
    return Codebook(gf4, [[1, ALPHA, ALPHA2]])


@pytest.fixture(scope="session")
def butterfly():
    return load_fixture("butterfly")


@pytest.fixture(scope="session")
def parallel3():
    return load_fixture("parallel3")


def butterfly_xor_kernels(net):
    """Classical butterfly code: copy everywhere, XOR at the coding node."""
    ks = KernelSet()
    for a, b in [("e1", "e3"), ("e2", "e4"), ("e3", "e5"), ("e4", "e5"), ("e5", "e6"),
                 ("e1", "e7"), ("e5", "e8"), ("e2", "e9")]:
        ks[(net.index(a), net.index(b))] = 1
    return ks


@pytest.fixture(scope="session")
def butterfly_ts(butterfly, gf2):
    return build_transfer(butterfly, butterfly_xor_kernels(butterfly), gf2)


def random_kernels(net, field, rng, density=1.0):
    ks = KernelSet()
    for e in range(net.n_s, net.n_edges):
        for a in net.predecessors(e):
            if rng.random() < density:
                ks[(a, e)] = int(rng.integers(0, field.q))
    return ks


def projective_set(field, vectors):
    return {tuple(field.normalize(np.asarray(v)).tolist()) for v in vectors}


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
