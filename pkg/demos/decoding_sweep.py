"""
Decoding every low-weight error
===============================

Runs both decoders over every codeword and every error of weight <= 2
on the two-sink network.
"""

from netec import GF
from netec.decode import error_sweep, sweep_table
from netec.metric import Codebook
from netec.network import fixture_text, load_fixture, parse_paths
from netec.transfer import build_transfer, parse_kernels

net = load_fixture("two_sink")
f = GF(2, 2)
ts = build_transfer(
    net,
    parse_kernels(fixture_text("two_sink.kernels"), net),
    f,
    parse_paths(fixture_text("two_sink.paths"), net),
)
code = Codebook(f, [[1, 2, 3]])

# Minimum-weight decoding corrects single errors but not all double errors.
print(sweep_table(error_sweep(ts, code, c_max=2, decoder="mwd1")))

# Radius-0 spheres never decode to a wrong codeword: errors are either
# flagged or leave the observation unchanged.
print(sweep_table(error_sweep(ts, code, c_max=2, decoder="mwd2", radius=0)))

# Radius-1 spheres are disjoint and correct all single errors.
print(sweep_table(error_sweep(ts, code, c_max=1, decoder="mwd2", radius=1)))
