"""
Why the deletion sets matter
============================

Restricting the forbidden set to the empty deletion set lets a weaker
kernel through on edge 6, and the distance at sink t drops to 2.
"""

import numpy as np

from netec import CodeSpec, GF
from netec.distance_preserving import construct_distance_preserving
from netec.metric import Codebook
from netec.network import fixture_text, load_fixture, parse_paths
from netec.transfer import received

net = load_fixture("two_sink")
paths = parse_paths(fixture_text("two_sink.paths"), net)
f = GF(2, 2)
code = Codebook(f, [[1, 2, 3]])
spec = CodeSpec.singleton_tight(1, {"t": 3, "u": 3})

res = construct_distance_preserving(
    net, spec, f, code=code, paths=paths,
    deletion_sets="empty", kernel_overrides={"6": [1, 1, f.alpha]}, strict=False,
)
for step in res.trace[:4]:
    print(step["edge"], "constraints", step["gamma"], "kernel", step["kernel"], "feasible", step["feasible"])

rec = res.report["t"]
print("dmin at t:", rec.dmin)
print("codeword", rec.codeword.tolist(), "is cancelled by error", rec.error.tolist())
y = received(res.transfer, "t", rec.codeword, f.neg(rec.error))
assert not np.any(y)
