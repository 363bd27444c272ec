"""
Singleton-tight codes on the butterfly
======================================

The greedy construction needs a large enough field; it says how large
instead of silently enlarging it.
"""

from netec import CodeSpec, GF
from netec.errors import FieldTooSmallError
from netec.greedy_codebook import construct_greedy, sufficient_field_size
from netec.metric import distance_report
from netec.network import load_fixture

net = load_fixture("butterfly")
spec = CodeSpec.singleton_tight(1, {"t": 2, "u": 2})
print("guaranteed-sufficient field size:", sufficient_field_size(net, spec))

try:
    construct_greedy(net, spec, GF(2))
except FieldTooSmallError as exc:
    print("GF(2):", exc)

for f in (GF(19), GF(2, 5)):
    kernels, paths, ts, code = construct_greedy(net, spec, f)
    print(f, "generator", code.generator.tolist(), "ranks", ts.ranks())
    print(distance_report(ts, code).to_table(net))
