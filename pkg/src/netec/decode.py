"""Minimum-weight decoding, sphere-membership decoding and exhaustive error sweeps."""

import json
from dataclasses import dataclass
from itertools import product

import numpy as np

from .budget import as_budget
from .combinatorics import colex_subsets
from .errors import ValidationError
from .metric import WeightTable, phi_set


@dataclass
class DecodeOutcome:
    kind: str  # "decoded" or "detected"
    codeword: np.ndarray = None
    weight: object = None  # minimum error weight explaining y, when known
    candidates: int = 0

    @property
    def decoded(self):
        return self.kind == "decoded"


class MinWeightDecoder:
    """Decoder that picks the codeword explained by the lightest error.

    All codewords are tried against a complete weight table for the sink; if
    the lightest explanation is shared by codewords with different values,
    the error is reported as detected.
    """

    def __init__(self, ts, t, code, budget=None):
        self.ts, self.sink, self.code = ts, t, code
        self.words = code.codewords()
        self.images = ts.field.matmul(self.words, ts.F_st(t))
        self.table = WeightTable(ts, t, budget=budget)

    def decode(self, y):
        f = self.ts.field
        y = np.asarray(y, dtype=np.int64)
        if y.shape[0] != self.images.shape[1]:
            raise ValidationError(f"received vector must have length {self.images.shape[1]}")
        diffs = f.sub(y[None, :], self.images)
        codes = f.pack(diffs).tolist()
        weights = [self.table.table.get(c, (None,))[0] for c in codes]
        finite = [w for w in weights if w is not None]
        if not finite:
            return DecodeOutcome("detected")
        best = min(finite)
        hits = [i for i, w in enumerate(weights) if w == best]
        if len(hits) == 1:
            return DecodeOutcome("decoded", self.words[hits[0]], best, 1)
        return DecodeOutcome("detected", None, best, len(hits))


def mwd1(ts, t, code, y, budget=None):
    return MinWeightDecoder(ts, t, code, budget).decode(y)


class SphereDecoder:
    """Decoding by membership in the radius-c spheres x F_{s,t} + Phi_t(c).

    Construction fails, naming two codewords, when spheres overlap.
    """

    def __init__(self, ts, t, code, c, budget=None):
        f = ts.field
        self.ts, self.sink, self.code, self.radius = ts, t, code, c
        self.words = code.codewords()
        images = f.matmul(self.words, ts.F_st(t))
        phi = np.fromiter(phi_set(ts, t, c, budget), dtype=np.int64)
        offsets = f.unpack(phi, images.shape[1])
        owner = {}
        for i, img in enumerate(images):
            for code_ in f.pack(f.add(img[None, :], offsets)).tolist():
                j = owner.setdefault(code_, i)
                if j != i:
                    raise ValidationError(
                        f"decoding spheres of radius {c} intersect: codewords "
                        f"{self.words[j].tolist()} and {self.words[i].tolist()}"
                    )
        self.owner = owner

    def decode(self, y):
        i = self.owner.get(int(self.ts.field.pack(np.asarray(y, dtype=np.int64))))
        if i is None:
            return DecodeOutcome("detected")
        return DecodeOutcome("decoded", self.words[i], None, 1)


def mwd2(ts, t, code, c, y, budget=None):
    return SphereDecoder(ts, t, code, c, budget).decode(y)


def iter_errors(n_edges, weight, q):
    """Every error vector of exact Hamming weight ``weight`` (supports in colex order)."""
    vals = range(1, q)
    for S in colex_subsets(n_edges, weight):
        for v in product(vals, repeat=weight):
            z = np.zeros(n_edges, dtype=np.int64)
            z[list(S)] = v
            yield z


@dataclass
class SweepRow:
    sink: str
    weight: int
    decoder: str
    trials: int = 0
    corrected: int = 0
    detected: int = 0
    miscorrected: int = 0

    def record(self):
        return dict(self.__dict__)


def error_sweep(ts, code, sinks=None, c_max=1, decoder="mwd1", radius=0, budget=None):
    """Exhaustively inject every error of weight 0..c_max on every codeword.

    ``decoder`` is ``"mwd1"`` or ``"mwd2"`` (sphere radius ``radius``).
    Returns a list of :class:`SweepRow`, one per (sink, weight).
    """
    budget = as_budget(budget)
    f = ts.field
    sinks = list(sinks or ts.sinks)
    words = code.codewords()
    rows = []
    for t in sinks:
        if decoder == "mwd1":
            dec = MinWeightDecoder(ts, t, code, budget)
            label = "mwd1"
        elif decoder == "mwd2":
            dec = SphereDecoder(ts, t, code, radius, budget)
            label = f"mwd2(c={radius})"
        else:
            raise ValidationError(f"unknown decoder {decoder!r}")
        Fst, Ft = ts.F_st(t), ts.F_t(t)
        images = f.matmul(words, Fst)
        cache = {}
        for w in range(c_max + 1):
            row = SweepRow(t, w, label)
            for z in iter_errors(ts.n_edges, w, f.q):
                noise = f.matmul(z, Ft)
                budget.spend(len(words), "error sweep")
                for x, img in zip(words, images):
                    y = f.add(img, noise)
                    key = int(f.pack(y))
                    if key not in cache:
                        cache[key] = dec.decode(y)
                    out = cache[key]
                    row.trials += 1
                    if not out.decoded:
                        row.detected += 1
                    elif np.array_equal(out.codeword, x):
                        row.corrected += 1
                    else:
                        row.miscorrected += 1
            rows.append(row)
    return rows


def sweep_table(rows):
    head = ("sink", "weight", "decoder", "trials", "corrected", "detected", "miscorrected")
    body = [
        (r.sink, str(r.weight), r.decoder, str(r.trials), str(r.corrected), str(r.detected), str(r.miscorrected))
        for r in rows
    ]
    widths = [max(len(x[i]) for x in [head] + body) for i in range(len(head))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in [head] + body) + "\n"


def sweep_jsonl(rows):
    return "".join(json.dumps(r.record(), sort_keys=True) + "\n" for r in rows)
