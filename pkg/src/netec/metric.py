"""Error-set images, the per-sink network distance and minimum distance.

Sets of vectors are stored as sets of packed integers (``GF.pack``).  Every
enumeration routine takes a ``budget`` so a mis-sized request fails loudly
instead of running for hours.
"""

import json
from dataclasses import dataclass, field as dc_field

import numpy as np

from .budget import as_budget
from .combinatorics import colex_subsets
from .errors import ValidationError

MAX_PACKED_SPACE = 2**24


class Codebook:
    """A linear code given by an ``omega x n_s`` generator, or an explicit list
    of codewords (nonlinear; accepted by the distance and bound routines)."""

    def __init__(self, field, generator=None, codewords=None):
        self.field = field
        if (generator is None) == (codewords is None):
            raise ValidationError("give exactly one of generator or codewords")
        if generator is not None:
            G = np.atleast_2d(np.asarray(generator, dtype=np.int64))
            if G.size and (G.min() < 0 or G.max() >= field.q):
                raise ValidationError(f"generator entries must lie in [0, {field.q})")
            if field.rank(G) != G.shape[0]:
                raise ValidationError("generator rows are linearly dependent")
            self.generator = G
            self._words = None
        else:
            W = np.atleast_2d(np.asarray(codewords, dtype=np.int64))
            packed = field.pack(W)
            if len(set(packed.tolist())) != len(packed):
                raise ValidationError("codeword list contains duplicates")
            self.generator = None
            self._words = W

    @property
    def is_linear(self):
        return self.generator is not None

    @property
    def omega(self):
        if not self.is_linear:
            raise ValidationError("dimension is defined only for linear codebooks")
        return self.generator.shape[0]

    @property
    def n_s(self):
        return (self.generator if self.is_linear else self._words).shape[1]

    @property
    def size(self):
        return self.field.q**self.omega if self.is_linear else len(self._words)

    def encode(self, message):
        return self.field.matmul(np.asarray(message, dtype=np.int64), self.generator)

    def codewords(self):
        if not self.is_linear:
            return self._words.copy()
        return self.field.matmul(self.field.all_vectors(self.omega), self.generator)

    def projective_codewords(self):
        """One nonzero codeword per scalar class (message's first nonzero entry is 1)."""
        msgs = self.field.all_vectors(self.omega)[1:]
        keep = [m for m in msgs if m[np.flatnonzero(m)[0]] == 1]
        if not keep:
            return np.zeros((0, self.n_s), dtype=np.int64)
        return self.field.matmul(np.array(keep), self.generator)

    def __repr__(self):
        if self.is_linear:
            return f"Codebook({self.field}, generator={self.generator.tolist()})"
        return f"Codebook({self.field}, {len(self._words)} codewords)"


def span_codes(field, basis):
    """Packed elements of the row space of ``basis``."""
    basis = np.asarray(basis, dtype=np.int64)
    if basis.shape[0] == 0:
        return np.zeros(1, dtype=np.int64)
    coeffs = field.all_vectors(basis.shape[0])
    return field.pack(field.matmul(coeffs, basis))


def _check_space(field, n):
    if field.q**n > MAX_PACKED_SPACE:
        raise ValidationError(
            f"q^{n} = {field.q**n} exceeds {MAX_PACKED_SPACE}; packed-set enumeration unavailable"
        )


def phi_set(ts, t, c, budget=None):
    """{z F_t : w_H(z) <= c} as packed integers.

    Each support S of size min(c, |E|) contributes the row space of F_t[S];
    identical spaces are visited once.
    """
    if c < 0:
        raise ValidationError("radius must be non-negative")
    budget = as_budget(budget)
    f = ts.field
    Ft = ts.F_t(t)
    _check_space(f, Ft.shape[1])
    n = ts.n_edges
    k = min(c, n)
    seen, out = set(), set()
    for S in colex_subsets(n, k):
        B = f.row_basis(Ft[list(S)]) if S else Ft[:0]
        key = (B.shape[0], B.tobytes())
        budget.spend(1, "error-image enumeration")
        if key in seen:
            continue
        seen.add(key)
        budget.spend(f.q ** B.shape[0], "error-image enumeration")
        out.update(span_codes(f, B).tolist())
    return out


def delta_set(ts, t, d, budget=None):
    """{x in F^{n_s} : x F_{s,t} in Phi_t(d)} as packed integers."""
    budget = as_budget(budget)
    f = ts.field
    _check_space(f, ts.n_s)
    phi = np.fromiter(phi_set(ts, t, d, budget), dtype=np.int64)
    budget.spend(f.q**ts.n_s, "input-space enumeration")
    X = f.all_vectors(ts.n_s)
    images = f.pack(f.matmul(X, ts.F_st(t)))
    return set(np.flatnonzero(np.isin(images, phi)).tolist())


def delta_union(ts, radii, budget=None):
    """Delta(0): union over sinks of Delta_t(0, radii[t])."""
    budget = as_budget(budget)
    out = set()
    for t, r in radii.items():
        out |= delta_set(ts, t, r, budget)
    return out


def _member_mask(field, Y, B):
    """Boolean mask: which rows of Y lie in rowspan(B)."""
    if B.shape[0] == 0:
        return ~np.any(Y, axis=1)
    N = field.right_null_space(B)
    if N.shape[0] == 0:
        return np.ones(Y.shape[0], dtype=bool)
    return ~np.any(field.matmul(Y, N.T), axis=1)


def _min_weight_search(ts, t, Y, budget, what):
    """Smallest w and first (row index, support) with Y[row] in rowspan(F_t[S]), |S| = w.

    Returns ``None`` when no row is reachable at any weight.
    """
    f = ts.field
    Ft = ts.F_t(t)
    zero = ~np.any(Y, axis=1)
    if zero.any():
        return 0, int(np.flatnonzero(zero)[0]), ()
    for w in range(1, ts.n_edges + 1):
        for S in colex_subsets(ts.n_edges, w):
            budget.spend(1, what)
            mask = _member_mask(f, Y, Ft[list(S)])
            if mask.any():
                return w, int(np.flatnonzero(mask)[0]), S
    return None


def _witness(ts, t, y, S):
    f = ts.field
    z = np.zeros(ts.n_edges, dtype=np.int64)
    if S:
        z[list(S)] = f.solve_left(ts.F_t(t)[list(S)], y)
    return z


def distance_witness(ts, t, x1, x2, budget=None):
    """``(D_t(x1, x2), z)`` with ``(x1 - x2) F_{s,t} = z F_t``; ``None`` if unreachable."""
    budget = as_budget(budget)
    f = ts.field
    diff = f.sub(np.asarray(x1, dtype=np.int64), np.asarray(x2, dtype=np.int64))
    y = f.matmul(diff, ts.F_st(t))
    hit = _min_weight_search(ts, t, y[None, :], budget, "distance search")
    if hit is None:
        return None
    w, _, S = hit
    return w, _witness(ts, t, y, S)


def distance(ts, t, x1, x2, budget=None):
    """Minimum error weight explaining the codeword difference at sink ``t``.

    ``None`` marks a difference outside the row space of F_t (unreachable).
    """
    res = distance_witness(ts, t, x1, x2, budget)
    return None if res is None else res[0]


@dataclass
class SinkDistance:
    sink: str
    rank: int
    dmin: object  # int, or None when unreachable
    codeword: np.ndarray = None
    error: np.ndarray = None

    def record(self, net=None):
        rec = {"sink": self.sink, "rank": self.rank, "dmin": self.dmin}
        if self.error is not None:
            supp = np.flatnonzero(self.error).tolist()
            rec["witness_codeword"] = self.codeword.tolist()
            rec["witness_support"] = net.edge_ids(supp) if net is not None else supp
            rec["witness_values"] = self.error[supp].tolist()
        return rec


@dataclass
class DistanceReport:
    sinks: dict = dc_field(default_factory=dict)

    def __getitem__(self, t):
        return self.sinks[t]

    def dmins(self):
        return {t: s.dmin for t, s in self.sinks.items()}

    def records(self, net=None):
        return [s.record(net) for s in self.sinks.values()]

    def to_jsonl(self, net=None):
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in self.records(net))

    def to_table(self, net=None):
        rows = [("sink", "rank", "dmin", "witness error (edge=value)")]
        for s in self.sinks.values():
            wit = "-"
            if s.error is not None:
                supp = np.flatnonzero(s.error).tolist()
                names = net.edge_ids(supp) if net is not None else [str(k) for k in supp]
                wit = " ".join(f"{e}={int(s.error[k])}" for e, k in zip(names, supp)) or "(none)"
            rows.append((s.sink, str(s.rank), "inf" if s.dmin is None else str(s.dmin), wit))
        widths = [max(len(r[i]) for r in rows) for i in range(4)]
        return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows) + "\n"


def dmin(ts, t, code, budget=None):
    """Minimum network distance of ``code`` at sink ``t`` with a witness.

    Linear codes use one codeword per scalar class against zero; explicit
    codeword lists fall back to all pairwise differences.
    """
    budget = as_budget(budget)
    f = ts.field
    if code.is_linear:
        if code.omega == 0:
            raise ValidationError("minimum distance of a zero-dimensional code is undefined")
        X = code.projective_codewords()
    else:
        W = code.codewords()
        if len(W) < 2:
            raise ValidationError("minimum distance needs at least two codewords")
        diffs = {}
        for i in range(len(W)):
            for j in range(i + 1, len(W)):
                d = f.normalize(f.sub(W[i], W[j]))
                diffs.setdefault(int(f.pack(d)), d)
        X = np.array([diffs[k] for k in sorted(diffs)])
    Y = f.matmul(X, ts.F_st(t))
    hit = _min_weight_search(ts, t, Y, budget, "minimum-distance search")
    if hit is None:
        return SinkDistance(t, ts.rank(t), None)
    w, row, S = hit
    return SinkDistance(t, ts.rank(t), w, X[row], _witness(ts, t, Y[row], S))


def distance_report(ts, code, budget=None):
    budget = as_budget(budget)
    return DistanceReport({t: dmin(ts, t, code, budget) for t in ts.sinks})


def hamming_dmin(field, words):
    """Classical minimum Hamming distance by direct pairwise comparison."""
    W = np.asarray(words, dtype=np.int64)
    best = None
    for i in range(len(W)):
        for j in range(i + 1, len(W)):
            d = int(np.count_nonzero(W[i] != W[j]))
            best = d if best is None else min(best, d)
    return best


class WeightTable:
    """Packed y -> (minimum w_H(z) with z F_t = y, support achieving it).

    Filled weight level by weight level up to ``max_weight`` (all levels by
    default); vectors absent from the table need more than ``max_weight``.
    """

    def __init__(self, ts, t, max_weight=None, budget=None):
        budget = as_budget(budget)
        f = ts.field
        self.ts, self.sink = ts, t
        Ft = ts.F_t(t)
        _check_space(f, Ft.shape[1])
        self.max_weight = ts.n_edges if max_weight is None else min(max_weight, ts.n_edges)
        reachable = f.q ** f.rank(Ft)
        self.table = {0: (0, ())}
        for w in range(1, self.max_weight + 1):
            if len(self.table) == reachable:
                break
            seen = set()
            for S in colex_subsets(ts.n_edges, w):
                B = f.row_basis(Ft[list(S)])
                key = B.tobytes()
                budget.spend(1, "weight-table enumeration")
                if key in seen:
                    continue
                seen.add(key)
                budget.spend(f.q ** B.shape[0], "weight-table enumeration")
                for code in span_codes(f, B).tolist():
                    if code not in self.table:
                        self.table[code] = (w, S)

    def weight(self, y):
        """Minimum weight for vector ``y``; ``None`` if above ``max_weight``."""
        hit = self.table.get(int(self.ts.field.pack(np.asarray(y, dtype=np.int64))))
        return None if hit is None else hit[0]

    def witness(self, y):
        y = np.asarray(y, dtype=np.int64)
        hit = self.table.get(int(self.ts.field.pack(y)))
        if hit is None:
            return None
        return _witness(self.ts, self.sink, y, hit[1])
