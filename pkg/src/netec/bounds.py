"""Upper and lower bounds on network code size, as exact rationals."""

import json
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .budget import as_budget
from .combinatorics import ball_volume
from .errors import InfeasibleError, InvariantError, ValidationError
from .flow import maxflow
from .metric import delta_union, distance_report, phi_set


def _check(q, r, d):
    if q < 2:
        raise ValidationError(f"field size {q} < 2")
    if r < 1:
        raise ValidationError(f"rank {r} < 1")
    if d < 1:
        raise ValidationError(f"minimum distance {d} < 1")


def refined_hamming(q, r_t, d_t):
    """q^r / sum_{i <= tau} C(r, i)(q-1)^i with tau = (d-1) // 2."""
    _check(q, r_t, d_t)
    return Fraction(q**r_t, ball_volume(r_t, (d_t - 1) // 2, q))


def refined_singleton(q, r_t, d_t):
    """q^(r - d + 1); a distance above r + 1 leaves no code at all."""
    _check(q, r_t, d_t)
    if d_t > r_t + 1:
        raise InfeasibleError(f"distance {d_t} exceeds rank {r_t} + 1: no codebook exists")
    return q ** (r_t - d_t + 1)


# The network-wide versions keep the same shapes, evaluated at the smallest
# max-flow n and the smallest per-sink distance.
original_hamming = refined_hamming
original_singleton = refined_singleton


def sphere_packing(ts, t, d_t, budget=None):
    """q^{r_t} / |Phi_t(tau_t)| using the enumerated error-image set."""
    q = ts.field.q
    r = ts.rank(t)
    _check(q, r, d_t)
    tau = (d_t - 1) // 2
    return Fraction(q**r, len(phi_set(ts, t, tau, budget)))


@dataclass
class VarshamovBound:
    """Linear codes of dimension ``guaranteed_dimension`` exist.

    ``exact`` is n_s - log_q|Delta(0)| when |Delta(0)| is a power of q.
    """

    n_s: int
    q: int
    delta_size: int
    exact: object
    guaranteed_dimension: int

    @property
    def value(self):
        return self.n_s - math.log(self.delta_size, self.q)


def _floor_log(q, x):
    e = 0
    while q ** (e + 1) <= x:
        e += 1
    return e


def gilbert_varshamov(ts, dists, budget=None):
    """(q^{n_s}/|Delta(0)|, Varshamov dimension bound) with Delta(0) built from
    per-sink radii d_t - 1."""
    budget = as_budget(budget)
    q, n_s = ts.field.q, ts.n_s
    for t, d in dists.items():
        if d < 1:
            raise ValidationError(f"target distance for {t!r} must be >= 1")
    size = len(delta_union(ts, {t: d - 1 for t, d in dists.items()}, budget))
    e = _floor_log(q, size)
    exact = n_s - e if q**e == size else None
    var = VarshamovBound(n_s, q, size, exact, max(0, n_s - e))
    return Fraction(q**n_s, size), var


@dataclass
class SinkBounds:
    sink: str
    rank: int
    dmin: object
    refined_hamming: object = None
    refined_singleton: object = None
    sphere_packing: object = None
    flag: str = ""


@dataclass
class BoundsReport:
    q: int
    n_s: int
    code_size: int
    sinks: dict = dc_field(default_factory=dict)
    n: int = 0
    dmin: object = None
    original_hamming: object = None
    original_singleton: object = None
    gilbert: object = None
    varshamov: VarshamovBound = None
    notes: list = dc_field(default_factory=list)

    def check(self):
        """Refined per-sink bounds may not exceed the network-wide originals."""
        valid = [s for s in self.sinks.values() if not s.flag]
        if not valid or self.original_hamming is None:
            return
        if min(s.refined_hamming for s in valid) > self.original_hamming:
            raise InvariantError("refined Hamming bound exceeds the network-wide Hamming bound")
        if min(s.refined_singleton for s in valid) > self.original_singleton:
            raise InvariantError("refined Singleton bound exceeds the network-wide Singleton bound")
        for s in valid:
            if s.sphere_packing is not None and s.sphere_packing > s.refined_hamming:
                raise InvariantError(f"sphere-packing bound above refined Hamming at {s.sink!r}")

    def records(self):
        def num(v):
            if v is None:
                return None
            if isinstance(v, Fraction):
                return str(v) if v.denominator != 1 else v.numerator
            return v

        out = []
        for s in self.sinks.values():
            out.append(
                {
                    "sink": s.sink,
                    "rank": s.rank,
                    "dmin": s.dmin,
                    "refined_hamming": num(s.refined_hamming),
                    "refined_singleton": num(s.refined_singleton),
                    "sphere_packing": num(s.sphere_packing),
                    "flag": s.flag,
                }
            )
        net = {
            "sink": None,
            "q": self.q,
            "n_s": self.n_s,
            "code_size": self.code_size,
            "n": self.n,
            "dmin": self.dmin,
            "original_hamming": num(self.original_hamming),
            "original_singleton": num(self.original_singleton),
            "gilbert": num(self.gilbert),
        }
        if self.varshamov is not None:
            net["delta_size"] = self.varshamov.delta_size
            net["varshamov_exact"] = self.varshamov.exact
            net["varshamov_dimension"] = self.varshamov.guaranteed_dimension
        out.append(net)
        return out

    def to_jsonl(self):
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in self.records())

    def to_table(self):
        fmt = lambda v: "-" if v is None else str(v)
        rows = [("sink", "rank", "dmin", "ref.Hamming", "ref.Singleton", "sphere", "flag")]
        for s in self.sinks.values():
            rows.append(
                (s.sink, str(s.rank), fmt(s.dmin), fmt(s.refined_hamming),
                 fmt(s.refined_singleton), fmt(s.sphere_packing), s.flag)
            )
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
        lines.append("")
        lines.append(f"q={self.q} n_s={self.n_s} |C|={self.code_size} n={self.n} dmin={fmt(self.dmin)}")
        lines.append(f"Hamming (network-wide): {fmt(self.original_hamming)}")
        lines.append(f"Singleton (network-wide): {fmt(self.original_singleton)}")
        lines.append(f"Gilbert lower bound: {fmt(self.gilbert)}")
        if self.varshamov is not None:
            v = self.varshamov
            lines.append(
                f"Varshamov: |Delta(0)|={v.delta_size}, dimension >= "
                f"{fmt(v.exact) if v.exact is not None else f'{v.value:.4f}'} "
                f"(guaranteed {v.guaranteed_dimension})"
            )
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines) + "\n"


def bounds_report(ts, code=None, targets=None, budget=None, sphere=True):
    """Evaluate every bound on the transfer set ``ts``.

    With a ``code`` the per-sink distances are its certified minimum
    distances, and ``targets`` (``{sink: d_t}``), when given, only replaces
    them as the Gilbert/Varshamov radii.  Without a code the targets play
    the role of the distances.
    """
    budget = as_budget(budget)
    q = ts.field.q
    if code is None:
        if not targets:
            raise ValidationError("bounds need either a codebook or per-sink distance targets")
        dists = {}
        for t, d in targets.items():
            r = ts.rank(t)
            if d > r + 1:
                raise ValidationError(f"distance {d} at {t!r} exceeds rank {r} + 1")
            dists[t] = (r, d)
        size = None
    else:
        report = distance_report(ts, code, budget)
        dists = {t: (sd.rank, sd.dmin) for t, sd in report.sinks.items()}
        size = code.size
    out = BoundsReport(q=q, n_s=ts.n_s, code_size=size)
    for t, (rank, dm) in dists.items():
        sb = SinkBounds(t, rank, dm)
        if rank < 1 or dm is None or dm < 1:
            sb.flag = "degenerate"
        else:
            sb.refined_hamming = refined_hamming(q, rank, dm)
            sb.refined_singleton = refined_singleton(q, rank, dm)
            if sphere:
                sb.sphere_packing = sphere_packing(ts, t, dm, budget)
        out.sinks[t] = sb
    out.n = min(maxflow(ts.net, ts.net.source, t) for t in dists)
    dms = [s.dmin for s in out.sinks.values() if s.dmin is not None]
    out.dmin = min(dms) if dms else None
    if out.dmin and out.n >= 1 and out.dmin <= out.n + 1:
        out.original_hamming = original_hamming(q, out.n, out.dmin)
        out.original_singleton = original_singleton(q, out.n, out.dmin)
    else:
        out.notes.append("network-wide bounds undefined for this distance/flow pair")
    radii = (targets if code is not None else None) or {
        t: s.dmin for t, s in out.sinks.items() if not s.flag
    }
    if radii:
        out.gilbert, out.varshamov = gilbert_varshamov(ts, radii, budget)
    if any(s.flag for s in out.sinks.values()):
        out.notes.append("degenerate sinks (rank 0 or colliding codewords) carry no bounds")
    out.check()
    return out
