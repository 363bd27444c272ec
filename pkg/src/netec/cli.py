"""Command-line front end: ``netec {bounds,construct,dmin,decode,sweep}``.

Every run writes its outputs plus a ``manifest.json`` into ``--out``.
Exit codes: 0 success (and certified), 1 certification failed,
2 invalid input, 3 infeasible or field too small, 4 budget exhausted.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .budget import DEFAULT_BUDGET, Budget
from .bounds import bounds_report
from .codespec import CodeSpec
from .decode import MinWeightDecoder, SphereDecoder, error_sweep, sweep_jsonl, sweep_table
from .distance_preserving import construct_distance_preserving
from .errors import BudgetExceededError, InfeasibleError, InvariantError, ValidationError
from .flow import maxflows
from .formats import codebook_to_text, parse_codebook, parse_sink_values, parse_vector
from .gf import parse_field
from .greedy_codebook import construct_greedy, sufficient_field_size as alg1_field_size
from .metric import distance_report
from .network import fixture_text, load_fixture, parse_network, parse_paths, paths_to_text
from .transfer import build_transfer, kernels_to_text, parse_kernels

EXIT_OK, EXIT_UNCERTIFIED, EXIT_INVALID, EXIT_INFEASIBLE, EXIT_BUDGET = 0, 1, 2, 3, 4
BUILTIN = "builtin:"


def _read(path):
    if path.startswith(BUILTIN):
        try:
            return fixture_text(path[len(BUILTIN):])
        except FileNotFoundError:
            raise ValidationError(f"no bundled file {path!r}") from None
    if not os.path.exists(path):
        raise ValidationError(f"file not found: {path}")
    with open(path) as fh:
        return fh.read()


def _network(args):
    if args.network.startswith(BUILTIN):
        name = args.network[len(BUILTIN):]
        try:
            return load_fixture(name)
        except FileNotFoundError:
            raise ValidationError(f"no bundled network {name!r}") from None
    return parse_network(_read(args.network))


class Run:
    """Collects outputs of one invocation and writes them with a manifest."""

    def __init__(self, args, command):
        self.args, self.command = args, command
        self.files = {}
        self.net = _network(args)
        self.field = parse_field(args.field)
        self.budget = Budget(args.budget)
        self.paths = parse_paths(_read(args.paths), self.net) if args.paths else None
        self.notes = []

    def emit(self, name, text, echo=False):
        self.files[name] = text
        if echo:
            sys.stdout.write(text)

    def kernels(self):
        if not self.args.kernels:
            raise ValidationError(f"'{self.command}' needs --kernels")
        return parse_kernels(_read(self.args.kernels), self.net)

    def codebook(self, required=True):
        if not self.args.codebook:
            if required:
                raise ValidationError(f"'{self.command}' needs --codebook")
            return None
        code = parse_codebook(_read(self.args.codebook), self.field)
        if code.n_s != self.net.n_s:
            raise ValidationError(f"codebook length {code.n_s} differs from n_s = {self.net.n_s}")
        return code

    def transfer(self):
        return build_transfer(self.net, self.kernels(), self.field, self.paths)

    def write(self, status):
        out = self.args.out
        os.makedirs(out, exist_ok=True)
        for name, text in self.files.items():
            with open(os.path.join(out, name), "w") as fh:
                fh.write(text)
        config = {k: v for k, v in sorted(vars(self.args).items()) if k != "func"}
        manifest = {
            "tool": "netec",
            "version": __version__,
            "command": self.command,
            "config": config,
            "field": str(self.field),
            "edge_order": [e.id for e in self.net.edges],
            "sinks": list(self.net.sinks),
            "outputs": sorted(self.files),
            "status": status,
            "notes": self.notes,
            "determinism": "all searches use fixed scan orders; no randomness unless --randomized with --seed",
        }
        with open(os.path.join(out, "manifest.json"), "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _spec(run):
    args = run.args
    sinks = run.net.sinks
    ranks = parse_sink_values(args.rank, sinks, "--rank") if args.rank else maxflows(run.net)
    omega = args.omega
    dists = (
        parse_sink_values(args.dist, sinks, "--dist")
        if args.dist
        else {t: ranks[t] - omega + 1 for t in sinks}
    )
    for t in sinks:
        if dists[t] > ranks[t] + 1:
            raise ValidationError(f"distance {dists[t]} at {t!r} exceeds rank {ranks[t]} + 1")
    spec = CodeSpec(omega, ranks, dists)
    spec.check_network(run.net)
    return spec


def _certify(run, ts, code, dists):
    report = distance_report(ts, code, run.budget)
    run.emit("distance.txt", report.to_table(run.net), echo=True)
    run.emit("distance.jsonl", report.to_jsonl(run.net))
    failed = [t for t, d in dists.items() if report[t].dmin is None or report[t].dmin < d]
    if failed:
        sys.stdout.write(f"certification FAILED at {', '.join(failed)}\n")
        return EXIT_UNCERTIFIED
    sys.stdout.write("certified: every sink meets its distance target\n")
    return EXIT_OK


def cmd_bounds(run):
    ts = run.transfer()
    code = run.codebook(required=False)
    targets = parse_sink_values(run.args.dist, run.net.sinks, "--dist") if run.args.dist else None
    if code is None and targets is None:
        raise ValidationError("'bounds' needs --codebook or --dist")
    report = bounds_report(ts, code, targets, budget=run.budget)
    run.emit("bounds.txt", report.to_table(), echo=True)
    run.emit("bounds.jsonl", report.to_jsonl())
    return EXIT_OK


def cmd_construct(run):
    args = run.args
    spec = _spec(run)
    f = run.field
    if args.alg == 1:
        need = alg1_field_size(run.net, spec)
        if f.q < need:
            run.notes.append(f"below sufficient field size: q = {f.q} < {need}")
        kernels, paths, ts, code = construct_greedy(
            run.net, spec, f, paths=run.paths, randomized=args.randomized, seed=args.seed,
            budget=run.budget,
        )
    else:
        code = run.codebook(required=False)
        res = construct_distance_preserving(run.net, spec, f, code=code, paths=run.paths, budget=run.budget)
        kernels, paths, code = res.kernels, res.paths, res.code
        paths = {t: [tuple(res.kept[k] for k in p) for p in plist] for t, plist in paths.items()}
        ts = build_transfer(run.net, kernels, f, paths)
        run.notes.extend(res.notes)
        run.emit("trace.jsonl", "".join(json.dumps(e, sort_keys=True) + "\n" for e in res.trace))
    for n in run.notes:
        sys.stdout.write(f"note: {n}\n")
    run.emit("kernels.txt", kernels_to_text(kernels, run.net))
    run.emit("codebook.txt", codebook_to_text(code))
    run.emit("paths.txt", paths_to_text(run.net, paths))
    return _certify(run, ts, code, spec.dists)


def cmd_dmin(run):
    ts = run.transfer()
    code = run.codebook()
    report = distance_report(ts, code, run.budget)
    run.emit("distance.txt", report.to_table(run.net), echo=True)
    run.emit("distance.jsonl", report.to_jsonl(run.net))
    if run.args.dist:
        dists = parse_sink_values(run.args.dist, run.net.sinks, "--dist")
        return _certify(run, ts, code, dists)
    return EXIT_OK


def _decoder(run, ts, t, code):
    if run.args.decoder == "mwd1":
        return MinWeightDecoder(ts, t, code, run.budget)
    return SphereDecoder(ts, t, code, run.args.radius, run.budget)


def cmd_decode(run):
    args = run.args
    ts = run.transfer()
    code = run.codebook()
    f = run.field
    sinks = [args.sink] if args.sink else list(ts.sinks)
    for t in sinks:
        if t not in ts.sinks:
            raise ValidationError(f"unknown sink {t!r}")
    z = np.zeros(ts.n_edges, dtype=np.int64)
    for item in args.error or ():
        try:
            eid, val = item.split("=")
            z[run.net.index(eid)] = int(val)
        except ValueError:
            raise ValidationError(f"--error expects edge=value, got {item!r}") from None
    if np.any((z < 0) | (z >= f.q)):
        raise ValidationError("error values must be field elements")
    records = []
    lines = []
    for t in sinks:
        if args.received:
            if len(sinks) != 1:
                raise ValidationError("--received needs a single --sink")
            y = parse_vector(args.received, len(ts.inputs[t]), "--received")
            sent = None
        else:
            if not args.codeword:
                raise ValidationError("'decode' needs --codeword or --received")
            x = parse_vector(args.codeword, ts.n_s, "--codeword")
            y = ts.received(t, x, z)
            sent = x
        out = _decoder(run, ts, t, code).decode(y)
        rec = {
            "sink": t,
            "received": y.tolist(),
            "outcome": out.kind,
            "codeword": None if out.codeword is None else out.codeword.tolist(),
            "weight": out.weight,
        }
        if sent is not None:
            rec["correct"] = bool(out.decoded and np.array_equal(out.codeword, sent))
        records.append(rec)
        lines.append(
            f"{t}: received {y.tolist()} -> {out.kind}"
            + ("" if out.codeword is None else f" {out.codeword.tolist()}")
            + ("" if "correct" not in rec else (" (correct)" if rec["correct"] else " (wrong)"))
        )
    run.emit("decode.txt", "\n".join(lines) + "\n", echo=True)
    run.emit("decode.jsonl", "".join(json.dumps(r, sort_keys=True) + "\n" for r in records))
    return EXIT_OK


def cmd_sweep(run):
    args = run.args
    ts = run.transfer()
    code = run.codebook()
    sinks = [args.sink] if args.sink else None
    rows = error_sweep(
        ts, code, sinks, args.max_weight, decoder=args.decoder, radius=args.radius,
        budget=run.budget,
    )
    run.emit("sweep.txt", sweep_table(rows), echo=True)
    run.emit("sweep.jsonl", sweep_jsonl(rows))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="netec", description="Network error-correcting codes: bounds, constructions, decoding."
    )
    parser.add_argument("--version", action="version", version=f"netec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--network", required=True, help="network file, or builtin:<name>")
        p.add_argument("--field", required=True, help="p^m, p^m/c_m,...,c_0 or a prime power q")
        p.add_argument("--paths", help="pinned paths file (path <sink> <edge ids>)")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="enumeration cap")
        p.add_argument("--out", default="netec-run", help="output directory")

    def code_args(p, kernels=True):
        if kernels:
            p.add_argument("--kernels", help="kernel file (kernel <e_in> <e_out> <scalar>)")
        p.add_argument("--codebook", help="generator rows, one per line")

    def decoder_args(p):
        p.add_argument("--decoder", choices=["mwd1", "mwd2"], default="mwd1")
        p.add_argument("--radius", type=int, default=0, help="sphere radius for mwd2")
        p.add_argument("--sink", help="restrict to one sink")

    p = sub.add_parser("bounds", help="evaluate coding bounds for given kernels")
    common(p)
    code_args(p)
    p.add_argument("--dist", help="t=d,... or one value (used without --codebook)")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("construct", help="build kernels and a codebook, then certify")
    common(p)
    code_args(p, kernels=False)
    p.add_argument("--alg", type=int, choices=[1, 2], default=2)
    p.add_argument("--omega", type=int, default=1)
    p.add_argument("--rank", help="t=r,... or one value (default: maxflow)")
    p.add_argument("--dist", help="t=d,... or one value (default: r - omega + 1)")
    p.add_argument("--randomized", action="store_true", help="seeded random search (alg 1)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("dmin", help="certify per-sink minimum distances")
    common(p)
    code_args(p)
    p.add_argument("--dist", help="targets to certify against")
    p.set_defaults(func=cmd_dmin)

    p = sub.add_parser("decode", help="decode one received vector or injected error")
    common(p)
    code_args(p)
    decoder_args(p)
    p.add_argument("--codeword", help="sent codeword, comma separated")
    p.add_argument("--error", action="append", help="edge=value (repeatable)")
    p.add_argument("--received", help="received vector at --sink, comma separated")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("sweep", help="exhaustive error-injection statistics")
    common(p)
    code_args(p)
    decoder_args(p)
    p.add_argument("--max-weight", type=int, default=1)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    run = None
    try:
        run = Run(args, args.command)
        code = args.func(run)
        run.write("certified" if code == EXIT_OK else "uncertified")
        return code
    except ValidationError as exc:
        status, code = f"invalid input: {exc}", EXIT_INVALID
    except InfeasibleError as exc:
        extra = f" (sufficient q: {exc.required_q})" if getattr(exc, "required_q", None) else ""
        status, code = f"infeasible: {exc}{extra}", EXIT_INFEASIBLE
    except BudgetExceededError as exc:
        status, code = f"budget exhausted: {exc}", EXIT_BUDGET
    except InvariantError as exc:
        status, code = f"invariant violated: {exc}", EXIT_UNCERTIFIED
    sys.stderr.write(f"netec: {status}\n")
    if run is not None:
        run.write(status)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
