"""Command-line interface: one subcommand per pipeline stage.

Reports are JSON objects ``{"manifest": ..., "result": ...}``. Graph data is
JSON Lines and feature matrices are CSV; for those the run manifest goes to
a ``<out>.manifest.json`` sidecar. Only the manifest carries timestamps and
durations, so identical arguments and inputs give identical results.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import correlate, saturation_crop
from .descriptors import DESCRIPTORS, FeatureContext, featurize
from .discriminator import ExternalDiscriminator, LogisticDiscriminator
from .graph import graph_to_line, read_graphset
from .mmd import KernelSpec, default_spec, mmd2, subsampling_study
from .perturb import KINDS as PERTURB_KINDS
from .perturb import PerturbationSpec, perturb_set
from .pgd import MODES, pgd_interval, polygraph_discrepancy
from .procgen import gen_dataset
from .validity import VALIDITY_KINDS, vun

__all__ = ["RunManifest", "main", "build_parser"]


@dataclass
class RunManifest:
    subcommand: str
    argv: list[str]
    seeds: dict
    version: str = __version__
    started_at: str = ""
    duration_s: float = 0.0
    input_digests: dict = field(default_factory=dict)

    def stamp(self) -> dict:
        t0 = getattr(self, "_t0", None)
        if t0 is not None:
            self.duration_s = round(time.perf_counter() - t0, 6)
        return asdict(self)


def _digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _sizes(text: str) -> list[int]:
    """``8,16,32`` or a power-of-two range ``8..4096``."""
    text = text.strip()
    if ".." in text:
        lo, hi = (int(t) for t in text.split(".."))
        if lo < 1 or hi < lo:
            raise argparse.ArgumentTypeError(f"bad size range {text!r}")
        out, s = [], lo
        while s <= hi:
            out.append(s)
            s *= 2
        return out
    try:
        return [int(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def _descriptor_list(text: str) -> list[str]:
    ids = [t for t in text.split(",") if t]
    for d in ids:
        if d not in DESCRIPTORS:
            raise argparse.ArgumentTypeError(f"unknown descriptor {d!r}")
    return ids


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="graphdisc", description="Evaluate generated graph sets against reference sets.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument(
        "--threads", type=int, default=os.cpu_count() or 1, help="worker threads (results do not depend on it)"
    )
    # also accepted after the subcommand; SUPPRESS keeps the global value otherwise
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="generate a procedural dataset as JSON Lines")
    g.add_argument("--kind", required=True, choices=["planar", "sbm", "lobster", "er"])
    g.add_argument("--count", required=True, type=int)
    g.add_argument("--seed", required=True, type=int)
    g.add_argument("--er-n", type=int, default=64)
    g.add_argument("--er-p", type=float, default=0.1)
    g.add_argument("--out")

    q = sub.add_parser("perturb", parents=[common], help="corrupt a graph set")
    q.add_argument("--kind", required=True, choices=PERTURB_KINDS)
    q.add_argument("--magnitude", required=True, type=float)
    q.add_argument("--seed", required=True, type=int)
    q.add_argument("--in", dest="inp", required=True)
    q.add_argument("--out")

    d = sub.add_parser("descriptors", parents=[common], help="write a feature matrix as CSV")
    d.add_argument("--descriptor", required=True, choices=DESCRIPTORS)
    d.add_argument("--in", dest="inp", required=True)
    d.add_argument("--pad-with", nargs="*", default=[], help="other sets sharing the column layout")
    d.add_argument("--out")

    m = sub.add_parser("mmd", parents=[common], help="squared MMD between two sets")
    m.add_argument("--kernel", choices=["rbf", "gtv"], default="rbf")
    m.add_argument("--estimator", choices=["biased", "unbiased"], default="unbiased")
    m.add_argument("--descriptor", required=True, choices=DESCRIPTORS)
    m.add_argument("--bandwidths", type=_floats)
    m.add_argument("--ref", required=True)
    m.add_argument("--gen", required=True)
    m.add_argument("--out")

    s = sub.add_parser("study", parents=[common], help="MMD subsampling bias/variance study")
    s.add_argument("--ref", required=True)
    s.add_argument("--gen", required=True)
    s.add_argument("--descriptor", required=True, choices=DESCRIPTORS)
    s.add_argument("--kernel", choices=["rbf", "gtv"], default="rbf")
    s.add_argument("--estimator", choices=["biased", "unbiased"], default="unbiased")
    s.add_argument("--bandwidths", type=_floats)
    s.add_argument("--sizes", type=_sizes, default=_sizes("8..4096"))
    s.add_argument("--repeats", type=int, default=100)
    s.add_argument("--seed", required=True, type=int)
    s.add_argument("--out")

    r = sub.add_parser("pgd", parents=[common], help="PolyGraph Discrepancy report")
    r.add_argument("--ref", required=True)
    r.add_argument("--gen", required=True)
    r.add_argument("--mode", choices=MODES, default="jsd")
    r.add_argument("--descriptors", type=_descriptor_list, default=list(DESCRIPTORS))
    r.add_argument("--seed", required=True, type=int)
    r.add_argument("--repeats", type=int, help="subsample repeats; enables the interval protocol")
    r.add_argument("--fraction", type=float, default=0.5)
    r.add_argument("--lam", type=float, default=0.01, help="ridge strength of the logistic discriminator")
    r.add_argument("--discriminator-cmd", help="external classifier: CMD train.csv test.csv out.csv")
    r.add_argument("--out")

    v = sub.add_parser("validity", parents=[common], help="valid / unique / novel fractions")
    v.add_argument("--kind", choices=VALIDITY_KINDS, default="none")
    v.add_argument("--gen", required=True)
    v.add_argument("--train", required=True)
    v.add_argument("--out")

    c = sub.add_parser("correlate", parents=[common], help="Spearman or Pearson correlation of two columns")
    c.add_argument("--x", required=True, help="CSV whose first column holds x values")
    c.add_argument("--y", required=True, help="CSV whose first column holds y values")
    c.add_argument("--method", choices=["spearman", "pearson"], default="spearman")
    c.add_argument("--negate", action="store_true")
    c.add_argument("--crop-threshold", type=float)
    c.add_argument("--out")
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_report(result: dict, manifest: RunManifest, out: str | None) -> None:
    _emit(json.dumps({"manifest": manifest.stamp(), "result": result}, indent=2, sort_keys=True) + "\n", out)


def _emit_sidecar(manifest: RunManifest, out: str | None) -> None:
    data = manifest.stamp()
    if out:
        Path(out + ".manifest.json").write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        sys.stderr.write(json.dumps(data, sort_keys=True) + "\n")


def _graphs_text(s) -> str:
    buf = io.StringIO()
    for i, g in enumerate(s.graphs):
        buf.write(graph_to_line(g, s.meta[i] if s.meta else None))
        buf.write("\n")
    return buf.getvalue()


def _read_column(path: str) -> np.ndarray:
    vals = []
    with open(path) as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#"):
                continue
            try:
                vals.append(float(row[0]))
            except ValueError:
                if vals:
                    raise ValueError(f"{path}: non-numeric value {row[0]!r}") from None
                # header line
    return np.array(vals)


def _run(args, manifest: RunManifest) -> None:
    cmd = args.command
    if cmd == "generate":
        s = gen_dataset(args.kind, args.count, args.seed, er_n=args.er_n, er_p=args.er_p)
        _emit(_graphs_text(s), args.out)
        _emit_sidecar(manifest, args.out)
    elif cmd == "perturb":
        s = read_graphset(args.inp)
        out = perturb_set(s, PerturbationSpec(args.kind, args.magnitude, args.seed))
        _emit(_graphs_text(out), args.out)
        _emit_sidecar(manifest, args.out)
    elif cmd == "descriptors":
        s = read_graphset(args.inp)
        ctx = FeatureContext.from_sets(s, *(read_graphset(p) for p in args.pad_with))
        fm = featurize(s, args.descriptor, ctx)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"{args.descriptor}_{j}" for j in range(fm.cols)])
        for row in fm.values:
            w.writerow([repr(float(x)) for x in row])
        _emit(buf.getvalue(), args.out)
        _emit_sidecar(manifest, args.out)
    elif cmd == "mmd":
        ref, gen = read_graphset(args.ref), read_graphset(args.gen)
        spec = KernelSpec(args.kernel, args.bandwidths, "max") if args.bandwidths else default_spec(args.kernel, args.descriptor)
        ctx = FeatureContext.from_sets(ref, gen)
        est = mmd2(featurize(ref, args.descriptor, ctx), featurize(gen, args.descriptor, ctx), spec, args.estimator)
        _emit_report(est.to_dict(), manifest, args.out)
    elif cmd == "study":
        ref, gen = read_graphset(args.ref), read_graphset(args.gen)
        spec = (
            KernelSpec(args.kernel, args.bandwidths, "max")
            if args.bandwidths
            else default_spec(args.kernel, args.descriptor, study=True)
        )
        rep = subsampling_study(ref, gen, args.descriptor, spec, args.estimator, args.sizes, args.repeats, args.seed)
        _emit_report(rep.to_dict(), manifest, args.out)
    elif cmd == "pgd":
        ref, gen = read_graphset(args.ref), read_graphset(args.gen)
        disc = ExternalDiscriminator(args.discriminator_cmd) if args.discriminator_cmd else LogisticDiscriminator(args.lam)
        if args.repeats:
            rep = pgd_interval(
                ref, gen, args.descriptors, args.mode, args.repeats, args.fraction, args.seed,
                discriminator=disc, threads=args.threads,
            )
        else:
            rep = polygraph_discrepancy(ref, gen, args.descriptors, args.mode, args.seed, discriminator=disc, threads=args.threads)
        _emit_report(rep.to_dict(), manifest, args.out)
    elif cmd == "validity":
        summary = vun(read_graphset(args.gen), read_graphset(args.train), args.kind)
        _emit_report(summary.to_dict(), manifest, args.out)
    elif cmd == "correlate":
        x, y = _read_column(args.x), _read_column(args.y)
        if len(x) != len(y):
            raise ValueError(f"column lengths differ: {len(x)} vs {len(y)}")
        used = range(len(x))
        if args.crop_threshold is not None:
            used = saturation_crop(x, y, args.crop_threshold)
            x, y = x[used.start : used.stop], y[used.start : used.stop]
        res = correlate(x, y, args.method, args.negate)
        out = asdict(res)
        out["range"] = [used.start, used.stop]
        _emit_report(out, manifest, args.out)


def _seeds(args) -> dict:
    return {k: getattr(args, k) for k in ("seed",) if getattr(args, k, None) is not None}


def _inputs(args) -> list[str]:
    paths = [getattr(args, k, None) for k in ("inp", "ref", "gen", "train", "x", "y")]
    return [p for p in paths + list(getattr(args, "pad_with", []) or []) if p]


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads < 1:
        parser.print_usage(sys.stderr)
        sys.stderr.write("graphdisc: error: --threads must be positive\n")
        return 2
    t0 = time.perf_counter()
    manifest = RunManifest(args.command, argv, _seeds(args))
    manifest.started_at = datetime.now(timezone.utc).isoformat()
    try:
        manifest.input_digests = {p: _digest(p) for p in _inputs(args)}
        manifest._t0 = t0
        _run(args, manifest)
    except (ValueError, OSError, ArithmeticError, RuntimeError) as exc:
        sys.stderr.write(f"graphdisc: error: {exc}\n")
        return 1
    return 0


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
