"""Wall-clock cost of generation, each descriptor and one PGD run per dataset kind.

    python scripts/benchmark.py --count 256
"""

from __future__ import annotations

import argparse
import time

from graphdisc.descriptors import DESCRIPTORS, FeatureContext, featurize
from graphdisc.graph import interleaved_split
from graphdisc.pgd import polygraph_discrepancy
from graphdisc.procgen import gen_dataset


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--kinds", default="planar,sbm,lobster")
    p.add_argument("--count", type=int, default=256)
    args = p.parse_args()

    # warm up the compiled kernels so the first row is not dominated by JIT time
    featurize(gen_dataset("planar", 2, 0), "orbit5")
    print("kind,stage,seconds,per_graph_ms")
    for kind in args.kinds.split(","):
        s, dt = _timed(lambda: gen_dataset(kind, args.count, 0))
        print(f"{kind},generate,{dt:.3f},{1e3 * dt / args.count:.2f}")
        ctx = FeatureContext.from_sets(s)
        for d in DESCRIPTORS:
            _, dt = _timed(lambda: featurize(s, d, ctx))
            print(f"{kind},{d},{dt:.3f},{1e3 * dt / args.count:.2f}")
        ref, gen = interleaved_split(s)
        _, dt = _timed(lambda: polygraph_discrepancy(ref, gen))
        print(f"{kind},pgd,{dt:.3f},{1e3 * dt / args.count:.2f}")


if __name__ == "__main__":
    main()
