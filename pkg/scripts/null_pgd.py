"""PGD between interleaved halves of one dataset, over several seeds.

    python scripts/null_pgd.py --kind planar --count 1024 --seeds 10
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from graphdisc.graph import interleaved_split
from graphdisc.pgd import polygraph_discrepancy
from graphdisc.procgen import gen_dataset


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--kind", default="planar")
    p.add_argument("--count", type=int, default=1024)
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--mode", choices=["jsd", "tv"], default="jsd")
    args = p.parse_args()

    vals = []
    print("seed,pgd,selected,seconds")
    for seed in range(args.seeds):
        t0 = time.perf_counter()
        ref, gen = interleaved_split(gen_dataset(args.kind, args.count, seed))
        rep = polygraph_discrepancy(ref, gen, mode=args.mode, seed=seed)
        vals.append(rep.final_pgd)
        print(f"{seed},{rep.final_pgd:.6f},{rep.selected_descriptor},{time.perf_counter() - t0:.2f}")
    v = np.array(vals)
    print(f"mean {100 * v.mean():.2f} +- {100 * v.std(ddof=1):.2f} (x100)", file=sys.stderr)


if __name__ == "__main__":
    main()
