"""Compiled core vs pure-Python fallback, stage by stage.

    python3 benchmarks/compare_impl.py --n 16384 --alphabet 2 --repeat 3

Prints one TSV row per stage with the median time of each implementation and the speedup.
"""
import argparse
import statistics
import time

from linfact._impl import AVAILABLE
from linfact.bench import generate
from linfact.lz78 import factorize
from linfact.suffix_index import build_suffix_tree
from linfact.superimpose import TrieSuperimposition
from linfact.text import encode_text
from linfact.tree_queries import preprocess_level_ancestor


def stages(data, impl, backend):
    t = encode_text(data)
    out = {}

    def clock(name, fn):
        t0 = time.perf_counter()
        res = fn()
        out[name] = time.perf_counter() - t0
        return res

    st = clock("suffix_tree", lambda: build_suffix_tree(t, impl=impl))
    la = clock("level_ancestor", lambda: preprocess_level_ancestor(st, impl=impl))
    clock("nma_init", lambda: TrieSuperimposition(st, backend, la=la, impl=impl))
    clock("pipeline", lambda: factorize(t, nma_backend=backend, impl=impl, debug=False))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1 << 14)
    ap.add_argument("--alphabet", type=int, default=2)
    ap.add_argument("--kind", default="random")
    ap.add_argument("--backend", default="accelerated")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if len(AVAILABLE) < 2:
        raise SystemExit("compiled core not built; nothing to compare")
    data = generate(args.kind, args.n, args.alphabet, args.seed)
    med = {}
    for impl in AVAILABLE:
        runs = [stages(data, impl, args.backend) for _ in range(args.repeat)]
        med[impl] = {k: statistics.median(r[k] for r in runs) for k in runs[0]}
    print("stage\tn\tcompiled_s\tpure_s\tspeedup")
    for k in med["compiled"]:
        c, p = med["compiled"][k], med["pure"][k]
        print(f"{k}\t{args.n}\t{c:.6f}\t{p:.6f}\t{p / c:.1f}")


if __name__ == "__main__":
    main()
