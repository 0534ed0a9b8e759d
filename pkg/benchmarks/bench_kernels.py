"""Compare the compiled and pure-Python mod-p elimination kernels.

Two workloads: dense random matrices, and the Koszul differentials of a
fuzzed module (sparse, structured, the shape the library actually sees).
Both kernels must agree on every rank before any timing is reported.

    python benchmarks/bench_kernels.py [--sizes 50 100 200] [--repeat 3]
"""

import argparse
import random
import timeit

import numpy as np

from fihom.exactla import prime_field
from fihom.exactla.kernels import bareiss_rank_modp, echelon_modp, load_impl
from fihom.fuzz import FuzzParams, random_presentation
from fihom.fimodule import from_presentation
from fihom.koszul import build_complex

P = 32003


def koszul_matrices(seed: int, N: int) -> list[np.ndarray]:
    # many random presentations collapse to zero; take the first that survives to degree N
    while True:
        pres = random_presentation(random.Random(f"bench:{seed}"), FuzzParams(max_relation_degree=3))
        V = from_presentation(pres, prime_field(P), N)[0]
        if V.dims[N]:
            break
        seed += 1
    cx = build_complex(V, N)
    return [np.asarray(cx.d(a), dtype=np.int64) for a in range(1, N + 1) if cx.d(a).size]


def random_matrices(sizes: list[int], seed: int) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    # rank-deficient on purpose: elimination has to find the dependent rows
    return [rng.integers(0, P, (n, n // 2)) @ rng.integers(0, P, (n // 2, n)) % P for n in sizes]


def best_of(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def bench(label: str, matrices: list[np.ndarray], impls: dict, repeat: int) -> None:
    for M in matrices:
        ranks = {name: bareiss_rank_modp(M, P, impl) for name, impl in impls.items()}
        ranks |= {f"{name}/echelon": len(echelon_modp(M, P, impl=impl)[1]) for name, impl in impls.items()}
        if len(set(ranks.values())) != 1:
            raise SystemExit(f"kernels disagree on a {M.shape} matrix: {ranks}")
        times = {}
        for name, impl in impls.items():
            times[name, "echelon"] = best_of(lambda: echelon_modp(M, P, impl=impl), repeat)
            times[name, "bareiss"] = best_of(lambda: bareiss_rank_modp(M, P, impl), repeat)
        shape = f"{M.shape[0]}x{M.shape[1]}"
        for alg in ("echelon", "bareiss"):
            row = [label, shape, str(next(iter(ranks.values()))), alg]
            row += [f"{times[name, alg] * 1e3:.2f}" for name in impls]
            if len(impls) == 2:
                row.append(f"{times['python', alg] / max(times['compiled', alg], 1e-9):.1f}x")
            print("\t".join(row))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--window", type=int, default=6, help="truncation for the Koszul workload")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    impls = {"python": load_impl("python")}
    try:
        impls["compiled"] = load_impl("compiled")
    except ImportError:
        print("# compiled kernels not built; timing the python kernels only")

    header = ["workload", "shape", "rank", "kernel"] + [f"{name}_ms" for name in impls]
    if len(impls) == 2:
        header.append("speedup")
    print("\t".join(header))
    bench("random", random_matrices(args.sizes, args.seed), impls, args.repeat)
    bench("koszul", koszul_matrices(args.seed, args.window), impls, args.repeat)


if __name__ == "__main__":
    main()
