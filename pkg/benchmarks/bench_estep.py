"""Time the compiled E-step against the numpy fallback.

    python benchmarks/bench_estep.py --docs 300 --terms 500 --k 5 --repeat 5
"""

import argparse
import statistics
import time

import numpy as np

from corpusmix.lda import LdaConfig, sample_corpus
from corpusmix.lda import _kernels
from corpusmix.lda.model import _csr_arrays, _dirichlet_expectation, init_lambda


def time_estep(kernel, arrays, elog_beta, gamma0, alpha, repeat):
    times = []
    for _ in range(repeat):
        gamma = gamma0.copy()
        t0 = time.perf_counter()
        sstats, iters = kernel.estep(*arrays, elog_beta, alpha, gamma, 50, 1e-6)
        times.append(time.perf_counter() - t0)
    return statistics.median(times), sstats, gamma, int(np.sum(iters))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--docs", type=int, default=300)
    ap.add_argument("--terms", type=int, default=500)
    ap.add_argument("--doc-len", type=int, default=300)
    ap.add_argument("--k", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    sim = sample_corpus(args.k, args.terms, args.docs, args.doc_len, alpha=0.5, delta=0.1, seed=args.seed)
    cfg = LdaConfig(k=args.k, seed=args.seed)
    arrays = _csr_arrays(sim.dtm)
    elog_beta = np.ascontiguousarray(_dirichlet_expectation(init_lambda(cfg, sim.dtm)))
    alpha = cfg.alpha_value
    doc_len = np.asarray(sim.dtm.matrix.sum(axis=1), dtype=float).ravel()
    gamma0 = np.ascontiguousarray(np.repeat((alpha + doc_len / args.k)[:, None], args.k, axis=1))

    print(f"{args.docs} docs x {args.terms} terms, k={args.k}, {sim.dtm.matrix.nnz} nonzeros")
    results = {}
    for name in ("python", "cython"):
        try:
            kernel = _kernels.get_backend(name)
        except ImportError:
            print(f"{name:>7}: not built")
            continue
        secs, sstats, gamma, iters = time_estep(kernel, arrays, elog_beta, gamma0, alpha, args.repeat)
        results[name] = (secs, sstats, gamma)
        print(f"{name:>7}: {1000 * secs:9.2f} ms per E-step ({iters} document iterations)")
    if len(results) == 2:
        (tp, sp_, gp), (tc, sc, gc) = results["python"], results["cython"]
        print(f"speedup: {tp / tc:.1f}x; max |gamma diff| {np.abs(gp - gc).max():.1e}, "
              f"max |sstats diff| {np.abs(sp_ - sc).max():.1e}")


if __name__ == "__main__":
    main()
