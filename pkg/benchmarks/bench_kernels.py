"""Compiled kernels against their pure-numpy originals (``.py_func``).

    python3 benchmarks/bench_kernels.py [--repeat N]

Inputs come from a random two-state channel so the sizes are the ones the
library actually sees. The compiled column excludes the first call, which
pays for compilation (or a cache load).
"""

import argparse
import time

import numpy as np

from cgic import _accel, kernels
from cgic.bounds import _gh_rule, gaussian_evaluator, inner_constants
from cgic.inequality_gen import system_for
from cgic.instances import random_channel
from cgic.lp import LP_TOL
from cgic.polytope import ValuedSystem


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    system = system_for(2)
    ev = gaussian_evaluator(random_channel(rng, 2))
    rhs = inner_constants(system, ev)
    A = system.coefficient_matrix()
    G = system.nonneg_matrix()
    E = np.ascontiguousarray(np.hstack([A.T, -G.T]))
    cost = np.concatenate([rhs, np.zeros(G.shape[0])])
    target = np.full(E.shape[0], 0.7)
    hs = ValuedSystem(system, rhs).halfspaces()

    K = 16
    means = rng.normal(scale=2.0, size=(K, 2))
    logw = np.log(rng.dirichlet(np.ones(K)))
    nodes, node_w = _gh_rule(2)

    labels = rng.integers(0, 4096, size=1_000_000)
    weights = rng.dirichlet(np.ones(labels.size))
    return {
        "simplex (dual LP, 30 rows)": (kernels.simplex_standard, (cost, E, target, LP_TOL, 10_000)),
        "fm_eliminate (one column)": (kernels.fm_eliminate, (hs.A.copy(), hs.b.copy(), 0, 1e-12)),
        "mixture_entropy (16 x 2-D)": (kernels.mixture_entropy, (means, logw, np.ascontiguousarray(nodes),
                                                                   np.ascontiguousarray(node_w))),
        "weighted_entropy (1e6 cells)": (kernels.weighted_entropy, (labels, weights, 4096)),
    }


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    print(f"backend: {_accel.backend()}")
    print(f"{'kernel':32s} {'compiled':>12s} {'numpy':>12s} {'speedup':>9s}")
    for name, (fn, fargs) in cases(np.random.default_rng(args.seed)).items():
        fn(*fargs)
        fast = best_of(fn, fargs, args.repeat)
        slow = best_of(fn.py_func, fargs, args.repeat)
        print(f"{name:32s} {fast * 1e3:10.3f}ms {slow * 1e3:10.3f}ms {slow / fast:8.1f}x")


if __name__ == "__main__":
    main()
