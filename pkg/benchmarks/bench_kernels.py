"""Compare the numba and numpy kernel backends.

Kernel timings call both backend modules directly in one process. The
end-to-end timing runs a full DE fit in two subprocesses, one of them with
``PEERDE_DISABLE_NUMBA=1``.

    python benchmarks/bench_kernels.py [--repeat 20]
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from peerde._kernels import _numba as nb
from peerde._kernels import _numpy as npk

E2E = """
import time
from peerde.de_core import DEConfig, StoppingRule, evolve
from peerde.objectives import test_function
fn = test_function("rastrigin", 10)
evolve(fn, fn.bounds, DEConfig(np=10, stop=StoppingRule(2)))
t = time.perf_counter()
evolve(fn, fn.bounds, DEConfig(np=40, stop=StoppingRule(1000), seed=0))
print(f"{time.perf_counter() - t:.3f}")
"""


def cases(rng):
    pop = rng.uniform(-5, 5, size=(40, 10))
    idx = np.stack([rng.permutation(40)[:5] for _ in range(40)])
    r = rng.random((40, 10))
    jr = rng.integers(0, 10, size=40)
    x = np.column_stack([np.ones(500), rng.normal(size=(500, 4))])
    y = (rng.random(500) < 0.4).astype(float)
    betas = rng.normal(size=(40, 5))
    eta = rng.normal(size=500)
    yc = rng.integers(0, 4, size=500)
    tau = np.array([-1.0, 0.0, 1.0])
    scores = np.round(rng.normal(size=500), 1)
    labels = rng.integers(0, 2, size=500)
    return {
        "de_mutate": lambda m: m.de_mutate(pop, idx, 0, 0, 0.8),
        "de_crossover": lambda m: m.de_crossover(pop, pop[::-1].copy(), r, jr, 0.9),
        "rastrigin": lambda m: m.rastrigin(pop),
        "binary_nll": lambda m: m.binary_nll(betas, x, y),
        "ordered_nll": lambda m: m.ordered_nll(eta, tau, yc),
        "mann_whitney_auc": lambda m: m.mann_whitney_auc(scores, labels),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--number", type=int, default=50)
    args = ap.parse_args(argv)
    print(f"{'kernel':<18}{'numba us':>12}{'numpy us':>12}{'speedup':>10}")
    for name, call in cases(np.random.default_rng(0)).items():
        call(nb)  # compile
        t = {}
        for label, mod in (("numba", nb), ("numpy", npk)):
            best = min(timeit.repeat(lambda: call(mod), number=args.number, repeat=args.repeat))
            t[label] = best / args.number * 1e6
        print(f"{name:<18}{t['numba']:>12.1f}{t['numpy']:>12.1f}{t['numpy'] / t['numba']:>10.2f}")
    e2e = {}
    for label, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, PEERDE_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", E2E], env=env, capture_output=True, text=True, check=True)
        e2e[label] = float(out.stdout.strip())
    print(f"\nDE rastrigin D=10 NP=40 1000 gens: numba {e2e['numba']:.2f}s, numpy {e2e['numpy']:.2f}s")


if __name__ == "__main__":
    main()
