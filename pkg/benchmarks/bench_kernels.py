"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from charfun import _kernels_py as pure

try:
    from charfun import _kernels as compiled
except ImportError:
    compiled = None


def _cases():
    rng = np.random.default_rng(0)
    z = rng.uniform(-50, 50, 100_000) + 1j * rng.uniform(-50, 50, 100_000)
    w = z + 0.5
    n = 1 << 16
    dt = 2 * np.pi / 40
    t = dt * np.arange(n + 1)
    wt = np.ones(n + 1)
    wt[0] = wt[-1] = 0.5
    cf = (1 - 2j * t) ** -2.0
    x = np.linspace(0, 40, 401)
    return {
        "loggamma (1e5 points)": lambda k: k.loggamma(z),
        "loggamma_ratio (1e5 points)": lambda k: k.loggamma_ratio(w, z),
        "gp_sums (401 x 65537)": lambda k: k.gp_sums(x, t, wt, cf, dt, 4.0),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = [("python", pure)] + ([("cython", compiled)] if compiled is not None else [])
    if compiled is None:
        print("compiled kernels not built; timing the fallback only")
    print(f"{'kernel':32s}" + "".join(f"{name:>12s}" for name, _ in backends) + ("     speedup" if compiled else ""))
    for label, fn in _cases().items():
        times = [min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat)) for _, k in backends]
        row = f"{label:32s}" + "".join(f"{1e3 * s:10.1f}ms" for s in times)
        if compiled is not None:
            row += f"{times[0] / times[1]:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
