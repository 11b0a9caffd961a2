"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--panels 200] [--repeat 50]
"""
import argparse
import timeit

from dqnfoil import _pykernels
from dqnfoil.geometry import build_naca0012_polygon, sample_profile

try:
    from dqnfoil import _ckernels
except ImportError:
    _ckernels = None


def bench(fn, args, repeat):
    t = timeit.repeat(lambda: fn(*args), number=1, repeat=repeat)
    return 1e3 * min(t)


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--panels", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=50)
    a = ap.parse_args(argv)
    prof = sample_profile(build_naca0012_polygon(), a.panels)
    x, y = prof.x.copy(), prof.y.copy()
    print(f"{'kernel':<24}{'numpy ms':>10}{'cython ms':>11}{'speedup':>9}")
    for name in ("influence_matrices", "has_self_intersection"):
        py = bench(getattr(_pykernels, name), (x, y), a.repeat)
        if _ckernels is None:
            print(f"{name:<24}{py:>10.3f}{'n/a':>11}")
            continue
        cy = bench(getattr(_ckernels, name), (x, y), a.repeat)
        print(f"{name:<24}{py:>10.3f}{cy:>11.3f}{py / cy:>8.1f}x")


if __name__ == "__main__":
    main()
