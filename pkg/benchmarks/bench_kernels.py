"""Benchmark the compiled kernels against the pure-Python fallback.

Runs each hot kernel on representative track sizes with both backends,
verifies the outputs are bit-identical, and prints the timing table
with the speedup factor.

    python3 benchmarks/bench_kernels.py [--samples 100000] [--repeat 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from movi._kernels import pure

try:
    from movi._kernels import _native as native
except ImportError:
    native = None


def _tracks(n: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    ts = np.cumsum(rng.uniform(0.005, 0.02, n))
    pos = rng.uniform(-2.0, 2.0, (n, 3))
    quat = rng.normal(0.0, 1.0, (n, 4))
    quat /= np.linalg.norm(quat, axis=1, keepdims=True)
    grid = np.linspace(ts[0], ts[-1], n)
    return ts, np.ascontiguousarray(pos), np.ascontiguousarray(quat), grid


def _cases(n: int):
    ts, pos, quat, grid = _tracks(n)
    q0, q1 = quat[0], quat[1]
    return [
        ("slerp_one x1000",
         lambda impl: [impl.slerp_one(q0, q1, u / 999.0) for u in range(1000)]),
        (f"resample n={n}",
         lambda impl: impl.resample(ts, pos, quat, grid)),
        (f"moving_average n={n} w=31",
         lambda impl: impl.moving_average(pos, 31)),
        (f"central_diff n={n}",
         lambda impl: impl.central_diff(ts, pos)),
        (f"rotate_forward n={n}",
         lambda impl: impl.rotate_forward_many(quat)),
    ]


def _best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def _as_bytes(result) -> bytes:
    if isinstance(result, tuple):
        return b"".join(np.asarray(part).tobytes() for part in result)
    if isinstance(result, list):
        return b"".join(np.asarray(part).tobytes() for part in result)
    return np.asarray(result).tobytes()


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=100000,
                        help="track length for the array kernels")
    parser.add_argument("--repeat", type=int, default=5,
                        help="timing repetitions (best-of)")
    args = parser.parse_args()

    if native is None:
        print("compiled extension not available; nothing to compare")
        return 1

    print(f"{'kernel':32} {'pure':>10} {'native':>10} {'speedup':>8}")
    for name, fn in _cases(args.samples):
        pure_out = fn(pure)
        native_out = fn(native)
        identical = _as_bytes(pure_out) == _as_bytes(native_out)
        t_pure = _best_of(lambda: fn(pure), args.repeat)
        t_native = _best_of(lambda: fn(native), args.repeat)
        flag = "" if identical else "  !! outputs differ"
        print(f"{name:32} {t_pure * 1e3:9.2f}ms {t_native * 1e3:9.2f}ms "
              f"{t_pure / t_native:7.1f}x{flag}")
        if not identical:
            return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
