"""Numeric kernel backend selection.

The compiled extension is preferred when it imported cleanly; setting
MOVI_PURE_KERNELS=1 forces the pure-Python fallback. Both backends
produce bit-identical results (see benchmarks/bench_kernels.py for the
speed comparison).
"""

import os

if os.environ.get("MOVI_PURE_KERNELS", "0") not in ("", "0"):
    from movi._kernels import pure as impl
    BACKEND = "pure"
else:
    try:
        from movi._kernels import _native as impl  # type: ignore[attr-defined]
        BACKEND = "native"
    except ImportError:
        from movi._kernels import pure as impl
        BACKEND = "pure"

slerp_one = impl.slerp_one
resample = impl.resample
moving_average = impl.moving_average
central_diff = impl.central_diff
rotate_forward_many = impl.rotate_forward_many
NLERP_DOT = 1.0 - 1e-12
DEGENERATE_DOT = 1e-15

__all__ = [
    "BACKEND",
    "DEGENERATE_DOT",
    "NLERP_DOT",
    "central_diff",
    "moving_average",
    "resample",
    "rotate_forward_many",
    "slerp_one",
]
