"""Kernel backends: the compiled extension and the pure-Python fallback
must produce byte-identical results, and each kernel's branch behavior
(endpoint copies, sign flip, nlerp fallbacks) is pinned here."""

import math
import os
import random
import subprocess
import sys

import numpy as np
import pytest

import movi._kernels as kernels
import movi._kernels.pure as pure

native = pytest.importorskip(
    "movi._kernels._native",
    reason="compiled kernel extension not built; cross-backend tests skipped")


def _random_quats(rng, n):
    out = np.empty((n, 4))
    for i in range(n):
        q = [rng.gauss(0.0, 1.0) for _ in range(4)]
        norm = math.sqrt(sum(v * v for v in q))
        out[i] = [v / norm for v in q]
    return out


def _random_track(rng, n):
    ts = np.cumsum([rng.uniform(1e-3, 0.1) for _ in range(n)]) + rng.uniform(0, 1)
    pos = np.array([[rng.uniform(-2, 2) for _ in range(3)] for _ in range(n)])
    quat = _random_quats(rng, n)
    return ts, pos, quat


class TestBackendSelection:
    def test_backend_reported(self):
        assert kernels.BACKEND in ("native", "pure")

    def test_env_var_forces_pure_backend(self):
        env = dict(os.environ, MOVI_PURE_KERNELS="1")
        out = subprocess.run(
            [sys.executable, "-c", "import movi._kernels as k; print(k.BACKEND)"],
            capture_output=True, text=True, env=env, check=True)
        assert out.stdout.strip() == "pure"


class TestCrossBackendBitIdentity:
    def test_slerp_one(self):
        rng = random.Random(11)
        quats = _random_quats(rng, 400)
        for i in range(0, 400, 2):
            q0, q1 = quats[i], quats[i + 1]
            for u in (0.0, 0.25, 0.5, 1.0 / 3.0, 0.999999, 1.0):
                a = pure.slerp_one(q0, q1, u)
                b = native.slerp_one(q0, q1, u)
                assert np.asarray(a).tobytes() == np.asarray(b).tobytes()

    def test_slerp_one_accepts_plain_sequences(self):
        # Callers may hand the kernels tuples rather than arrays; both
        # backends must coerce instead of requiring ndarray inputs.
        q0 = (0.0, 0.0, -0.25881904510252074, 0.9659258262890683)
        q1 = (0.0, 0.0, 0.0, 1.0)
        for u in (0.0, 0.3, 0.5, 1.0):
            a = pure.slerp_one(q0, q1, u)
            b = native.slerp_one(q0, q1, u)
            assert np.asarray(a).tobytes() == np.asarray(b).tobytes()

    def test_resample(self):
        rng = random.Random(12)
        for n in (2, 3, 17, 200):
            ts, pos, quat = _random_track(rng, n)
            span = ts[-1] - ts[0]
            grid = np.linspace(ts[0], ts[-1], max(2, int(span * 37)))
            grid[-1] = ts[-1]
            a = pure.resample(ts, pos, quat, grid)
            b = native.resample(ts, pos, quat, grid)
            assert np.asarray(a[0]).tobytes() == np.asarray(b[0]).tobytes()
            assert np.asarray(a[1]).tobytes() == np.asarray(b[1]).tobytes()

    def test_moving_average(self):
        rng = random.Random(13)
        for n in (1, 2, 5, 100):
            _, pos, _ = _random_track(rng, n)
            for window in (1, 3, 5, 9, 101):
                a = pure.moving_average(pos, window)
                b = native.moving_average(pos, window)
                assert np.asarray(a).tobytes() == np.asarray(b).tobytes()

    def test_central_diff(self):
        rng = random.Random(14)
        for n in (2, 3, 50):
            ts, pos, _ = _random_track(rng, n)
            a = pure.central_diff(ts, pos)
            b = native.central_diff(ts, pos)
            assert np.asarray(a).tobytes() == np.asarray(b).tobytes()

    def test_rotate_forward_many(self):
        rng = random.Random(15)
        quats = _random_quats(rng, 500)
        a = pure.rotate_forward_many(quats)
        b = native.rotate_forward_many(quats)
        assert np.asarray(a).tobytes() == np.asarray(b).tobytes()


@pytest.mark.parametrize("impl", [pure, native], ids=["pure", "native"])
class TestSlerpBranches:
    def test_u_zero_copies_q0_exactly(self, impl):
        q0 = np.array([0.5, 0.5, 0.5, 0.5])
        q1 = np.array([0.0, 0.0, 0.0, 1.0])
        assert np.asarray(impl.slerp_one(q0, q1, 0.0)).tolist() == q0.tolist()

    def test_u_one_copies_sign_fixed_q1_exactly(self, impl):
        q0 = np.array([0.0, 0.0, 0.0, 1.0])
        q1 = np.array([0.1, 0.1, 0.1, -0.9])
        q1 = q1 / np.linalg.norm(q1)
        out = np.asarray(impl.slerp_one(q0, q1, 1.0))
        assert out.tolist() == (-q1).tolist()  # dot < 0 flips q1

    def test_equal_endpoints_return_q0_for_any_u(self, impl):
        q = np.array([0.5, -0.5, 0.5, -0.5])
        assert np.asarray(impl.slerp_one(q, q, 0.7)).tolist() == q.tolist()

    def test_antipodal_endpoints_collapse_to_q0(self, impl):
        q = np.array([0.5, 0.5, 0.5, 0.5])
        out = np.asarray(impl.slerp_one(q, -q, 0.3))
        assert out.tolist() == q.tolist()

    def test_nearly_equal_endpoints_use_stable_blend(self, impl):
        q0 = np.array([0.0, 0.0, 0.0, 1.0])
        tiny = 1e-14
        q1 = np.array([tiny, 0.0, 0.0, math.sqrt(1.0 - tiny * tiny)])
        out = np.asarray(impl.slerp_one(q0, q1, 0.5))
        assert abs(np.linalg.norm(out) - 1.0) <= 1e-15
        assert abs(out[0] - tiny / 2) <= 1e-15

    def test_orthogonal_endpoints_unit_output(self, impl):
        q0 = np.array([0.0, 0.0, 0.0, 1.0])
        q1 = np.array([0.0, 0.0, 1.0, 0.0])
        out = np.asarray(impl.slerp_one(q0, q1, 0.5))
        assert abs(np.linalg.norm(out) - 1.0) <= 1e-15
        r = math.sqrt(0.5)
        assert np.allclose(out, [0.0, 0.0, r, r], atol=1e-15)


@pytest.mark.parametrize("impl", [pure, native], ids=["pure", "native"])
class TestMovingAverageKernel:
    def test_window_one_is_identity(self, impl):
        pos = np.array([[0.1, 0.2, 0.3], [0.4, 0.5, 0.6]])
        out = np.asarray(impl.moving_average(pos, 1))
        assert out.tobytes() == pos.tobytes()

    def test_window_three_oracle(self, impl):
        # Oracle: direct clipped-window averaging of x = (0, 1, 0, 1, 0).
        pos = np.zeros((5, 3))
        pos[:, 0] = [0.0, 1.0, 0.0, 1.0, 0.0]
        out = np.asarray(impl.moving_average(pos, 3))
        assert out[:, 0].tolist() == [0.5, 1 / 3, 2 / 3, 1 / 3, 0.5]

    def test_window_larger_than_track_averages_everything(self, impl):
        # Every clipped window spans the whole track, so every output
        # row is the track mean.
        pos = np.zeros((3, 3))
        pos[:, 1] = [0.0, 1.5, 3.0]
        out = np.asarray(impl.moving_average(pos, 99))
        assert out[:, 1].tolist() == [1.5, 1.5, 1.5]


@pytest.mark.parametrize("impl", [pure, native], ids=["pure", "native"])
class TestCentralDiffKernel:
    def test_linear_motion_exact(self, impl):
        ts = np.array([0.0, 0.5, 1.0, 1.5])
        pos = np.array([[t * 2.0, -t, 0.0] for t in ts])
        out = np.asarray(impl.central_diff(ts, pos))
        for row in out:
            assert row.tolist() == [2.0, -1.0, 0.0]

    def test_two_samples_one_sided(self, impl):
        ts = np.array([0.0, 2.0])
        pos = np.array([[0.0, 0.0, 0.0], [4.0, 0.0, 0.0]])
        out = np.asarray(impl.central_diff(ts, pos))
        assert out[:, 0].tolist() == [2.0, 2.0]


@pytest.mark.parametrize("impl", [pure, native], ids=["pure", "native"])
class TestResampleKernel:
    def test_endpoint_grid_values_copy_samples_bitwise(self, impl):
        ts = np.array([0.25, 0.5, 1.0])
        pos = np.array([[0.1, 0.2, 0.3], [1.0, 2.0, 3.0], [-1.0, 0.5, 0.7]])
        quat = np.tile(np.array([0.0, 0.0, 0.0, 1.0]), (3, 1))
        grid = np.array([0.25, 0.5, 1.0])
        rpos, rquat = impl.resample(ts, pos, quat, grid)
        assert np.asarray(rpos).tobytes() == pos.tobytes()

    def test_midpoint_blend(self, impl):
        ts = np.array([0.0, 1.0])
        pos = np.array([[0.0, 0.0, 0.0], [1.0, 2.0, 4.0]])
        quat = np.tile(np.array([0.0, 0.0, 0.0, 1.0]), (2, 1))
        grid = np.array([0.0, 0.5, 1.0])
        rpos, _ = impl.resample(ts, pos, quat, grid)
        assert np.asarray(rpos)[1].tolist() == [0.5, 1.0, 2.0]
