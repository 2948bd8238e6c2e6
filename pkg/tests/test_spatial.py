import numpy as np
import pytest

from maxentaug.core import RngStream
from maxentaug.errors import InvalidParameterError
from maxentaug.transforms import spatial
from maxentaug.transforms.spatial import (
    DiffeoParams,
    DisplacementField,
    apply_diffeo,
    bijective_strength_interval,
    jacobian_determinant,
    mode_projection,
    sample_diffeo,
)

from conftest import ramp_image


def bilinear_oracle(x, dx, dy):
    """Naive per-pixel bilinear warp, float32 arithmetic matching the fast path."""
    h, w, nch = x.shape
    out = np.empty_like(x)
    one = np.float32(1.0)
    for r in range(h):
        for c in range(w):
            rr = min(max(r + dy[r, c], 0.0), h - 1.0)
            cc = min(max(c + dx[r, c], 0.0), w - 1.0)
            r0, c0 = int(np.floor(rr)), int(np.floor(cc))
            r1, c1 = min(r0 + 1, h - 1), min(c0 + 1, w - 1)
            fr, fc = np.float32(rr - r0), np.float32(cc - c0)
            for ch in range(nch):
                top = (one - fc) * x[r0, c0, ch] + fc * x[r0, c1, ch]
                bot = (one - fc) * x[r1, c0, ch] + fc * x[r1, c1, ch]
                val = (one - fr) * top + fr * bot
                out[r, c, ch] = min(max(val, np.float32(0.0)), np.float32(1.0))
    return out


def jacobian_oracle(dx, dy):
    """Finite-difference determinant of (identity + field), plain loops."""
    h, w = dx.shape
    det = np.empty((h - 2, w - 2))
    for r in range(1, h - 1):
        for c in range(1, w - 1):
            a = 1.0 + (dx[r, c + 1] - dx[r, c - 1]) / 2.0
            b = (dx[r + 1, c] - dx[r - 1, c]) / 2.0
            cx = (dy[r, c + 1] - dy[r, c - 1]) / 2.0
            d = 1.0 + (dy[r + 1, c] - dy[r - 1, c]) / 2.0
            det[r - 1, c - 1] = a * d - b * cx
    return det


class TestSampling:
    def test_zero_strength_zero_field(self):
        f = sample_diffeo(RngStream(1, 0), DiffeoParams(10, strength=0.0), 32, 32)
        assert np.all(f.dx == 0) and np.all(f.dy == 0)

    def test_cutoff_two_single_mode(self):
        # enumerate i, j >= 1 with i^2 + j^2 <= 4: only (1, 1)
        f = sample_diffeo(RngStream(2, 3), DiffeoParams(2), 64, 64)
        ax, ay = mode_projection(f)
        for a in (ax, ay):
            energy = a**2
            assert energy[0, 0] > 0
            off = energy.sum() - energy[0, 0]
            assert off <= 1e-18

    @pytest.mark.parametrize("cutoff", [2, 5, 10, 20])
    def test_band_limit(self, cutoff):
        f = sample_diffeo(RngStream(7, cutoff), DiffeoParams(cutoff), 64, 64)
        ax, ay = mode_projection(f)
        n = ax.shape[0]
        ii = np.arange(1, n + 1)
        outside = (ii[None, :] ** 2 + ii[:, None] ** 2) > cutoff**2
        assert np.abs(ax[outside]).max() <= 1e-9
        assert np.abs(ay[outside]).max() <= 1e-9

    def test_band_limit_projection_roundtrip(self):
        f = sample_diffeo(RngStream(8, 0), DiffeoParams(5), 64, 64)
        ax, _ = mode_projection(f)
        # inside-band coefficients have the sampled magnitude scale
        assert np.abs(ax).max() > 0

    def test_sampled_strength_in_interval(self):
        params = DiffeoParams(10)
        lo, hi = bijective_strength_interval(10)
        for i in range(20):
            f = sample_diffeo(RngStream(3, i), params, 32, 32)
            assert lo <= f.strength <= hi

    def test_bijectivity_at_default_interval(self):
        gen = RngStream(5, 0).generator()
        params = DiffeoParams(10)
        for _ in range(100):
            f = sample_diffeo(gen, params, 64, 64)
            assert jacobian_determinant(f).min() > 0.0

    def test_jacobian_matches_loop_oracle(self):
        f = sample_diffeo(RngStream(6, 1), DiffeoParams(5), 24, 24)
        assert np.allclose(jacobian_determinant(f), jacobian_oracle(f.dx, f.dy), atol=1e-12)

    def test_cutoff_beyond_nyquist_rejected(self):
        with pytest.raises(InvalidParameterError):
            sample_diffeo(RngStream(0, 0), DiffeoParams(32), 32, 32)

    def test_tiny_image_rejected(self):
        with pytest.raises(InvalidParameterError):
            sample_diffeo(RngStream(0, 0), DiffeoParams(2), 1, 8)

    def test_bad_interval_rejected(self):
        with pytest.raises(InvalidParameterError):
            sample_diffeo(
                RngStream(0, 0), DiffeoParams(5, strength_interval=(0.5, 0.1)), 32, 32
            )

    def test_interval_interpolation_monotone(self):
        highs = [bijective_strength_interval(k)[1] for k in (2, 7, 10, 40, 300)]
        assert all(a > b for a, b in zip(highs, highs[1:]))


class TestApply:
    def test_zero_field_identity(self, rng):
        x = rng.random((12, 9, 3)).astype(np.float32)
        zero = np.zeros((12, 9))
        f = DisplacementField(12, 9, zero, zero)
        assert np.array_equal(apply_diffeo(x, f), x)

    def test_constant_shift_moves_bright_pixel(self):
        x = np.zeros((8, 8, 1), dtype=np.float32)
        x[4, 4, 0] = 1.0
        f = DisplacementField(8, 8, np.ones((8, 8)), np.zeros((8, 8)))
        out = apply_diffeo(x, f)
        assert out[4, 3, 0] == 1.0
        assert out[4, 4, 0] == 0.0
        assert np.array_equal(out, bilinear_oracle(x, f.dx, f.dy))

    def test_matches_oracle_on_ramp(self):
        x = ramp_image(16, 16, 3)
        f = sample_diffeo(RngStream(9, 2), DiffeoParams(5), 16, 16)
        assert np.array_equal(apply_diffeo(x, f), bilinear_oracle(x, f.dx, f.dy))

    def test_numba_and_numpy_routes_agree(self, rng, monkeypatch):
        x = rng.random((16, 16, 3)).astype(np.float32)
        f = sample_diffeo(RngStream(10, 0), DiffeoParams(5), 16, 16)
        fast = apply_diffeo(x, f)
        monkeypatch.setattr(spatial, "NUMBA_AVAILABLE", False)
        assert np.array_equal(apply_diffeo(x, f), fast)

    def test_dimension_mismatch_rejected(self, rng):
        x = rng.random((8, 8, 3)).astype(np.float32)
        zero = np.zeros((9, 8))
        with pytest.raises(InvalidParameterError):
            apply_diffeo(x, DisplacementField(9, 8, zero, zero))

    def test_output_in_range(self, rng):
        x = rng.random((20, 20, 3)).astype(np.float32)
        f = sample_diffeo(RngStream(11, 0), DiffeoParams(5), 20, 20)
        out = apply_diffeo(x, f)
        assert out.min() >= 0.0 and out.max() <= 1.0
