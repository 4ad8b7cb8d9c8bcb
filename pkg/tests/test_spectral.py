import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rch_lab.spectral import (
    Field, GridError, TorusGrid, dealias, differentiate, evaluate_offgrid, helmholtz_inverse,
)

from conftest import band_limited

seeds = st.integers(min_value=0, max_value=2**32 - 1)


class TestTorusGrid:
    @pytest.mark.parametrize("n", [0, 8, 15, 48, 100])
    def test_rejects_bad_sizes(self, n):
        with pytest.raises(GridError):
            TorusGrid(n)

    def test_spacing_times_n_is_period(self):
        g = TorusGrid(64)
        assert g.dx * g.n == g.period == 2 * np.pi
        assert g.points[1] - g.points[0] == pytest.approx(g.dx, abs=0)

    def test_wavenumbers(self):
        g = TorusGrid(16)
        assert sorted(g.wavenumbers) == list(range(-8, 8))


class TestField:
    def test_round_trip(self, rng):
        g = TorusGrid(256)
        v = rng.standard_normal(g.n)
        u = Field(g, v)
        back = Field.from_spectrum(g, u.spectrum).values
        assert np.max(np.abs(back - v)) <= 1e-12 * np.max(np.abs(v))

    def test_conjugate_symmetry(self, rng):
        g = TorusGrid(64)
        full = Field(g, rng.standard_normal(g.n)).full_spectrum()
        k = np.arange(1, g.n)
        assert np.allclose(full[g.n - k], np.conj(full[k]), atol=1e-12)

    def test_values_are_read_only(self):
        u = Field(TorusGrid(16), np.ones(16))
        with pytest.raises(ValueError):
            u.values[0] = 2.0

    def test_shape_checked(self):
        with pytest.raises(ValueError):
            Field(TorusGrid(16), np.ones(15))


class TestDifferentiate:
    @pytest.mark.parametrize("k", [3, 11])
    def test_cosine_and_sine(self, k):
        g = TorusGrid(64)
        x = g.points
        d = differentiate(Field(g, np.sin(k * x))).values
        assert np.max(np.abs(d - k * np.cos(k * x))) <= 1e-10
        d = differentiate(Field(g, np.cos(k * x))).values
        assert np.max(np.abs(d + k * np.sin(k * x))) <= 1e-10

    def test_constant(self):
        g = TorusGrid(32)
        assert np.max(np.abs(differentiate(Field(g, np.ones(32))).values)) == 0.0

    def test_nyquist_zeroed(self):
        g = TorusGrid(32)
        u = Field(g, np.cos(16 * g.points))
        assert np.max(np.abs(differentiate(u).values)) == 0.0


class TestHelmholtz:
    def test_symbol_on_cosine(self):
        g = TorusGrid(64)
        x = g.points
        out = helmholtz_inverse(Field(g, np.cos(7 * x))).values
        assert np.max(np.abs(out - np.cos(7 * x) / 50.0)) <= 1e-14

    def test_constant_fixed(self):
        g = TorusGrid(32)
        assert np.allclose(helmholtz_inverse(Field(g, np.ones(32))).values, 1.0, atol=1e-15)

    def test_identity_minus_inverse(self, rng):
        # -d_xx (1 - d_xx)^{-1} = Id - (1 - d_xx)^{-1}
        g = TorusGrid(128)
        for _ in range(10):
            u = band_limited(g, 40, rng)
            lhs = -differentiate(differentiate(helmholtz_inverse(u))).values
            rhs = u.values - helmholtz_inverse(u).values
            assert np.max(np.abs(lhs - rhs)) <= 1e-10 * np.max(np.abs(rhs))


class TestDealias:
    def test_identity_on_band(self, rng):
        g = TorusGrid(128)
        u = band_limited(g, 42, rng)
        assert np.max(np.abs(dealias(u).values - u.values)) <= 1e-14

    def test_removes_high_mode(self):
        g = TorusGrid(64)
        u = Field(g, np.cos(31 * g.points))
        assert np.max(np.abs(dealias(u, 2 / 3).values)) <= 1e-13

    @pytest.mark.parametrize("k0", [5, 10, 21])
    def test_square_keeps_zero_and_double(self, k0):
        g = TorusGrid(64)
        x = g.points
        c = np.cos(k0 * x)
        sq = dealias(Field(g, c * c))
        expected = 0.5 + 0.5 * np.cos(2 * k0 * x)
        if 2 * k0 > g.n // 3:
            expected = np.full_like(x, 0.5)  # the 2*k0 mode falls outside the band
        assert np.max(np.abs(sq.values - expected)) <= 1e-14

    def test_bad_fraction(self):
        with pytest.raises(ValueError):
            dealias(Field(TorusGrid(16), np.ones(16)), 0.0)


def dense_reference(u: Field, factor: int) -> np.ndarray:
    """Zero-padded oversampling of u onto a grid ``factor`` times finer (Nyquist split)."""
    n = u.grid.n
    m = n * factor
    spec = np.zeros(m // 2 + 1, dtype=complex)
    spec[: n // 2] = u.spectrum[: n // 2]
    spec[n // 2] = 0.5 * u.spectrum[n // 2]
    return np.fft.irfft(spec * factor, m)


class TestEvaluateOffgrid:
    def test_pure_mode(self):
        g = TorusGrid(32)
        u = Field(g, np.cos(5 * g.points))
        assert abs(evaluate_offgrid(u, [np.pi / 7])[0] - np.cos(5 * np.pi / 7)) <= 1e-10

    def test_reproduces_samples(self, rng):
        g = TorusGrid(128)
        u = Field(g, rng.standard_normal(g.n))
        out = evaluate_offgrid(u, g.points)
        assert np.max(np.abs(out - u.values)) <= 1e-12 * max(1.0, u.max_abs())

    def test_matches_oversampled_grid(self, rng):
        g = TorusGrid(64)
        u = band_limited(g, 30, rng)
        factor = 64
        dense = dense_reference(u, factor)
        idx = rng.integers(0, g.n * factor, size=100)
        pos = 2 * np.pi * idx / (g.n * factor)
        assert np.max(np.abs(evaluate_offgrid(u, pos) - dense[idx])) <= 1e-9

    def test_direct_sum_and_reduction(self, rng):
        g = TorusGrid(32)
        u = band_limited(g, 12, rng)
        pos = rng.uniform(-20, 20, size=50)
        k = np.arange(g.n // 2 + 1)
        w = np.full(k.size, 2.0)
        w[0] = w[-1] = 1.0
        direct = (w * u.spectrum * np.exp(1j * np.outer(pos, k))).real.sum(axis=1) / g.n
        assert np.max(np.abs(evaluate_offgrid(u, pos) - direct)) <= 1e-12


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_parseval(seed):
    rng = np.random.default_rng(seed)
    g = TorusGrid(128)
    u = Field(g, rng.standard_normal(g.n))
    full = u.full_spectrum()
    lhs = np.mean(u.values**2)
    rhs = np.sum(np.abs(full) ** 2) / g.n**2
    assert abs(lhs - rhs) <= 1e-12 * lhs


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_multipliers_commute(seed):
    rng = np.random.default_rng(seed)
    g = TorusGrid(64)
    u = Field(g, rng.standard_normal(g.n))
    a = differentiate(helmholtz_inverse(u)).values
    b = helmholtz_inverse(differentiate(u)).values
    assert np.max(np.abs(a - b)) <= 1e-12


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_helmholtz_contraction_on_zero_mean(seed):
    rng = np.random.default_rng(seed)
    g = TorusGrid(64)
    v = rng.standard_normal(g.n)
    u = Field(g, v - v.mean())
    assert helmholtz_inverse(u).max_abs() <= u.max_abs() + 1e-14
