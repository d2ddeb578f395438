import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

import bolab
from bolab import (
    Grid,
    GridMismatchError,
    HardyField,
    NormSpec,
    RealField,
    band_limited_noise,
    from_coefficients,
    hilbert,
    inner,
    project_hardy,
    sobolev_norm,
    szego,
    to_coefficients,
)


def make_field(grid, fn):
    return RealField(grid, fn(grid.x))


class TestGridConstruction:
    def test_spacing_relations(self, grid):
        assert grid.dx * grid.n_points == grid.length
        assert grid.dk == pytest.approx(2 * np.pi / grid.length)
        assert grid.x[0] == -grid.length / 2
        assert grid.wavenumbers[1] == pytest.approx(grid.dk)

    def test_rejects_non_power_of_two(self):
        with pytest.raises(ValueError):
            Grid(length=10.0, n_points=100)

    def test_rejects_bad_length(self):
        with pytest.raises(ValueError):
            Grid(length=-1.0, n_points=64)


class TestCoefficients:
    def test_single_cosine_mode(self, grid):
        k1 = grid.dk
        f = make_field(grid, lambda x: np.cos(k1 * x))
        c = to_coefficients(f)
        assert c[1] == pytest.approx(0.5, abs=1e-14)
        assert c[-1] == pytest.approx(0.5, abs=1e-14)
        c[1] = c[-1] = 0.0
        assert np.max(np.abs(c)) < 1e-14

    def test_constant_mode(self, grid):
        f = make_field(grid, lambda x: np.ones_like(x))
        c = to_coefficients(f)
        assert c[0] == pytest.approx(1.0, abs=1e-14)
        assert np.max(np.abs(c[1:])) < 1e-14

    def test_soliton_mean_against_quadrature(self, grid, soliton_field):
        # oracle: the zero coefficient is the domain average of the closed form
        exact, _ = quad(lambda x: 2.0 / (1 + x * x), -grid.length / 2, grid.length / 2)
        c0 = to_coefficients(soliton_field)[0].real
        assert c0 == pytest.approx(exact / grid.length, abs=1e-10)
        assert c0 == pytest.approx(2 * np.pi / grid.length, abs=2e-4)

    def test_round_trip(self, grid):
        f = band_limited_noise(grid, 10.0, seed=3, spec=NormSpec(0.0), delta=1.0)
        g = from_coefficients(grid, to_coefficients(f))
        assert np.max(np.abs(g.samples - f.samples)) < 1e-12

    def test_real_field_conjugate_symmetry(self, grid, soliton_field):
        c = to_coefficients(soliton_field)
        n = grid.n_points
        assert np.allclose(c[1 : n // 2], np.conj(c[-1 : n // 2 : -1]), atol=1e-15)


class TestHilbert:
    def test_cos_to_sin(self, grid):
        k = 3 * grid.dk
        f = make_field(grid, lambda x: np.cos(k * x))
        h = hilbert(f)
        assert np.max(np.abs(h.samples - np.sin(k * grid.x))) < 1e-12

    def test_sin_to_minus_cos(self, grid):
        k = 5 * grid.dk
        f = make_field(grid, lambda x: np.sin(k * x))
        h = hilbert(f)
        assert np.max(np.abs(h.samples + np.cos(k * grid.x))) < 1e-12

    def test_constant_to_zero(self, grid):
        h = hilbert(make_field(grid, lambda x: np.full_like(x, 1.0)))
        assert np.max(np.abs(h.samples)) < 1e-14

    def test_involution_on_mean_zero(self, grid):
        f = band_limited_noise(grid, 8.0, seed=5, spec=NormSpec(0.0), delta=1.0)
        hh = hilbert(hilbert(f))
        assert np.max(np.abs(hh.samples + f.samples)) < 1e-12


class TestSzego:
    def test_cosine_becomes_half_exponential(self, grid):
        k = 2 * grid.dk
        h = szego(make_field(grid, lambda x: np.cos(k * x)))
        assert h.coeffs[2] == pytest.approx(0.5, abs=1e-14)
        rest = h.coeffs.copy()
        rest[2] = 0
        assert np.max(np.abs(rest)) < 1e-14

    def test_hardy_function_unchanged(self, grid):
        # complex samples path: positive-frequency exponentials are fixed points
        k = 4 * grid.dk
        samples = np.exp(1j * k * grid.x)
        h = project_hardy(grid, samples)
        assert np.max(np.abs(bolab.reconstruct(h) - samples)) < 1e-12

    def test_pointwise_identity(self, grid, soliton_field):
        # szego(f) = (f + i H f)/2 + c0/2 pointwise; the comparison floor is
        # FFT roundoff, about n eps ||c||_1 ~ 2e-12 at n = 4096
        f = soliton_field
        c0 = to_coefficients(f)[0].real
        expected = 0.5 * (f.samples + 1j * hilbert(f).samples) + 0.5 * c0
        got = bolab.reconstruct(szego(f))
        assert np.max(np.abs(got - expected)) < 2e-11

    def test_norm_bookkeeping(self, grid, soliton_field):
        # ||szego(f)||^2 = ||f||^2 / 2 + (L/2) c0^2, by direct coefficient sum
        f = soliton_field
        c0 = to_coefficients(f)[0].real
        l2 = NormSpec(0.0)
        lhs = sobolev_norm(szego(f), l2) ** 2
        rhs = 0.5 * sobolev_norm(f, l2) ** 2 + grid.length / 2 * c0**2
        assert lhs == pytest.approx(rhs, rel=1e-12)


class TestSobolevNorm:
    def test_single_mode(self, grid):
        k = 6 * grid.dk
        coeffs = np.zeros(8, dtype=complex)
        coeffs[6] = 1.0
        h = HardyField(grid, coeffs)
        for sigma, kappa in [(0.5, 1.0), (-0.25, 2.0), (1.0, 4.0)]:
            expect = np.sqrt(grid.length) * (k + kappa) ** sigma
            assert sobolev_norm(h, NormSpec(sigma, kappa)) == pytest.approx(expect)

    def test_sigma_zero_is_l2(self, grid):
        f = band_limited_noise(grid, 6.0, seed=2, spec=NormSpec(0.5), delta=0.7)
        by_samples = np.sqrt(np.sum(f.samples**2) * grid.dx)
        assert sobolev_norm(f, NormSpec(0.0)) == pytest.approx(by_samples, rel=1e-10)

    def test_monotone_in_kappa_for_negative_sigma(self, grid, soliton_field):
        n1 = sobolev_norm(soliton_field, NormSpec(-0.25, 1.0))
        n2 = sobolev_norm(soliton_field, NormSpec(-0.25, 2.0))
        n3 = sobolev_norm(soliton_field, NormSpec(-0.25, 4.0))
        assert n1 > n2 > n3

    def test_kappa_below_one_rejected(self):
        with pytest.raises(ValueError):
            NormSpec(0.5, 0.5)


class TestInner:
    def test_mode_normalization(self, grid):
        c = np.zeros(4, dtype=complex)
        c[3] = 1.0
        h = HardyField(grid, c)
        assert inner(h, h) == pytest.approx(grid.length)

    def test_orthogonality(self, grid):
        a = np.zeros(6, dtype=complex)
        b = np.zeros(6, dtype=complex)
        a[2] = 1.0
        b[5] = 1.0
        assert abs(inner(HardyField(grid, a), HardyField(grid, b))) < 1e-14

    def test_soliton_momentum(self, grid, soliton_field):
        val = inner(soliton_field, soliton_field)
        assert val.imag == pytest.approx(0.0, abs=1e-12)
        assert val.real == pytest.approx(2 * np.pi, abs=1e-3)

    def test_grid_mismatch(self, grid):
        other = Grid(grid.length, grid.n_points // 2)
        f = RealField(grid, np.zeros(grid.n_points))
        g = RealField(other, np.zeros(other.n_points))
        with pytest.raises(GridMismatchError):
            inner(f, g)

    def test_parseval_quadrature_agreement(self, grid, soliton_field):
        by_quad = np.sum(soliton_field.samples**2) * grid.dx
        by_coeff = inner(soliton_field, soliton_field).real
        assert by_coeff == pytest.approx(by_quad, rel=1e-10)


class TestNoise:
    def test_zero_delta(self, grid):
        f = band_limited_noise(grid, 8.0, seed=0, spec=NormSpec(0.5), delta=0.0)
        assert np.all(f.samples == 0.0)

    def test_determinism(self, grid):
        a = band_limited_noise(grid, 8.0, seed=42, spec=NormSpec(0.5), delta=0.3)
        b = band_limited_noise(grid, 8.0, seed=42, spec=NormSpec(0.5), delta=0.3)
        assert np.array_equal(a.samples, b.samples)

    def test_band_limit(self, grid):
        f = band_limited_noise(grid, 4.0, seed=9, spec=NormSpec(0.0), delta=1.0)
        c = to_coefficients(f)
        outside = np.abs(grid.wavenumbers) > 4.0
        assert np.max(np.abs(c[outside])) < 1e-15

    def test_normalization(self, grid):
        spec = NormSpec(0.5, 1.0)
        f = band_limited_noise(grid, 8.0, seed=1, spec=spec, delta=0.01)
        assert sobolev_norm(f, spec) == pytest.approx(0.01, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(
    seed=st.integers(0, 10_000),
    sigma=st.floats(-0.5, 0.5),
    kappa=st.floats(1.0, 8.0),
)
def test_duality_cauchy_schwarz(seed, sigma, kappa):
    # |<g, f>| <= ||g||_{-sigma,kappa} ||f||_{sigma,kappa}
    grid = Grid(64.0, 256)
    f = band_limited_noise(grid, 6.0, seed=seed, spec=NormSpec(0.0), delta=1.0)
    g = band_limited_noise(grid, 6.0, seed=seed + 1, spec=NormSpec(0.0), delta=2.0)
    lhs = abs(inner(g, f))
    rhs = sobolev_norm(g, NormSpec(-sigma, kappa)) * sobolev_norm(f, NormSpec(sigma, kappa))
    assert lhs <= rhs * (1 + 1e-10)
