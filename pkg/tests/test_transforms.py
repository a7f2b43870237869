import numpy as np
import pytest

from phaselab import (
    IncompatibleGridError,
    PhaseField,
    exchange,
    identity_operator,
    make_grid,
    swap_symbol,
    weyl_quantize,
    wigner_transform,
)
from phaselab.calculus import momentum_weight_apply, position_weight_apply
from phaselab.norms import lebesgue_norm, schatten_norm
from phaselab.operators import DensityOperator
from phaselab.spectral import band_limited_field


def wrapped_gaussian(grid, x0, xi0, sx, sxi):
    X, XI = grid.meshgrid()
    out = np.zeros_like(X)
    for n in range(-2, 3):
        out += np.exp(-((X - x0 + n * grid.L_x) ** 2) / sx**2 - (XI - xi0) ** 2 / sxi**2)
    return out


class TestRoundTrip:
    @pytest.mark.parametrize("N", [64, 128])
    def test_wigner_weyl_identity(self, N, rng):
        grid = make_grid(1, N, 2 * np.pi, 2 * np.pi)
        for _ in range(5):
            f = PhaseField(grid, band_limited_field(N, rng, max_mode=N // 4))
            back = wigner_transform(weyl_quantize(f))
            assert np.max(np.abs(back.values - f.values)) < 1e-12

    def test_complex_symbol(self, grid32, rng):
        f = PhaseField(grid32, band_limited_field(32, rng, max_mode=8, real=False),
                       real=False)
        back = wigner_transform(weyl_quantize(f))
        assert np.max(np.abs(back.values - f.values)) < 1e-12

    def test_hermitian_gives_real_wigner(self, grid32, rng):
        f = PhaseField(grid32, band_limited_field(32, rng, max_mode=8))
        op = weyl_quantize(f)
        assert op.hermiticity_defect() < 1e-12
        w = wigner_transform(op)
        assert w.real


def test_constant_symbol_is_identity(grid32):
    one = PhaseField(grid32, np.ones((32, 32)))
    op = weyl_quantize(one)
    assert np.max(np.abs(op.kernel - identity_operator(grid32).kernel)) < 1e-12


def test_linear_symbol_is_momentum_operator(grid32):
    # f(x, xi) = xi quantizes to -i hbar d/dx, the spectral derivative matrix
    _, XI = grid32.meshgrid()
    op = weyl_quantize(PhaseField(grid32, XI))
    N, L = grid32.N, grid32.L_x
    a = np.fft.fftfreq(N, d=1.0 / N)
    expected = np.zeros((N, N), complex)
    for j in range(N):
        e = np.zeros(N)
        e[j] = 1.0
        expected[:, j] = np.fft.ifft(np.fft.fft(e) * (grid32.hbar * 2 * np.pi * a / L)) / grid32.dx
    assert np.max(np.abs(op.kernel - expected)) < 1e-10


def test_weyl_against_quadrature_oracle():
    # direct quadrature of the defining integral with an analytic symbol
    grid = make_grid(1, 32, 2 * np.pi, 2 * np.pi)
    N = grid.N
    sx, sxi = 0.9, 0.7
    vals = wrapped_gaussian(grid, np.pi, 0.0, sx, sxi)
    f = PhaseField(grid, vals)
    K_fast = weyl_quantize(f).kernel

    def f_analytic(x, xi):
        out = 0.0
        for n in range(-2, 3):
            out += np.exp(-((x - np.pi + n * grid.L_x) ** 2) / sx**2 - xi**2 / sxi**2)
        return out

    K_oracle = np.zeros((N, N), complex)
    ks = np.arange(N) - N // 2
    for i in range(N):
        for j in range(N):
            c = ((i - j + N // 2) % N) - N // 2
            mid = (grid.x[i] - c * grid.dx / 2.0) % grid.L_x
            phases = np.exp(2j * np.pi * ks * c / N)
            K_oracle[i, j] = np.sum(phases * f_analytic(mid, grid.xi)) / grid.L_x
    scale = np.max(np.abs(K_oracle))
    assert np.max(np.abs(K_fast - K_oracle)) / scale < 1e-8


def test_trace_rule_and_isometry(grid64, rng):
    f = PhaseField(grid64, band_limited_field(64, rng, max_mode=16))
    op = weyl_quantize(f)
    assert abs(grid64.h * op.trace() - f.integral()) < 1e-10
    assert abs(schatten_norm(op, 2) - lebesgue_norm(f, 2)) < 1e-10


class TestExchange:
    def test_involution(self, grid32, rng):
        f = PhaseField(grid32, band_limited_field(32, rng, max_mode=8))
        op = weyl_quantize(f)
        back = exchange(exchange(op))
        assert np.max(np.abs(back.kernel - op.kernel)) < 1e-10

    def test_symbol_swap(self, grid32, rng):
        f = PhaseField(grid32, band_limited_field(32, rng, max_mode=8))
        w = wigner_transform(exchange(weyl_quantize(f)))
        assert np.max(np.abs(w.values - swap_symbol(f).values)) < 1e-8

    def test_weight_exchange(self, grid32):
        # <x>* = <p> and <p>* = <x>
        iop = identity_operator(grid32)
        mp = momentum_weight_apply(iop, 1, "left")
        mx = position_weight_apply(iop, 1, "left")
        assert np.max(np.abs(exchange(mx).kernel - mp.kernel)) < 1e-10
        assert np.max(np.abs(exchange(mp).kernel - mx.kernel)) < 1e-10

    def test_schatten_preserved(self, grid32, rng):
        f = PhaseField(grid32, band_limited_field(32, rng, max_mode=8))
        op = weyl_quantize(f)
        for p in (1, 2, np.inf):
            assert schatten_norm(exchange(op), p) == pytest.approx(
                schatten_norm(op, p), rel=1e-10)

    def test_rectangular_box_rejected(self, rng):
        g = make_grid(1, 32, 2 * np.pi, 4 * np.pi)
        op = weyl_quantize(PhaseField(g, band_limited_field(32, rng, max_mode=6)))
        with pytest.raises(IncompatibleGridError):
            exchange(op)
        with pytest.raises(IncompatibleGridError):
            swap_symbol(PhaseField(g, np.ones((32, 32))))


def test_positivity_check_idempotent(grid32, rng):
    X = band_limited_field(32, rng, max_mode=8, real=False)
    pos = DensityOperator(grid32, X @ X.conj().T * grid32.dx, hermitian=True)
    assert pos.check_positive()
    assert pos.check_positive()
    ev = pos.eigenvalues()
    assert ev[0] >= -1e-10 * ev[-1]
    neg = DensityOperator(grid32, -pos.kernel, hermitian=True)
    assert not neg.check_positive()
