import numpy as np
import pytest

from phaselab import (
    ConfigurationError,
    PhaseField,
    SupportEscapeError,
    make_grid,
    sample_field,
    weyl_quantize,
    wigner_transform,
)
from phaselab.budgets import sqrt_field
from phaselab.calculus import operator_sqrt
from phaselab.coherent import wick_quantize
from phaselab.hartree import evolve_hartree, evolve_linear_hartree, free_schroedinger
from phaselab.norms import schatten_norm
from phaselab.operators import DensityOperator
from phaselab.poisson import solve_poisson
from phaselab.trajectory import FieldSnapshot
from phaselab.vlasov import evolve_vlasov, free_transport

PROFILE = {"name": "maxwellian", "perturbation": 0.1, "sigma_xi": 0.42}


class TestPoisson:
    def test_single_mode(self, grid64):
        rho = 1.0 + np.cos(2 * np.pi * grid64.x / grid64.L_x)
        snap = solve_poisson(grid64, rho, +1)
        expected = (grid64.L_x / (2 * np.pi)) ** 2 * np.cos(2 * np.pi * grid64.x / grid64.L_x)
        assert np.max(np.abs(snap.V - expected)) < 1e-12
        snap_att = solve_poisson(grid64, rho, -1)
        assert np.max(np.abs(snap_att.V + expected)) < 1e-12

    def test_constant_density(self, grid64):
        snap = solve_poisson(grid64, np.full(64, 2.0), +1)
        assert np.max(np.abs(snap.V)) == 0.0
        assert np.max(np.abs(snap.E)) == 0.0

    def test_force_zero_mean(self, grid64, rng):
        rho = np.abs(rng.standard_normal(64)) + 1.0
        snap = solve_poisson(grid64, rho, +1)
        assert abs(np.sum(snap.E) * grid64.dx) < 1e-12

    def test_bad_sign(self, grid64):
        with pytest.raises(ConfigurationError):
            solve_poisson(grid64, np.ones(64), 2)


class TestVlasov:
    def test_homogeneous_stationary(self, grid64):
        f0 = sample_field(grid64, {"name": "maxwellian", "perturbation": 0.0,
                                   "sigma_xi": 0.35})
        traj = evolve_vlasov(f0, 0.2, 0.01, +1)
        drift = np.sqrt(np.sum((traj.final().values - f0.values) ** 2) * grid64.cell)
        assert drift < 1e-10

    def test_free_transport_exact(self, grid64):
        f0 = sample_field(grid64, PROFILE)
        traj = evolve_vlasov(f0, 0.25, 0.0125, 0)
        exact = free_transport(f0, 0.25)
        assert np.max(np.abs(traj.final().values - exact.values)) < 1e-9

    def test_conservation(self, grid64):
        f0 = sample_field(grid64, PROFILE)
        traj = evolve_vlasov(f0, 0.5, 1e-3, +1)
        assert traj.relative_drift("mass") < 1e-12
        assert traj.relative_drift("l1_norm") < 1e-8
        assert traj.relative_drift("l2_norm") < 1e-8
        assert traj.relative_drift("energy") < 1e-6

    def test_support_escape_guard(self):
        grid = make_grid(1, 32, 2 * np.pi, 2 * np.pi)
        X, XI = grid.meshgrid()
        # broad momentum support that free-streams into the boundary rows
        vals = np.exp(-((X - np.pi) ** 2)) * np.exp(-(XI**2) / (0.9 * grid.L_xi / 2) ** 2)
        f0 = PhaseField(grid, vals)
        with pytest.raises(SupportEscapeError):
            evolve_vlasov(f0, 1.0, 0.05, +1)

    def test_field_history_recorded(self, grid64):
        f0 = sample_field(grid64, PROFILE)
        traj = evolve_vlasov(f0, 0.1, 0.01, +1)
        assert len(traj.fields) == len(traj.times)
        assert isinstance(traj.fields[0], FieldSnapshot)
        np.testing.assert_allclose(traj.fields[0].rho,
                                   f0.values.sum(axis=1) * grid64.dxi)


class TestHartree:
    def _initial(self, grid):
        f0 = sample_field(grid, PROFILE)
        vt = wick_quantize(sqrt_field(f0))
        op0 = vt @ vt
        op0.hermitian = True
        op0.positive = True
        return f0, op0

    def test_conservation(self, grid64):
        _, op0 = self._initial(grid64)
        traj = evolve_hartree(op0, 0.25, 1e-3, +1)
        assert traj.relative_drift("trace") < 1e-12
        assert traj.relative_drift("l2_norm") < 1e-12
        assert traj.relative_drift("energy") < 1e-6

    def test_free_flow_transports_wigner(self, grid64):
        _, op0 = self._initial(grid64)
        traj = evolve_hartree(op0, 0.25, 0.0125, 0)
        w_final = wigner_transform(traj.final())
        w_expected = free_transport(wigner_transform(op0), 0.25)
        assert np.max(np.abs(w_final.values - w_expected.values)) < 1e-8
        exact = free_schroedinger(op0, 0.25)
        assert np.max(np.abs(exact.kernel - traj.final().kernel)) < 1e-10

    def test_fourier_diagonal_stationary(self, grid32):
        a = np.fft.fftfreq(32, d=1.0 / 32)
        xia = grid32.hbar * 2 * np.pi * a / grid32.L_x
        prof = np.exp(-(xia**2) / (2 * 0.35**2))
        K = np.fft.ifft(np.fft.fft(np.eye(32), axis=0) * prof[:, None], axis=0) / grid32.dx
        op = DensityOperator(grid32, K, hermitian=True)
        traj = evolve_hartree(op, 0.2, 0.01, +1)
        rel = np.max(np.abs(traj.final().kernel - op.kernel)) / np.max(np.abs(op.kernel))
        assert rel < 1e-9

    def test_non_hermitian_rejected(self, grid32, rng):
        K = rng.standard_normal((32, 32)) + 1j * rng.standard_normal((32, 32))
        with pytest.raises(ConfigurationError):
            evolve_hartree(DensityOperator(grid32, K), 0.1, 0.01, +1)


class TestLinearHartree:
    def test_zero_field_reduces_to_free(self, grid64):
        f0 = sample_field(grid64, PROFILE)
        vt = wick_quantize(sqrt_field(f0))
        op0 = vt @ vt
        op0.hermitian = True
        steps = 20
        dt = 0.01
        z = np.zeros(64)
        fields = [FieldSnapshot(time=n * dt, V=z, E=z, rho=z) for n in range(steps + 1)]
        traj = evolve_linear_hartree(op0, fields, steps * dt, dt)
        free = evolve_hartree(op0, steps * dt, dt, 0)
        assert np.max(np.abs(traj.final().kernel - free.final().kernel)) < 1e-10

    def test_positivity_and_spectrum_preserved(self, grid64):
        f0 = sample_field(grid64, PROFILE)
        ftraj = evolve_vlasov(f0, 0.2, grid64.hbar / 10, +1)
        vt = wick_quantize(sqrt_field(f0))
        op0 = vt @ vt
        op0.hermitian = True
        op0.positive = True
        traj = evolve_linear_hartree(op0, ftraj.fields, 0.2, ftraj.dt)
        ev0 = np.sort(op0.eigenvalues())
        evT = np.sort(traj.final().eigenvalues())
        assert evT[0] >= -1e-10 * max(evT[-1], 1e-300)
        assert np.max(np.abs(evT - ev0)) < 1e-9 * max(abs(ev0[-1]), 1)

    def test_sqrt_commutes_with_flow(self, grid32):
        g = grid32
        f0 = sample_field(g, PROFILE)
        ftraj = evolve_vlasov(f0, 0.2, g.hbar / 10, +1)
        vt = wick_quantize(sqrt_field(f0))
        op0 = vt @ vt
        op0.hermitian = True
        op0.positive = True
        otraj = evolve_linear_hartree(op0, ftraj.fields, 0.2, ftraj.dt)
        route_a = operator_sqrt(otraj.final())
        route_b = evolve_linear_hartree(vt, ftraj.fields, 0.2, ftraj.dt).final()
        assert schatten_norm(route_a - route_b, 2) < 1e-8

    def test_gauge_invariance(self, grid32):
        # adding a constant to V changes no observable
        f0 = sample_field(grid32, PROFILE)
        ftraj = evolve_vlasov(f0, 0.1, 0.01, +1)
        vt = wick_quantize(sqrt_field(f0))
        op0 = vt @ vt
        op0.hermitian = True
        shifted = [FieldSnapshot(time=s.time, V=s.V + 7.3, E=s.E, rho=s.rho)
                   for s in ftraj.fields]
        t1 = evolve_linear_hartree(op0, ftraj.fields, 0.1, ftraj.dt)
        t2 = evolve_linear_hartree(op0, shifted, 0.1, ftraj.dt)
        w1 = wigner_transform(t1.final())
        w2 = wigner_transform(t2.final())
        assert np.max(np.abs(w1.values - w2.values)) < 1e-12

    def test_history_gap_rejected(self, grid32):
        f0 = sample_field(grid32, PROFILE)
        ftraj = evolve_vlasov(f0, 0.1, 0.01, +1)
        vt = wick_quantize(sqrt_field(f0))
        op0 = vt @ vt
        op0.hermitian = True
        with pytest.raises(ConfigurationError):
            evolve_linear_hartree(op0, ftraj.fields[:3], 0.1, 0.01)
