"""Coherent states, the Wick (Toeplitz / Husimi) quantization, and the
Gaussian smoothing that links it to the Weyl quantization.

psi_z is the minimal-uncertainty wave packet at the phase-space point
z = (x0, xi0), wrapped periodically; op_z = h^{-d} |psi_z><psi_z| and
Wick quantization averages these projectors against a symbol. Numerically
the Wick operator is produced through the exact identity
wick(f) = weyl(g_h * f), with g_h the phase-space Gaussian kernel; a direct
coherent-state summation is kept as a brute-force cross-check oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .grids import PhaseField, PhaseGrid, gaussian_phase_kernel
from .operators import DensityOperator, outer_projector
from .transforms import weyl_quantize


@dataclass
class CoherentState:
    """Normalized wrapped Gaussian wave packet centered at z = (x0, xi0)."""

    grid: PhaseGrid
    x0: float
    xi0: float
    values: np.ndarray
    snap_distance: float = 0.0

    @property
    def z(self) -> tuple[float, float]:
        return (self.x0, self.xi0)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.dx**self.grid.d))

    def projector(self) -> DensityOperator:
        """op_z = h^{-d} |psi_z><psi_z|."""
        g = self.grid
        return outer_projector(g, self.values, scale=g.h ** (-g.d))


def _wave_packet_values(grid: PhaseGrid, x0: float, xi0: float) -> np.ndarray:
    """(pi hbar)^{-d/4} exp(-|y-x0|^2/(2 hbar)) exp(i y xi0 / hbar), wrapped."""
    hbar = grid.hbar
    y = grid.x
    psi = np.zeros(grid.N, dtype=complex)
    for n in range(-3, 4):
        yy = y + n * grid.L_x
        psi += np.exp(-((yy - x0) ** 2) / (2 * hbar)) * np.exp(1j * yy * xi0 / hbar)
    return (math.pi * hbar) ** (-grid.d / 4.0) * psi


def coherent_state(z: tuple[float, float], grid: PhaseGrid) -> CoherentState:
    """Coherent state at z; the momentum center snaps to the grid lattice.

    Snapping keeps exp(i y xi0 / hbar) periodic on the box so the wrapped sum
    stays a smooth Gaussian; the snap distance is reported on the state.
    """
    x0, xi0 = float(z[0]), float(z[1])
    if not (0.0 <= x0 < grid.L_x) or not (-grid.L_xi / 2 <= xi0 < grid.L_xi / 2):
        raise ConfigurationError(f"center z={z} outside the phase box")
    k = round(xi0 / grid.dxi)
    xi_snap = k * grid.dxi
    snap = abs(xi_snap - xi0)
    vals = _wave_packet_values(grid, x0, xi_snap)
    return CoherentState(grid, x0, xi_snap, vals, snap_distance=snap)


def coherent_overlap(z: tuple[float, float], zp: tuple[float, float], grid: PhaseGrid,
                     mode: str = "closed") -> complex:
    """Overlap <psi_z, psi_z'>.

    mode="closed" returns the Gaussian closed form
    G(z, z') = exp(-|(z-z')/2|^2 / hbar) exp(i (x+x') (xi'-xi) / (2 hbar));
    mode="quadrature" evaluates the grid inner product of the two wrapped
    packets for cross-checking (accurate while |z - z'| stays a few sqrt(hbar)
    from the box boundary effects).
    """
    if mode == "quadrature":
        a = coherent_state(z, grid)
        b = coherent_state(zp, grid)
        return complex(np.vdot(a.values, b.values) * grid.dx**grid.d)
    if mode != "closed":
        raise ConfigurationError(f"unknown overlap mode {mode!r}")
    hbar = grid.hbar
    x, xi = z
    xp, xip = zp
    d2 = ((x - xp) ** 2 + (xi - xip) ** 2) / 4.0
    return complex(np.exp(-d2 / hbar) * np.exp(1j * (x + xp) * (xip - xi) / (2 * hbar)))


def husimi_convolve(f: PhaseField, kernel: PhaseField | None = None) -> PhaseField:
    """Periodic convolution with the phase-space Gaussian: f -> g_h * f."""
    g = f.grid
    if kernel is None:
        kernel = gaussian_phase_kernel(g)
    # align the kernel so index [0, 0] is the zero offset on both axes
    kv = np.roll(kernel.values, -(g.N // 2), axis=1)
    conv = np.fft.ifft2(np.fft.fft2(f.values) * np.fft.fft2(kv)) * g.cell
    if f.real:
        return PhaseField(g, conv.real, real=True)
    return PhaseField(g, conv, real=False)


def wick_quantize(f: PhaseField, kernel: PhaseField | None = None) -> DensityOperator:
    """Wick quantization via the Gaussian-convolution identity wick(f) = weyl(g_h * f).

    Positive whenever f >= 0; the positive flag is set from the sign of f.
    """
    smoothed = husimi_convolve(f, kernel)
    op = weyl_quantize(smoothed)
    if f.real and np.all(f.values >= 0):
        op.positive = True
    return op


def wick_sum_oracle(f: PhaseField, points_per_sqrt_hbar: int = 4) -> DensityOperator:
    """Brute-force Wick quantization: h^{-d} sum_z f(z) |psi_z><psi_z| dz.

    Quadrature over a phase-space sub-lattice with at least
    ``points_per_sqrt_hbar`` nodes per sqrt(hbar) per axis; f is sampled on
    the sub-lattice by zero-padded spectral refinement. Centers are not
    snapped (on grid points every packet is periodic in xi0 with period
    L_xi, so the rectangle rule applies). Affordable only at small N; used
    to cross-check the convolution route.
    """
    g = f.grid
    step = math.sqrt(g.hbar) / points_per_sqrt_hbar
    nx = max(g.N, int(math.ceil(g.L_x / step)))
    nxi = max(g.N, int(math.ceil(g.L_xi / step)))
    fine = _spectral_refine(f.values, nx, nxi)
    xs = np.arange(nx) * (g.L_x / nx)
    xis = -g.L_xi / 2 + np.arange(nxi) * (g.L_xi / nxi)
    dz = (g.L_x / nx) * (g.L_xi / nxi)
    K = np.zeros((g.N, g.N), dtype=complex)
    for u, x0 in enumerate(xs):
        psis = np.empty((nxi, g.N), dtype=complex)
        for a, xi0 in enumerate(xis):
            psis[a] = _wave_packet_values(g, x0, xi0)
        K += (psis.T * fine[u]) @ psis.conj()
    K *= dz * g.h ** (-g.d)
    op = DensityOperator(g, K)
    op.check_hermitian(1e-8)
    return op


def _spectral_refine(values: np.ndarray, nx: int, nxi: int) -> np.ndarray:
    """Zero-padded FFT interpolation onto an (nx, nxi) grid with the same origin."""
    N = values.shape[0]
    spec = np.fft.fftshift(np.fft.fft2(values)) / N**2
    out = np.zeros((nx, nxi), dtype=complex)
    lo_x, lo_xi = nx // 2 - N // 2, nxi // 2 - N // 2
    out[lo_x:lo_x + N, lo_xi:lo_xi + N] = spec
    fine = np.fft.ifft2(np.fft.ifftshift(out)) * nx * nxi
    if not np.iscomplexobj(values):
        return fine.real
    return fine
