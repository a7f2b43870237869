"""Quantum gradients, momentum weights, spatial densities, operator roots.

The quantum gradients are the commutators grad_x op = [grad, op] and
grad_xi op = [x/(i hbar), op]; on kernels these act as the spectral midpoint
derivative and as multiplication by the minimal-image chord, and they
intertwine exactly with the Wigner transform.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigurationError, WrapAmbiguityError
from .grids import PhaseGrid
from .operators import DensityOperator, require_positive
from .spectral import derivative, fourier_multiplier
from .transforms import chord_matrix, scatter_chords

WRAP_GUARD_TOL = 1e-8


def quantum_gradient_x(op: DensityOperator) -> DensityOperator:
    """[grad, op]: the midpoint derivative (d/dx + d/dy) of the kernel.

    Applied along each circulant diagonal of the kernel (a chord slice is a
    smooth periodic function of its midpoint), which intertwines exactly with
    the Wigner transform: f_{grad_x op} = d_x f_op on the grid. A raw spectral
    derivative over the kernel rows and columns would alias the half-integer
    midpoint frequencies carried by odd spatial symbol modes.
    """
    g = op.grid
    D = chord_matrix(op)
    D = derivative(D, g.L_x, axis=0)
    return DensityOperator(g, scatter_chords(g, D), hermitian=False)


def _minimal_chord(grid: PhaseGrid) -> np.ndarray:
    N = grid.N
    i = np.arange(N)[:, None]
    j = np.arange(N)[None, :]
    c = ((i - j + N // 2) % N) - N // 2
    return c * grid.dx


def wrap_mass(op: DensityOperator) -> float:
    """Relative kernel mass on the antipodal chords |x - y| near L_x / 2."""
    N = op.grid.N
    i = np.arange(N)[:, None]
    j = np.arange(N)[None, :]
    c = ((i - j + N // 2) % N) - N // 2
    band = np.abs(np.abs(c) - N // 2) <= 1
    total = np.sum(np.abs(op.kernel))
    if total == 0:
        return 0.0
    return float(np.sum(np.abs(op.kernel)[band]) / total)


def quantum_gradient_xi(op: DensityOperator, wrap_tol: float = WRAP_GUARD_TOL) -> DensityOperator:
    """[x/(i hbar), op]: kernel (x - y)/(i hbar) op(x, y), minimal-image chord.

    Position is only defined modulo the box, so the chord uses its shortest
    periodic representative; kernels carrying mass near the |x - y| = L_x/2
    cut are ambiguous and rejected.
    """
    g = op.grid
    wm = wrap_mass(op)
    if wm > wrap_tol:
        raise WrapAmbiguityError(
            f"kernel mass {wm:.3e} near the antipodal cut exceeds {wrap_tol:.1e}"
        )
    chord = _minimal_chord(g)
    out = chord / (1j * g.hbar) * op.kernel
    return DensityOperator(g, out, hermitian=False)


def momentum_weight_multiplier(grid: PhaseGrid, n: int) -> np.ndarray:
    """<p>^n = (1 + |p|^2)^(n/2) eigenvalues on the Fourier modes, fft order."""
    a = np.fft.fftfreq(grid.N, d=1.0 / grid.N)
    xi_a = grid.hbar * 2.0 * np.pi * a / grid.L_x
    return (1.0 + xi_a**2) ** (n / 2.0)


def momentum_weight_apply(op: DensityOperator, n: int, side: str = "both") -> DensityOperator:
    """Apply the Fourier multiplier <p>^n to an operator kernel.

    side = "left" gives <p>^n op, "right" gives op <p>^n, "both" conjugates
    <p>^n op <p>^n.
    """
    if n < 0 or int(n) != n:
        raise ConfigurationError("weight order n must be a nonnegative integer")
    if side not in ("left", "right", "both"):
        raise ConfigurationError(f"side must be left|right|both, got {side!r}")
    g = op.grid
    mult = momentum_weight_multiplier(g, int(n))
    K = op.kernel
    if side in ("left", "both"):
        K = fourier_multiplier(K, mult, axis=0)
    if side in ("right", "both"):
        # even multiplier: acting on the column index uses the same fft buckets
        K = fourier_multiplier(K, mult, axis=1)
    herm = op.hermitian and side == "both"
    return DensityOperator(g, K, hermitian=herm)


def position_weight_apply(op: DensityOperator, n: int, side: str = "both") -> DensityOperator:
    """Multiplication by <x>^n with the centered minimal-image coordinate."""
    g = op.grid
    w = (1.0 + g.x_centered**2) ** (n / 2.0)
    K = op.kernel
    if side in ("left", "both"):
        K = w[:, None] * K
    if side in ("right", "both"):
        K = K * w[None, :]
    return DensityOperator(g, K, hermitian=op.hermitian and side == "both")


def spatial_density(op: DensityOperator) -> np.ndarray:
    """rho(x) = h^d op(x, x): scaled kernel diagonal, real for Hermitian op."""
    g = op.grid
    rho = np.diag(op.kernel) * g.h**g.d
    if op.hermitian:
        return rho.real.copy()
    return rho.copy()


def kinetic_energy(op: DensityOperator) -> float:
    """h^d Tr((-hbar^2 Delta / 2) op) via the Fourier multiplier |xi|^2 / 2."""
    g = op.grid
    a = np.fft.fftfreq(g.N, d=1.0 / g.N)
    xi_a = g.hbar * 2.0 * np.pi * a / g.L_x
    K = fourier_multiplier(op.kernel, xi_a**2 / 2.0, axis=0)
    return float((np.trace(K) * g.dx**g.d * g.h**g.d).real)


def operator_sqrt(op: DensityOperator, tol: float = 1e-8) -> DensityOperator:
    """Hermitian square root via eigendecomposition.

    Eigenvalues in [-tol * scale, 0) are discretization noise and clamp to 0;
    anything below raises NotPositiveError.
    """
    ev, U = require_positive(op, tol=tol)
    g = op.grid
    ev_clamped = np.clip(ev, 0.0, None)
    # matrix eigenvalue of sqrt is sqrt(lambda_op) / dx^d so that S o S = op
    w = np.sqrt(ev_clamped) / g.dx**g.d
    K = (U * w[None, :]) @ U.conj().T
    return DensityOperator(g, K, hermitian=True, positive=True)
