"""Spectral Poisson solves on the periodic box with neutralizing background.

The free-space Coulomb kernel +-1/(4 pi |x|) becomes the periodic Green
function of -Delta V = sign (rho - rho_bar); the zero mode (background) is
removed, E = -grad V is spectral. sign = +1 is the repulsive (plasma) case,
-1 gravitational, 0 switches the interaction off.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigurationError
from .grids import PhaseGrid
from .spectral import derivative


def solve_poisson(grid: PhaseGrid, rho: np.ndarray, sign: int, time: float = 0.0):
    """Potential and force field from a spatial density.

    Returns a FieldSnapshot with V-hat(a) = sign * rho-hat(a) / |2 pi a / L|^2
    for a != 0, V-hat(0) = 0, and E = -dV/dx.
    """
    from .trajectory import FieldSnapshot

    if sign not in (-1, 0, 1):
        raise ConfigurationError(f"interaction sign must be -1, 0, or +1, got {sign}")
    rho = np.asarray(rho, dtype=float)
    N = grid.N
    if rho.shape != (N,):
        raise ConfigurationError("density shape does not match the grid")
    if sign == 0:
        z = np.zeros(N)
        return FieldSnapshot(time=time, V=z, E=z.copy(), rho=rho.copy())
    a = np.fft.fftfreq(N, d=1.0 / N)
    k2 = (2.0 * np.pi * a / grid.L_x) ** 2
    rho_hat = np.fft.fft(rho)
    V_hat = np.zeros_like(rho_hat)
    V_hat[1:] = sign * rho_hat[1:] / k2[1:]
    V = np.fft.ifft(V_hat).real
    E = -derivative(V, grid.L_x, axis=0).real
    return FieldSnapshot(time=time, V=V, E=E, rho=rho.copy())
