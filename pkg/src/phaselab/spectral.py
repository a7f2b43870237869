"""Shared spectral helpers: derivatives, shifts, half-grid interpolation.

Everything here works on periodic samples. Frequencies are integer mode
numbers a with physical wavenumber 2 pi a / L. Odd-order derivatives zero the
Nyquist mode; the half-cell shift treats the Nyquist mode symmetrically
(cos(pi N x / L)), which vanishes at half-grid points.
"""

from __future__ import annotations

import numpy as np


def modes(N: int) -> np.ndarray:
    """Integer FFT mode numbers in numpy fft order."""
    return np.fft.fftfreq(N, d=1.0 / N)


def derivative(values: np.ndarray, L: float, axis: int, order: int = 1) -> np.ndarray:
    """Spectral derivative along one axis of periodic samples."""
    N = values.shape[axis]
    a = modes(N)
    mult = (2j * np.pi * a / L) ** order
    if order % 2 == 1:
        mult[N // 2] = 0.0
    else:
        mult = mult.real.astype(complex)
    shape = [1] * values.ndim
    shape[axis] = N
    out = np.fft.ifft(np.fft.fft(values, axis=axis) * mult.reshape(shape), axis=axis)
    if not np.iscomplexobj(values):
        return out.real
    return out


def shift(values: np.ndarray, L: float, s, axis: int) -> np.ndarray:
    """Translate periodic samples by s along an axis: v(x) -> v(x - s).

    ``s`` may be a scalar or an array broadcastable against the orthogonal
    axes (one shift per row/column, used by the kinetic transport steps).
    """
    N = values.shape[axis]
    a = modes(N)
    shape = [1] * values.ndim
    shape[axis] = N
    a = a.reshape(shape)
    s_arr = np.asarray(s)
    if s_arr.ndim > 0:
        sh = [1] * values.ndim
        other = 1 - axis
        sh[other] = values.shape[other]
        s_arr = s_arr.reshape(sh)
    phase = np.exp(-2j * np.pi * a * s_arr / L)
    out = np.fft.ifft(np.fft.fft(values, axis=axis) * phase, axis=axis)
    if not np.iscomplexobj(values):
        return out.real
    return out


def half_shift(values: np.ndarray, axis: int, direction: int = +1) -> np.ndarray:
    """Evaluate the band-limited interpolant half a cell away.

    direction=+1 maps samples at x_i to values at x_i + dx/2; direction=-1
    maps samples at x_i + dx/2 back to x_i. The Nyquist mode vanishes at the
    shifted points, so the two maps invert each other exactly on fields with
    no Nyquist content.
    """
    N = values.shape[axis]
    a = modes(N)
    phase = np.exp(1j * np.pi * a * direction / N)
    phase[N // 2] = 0.0
    shape = [1] * values.ndim
    shape[axis] = N
    return np.fft.ifft(np.fft.fft(values, axis=axis) * phase.reshape(shape), axis=axis)


def fourier_multiplier(values: np.ndarray, mult: np.ndarray, axis: int) -> np.ndarray:
    """Apply a diagonal-in-Fourier multiplier (indexed in fft order) along an axis."""
    shape = [1] * values.ndim
    shape[axis] = values.shape[axis]
    return np.fft.ifft(np.fft.fft(values, axis=axis) * np.asarray(mult).reshape(shape), axis=axis)


def random_mode_block(rng: np.random.Generator, max_mode: int, real: bool = True) -> np.ndarray:
    """Random Fourier coefficients for modes |a|, |b| <= max_mode.

    The block is grid-independent: synthesizing it on any N > 2 * max_mode
    grid yields samples of one fixed analytic function, which keeps
    hbar sweeps free of data-roughness drift.
    """
    M = 2 * max_mode + 1
    c = rng.standard_normal((M, M)) + 1j * rng.standard_normal((M, M))
    if real:
        # Hermitian symmetry c[-a, -b] = conj(c[a, b])
        for a in range(-max_mode, max_mode + 1):
            for b in range(-max_mode, max_mode + 1):
                if (a, b) > (-a, -b):
                    c[a + max_mode, b + max_mode] = np.conj(c[-a + max_mode, -b + max_mode])
        c[max_mode, max_mode] = c[max_mode, max_mode].real
    return c


def field_from_modes(N: int, block: np.ndarray) -> np.ndarray:
    """Synthesize sum_{a,b} c[a,b] exp(2 pi i (a i + b k) / N) on an N x N grid."""
    M = (block.shape[0] - 1) // 2
    if N <= 2 * M:
        raise ValueError("grid too small for the mode block")
    spec = np.zeros((N, N), dtype=complex)
    for a in range(-M, M + 1):
        for b in range(-M, M + 1):
            spec[a % N, b % N] = block[a + M, b + M]
    vals = np.fft.ifft2(spec) * N**2
    if np.max(np.abs(vals.imag)) < 1e-10 * max(np.max(np.abs(vals)), 1e-300):
        return vals.real
    return vals


def band_limited_field(N: int, rng: np.random.Generator, max_mode: int | None = None,
                       real: bool = True) -> np.ndarray:
    """Random periodic field with spectrum confined to |mode| <= max_mode.

    Used by property tests: fields built here carry no content near either
    Nyquist mode, the regime where the grid transforms are exact bijections.
    """
    if max_mode is None:
        max_mode = N // 4
    spec = np.zeros((N, N), dtype=complex)
    a = modes(N)
    keep = np.abs(a) <= max_mode
    mask = np.outer(keep, keep)
    coeffs = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    spec[mask] = coeffs[mask]
    vals = np.fft.ifft2(spec) * N
    if real:
        return vals.real
    return vals
