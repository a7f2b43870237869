"""Weyl quantization, Wigner transform, and the Fourier exchange operation.

The pair is built from an exact factorization through chord space. Writing
c = i - j for the (minimal-image) chord between two kernel sites and
u = i + j for the midpoint on the doubled half-lattice,

    K[i, j] = D[u, c],   D[u, c] = (1/L) sum_k f(s_u, xi_k) e^{2 pi i k c / N},

where s_u = u dx / 2. Even chords hit primal midpoints; odd chords hit
half-lattice midpoints, reached by band-limited interpolation of the
momentum-FFT slices. The antipodal chord |c| = N/2 has two equally short
images; its kernel entries store the symmetric average, which keeps Weyl
kernels of real symbols exactly Hermitian. On fields with no content at
either Nyquist mode the wigner/weyl pair is an exact bijection; band-limited
test fields therefore round-trip to machine precision.
"""

from __future__ import annotations

import numpy as np

from .errors import IncompatibleGridError
from .grids import PhaseField, PhaseGrid
from .operators import DensityOperator
from .spectral import half_shift

_index_cache: dict[int, dict] = {}


def _chord_indices(N: int) -> dict:
    """Precompute gather indices for kernel assembly/disassembly at size N."""
    if N in _index_cache:
        return _index_cache[N]
    i = np.arange(N)[:, None]
    j = np.arange(N)[None, :]
    c = ((i - j + N // 2) % N) - N // 2          # minimal-image chord in [-N/2, N/2)
    col = c % N                                   # chord column in B
    even = (c % 2) == 0
    anti = c == -N // 2
    row_even = (i - (c >> 1)) % N                 # u/2 with u = 2i - c, c even
    row_odd = (i - ((c + 1) >> 1)) % N            # (u-1)/2 with u = 2i - c, c odd
    half = N // 2
    if half % 2 == 0:
        anti_a = (i - half // 2) % N              # u = 2i - N/2 -> primal index
        anti_b = (i + half // 2) % N              # u = 2i + N/2
        anti_odd = False
    else:
        anti_a = (i - (half + 1) // 2) % N        # (u-1)/2 for u = 2i - N/2 (odd)
        anti_b = (i + (half - 1) // 2) % N        # (u-1)/2 for u = 2i + N/2
        anti_odd = True
    # diagonal gather: Dmat[i0, col] = K[R[i0, col], C[i0, col]] walks the
    # chord-c circulant diagonal; for even c the samples sit at integer
    # midpoints i0 dx, for odd c at (i0 + 1/2) dx
    i0 = np.arange(N)[:, None]
    cc = ((np.arange(N)[None, :] + N // 2) % N) - N // 2   # chord per column
    ceven = (cc % 2) == 0
    R = np.where(ceven, (i0 + (cc >> 1)) % N, (i0 + ((cc + 1) >> 1)) % N)
    C = np.where(ceven, (i0 - (cc >> 1)) % N, (i0 + ((1 - cc) >> 1)) % N)
    cache = dict(c=c, col=col, even=even, anti=anti,
                 row_even=row_even, row_odd=row_odd,
                 anti_a=np.broadcast_to(anti_a, (N, N)),
                 anti_b=np.broadcast_to(anti_b, (N, N)), anti_odd=anti_odd,
                 diag_R=R, diag_C=C, col_even=ceven[0], chord=cc[0])
    _index_cache[N] = cache
    return cache


def _chord_slices(f_values: np.ndarray, grid: PhaseGrid):
    """Momentum-FFT of the symbol: B[i, m] = (1/L) sum_k f[i,k] e^{2 pi i k m / N}."""
    N = grid.N
    B = np.fft.ifft(np.fft.ifftshift(f_values.astype(complex), axes=1), axis=1) * (N / grid.L_x)
    Bmid = half_shift(B, axis=0, direction=+1)
    return B, Bmid


def weyl_quantize(f: PhaseField) -> DensityOperator:
    """Weyl quantization: kernel op_f(x, y) from the midpoint-Fourier formula."""
    grid = f.grid
    N = grid.N
    idx = _chord_indices(N)
    B, Bmid = _chord_slices(f.values, grid)
    rows = np.where(idx["even"], idx["row_even"], idx["row_odd"])
    src = np.where(idx["even"], B[rows, idx["col"]], Bmid[rows, idx["col"]])
    K = np.asarray(src)
    # antipodal chord: average the two equally short midpoint images
    anti = idx["anti"]
    if idx["anti_odd"]:
        va = Bmid[idx["anti_a"], idx["col"]]
        vb = Bmid[idx["anti_b"], idx["col"]]
    else:
        va = B[idx["anti_a"], idx["col"]]
        vb = B[idx["anti_b"], idx["col"]]
    K = np.where(anti, 0.5 * (va + vb), K)
    op = DensityOperator(grid, K)
    op.hermitian = bool(f.real)  # real symbols quantize to Hermitian kernels
    return op


def chord_matrix(op: DensityOperator) -> np.ndarray:
    """Gather the circulant diagonals: Dmat[i0, col] = kernel on chord col.

    Column col holds the chord c = ((col + N/2) mod N) - N/2 diagonal,
    sampled along its midpoint (integer midpoints for even c, half-integer
    for odd c).
    """
    idx = _chord_indices(op.grid.N)
    return op.kernel[idx["diag_R"], idx["diag_C"]]


def scatter_chords(grid: PhaseGrid, Dmat: np.ndarray) -> np.ndarray:
    """Inverse of chord_matrix: rebuild the kernel from its diagonals."""
    idx = _chord_indices(grid.N)
    K = np.empty((grid.N, grid.N), dtype=complex)
    K[idx["diag_R"], idx["diag_C"]] = Dmat
    return K


def wigner_transform(op: DensityOperator) -> PhaseField:
    """Wigner transform: exact inverse of weyl_quantize on the grid."""
    grid = op.grid
    N = grid.N
    idx = _chord_indices(N)
    B = chord_matrix(op)
    odd = ~idx["col_even"]
    B[:, odd] = half_shift(B[:, odd], axis=0, direction=-1)
    vals = np.fft.fftshift(np.fft.fft(B, axis=1), axes=(1,)) * grid.dx
    if op.hermitian:
        imag = np.max(np.abs(vals.imag))
        scale = np.max(np.abs(vals)) or 1.0
        if imag <= 1e-10 * scale:
            return PhaseField(grid, vals.real, real=True)
    return PhaseField(grid, vals, real=False)


def swap_symbol(f: PhaseField) -> PhaseField:
    """Exchange position and momentum of a symbol: f*(x, xi) = f(xi, x).

    Requires a square box. Grid momenta map to grid positions modulo L and
    vice versa, so the swap is a transpose composed with half-period rolls.
    """
    grid = f.grid
    if not grid.is_square():
        raise IncompatibleGridError("symbol swap needs L_x == L_xi")
    N = grid.N
    vals = np.roll(np.roll(f.values.T, -(N // 2), axis=0), -(N // 2), axis=1)
    return PhaseField(grid, vals, real=f.real)


def exchange(op: DensityOperator) -> DensityOperator:
    """Exchange of position and momentum on the operator side: op_f* = op_{f*}.

    Conjugation with the semiclassical Fourier transform alone implements a
    90-degree rotation of the symbol (the reflection f(xi, x) is
    antisymplectic, out of reach of any unitary conjugation); composing with
    the kernel transpose, which flips the momentum sign and preserves all
    singular values, realizes the exact reflection. The result is an
    involution that preserves every Schatten norm to machine precision and
    maps the weights <x>* = <p> and <p>* = <x>. Requires a square box so the
    momentum grid coincides with the position grid modulo L; on such a box
    the quadrature factors cancel exactly (dx^2 N / h == 1).
    """
    grid = op.grid
    if not grid.is_square():
        raise IncompatibleGridError("exchange needs a square box L_x == L_xi")
    K = np.fft.ifft(np.fft.fft(op.kernel.T, axis=1), axis=0)
    return DensityOperator(grid, K, hermitian=op.hermitian, positive=op.positive)
