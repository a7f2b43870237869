"""Lemma-level inequality probes measured at a single grid resolution.

Each probe returns the measured left side together with the budget (the
right side stripped of its unknown constant); hbar-sweep aggregation and
slope fits live in the sweeps module.
"""

from __future__ import annotations

import numpy as np

from .budgets import sqrt_field
from .calculus import (
    momentum_weight_apply,
    quantum_gradient_xi,
    spatial_density,
)
from .coherent import husimi_convolve, wick_quantize
from .grids import PhaseField, PhaseGrid
from .norms import (
    lebesgue_norm,
    quantum_sobolev_norm,
    schatten_norm,
    spatial_lebesgue_norm,
    weighted_sobolev_norm,
)
from .operators import DensityOperator
from .poisson import solve_poisson
from .remainder import b_remainder, potential_commutator
from .spectral import derivative
from .transforms import weyl_quantize


def phase_gradient_magnitude(f: PhaseField) -> PhaseField:
    """|grad f| over the phase space (both axes, spectral)."""
    g = f.grid
    dx_ = derivative(f.values.astype(complex), g.L_x, axis=0)
    dxi = derivative(f.values.astype(complex), g.L_xi, axis=1)
    return PhaseField(g, np.sqrt(np.abs(dx_) ** 2 + np.abs(dxi) ** 2), real=True)


def wick_square_probe(g_field: PhaseField, p_list=(1, 2, np.inf)) -> dict:
    """Lemma on Wick squares: ||wick(g^2) - wick(g)^2||_{L^p} vs hbar ||grad g||^2_{L^{2p}}."""
    grid = g_field.grid
    hbar = grid.hbar
    wg = wick_quantize(g_field)
    wg2 = wick_quantize(g_field.copy_with(g_field.values**2))
    diff = wg2 - (wg @ wg)
    gradmag = phase_gradient_magnitude(g_field)
    out = {"hbar": hbar}
    for p in p_list:
        lhs = schatten_norm(diff, p)
        two_p = np.inf if np.isinf(p) else 2 * p
        budget = hbar * lebesgue_norm(gradmag, two_p) ** 2
        key = "inf" if np.isinf(p) else str(int(p))
        out[f"lhs_p{key}"] = lhs
        out[f"budget_p{key}"] = budget
    return out


def weight_remainder_probe(f: PhaseField) -> dict:
    """Weyl-weight remainders:

    ||op_{<xi> f} - op_f <p>||_L2 <= (hbar/2) ||grad_x f||_L2 and
    ||<p> op_f <p> - op_{<xi>^2 f}||_L2 <= (hbar^2/4) ||Delta_x f||_L2.
    """
    grid = f.grid
    hbar = grid.hbar
    xi_w = np.sqrt(1.0 + grid.xi**2)
    op_f = weyl_quantize(f)
    op_wf = weyl_quantize(f.copy_with(f.values * xi_w[None, :]))
    lhs1 = schatten_norm(op_wf - momentum_weight_apply(op_f, 1, "right"), 2)
    budget1 = 0.5 * hbar * lebesgue_norm(
        f.copy_with(derivative(f.values.astype(complex), grid.L_x, axis=0), real=False), 2)
    op_w2f = weyl_quantize(f.copy_with(f.values * (xi_w**2)[None, :]))
    sandwich = momentum_weight_apply(op_f, 1, "both")
    lhs2 = schatten_norm(sandwich - op_w2f, 2)
    budget2 = 0.25 * hbar**2 * lebesgue_norm(
        f.copy_with(derivative(f.values.astype(complex), grid.L_x, axis=0, order=2), real=False), 2)
    return {"hbar": hbar, "lhs1": lhs1, "budget1": budget1,
            "lhs2": lhs2, "budget2": budget2}


def gaussian_commutator_probe(f: PhaseField, p: float = 2) -> dict:
    """Weight vs Gaussian smoothing: ||<xi>(g_h*f) - g_h*(<xi> f)||_{L^p}
    against hbar ||f||_{W^{1,p}}."""
    grid = f.grid
    xi_w = np.sqrt(1.0 + grid.xi**2)
    conv = husimi_convolve(f)
    lhs_field = conv.copy_with(conv.values * xi_w[None, :]) - husimi_convolve(
        f.copy_with(f.values * xi_w[None, :]))
    lhs = lebesgue_norm(lhs_field, p)
    budget = grid.hbar * weighted_sobolev_norm(f, 1, p, 0)
    return {"hbar": grid.hbar, "lhs": lhs, "budget": budget}


def commutator_probe(op_src: DensityOperator, mu: DensityOperator) -> dict:
    """Semiclassical commutator bound:
    (1/hbar) ||[V_op, mu]||_L2 <= C ||rho||_{L^2_x} ||grad_xi mu||_{W^{1,2}}."""
    grid = op_src.grid
    rho = spatial_density(op_src).real
    snap = solve_poisson(grid, rho, +1)
    lhs = schatten_norm(potential_commutator(mu, snap.V), 2) / grid.hbar
    budget = spatial_lebesgue_norm(rho, grid.dx**grid.d, 2) * quantum_sobolev_norm(
        quantum_gradient_xi(mu), 1, 2, 0)
    return {"hbar": grid.hbar, "lhs": lhs, "budget": budget}


def b_bound_probe(f: PhaseField, sign: int = 1) -> dict:
    """B-remainder size: (1/hbar)||B_f(op_f)||_L2 vs
    hbar ||grad E_f||_inf ||grad_xi^2 f||_L2 (the paper's two-sided content)."""
    grid = f.grid
    rho = f.values.sum(axis=1) * grid.dxi**grid.d
    snap = solve_poisson(grid, rho, sign)
    op = weyl_quantize(f)
    B = b_remainder(op, snap.V)
    lhs = schatten_norm(B, 2) / grid.hbar
    gradE = derivative(snap.E.astype(complex), grid.L_x, axis=0).real
    d2f = derivative(f.values.astype(complex), grid.L_xi, axis=1, order=2)
    budget = grid.hbar * np.max(np.abs(gradE)) * lebesgue_norm(
        f.copy_with(d2f, real=False), 2)
    return {"hbar": grid.hbar, "lhs": lhs, "budget": budget}


def init_diff_probe(g_field: PhaseField) -> dict:
    """Weighted Wick-square gap:
    ||<p>(wick(g)^2 - wick(g^2))<p>||_L2 vs hbar * C_init-style budget."""
    grid = g_field.grid
    wg = wick_quantize(g_field)
    wg2 = wick_quantize(g_field.copy_with(g_field.values**2))
    diff = (wg @ wg) - wg2
    lhs = schatten_norm(momentum_weight_apply(diff, 1, "both"), 2)
    g2 = g_field.copy_with(g_field.values**2)
    piece_g = max(weighted_sobolev_norm(g_field, 1, 4, 1),
                  weighted_sobolev_norm(g_field, 3, 2, 0)) ** 2
    piece_g2 = max(weighted_sobolev_norm(g2, 1, 2, 1),
                   weighted_sobolev_norm(g2, 2, 2, 0))
    budget = grid.hbar * (piece_g + piece_g2)
    return {"hbar": grid.hbar, "lhs": lhs, "budget": budget}


def c_init_value(f0: PhaseField) -> float:
    """C^init = ||sqrt(f0)||^2_{W^{1,4}_1 cap H^3} + ||f0||_{H^1_1 cap H^2}."""
    s = sqrt_field(f0)
    a = max(weighted_sobolev_norm(s, 1, 4, 1), weighted_sobolev_norm(s, 3, 2, 0))
    b = max(weighted_sobolev_norm(f0, 1, 2, 1), weighted_sobolev_norm(f0, 2, 2, 0))
    return a**2 + b


def grad_e_sup(grid: PhaseGrid, E: np.ndarray) -> float:
    return float(np.max(np.abs(derivative(E.astype(complex), grid.L_x, axis=0).real)))


def hessian_xi_norm(f: PhaseField) -> float:
    g = f.grid
    d2 = derivative(f.values.astype(complex), g.L_xi, axis=1, order=2)
    return lebesgue_norm(f.copy_with(d2, real=False), 2)
