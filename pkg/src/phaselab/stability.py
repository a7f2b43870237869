"""Twin-run stability experiments and the Powers-Stormer inequality check.

Each experiment evolves two nearby solutions, measures the square-root
distance, and checks it against the Gronwall envelope built from the
measured lambda budget. The effective constant is the largest implied rate
over the first half of the horizon, frozen before the later times test the
envelope (with the same factor-2 structural slack the regularity envelope
carries); symmetric twin data grow quadratically at first, so a single
first-interval rate would systematically undershoot.
"""

from __future__ import annotations

import numpy as np

from .budgets import (
    classical_lambda,
    fit_c_star_window,
    quantum_lambda,
    rho_sup_series,
    sqrt_field,
)
from .calculus import operator_sqrt
from .errors import ConfigurationError
from .grids import PhaseField
from .hartree import evolve_hartree
from .norms import h_half_norm, lebesgue_norm, schatten_norm
from .operators import DensityOperator
from .reports import ProbeReport
from .transforms import wigner_transform
from .vlasov import evolve_vlasov

ENVELOPE_SLACK = 1e-9
ENVELOPE_SLACK_FACTOR = 2.0  # same structural slack the regularity envelope uses


def classical_stability_experiment(f1_0: PhaseField, f2_0: PhaseField, T: float,
                                   dt: float, sign: int = 1,
                                   snapshot_stride: int = 5) -> ProbeReport:
    """Twin Vlasov runs: ||sqrt(f1) - sqrt(f2)||_L2 under its Gronwall envelope.

    Also checks the corollary ||f1 - f2||_L2 <= 2 C_inf^(1/2)
    ||f1^init - f2^init||_L1^(1/2) e^Lambda with the same fitted constant.
    """
    if np.min(f1_0.values) < -1e-12 or np.min(f2_0.values) < -1e-12:
        raise ConfigurationError("twin experiment needs nonnegative initial data")
    tr1 = evolve_vlasov(f1_0, T, dt, sign, snapshot_stride=snapshot_stride)
    tr2 = evolve_vlasov(f2_0, T, dt, sign, snapshot_stride=snapshot_stride)
    C_inf = max(lebesgue_norm(f1_0, np.inf), lebesgue_norm(f2_0, np.inf))
    budget = classical_lambda(tr2, C_inf)
    times = np.asarray(tr1.snapshot_times)
    left = np.array([
        lebesgue_norm(sqrt_field(a) - sqrt_field(b), 2)
        for a, b in zip(tr1.snapshots, tr2.snapshots)
    ])
    left_l2 = np.array([
        lebesgue_norm(a - b, 2) for a, b in zip(tr1.snapshots, tr2.snapshots)
    ])
    Lambda = budget.Lambda()
    report = ProbeReport(probe="classical_stability", hbar=[f1_0.grid.hbar])
    report.details["times"] = times
    report.details["left"] = left
    report.details["lambda"] = budget.lam
    report.details["Lambda"] = Lambda
    report.details["C_inf"] = C_inf
    if left[0] <= 1e-12:
        report.lhs = [float(np.max(left))]
        report.budget = [1e-9]
        report.finalize_ratios()
        report.require("identical_data_stays_identical", np.max(left) < 1e-9,
                       float(np.max(left)), 1e-9)
        return report
    c_star = fit_c_star_window(times, left, Lambda)
    env = ENVELOPE_SLACK_FACTOR * budget.envelope(left[0], c_star)
    report.details["c_star"] = c_star
    report.details["envelope"] = env
    ok = bool(np.all(left <= env * (1.0 + ENVELOPE_SLACK)))
    report.require("left_under_envelope", ok, float(np.max(left / env)), 1.0)
    l1_init = lebesgue_norm(f1_0 - f2_0, 1)
    corollary_env = 2.0 * np.sqrt(C_inf) * np.sqrt(l1_init) * np.exp(c_star * Lambda)
    ok2 = bool(np.all(left_l2 <= corollary_env * (1.0 + ENVELOPE_SLACK)))
    report.require("l2_l1_corollary", ok2, float(np.max(left_l2 / corollary_env)), 1.0)
    report.details["left_l2"] = left_l2
    report.details["corollary_envelope"] = corollary_env
    report.lhs = [float(np.max(left / env))]
    report.budget = [1.0]
    report.finalize_ratios()
    return report


def _sqrt_series(traj) -> list[DensityOperator]:
    return [operator_sqrt(op) for op in traj.snapshots]


def quantum_stability_experiment(op1_0: DensityOperator, op2_0: DensityOperator,
                                 T: float, dt: float, sign: int = 1,
                                 snapshot_stride: int = 5,
                                 n: int = 3, eps: float = 0.5) -> ProbeReport:
    """Twin Hartree runs: ||sqrt(op1) - sqrt(op2)||_L2 under the quantum envelope,
    plus the L2-L1 corollary via Powers-Stormer."""
    for op in (op1_0, op2_0):
        if not op.check_positive(1e-8):
            raise ConfigurationError("twin experiment needs positive initial operators")
    tr1 = evolve_hartree(op1_0, T, dt, sign, snapshot_stride=snapshot_stride)
    tr2 = evolve_hartree(op2_0, T, dt, sign, snapshot_stride=snapshot_stride)
    C_inf = max(schatten_norm(op1_0, np.inf), schatten_norm(op2_0, np.inf))
    v1 = _sqrt_series(tr1)
    v2 = _sqrt_series(tr2)
    times = np.asarray(tr1.snapshot_times)
    left = np.array([schatten_norm(a - b, 2) for a, b in zip(v1, v2)])
    left_l2 = np.array([schatten_norm(a - b, 2) for a, b in zip(tr1.snapshots, tr2.snapshots)])
    budget = quantum_lambda(v2, times, rho_sup_series(tr2), C_inf, n=n, eps=eps)
    Lambda = budget.Lambda()
    report = ProbeReport(probe="quantum_stability", hbar=[op1_0.grid.hbar])
    report.details["times"] = times
    report.details["left"] = left
    report.details["lambda"] = budget.lam
    report.details["Lambda"] = Lambda
    report.details["C_inf"] = C_inf
    # optional comparison column: H^(1/2) norm of the Wigner of grad_xi v2
    report.details["h_half_comparison"] = [
        h_half_norm(wigner_transform(op)) for op in v2[:1]
    ]
    if left[0] <= 1e-12:
        report.lhs = [float(np.max(left))]
        report.budget = [1e-9]
        report.finalize_ratios()
        report.require("identical_data_stays_identical", np.max(left) < 1e-9,
                       float(np.max(left)), 1e-9)
        return report
    c_star = fit_c_star_window(times, left, Lambda)
    env = ENVELOPE_SLACK_FACTOR * budget.envelope(left[0], c_star)
    report.details["c_star"] = c_star
    report.details["envelope"] = env
    ok = bool(np.all(left <= env * (1.0 + ENVELOPE_SLACK)))
    report.require("left_under_envelope", ok, float(np.max(left / env)), 1.0)
    l1_init = schatten_norm(op1_0 - op2_0, 1)
    corollary_env = 2.0 * np.sqrt(C_inf) * np.sqrt(l1_init) * np.exp(c_star * Lambda)
    ok2 = bool(np.all(left_l2 <= corollary_env * (1.0 + ENVELOPE_SLACK)))
    report.require("l2_l1_corollary", ok2, float(np.max(left_l2 / corollary_env)), 1.0)
    report.details["left_l2"] = left_l2
    report.details["corollary_envelope"] = corollary_env
    report.lhs = [float(np.max(left / env))]
    report.budget = [1.0]
    report.finalize_ratios()
    return report


def powers_stormer_check(grid, rng: np.random.Generator, pairs: int = 100,
                         max_mode: int | None = None) -> float:
    """Max of ||sqrt(A) - sqrt(B)||_L2^2 / ||A - B||_L1 over random positive pairs.

    The Powers-Stormer inequality bounds the ratio by 1.
    """
    from .spectral import band_limited_field

    N = grid.N
    worst = 0.0
    for _ in range(pairs):
        X = band_limited_field(N, rng, max_mode=max_mode or N // 3, real=False)
        Y = band_limited_field(N, rng, max_mode=max_mode or N // 3, real=False)
        A = DensityOperator(grid, X @ X.conj().T * grid.dx, hermitian=True, positive=True)
        B = DensityOperator(grid, Y @ Y.conj().T * grid.dx, hermitian=True, positive=True)
        num = schatten_norm(operator_sqrt(A) - operator_sqrt(B), 2) ** 2
        den = schatten_norm(A - B, 1)
        if den > 0:
            worst = max(worst, num / den)
    return worst
