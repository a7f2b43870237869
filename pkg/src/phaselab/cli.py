"""Command-line entry point: run | sweep | probe | report.

Exit codes: 0 clean, 1 failing probe assertion, 2 configuration or schema
error, 3 solver guard trip. Every error path prints one line with a
machine-parsable prefix (config-error:, solver-error:, io-error:,
probe-failure:). Outputs are UTF-8 CSV with header rows and pretty-printed
JSON with sorted keys; byte-identical for identical configs.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from .budgets import sqrt_field
from .coherent import wick_quantize
from .config import PROBES, SimConfig, apply_overrides, load_config
from .errors import ConfigurationError, PhaselabError
from .grids import make_grid, sample_field
from .hartree import evolve_hartree, evolve_linear_hartree
from .io import dump_raw_array, fmt, trajectory_csv, write_csv
from .norms import lebesgue_norm, mixed_norm, weighted_sobolev_norm
from .reports import ProbeReport
from .spectral import shift
from .stability import classical_stability_experiment, quantum_stability_experiment
from .sweeps import (
    b_bound_sweep,
    commutator_sweep,
    convergence_sweep,
    defect_sweep,
    init_diff_sweep,
    regularity_sweep,
    sqrt_comparison_sweep,
    weight_remainder_sweep,
    wick_square_sweep,
    wick_structure_sweep,
)
from .trajectory import resolve_steps
from .vlasov import evolve_vlasov

EXIT_OK = 0
EXIT_PROBE_FAIL = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="phaselab",
                                description="phase-space quantization laboratory")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp):
        sp.add_argument("--config", required=True, help="JSON config path")
        sp.add_argument("--out", default=None, help="output directory override")
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="dotted-path config override (repeatable)")
        sp.add_argument("--seed", type=int, default=None, help="seed override")
        sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                        help="worker pool size for sweep members")

    run_p = sub.add_parser("run", help="run one experiment")
    common(run_p)
    sweep_p = sub.add_parser("sweep", help="run the configured hbar-sweep probes")
    common(sweep_p)
    probe_p = sub.add_parser("probe", help="run one probe at the config's single grid")
    common(probe_p)
    probe_p.add_argument("--name", required=True,
                         help=f"probe name: norms or one of {', '.join(PROBES)}")
    report_p = sub.add_parser("report", help="merge probe reports from a directory")
    report_p.add_argument("results_dir", help="directory of ProbeReport JSON files")
    report_p.add_argument("--out", default=None, help="output directory (default: results_dir)")
    return p


def _load(args) -> SimConfig:
    config = load_config(args.config)
    overrides = list(args.set)
    if args.out is not None:
        overrides.append(f"out_dir={args.out}")
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    if overrides:
        config = apply_overrides(config, overrides)
    return config


def _twin_fields(config: SimConfig, grid):
    f1 = sample_field(grid, config["profile"])
    delta = config["twin_shift_cells"] * grid.dx
    f2 = f1.copy_with(shift(f1.values, grid.L_x, delta, axis=0))
    return f1, f2


def cmd_run(config: SimConfig) -> int:
    grid = make_grid(config["d"], config["N"], config["L_x"], config["L_xi"])
    out_dir = Path(config["out_dir"])
    experiment = config["experiment"]
    T, sign = config["T"], config["sign"]
    dt = config["dt"] if config["dt"] is not None else grid.hbar / 10.0
    steps, dt = resolve_steps(T, dt)
    stride = config["snapshot_stride"]
    if experiment == "vlasov":
        f0 = sample_field(grid, config["profile"])
        traj = evolve_vlasov(f0, T, dt, sign, snapshot_stride=stride)
        trajectory_csv(out_dir / "vlasov_trajectory.csv", traj)
        if config["dump_snapshots"]:
            dump_raw_array(out_dir / "vlasov_final", traj.final().values, grid, "f(T)")
    elif experiment == "hartree":
        f0 = sample_field(grid, config["profile"])
        vt = wick_quantize(sqrt_field(f0))
        op0 = vt @ vt
        op0.hermitian = True
        op0.positive = True
        traj = evolve_hartree(op0, T, dt, sign, snapshot_stride=stride, log_spectrum=True)
        trajectory_csv(out_dir / "hartree_trajectory.csv", traj)
        if config["dump_snapshots"]:
            dump_raw_array(out_dir / "hartree_final", traj.final().kernel, grid, "op(T)")
    elif experiment == "linear-hartree":
        f0 = sample_field(grid, config["profile"])
        ftraj = evolve_vlasov(f0, T, dt, sign)
        if not ftraj.fields:
            raise ConfigurationError("linear-hartree needs a field history source")
        vt = wick_quantize(sqrt_field(f0))
        op0 = vt @ vt
        op0.hermitian = True
        op0.positive = True
        traj = evolve_linear_hartree(op0, ftraj.fields, T, dt,
                                     snapshot_stride=stride, log_spectrum=True)
        trajectory_csv(out_dir / "linear_hartree_trajectory.csv", traj)
    elif experiment == "twin-classical":
        f1, f2 = _twin_fields(config, grid)
        rep = classical_stability_experiment(f1, f2, T, dt, sign)
        (out_dir / "classical_stability.json").parent.mkdir(parents=True, exist_ok=True)
        (out_dir / "classical_stability.json").write_text(rep.to_json() + "\n")
        if not rep.passed:
            return EXIT_PROBE_FAIL
    elif experiment == "twin-quantum":
        f1, f2 = _twin_fields(config, grid)
        ops = []
        for f in (f1, f2):
            vt = wick_quantize(sqrt_field(f))
            op = vt @ vt
            op.hermitian = True
            op.positive = True
            ops.append(op)
        rep = quantum_stability_experiment(ops[0], ops[1], T, dt, sign)
        (out_dir / "quantum_stability.json").parent.mkdir(parents=True, exist_ok=True)
        (out_dir / "quantum_stability.json").write_text(rep.to_json() + "\n")
        if not rep.passed:
            return EXIT_PROBE_FAIL
    return EXIT_OK


def _run_probe_reports(config: SimConfig, jobs: int) -> list[ProbeReport]:
    N_list = tuple(config["sweep_N"])
    profile = config["profile"]
    T, sign, seed = config["T"], config["sign"], config["seed"]
    reports: list[ProbeReport] = []
    for name in config["probes"]:
        if name == "convergence":
            reports.append(convergence_sweep(profile, T, N_list, sign,
                                             dt=config["dt"], jobs=jobs))
        elif name == "wick_structure":
            reports.append(wick_structure_sweep(N_list, jobs=jobs))
        elif name == "wick_square":
            reports.append(wick_square_sweep(N_list, jobs=jobs))
        elif name == "weight_remainder":
            reports.append(weight_remainder_sweep(N_list, jobs=jobs))
        elif name == "commutator":
            reports.append(commutator_sweep(N_list, seed=seed, jobs=jobs))
        elif name == "b_remainder":
            reports.append(b_bound_sweep(profile, N_list, sign, jobs=jobs))
        elif name == "init_diff":
            reports.append(init_diff_sweep(N_list, jobs=jobs))
        elif name == "positivity_defect":
            pos, diag = defect_sweep(profile, T, N_list, sign,
                                     dt=config["dt"], jobs=jobs)
            reports.extend([pos, diag])
        elif name == "sqrt_comparison":
            reports.append(sqrt_comparison_sweep(profile, T, N_list, sign,
                                                 dt=config["dt"], jobs=jobs))
        elif name == "regularity":
            reports.append(regularity_sweep(profile, T, N_list, sign,
                                            dt=config["dt"], jobs=jobs))
    return reports


def cmd_sweep(config: SimConfig, jobs: int) -> int:
    if len(config["sweep_N"]) < 4:
        raise ConfigurationError("sweep needs at least 4 grid sizes in sweep_N")
    if not config["probes"]:
        raise ConfigurationError("sweep needs a nonempty probe list")
    out_dir = Path(config["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    reports = _run_probe_reports(config, jobs)
    rows = []
    all_pass = True
    for rep in reports:
        (out_dir / f"{rep.probe}.json").write_text(rep.to_json() + "\n")
        rows.extend(rep.csv_rows())
        flag = "pass" if rep.passed else "FAIL"
        if not rep.passed:
            all_pass = False
        slope = "" if rep.slope is None else f"{rep.slope:+.4f}"
        print(f"{rep.probe:24s} slope={slope:>8s}  {flag}")
    write_csv(out_dir / "sweep_summary.csv",
              ["probe", "hbar", "lhs", "budget", "ratio", "slope", "pass"],
              [[r["probe"], r["hbar"], r["lhs"], r["budget"], r["ratio"],
                r["slope"], r["pass"]] for r in rows])
    return EXIT_OK if all_pass else EXIT_PROBE_FAIL


def cmd_probe(config: SimConfig, name: str, jobs: int) -> int:
    out_dir = Path(config["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    grid = make_grid(config["d"], config["N"], config["L_x"], config["L_xi"])
    if name == "norms":
        f = sample_field(grid, config["profile"])
        rows = [
            ["L1", lebesgue_norm(f, 1)],
            ["L2", lebesgue_norm(f, 2)],
            ["Linf", lebesgue_norm(f, math.inf)],
            ["L2xL2xi", mixed_norm(f, 2, 2)],
            ["L3xL2xi", mixed_norm(f, 3, 2)],
            ["H1", weighted_sobolev_norm(f, 1, 2, 0)],
            ["H2", weighted_sobolev_norm(f, 2, 2, 0)],
            ["W1inf", weighted_sobolev_norm(f, 1, math.inf, 0)],
            ["H2_2", weighted_sobolev_norm(f, 2, 2, 2)],
        ]
        write_csv(out_dir / "norms.csv", ["spec", "value"], rows)
        for spec, value in rows:
            print(f"{spec:10s} {fmt(value)}")
        return EXIT_OK
    if name not in PROBES:
        raise ConfigurationError(f"unknown probe {name!r}")
    single = dict(config.data)
    single["probes"] = [name]
    single["sweep_N"] = sorted(set(config["sweep_N"]))
    reports = _run_probe_reports(SimConfig(single), jobs)
    ok = True
    for rep in reports:
        (out_dir / f"{rep.probe}.json").write_text(rep.to_json() + "\n")
        print(f"{rep.probe:24s} {'pass' if rep.passed else 'FAIL'}")
        ok = ok and rep.passed
    return EXIT_OK if ok else EXIT_PROBE_FAIL


def cmd_report(results_dir: str, out: str | None) -> int:
    rdir = Path(results_dir)
    if not rdir.is_dir():
        raise ConfigurationError(f"results directory not found: {results_dir}")
    files = sorted(rdir.glob("*.json"))
    reports = []
    for fp in files:
        try:
            data = json.loads(fp.read_text())
        except json.JSONDecodeError:
            print(f"io-error: malformed report file {fp}", file=sys.stderr)
            return EXIT_CONFIG
        if isinstance(data, dict) and {"probe", "hbar", "lhs"} <= set(data):
            reports.append((fp.stem, data))
    if not reports:
        print(f"io-error: no probe reports found in {results_dir}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = Path(out) if out else rdir
    out_dir.mkdir(parents=True, exist_ok=True)
    merged = []
    for run_id, data in reports:
        for i, hb in enumerate(data["hbar"]):
            merged.append([
                run_id, data["probe"], hb, data["lhs"][i],
                data["budget"][i] if i < len(data.get("budget", [])) else "",
                data["ratio"][i] if i < len(data.get("ratio", [])) else "",
                data.get("slope", ""), data.get("passed", ""),
            ])
        if len(data["hbar"]) >= 2:
            plot_rows = [[math.log(h), math.log(l)]
                         for h, l in zip(data["hbar"], data["lhs"]) if h > 0 and l > 0]
            write_csv(out_dir / f"plot_{run_id}.csv", ["log_hbar", "log_lhs"], plot_rows)
        if data["probe"] == "convergence_rate":
            write_csv(out_dir / "main_rate.csv",
                      ["hbar", "l2_error", "fitted_slope"],
                      [[h, l, data.get("slope", "")]
                       for h, l in zip(data["hbar"], data["lhs"])])
    write_csv(out_dir / "merged_reports.csv",
              ["run", "probe", "hbar", "lhs", "budget", "ratio", "slope", "pass"], merged)
    print(f"merged {len(reports)} report(s) into {out_dir}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.verb == "report":
            return cmd_report(args.results_dir, args.out)
        config = _load(args)
        if args.verb == "run":
            return cmd_run(config)
        if args.verb == "sweep":
            return cmd_sweep(config, args.jobs)
        if args.verb == "probe":
            return cmd_probe(config, args.name, args.jobs)
        raise ConfigurationError(f"unknown verb {args.verb!r}")
    except ConfigurationError as exc:
        print(f"config-error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PhaselabError as exc:
        print(f"solver-error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
