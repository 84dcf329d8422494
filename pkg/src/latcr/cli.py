"""Experiment harness: analysis rows, simulations, and figure CSVs.

Unit convention: decibel-to-linear conversion happens here and only here;
the library sees linear quantities with the noise power as the unit
(sigma_u2 = 1).  Every CSV starts with a comment block echoing the tool
version, the exact command line, the seed, and all resolved parameters, so
re-running the printed command reproduces the file byte for byte.

Exit codes: 0 success, 2 infeasible collision constraint, 3 degenerate
model (no root, singular chain, vanishing denominator, ambiguous power
landscape), 4 output I/O failure, 64 usage error.
"""

import argparse
import sys
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    AmbiguousLandscape,
    ColumnSumViolation,
    DegenerateDenominator,
    InfeasibleConstraint,
    NoRoot,
    SingularSystem,
)
from .markov import collision_ratio, waste_ratio
from .power import existence_curves, optimal_power, throughput
from .sensing import RadioParams, error_profile_from_pm, required_pm, thresholds_from_pm
from .sim import SimConfig, run, run_batch
from .traffic import PuTraffic, TransitionProbs

FLOAT_FMT = "%.9g"

SWEEP_AXES = ("sigma_s2_db", "chi2_db", "pc_constraint", "mu", "ns")

ROW_COLUMNS = [
    "sweep_value",
    "pm", "pf0", "pf1", "eps0", "eps1", "pc", "pw", "c", "dc",
    "empirical_pc", "empirical_pc_se", "empirical_pw", "empirical_pw_se",
    "sim_throughput", "delta_pc", "delta_pw", "delta_throughput",
    "ns", "mu", "nu", "pc_constraint", "gamma_s", "chi2",
    "sigma_s2", "sigma_u2", "sigma_t2", "slots", "seed", "mode",
]

EXISTENCE_COLUMNS = [
    "sweep_value", "left_max", "right_at_argmax", "argmax_sigma_s2_db",
    "ns", "mu", "nu", "pc_constraint", "gamma_s", "sigma_u2", "sigma_t2",
]


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class ExperimentSpec:
    """A one-axis sweep over a fixed parameter base."""

    name: str
    base: dict
    axis: str
    grid: tuple
    simulate: bool
    out_path: Path

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ValueError(f"sweep axis must be one of {SWEEP_AXES}")
        if len(self.grid) == 0:
            raise ValueError("sweep grid must be nonempty")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("sweep grid must be strictly increasing")


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (tuple, list)):
        return " ".join(fmt(v) for v in value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return FLOAT_FMT % value


def analytic_row(
    params: RadioParams, t: TransitionProbs, pc_constraint: float, pm_mode: str
) -> dict:
    """All analytic quantities for one parameter point."""
    pm = required_pm(pc_constraint, t, pm_mode, params)
    e = error_profile_from_pm(pm, params)
    th = thresholds_from_pm(pm, params)
    point = throughput(params, t, pm)
    return {
        "pm": pm,
        "pf0": e.pf0,
        "pf1": e.pf1,
        "eps0": th.eps0,
        "eps1": th.eps1,
        "pc": collision_ratio(e, t),
        "pw": waste_ratio(e, t),
        "c": point.c,
        "dc": point.dc,
        "ns": params.ns,
        "mu": t.mu,
        "nu": t.nu,
        "pc_constraint": pc_constraint,
        "gamma_s": params.gamma_s,
        "chi2": params.chi2,
        "sigma_s2": params.sigma_s2,
        "sigma_u2": params.sigma_u2,
        "sigma_t2": params.sigma_t2,
    }


def traffic_from_probs(t: TransitionProbs, slot: float = 1.0) -> PuTraffic:
    """Invert the per-slot probabilities to exponential mean durations."""
    return PuTraffic(
        tau0=-slot / np.log1p(-t.mu), tau1=-slot / np.log1p(-t.nu), slot=slot
    )


def sim_config_for(params, t, pm, slots, seed, mode) -> SimConfig:
    return SimConfig(
        traffic=traffic_from_probs(t),
        radio=params,
        thresholds=thresholds_from_pm(pm, params),
        slots=slots,
        seed=seed,
        mode=mode,
    )


def fields_from_metrics(m, row, slots, seed, mode) -> dict:
    return {
        "empirical_pc": m.empirical_pc,
        "empirical_pc_se": m.pc_se,
        "empirical_pw": m.empirical_pw,
        "empirical_pw_se": m.pw_se,
        "sim_throughput": m.throughput,
        "delta_pc": abs(m.empirical_pc - row["pc"]),
        "delta_pw": abs(m.empirical_pw - row["pw"]),
        "delta_throughput": abs(m.throughput - row["c"]),
        "slots": slots,
        "seed": seed,
        "mode": mode,
    }


def simulated_fields(params, t, row, slots, seed, mode) -> dict:
    cfg = sim_config_for(params, t, row["pm"], slots, seed, mode)
    return fields_from_metrics(run(cfg), row, slots, seed, mode)


def write_csv(path: Path, columns, rows, header: dict, command: str):
    lines = [f"# latcr {__version__}", f"# command: {command}"]
    for key, value in header.items():
        lines.append(f"# {key} = {fmt(value)}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(fmt(row.get(col)) for col in columns))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")


def print_row(row: dict, stream=None):
    stream = stream or sys.stdout
    cols = [c for c in ROW_COLUMNS if row.get(c) is not None]
    print(",".join(cols), file=stream)
    print(",".join(fmt(row[c]) for c in cols), file=stream)


def point_seed(base_seed: int, *key: int) -> int:
    """Stable independent seed for one sweep point."""
    return int(np.random.SeedSequence((base_seed, *key)).generate_state(1)[0])


# ---------------------------------------------------------------------------
# presets


def load_preset(name: str) -> dict:
    text = resources.files("latcr.presets").joinpath(f"{name}.cfg").read_text()
    out = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition("=")
        key = key.strip()
        parts = [v.strip() for v in value.split(",")]
        nums = [float(v) for v in parts]
        if len(nums) == 1:
            out[key] = nums[0]
        else:
            out[key] = tuple(nums)
    return out


def apply_overrides(preset: dict, pairs: list[str]) -> dict:
    out = dict(preset)
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep:
            raise ValueError(f"override {pair!r} is not key=value")
        parts = [float(v) for v in value.split(",")]
        out[key.strip()] = parts[0] if len(parts) == 1 else tuple(parts)
    # list-typed keys may collapse to scalars when overridden with one value
    for key, value in out.items():
        if key.endswith("_values") and np.isscalar(value):
            out[key] = (value,)
    return out


# ---------------------------------------------------------------------------
# subcommands


def params_from_args(args) -> tuple[RadioParams, TransitionProbs]:
    t = TransitionProbs(mu=args.mu, nu=args.nu)
    p = RadioParams(
        ns=args.ns,
        gamma_s=db_to_linear(args.gamma_s_db),
        chi2=0.0 if args.chi2_db is None else db_to_linear(args.chi2_db),
        sigma_u2=1.0,
        sigma_s2=db_to_linear(args.sigma_s_db),
        sigma_t2=db_to_linear(args.sigma_t_db),
    )
    return p, t


def cmd_analyze(args) -> int:
    p, t = params_from_args(args)
    row = analytic_row(p, t, args.pc, args.pm_mode)
    row["sweep_value"] = args.sigma_s_db
    if args.out:
        write_csv(
            Path(args.out),
            [c for c in ROW_COLUMNS if row.get(c) is not None],
            [row],
            header={"pm_mode": args.pm_mode},
            command=args.command_line,
        )
    else:
        print_row(row)
    return 0


def cmd_simulate(args) -> int:
    p, t = params_from_args(args)
    row = analytic_row(p, t, args.pc, args.pm_mode)
    row["sweep_value"] = args.sigma_s_db
    row.update(simulated_fields(p, t, row, args.slots, args.seed, args.mode))
    if args.out:
        write_csv(Path(args.out), ROW_COLUMNS, [row],
                  header={"pm_mode": args.pm_mode}, command=args.command_line)
    else:
        print_row(row)
    return 0


def cmd_optimal_power(args) -> int:
    p, t = params_from_args(args)
    pm = required_pm(args.pc, t, args.pm_mode, p)
    res = optimal_power(p, t, pm)
    print("exists,local_max_sigma_s2_db,local_min_sigma_s2_db,c_at_max")
    vals = [
        str(res.exists).lower(),
        fmt(None if res.local_max is None else 10.0 * np.log10(res.local_max)),
        fmt(None if res.local_min is None else 10.0 * np.log10(res.local_min)),
        fmt(res.c_at_max),
    ]
    print(",".join(vals))
    return 0


def _progress(args, text: str):
    if args.simulate:
        print(text, file=sys.stderr, flush=True)


def _figure_fig3(args, preset, out_dir: Path):
    gamma_s = db_to_linear(preset["gamma_s_db"])
    gamma_i = db_to_linear(preset["gamma_i_db"])
    ns = int(preset["ns"])
    base = RadioParams(ns=ns, gamma_s=gamma_s, chi2=gamma_i, sigma_u2=1.0, sigma_s2=1.0)
    pcs = np.linspace(preset["pc_min"], preset["pc_max"], int(preset["pc_points"]))
    written = []
    for mu in preset["mu_values"]:
        t = TransitionProbs(mu=mu, nu=preset["ratio"] * mu)
        for pm_mode in ("exact", "approx"):
            rows = []
            for pc in pcs:
                if pc <= t.nu / 2.0 + 1e-9:
                    continue  # infeasible grid point
                row = analytic_row(base, t, float(pc), pm_mode)
                row["sweep_value"] = float(pc)
                rows.append(row)
            path = out_dir / f"fig3_mu_{mu:g}_{pm_mode}.csv"
            write_csv(path, ROW_COLUMNS, rows,
                      header={**preset, "mu": mu, "pm_mode": pm_mode},
                      command=args.command_line)
            written.append(path)
    return written


def _figure_fig4a(args, preset, out_dir: Path):
    t = TransitionProbs(mu=preset["mu"], nu=preset["nu"])
    db_grid = np.arange(
        preset["sigma_s_db_min"],
        preset["sigma_s_db_max"] + preset["sigma_s_db_step"] / 2,
        preset["sigma_s_db_step"],
    )
    slots = int(args.slots or preset["sim_slots"])
    written = []
    for ci, chi2 in enumerate(preset["chi2_values"]):
        base = RadioParams(
            ns=int(preset["ns"]), gamma_s=db_to_linear(preset["gamma_s_db"]),
            chi2=chi2, sigma_u2=1.0, sigma_s2=1.0, sigma_t2=preset["sigma_t2"],
        )
        pm = required_pm(preset["pc"], t, "approx")
        header = {**preset, "chi2": chi2, "seed": args.seed}
        res = optimal_power(base, t, pm)
        if res.exists:
            header["local_max_sigma_s2_db"] = 10.0 * np.log10(res.local_max)
            header["local_max_c"] = res.c_at_max
            if res.local_min is not None:
                header["local_min_sigma_s2_db"] = 10.0 * np.log10(res.local_min)
        rows = []
        point_params = []
        for pi, db in enumerate(db_grid):
            p = replace(base, sigma_s2=db_to_linear(float(db)))
            row = analytic_row(p, t, preset["pc"], "approx")
            row["sweep_value"] = float(db)
            rows.append(row)
            point_params.append(p)
        if args.simulate:
            seeds = [point_seed(args.seed, ci, pi) for pi in range(len(rows))]
            cfgs = [
                sim_config_for(p, t, row["pm"], slots, seed, "sample_level")
                for p, row, seed in zip(point_params, rows, seeds)
            ]
            if args.workers > 1:
                # evaluated concurrently; results come back in sweep order
                metrics = run_batch(cfgs, workers=args.workers)
                _progress(args, f"[fig4a] chi2={chi2:g}: {len(cfgs)} points simulated")
            else:
                metrics = []
                for pi, cfg in enumerate(cfgs):
                    metrics.append(run(cfg))
                    _progress(args, f"[fig4a] chi2={chi2:g}: point {pi + 1}/{len(cfgs)}")
            for row, m, seed in zip(rows, metrics, seeds):
                row.update(fields_from_metrics(m, row, slots, seed, "sample_level"))
        path = out_dir / f"fig4a_chi2_{chi2:g}.csv"
        write_csv(path, ROW_COLUMNS, rows, header=header, command=args.command_line)
        written.append(path)
    return written


def _figure_fig4b(args, preset, out_dir: Path):
    t = TransitionProbs(mu=preset["mu"], nu=preset["nu"])
    base = RadioParams(
        ns=int(preset["ns"]), gamma_s=db_to_linear(preset["gamma_s_db"]),
        chi2=1.0, sigma_u2=1.0, sigma_s2=1.0, sigma_t2=preset["sigma_t2"],
    )
    pm = required_pm(preset["pc"], t, "approx")
    grid = np.linspace(preset["chi2_min"], preset["chi2_max"], int(preset["chi2_points"]))
    points = existence_curves(base, t, pm, grid)
    rows = [
        {
            "sweep_value": pt.chi2,
            "left_max": pt.left_max,
            "right_at_argmax": pt.right_at_argmax,
            "argmax_sigma_s2_db": 10.0 * np.log10(pt.argmax_sigma_s2),
            "ns": base.ns,
            "mu": t.mu,
            "nu": t.nu,
            "pc_constraint": preset["pc"],
            "gamma_s": base.gamma_s,
            "sigma_u2": base.sigma_u2,
            "sigma_t2": base.sigma_t2,
        }
        for pt in points
    ]
    path = out_dir / "fig4b_existence.csv"
    write_csv(path, EXISTENCE_COLUMNS, rows, header=preset, command=args.command_line)
    return [path]


def _figure_fig5(args, preset, out_dir: Path):
    pms = np.logspace(
        np.log10(preset["pm_min"]), np.log10(preset["pm_max"]), int(preset["pm_points"])
    )
    written = []
    for mu in preset["mu_values"]:
        t = TransitionProbs(mu=mu, nu=preset["ratio"] * mu)
        for chi2 in preset["chi2_values"]:
            p = RadioParams(
                ns=int(preset["ns"]), gamma_s=db_to_linear(preset["gamma_s_db"]),
                chi2=chi2, sigma_u2=1.0, sigma_s2=db_to_linear(preset["sigma_s_db"]),
            )
            rows = []
            for pm in pms:
                e = error_profile_from_pm(float(pm), p)
                th = thresholds_from_pm(float(pm), p)
                point = throughput(p, t, float(pm))
                rows.append({
                    "sweep_value": float(pm), "pm": float(pm),
                    "pf0": e.pf0, "pf1": e.pf1, "eps0": th.eps0, "eps1": th.eps1,
                    "pc": collision_ratio(e, t), "pw": waste_ratio(e, t),
                    "c": point.c, "dc": point.dc,
                    "ns": p.ns, "mu": t.mu, "nu": t.nu,
                    "gamma_s": p.gamma_s, "chi2": p.chi2,
                    "sigma_s2": p.sigma_s2, "sigma_u2": p.sigma_u2,
                    "sigma_t2": p.sigma_t2,
                })
            path = out_dir / f"fig5_mu_{mu:g}_chi2_{chi2:g}.csv"
            write_csv(path, ROW_COLUMNS, rows,
                      header={**preset, "mu": mu, "chi2": chi2},
                      command=args.command_line)
            written.append(path)
    return written


def _figure_fig6(args, preset, out_dir: Path):
    chi2_db = np.arange(
        preset["chi2_db_min"],
        preset["chi2_db_max"] + preset["chi2_db_step"] / 2,
        preset["chi2_db_step"],
    )
    written = []
    # (ns, mu) move together; both power levels apply to each pairing
    pairs = list(zip(preset["ns_values"], preset["mu_values"]))
    for sigma_s_db in preset["sigma_s_db_values"]:
        for ns, mu in pairs:
            t = TransitionProbs(mu=mu, nu=preset["ratio"] * mu)
            rows = []
            for db in chi2_db:
                p = RadioParams(
                    ns=int(ns), gamma_s=db_to_linear(preset["gamma_s_db"]),
                    chi2=db_to_linear(float(db)), sigma_u2=1.0,
                    sigma_s2=db_to_linear(sigma_s_db),
                )
                row = analytic_row(p, t, preset["pc"], "approx")
                row["sweep_value"] = float(db)
                rows.append(row)
            path = out_dir / f"fig6_p{sigma_s_db:g}dB_ns{int(ns)}.csv"
            write_csv(path, ROW_COLUMNS, rows,
                      header={**preset, "sigma_s_db": sigma_s_db, "ns": ns, "mu": mu},
                      command=args.command_line)
            written.append(path)
    return written


FIGURES = {
    "fig3": _figure_fig3,
    "fig4a": _figure_fig4a,
    "fig4b": _figure_fig4b,
    "fig5": _figure_fig5,
    "fig6": _figure_fig6,
}


def cmd_figure(args) -> int:
    preset = apply_overrides(load_preset(args.which), args.set)
    out_dir = Path(args.out_dir)
    written = FIGURES[args.which](args, preset, out_dir)
    for path in written:
        print(path)
    return 0


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # keep exit code 2 reserved for the infeasible-constraint condition
        self.exit(64, f"{self.prog}: error: {message}\n")


def _add_model_flags(sp, with_sigma_s=True):
    sp.add_argument("--ns", type=int, default=300)
    sp.add_argument("--mu", type=float, default=1 / 500)
    sp.add_argument("--nu", type=float, default=6 / 500)
    sp.add_argument("--pc", type=float, default=0.1)
    sp.add_argument("--gamma-s-db", type=float, default=-5.0)
    sp.add_argument("--chi2-db", type=float, default=-20.0,
                    help="RSI factor in dB (omit RSI entirely with --no-rsi)")
    sp.add_argument("--no-rsi", action="store_true", help="set chi2 = 0")
    if with_sigma_s:
        sp.add_argument("--sigma-s-db", type=float, default=10.0,
                        help="transmit power over noise power, dB")
    sp.add_argument("--sigma-t-db", type=float, default=0.0,
                    help="secondary-link channel gain, dB")
    sp.add_argument("--pm-mode", choices=("approx", "exact"), default="approx")


def build_parser() -> _Parser:
    parser = _Parser(prog="latcr", description=__doc__)
    parser.add_argument("--version", action="version", version=f"latcr {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser("analyze", help="one analytic row on stdout")
    _add_model_flags(sp)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("simulate", help="analytic row plus Monte Carlo fields")
    _add_model_flags(sp)
    sp.add_argument("--slots", type=int, default=100000)
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--mode", choices=("sample_level", "slot_statistical"),
                    default="sample_level")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("optimal-power", help="local optimum of the power-throughput curve")
    _add_model_flags(sp, with_sigma_s=False)
    sp.set_defaults(func=cmd_optimal_power, sigma_s_db=0.0)

    sp = sub.add_parser("figure", help="write one figure family's CSV files")
    sp.add_argument("which", choices=sorted(FIGURES))
    sp.add_argument("--out-dir", default="figures")
    sp.add_argument("--simulate", action="store_true",
                    help="add Monte Carlo columns where the figure supports them")
    sp.add_argument("--slots", type=int, default=None)
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--workers", type=int, default=1,
                    help="process pool size for simulated sweep points")
    sp.add_argument("--set", action="append", metavar="KEY=VALUE",
                    help="override a preset entry (repeatable)")
    sp.set_defaults(func=cmd_figure)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 64
    if getattr(args, "no_rsi", False):
        args.chi2_db = None
    args.command_line = "latcr " + " ".join(argv)
    try:
        return args.func(args)
    except InfeasibleConstraint as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    except (NoRoot, DegenerateDenominator, SingularSystem, ColumnSumViolation,
            AmbiguousLandscape) as exc:
        print(f"degenerate model: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
