# fptclock/cli/fpt.py
"""
Batch commands over CSV/JSON files:

    forward   crossing cdf/pdf of a clock (or scenario mixture) on a t-grid
    inverse   clock (and spot variance) reproducing a target cdf (or pdf)
    simulate  Monte Carlo estimate, optionally compared with the analytic cdf

Exit codes: 0 success, 2 validation, 3 assumption failure, 4 numerical failure.
Failures print one JSON line to stderr.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import ValidationError

from fptclock import config
from fptclock.clock.crossing import (
    crossing_cdf_one_sided,
    crossing_cdf_two_sided,
    crossing_pdf_one_sided,
    crossing_pdf_two_sided,
    mixture_cdf,
    mixture_pdf,
)
from fptclock.clock.path import GridClock, LinearClock, QuadraticVariationPath, identity_clock
from fptclock.constants import ExitCode, SimScheme
from fptclock.errors import DomainError, FptError
from fptclock.inverse.solver import (
    inspect_target,
    qv_solution_one_sided,
    qv_solution_random,
    qv_solution_two_sided,
    variance_solution_one_sided,
    variance_solution_random,
    variance_solution_two_sided,
)
from fptclock.oracle.ks import ks_distance
from fptclock.oracle.simulate import (
    EmpiricalCdf,
    simulate_mixture,
    simulate_one_sided,
    simulate_two_sided,
)
from fptclock.storage.gridfile import read_grid, read_run_config, write_grid, write_json
from fptclock.types import (
    Boundary,
    OneSidedBoundary,
    RunConfig,
    Scenario,
    ScenarioSet,
    ScenarioSpec,
    SeriesControl,
    SimConfig,
    SurvivalCdf,
    SurvivalPdf,
    TwoSidedBoundary,
)

logger = logging.getLogger("fptclock.cli")

# ========== Inputs ==========

def parse_clock(spec: Optional[str]) -> QuadraticVariationPath:
    """identity | linear:<rate> | path to a clock CSV."""
    if spec is None:
        raise DomainError("a clock is required (--clock identity|linear:c|FILE)")
    if spec == "identity":
        return identity_clock()
    if spec.startswith("linear:"):
        try:
            rate = float(spec.split(":", 1)[1])
        except ValueError:
            raise DomainError(f"bad linear clock '{spec}', expected linear:<rate>")
        return LinearClock(rate)
    table = read_grid(spec, "clock")
    values = table.column("value") if table.has("value") else table.column("v")
    return GridClock(table.column("t"), values)


def make_boundary(upper: Optional[float], lower: Optional[float]) -> Boundary:
    if upper is None:
        raise DomainError("an upper boundary is required (--boundary-upper)")
    if lower is None:
        return OneSidedBoundary(g=upper)
    return TwoSidedBoundary(g=upper, h=lower)


def _series(cfg: RunConfig) -> SeriesControl:
    return SeriesControl(term_tol=cfg.series.term_tol, max_terms=cfg.series.max_terms)


def _grid(cfg: RunConfig, clock: Optional[QuadraticVariationPath] = None) -> np.ndarray:
    if cfg.grid is not None:
        return read_grid(cfg.grid, "grid").column("t")
    if isinstance(clock, GridClock):
        return np.asarray(clock.times)
    raise DomainError("a t-grid is required (--grid FILE)")


def _scenarios(specs: Sequence[ScenarioSpec]) -> ScenarioSet:
    out = []
    for i, spec in enumerate(specs):
        try:
            clock = parse_clock(spec.clock)
            boundary = make_boundary(spec.boundary_upper, spec.boundary_lower)
        except FptError as e:
            raise type(e)(e.message, scenario_index=i) from e
        out.append(Scenario(weight=spec.weight, clock=clock, boundary=boundary))
    return ScenarioSet(scenarios=out)


def _targets(
    target: Optional[str], pdf_target: Optional[str]
) -> Tuple[SurvivalCdf, Optional[SurvivalPdf]]:
    """Target cdf and, when one is available, the target pdf with its exact cdf."""
    if target is None and pdf_target is None:
        raise DomainError("a target is required (--target FILE or --pdf-target FILE)")
    pdf = None
    if pdf_target is not None:
        table = read_grid(pdf_target, "pdf_target")
        densities = table.column("value") if table.has("value") else table.column("pdf")
        cdf_values = table.column("cdf") if table.has("cdf") else None
        pdf = SurvivalPdf(times=table.column("t"), densities=densities, cdf_values=cdf_values)
    if target is None:
        return pdf.cdf(), pdf

    table = read_grid(target, "target")
    values = table.column("value") if table.has("value") else table.column("cdf")
    F = SurvivalCdf(times=table.column("t"), values=values)
    if pdf is not None and pdf.times != F.times:
        raise DomainError("target cdf and target pdf must share the same knots")
    if pdf is None and table.has("pdf"):
        pdf = SurvivalPdf(times=table.column("t"), densities=table.column("pdf"), cdf_values=values)
    return F, pdf


def _sibling(out: str, suffix: str) -> Path:
    path = Path(out)
    return path.with_name(f"{path.stem}{suffix}")

# ========== Commands ==========

def cmd_forward(cfg: RunConfig) -> Path:
    """Writes t,cdf,pdf; every clock built here is absolutely continuous."""
    out = _require_out(cfg)
    ctl = _series(cfg)
    if cfg.scenarios:
        scenarios = _scenarios(cfg.scenarios)
        t = _grid(cfg)
        cdf = mixture_cdf(scenarios, t, ctl)
        pdf = mixture_pdf(scenarios, t, ctl)
    else:
        clock = parse_clock(cfg.clock)
        b = make_boundary(cfg.boundary_upper, cfg.boundary_lower)
        t = _grid(cfg, clock)
        if isinstance(b, TwoSidedBoundary):
            cdf = crossing_cdf_two_sided(clock, b, t, ctl)
            pdf = crossing_pdf_two_sided(clock, b, t, ctl)
        else:
            cdf = crossing_cdf_one_sided(clock, b, t)
            pdf = crossing_pdf_one_sided(clock, b, t)
    return write_grid(out, ("t", "cdf", "pdf"), t, cdf, pdf)


def cmd_inverse(cfg: RunConfig) -> Path:
    """
    Writes t,v (or t,v,sigma2 when a pdf is known) and the JSON report.
    The report is written before solving, so it survives an assumption failure.
    """
    out = _require_out(cfg)
    report_path = Path(cfg.report) if cfg.report else _sibling(out, ".report.json")
    ctl = _series(cfg)

    if cfg.scenarios:
        return _inverse_scenarios(cfg, out, report_path, ctl)

    b = make_boundary(cfg.boundary_upper, cfg.boundary_lower)
    F, f = _targets(cfg.target, cfg.pdf_target)
    write_json(report_path, inspect_target(F, b, f, ctl))

    if isinstance(b, TwoSidedBoundary):
        clock = qv_solution_two_sided(F, b, ctl)
        variance = variance_solution_two_sided(f, b, ctl) if f is not None else None
    else:
        clock = qv_solution_one_sided(F, b)
        variance = variance_solution_one_sided(f, b) if f is not None else None

    if variance is None:
        return write_grid(out, ("t", "v"), clock.times, clock.values)
    return write_grid(out, ("t", "v", "sigma2"), clock.times, clock.values, variance.values)


def _inverse_scenarios(cfg: RunConfig, out: str, report_path: Path, ctl: SeriesControl) -> Path:
    specs = cfg.scenarios
    targets, pdfs, boundaries, reports = [], [], [], []
    for i, spec in enumerate(specs):
        try:
            b = make_boundary(spec.boundary_upper, spec.boundary_lower)
            F, f = _targets(spec.target, spec.pdf_target)
        except FptError as e:
            raise type(e)(e.message, scenario_index=i) from e
        report = inspect_target(F, b, f, ctl).model_copy(update={"scenario_index": i})
        targets.append(F)
        pdfs.append(f)
        boundaries.append(b)
        reports.append(report.model_dump(mode="json"))
    write_json(report_path, {"scenarios": reports})

    solved = qv_solution_random(targets, boundaries, [s.weight for s in specs], ctl)
    variances = None
    if all(f is not None for f in pdfs):
        variances = variance_solution_random(pdfs, boundaries, ctl)

    for i, scenario in enumerate(solved.scenarios):
        path = _sibling(out, f".scenario{i}.csv")
        clock = scenario.clock
        if variances is None:
            write_grid(path, ("t", "v"), clock.times, clock.values)
        else:
            write_grid(path, ("t", "v", "sigma2"), clock.times, clock.values, variances[i].values)
    return Path(out)


def _horizon(cfg: RunConfig, clocks: List[QuadraticVariationPath]) -> float:
    if cfg.simulation.horizon is not None:
        return cfg.simulation.horizon
    if cfg.grid is not None:
        return float(read_grid(cfg.grid, "grid").column("t")[-1])
    ends = [c.domain_end for c in clocks]
    if all(np.isfinite(ends)):
        return float(min(ends))
    raise DomainError("a simulation horizon is required (--horizon or --grid)")


def cmd_simulate(cfg: RunConfig) -> Path:
    """Writes t,empirical_cdf[,analytic_cdf], a JSON summary and optionally raw crossings."""
    out = _require_out(cfg)
    sim = cfg.simulation
    if sim.n_paths is None:
        raise DomainError("the number of paths is required (--paths)")
    ctl = _series(cfg)

    if cfg.scenarios:
        scenarios = _scenarios(cfg.scenarios)
        clocks = [s.clock for s in scenarios.scenarios]
        kinds = sorted({s.boundary.kind.value for s in scenarios.scenarios})
    else:
        clock = parse_clock(cfg.clock)
        b = make_boundary(cfg.boundary_upper, cfg.boundary_lower)
        clocks = [clock]
        kinds = [b.kind.value]

    settings = {k: v for k, v in sim.model_dump().items() if v is not None}
    settings["horizon"] = _horizon(cfg, clocks)
    sim_cfg = SimConfig(**settings)

    if cfg.scenarios:
        emp = simulate_mixture(scenarios, sim_cfg)
        analytic = lambda t: mixture_cdf(scenarios, t, ctl)
    elif isinstance(b, TwoSidedBoundary):
        emp = simulate_two_sided(clock, b, sim_cfg)
        analytic = lambda t: crossing_cdf_two_sided(clock, b, t, ctl)
    else:
        emp = simulate_one_sided(clock, b, sim_cfg)
        analytic = lambda t: crossing_cdf_one_sided(clock, b, t)

    if cfg.grid is not None:
        t = read_grid(cfg.grid, "grid").column("t")
    else:
        t = np.unique(np.concatenate([[0.0], emp.times, [sim_cfg.horizon]]))

    summary = _summary(emp, sim_cfg)
    summary["boundary_kinds"] = kinds
    if cfg.compare:
        summary["ks_distance"] = ks_distance(emp, analytic)
        write_grid(out, ("t", "empirical_cdf", "analytic_cdf"), t, emp.evaluate(t), analytic(t))
    else:
        write_grid(out, ("t", "empirical_cdf"), t, emp.evaluate(t))

    write_json(Path(cfg.summary) if cfg.summary else _sibling(out, ".summary.json"), summary)
    if cfg.crossings:
        write_grid(cfg.crossings, ("time", "side"), emp.times, emp.sides)
    return Path(out)


def _summary(emp: EmpiricalCdf, sim_cfg: SimConfig) -> dict:
    upper, lower = emp.side_counts()
    return {
        "n_paths": emp.n_paths,
        "crossings": len(emp),
        "censored_count": emp.censored_count,
        "upper_crossings": upper,
        "lower_crossings": lower,
        "empirical_cdf_at_horizon": emp.evaluate(emp.horizon),
        "simulation": sim_cfg.model_dump(mode="json", exclude={"workers"}),
    }


def _require_out(cfg: RunConfig) -> str:
    if cfg.out is None:
        raise DomainError("an output file is required (--out FILE)")
    return cfg.out

# ========== Argument Parsing ==========

COMMANDS = {"forward": cmd_forward, "inverse": cmd_inverse, "simulate": cmd_simulate}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fptclock",
        description="First-passage times of continuous local martingales via their quadratic-variation clock",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        cmd = sub.add_parser(name, help=fn.__doc__.strip().splitlines()[0] if fn.__doc__ else None)
        _add_common(cmd)
    return parser


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON run configuration; flags override its values")
    p.add_argument("--boundary-upper", type=float, help="upper level g > 0")
    p.add_argument("--boundary-lower", type=float, help="lower level h < 0 (two-sided)")
    p.add_argument("--clock", help="identity | linear:c | clock CSV (t,v)")
    p.add_argument("--grid", help="t-grid CSV (t)")
    p.add_argument("--target", help="target cdf CSV (t,cdf)")
    p.add_argument("--pdf-target", help="target pdf CSV (t,pdf)")
    p.add_argument("--out", help="output CSV")
    p.add_argument("--report", help="inverse report JSON (default: <out>.report.json)")
    p.add_argument("--summary", help="simulation summary JSON (default: <out>.summary.json)")
    p.add_argument("--crossings", help="raw crossing times CSV (time,side)")
    p.add_argument("--seed", type=int)
    p.add_argument("--paths", type=int, help="number of simulated paths")
    p.add_argument("--horizon", type=float, help="simulation horizon")
    p.add_argument("--clock-steps", type=int, help="simulation steps per unit of variation")
    p.add_argument("--scheme", choices=[s.value for s in SimScheme])
    p.add_argument("--workers", type=int)
    p.add_argument("--no-bridge", action="store_true", help="disable the Brownian-bridge correction")
    p.add_argument("--compare", action="store_true", help="add the analytic cdf and KS distance")
    p.add_argument("--verbose", "-v", action="count", default=0)


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Config file first, then command-line flags on top; revalidated as a whole."""
    base = read_run_config(args.config) if args.config else RunConfig()
    merged = base.model_dump(exclude_none=True)
    merged["command"] = args.command

    for key in ("boundary_upper", "boundary_lower", "clock", "grid", "target", "pdf_target",
                "out", "report", "summary", "crossings"):
        value = getattr(args, key)
        if value is not None:
            merged[key] = value
    if args.compare:
        merged["compare"] = True

    simulation = merged.setdefault("simulation", {})
    overrides = {
        "seed": args.seed,
        "n_paths": args.paths,
        "horizon": args.horizon,
        "clock_steps": args.clock_steps,
        "scheme": args.scheme,
        "workers": args.workers,
    }
    simulation.update({k: v for k, v in overrides.items() if v is not None})
    if args.no_bridge:
        simulation["bridge_correction"] = False
    return RunConfig.model_validate(merged)


def _emit_error(kind: str, code: int, message: str, scenario_index: Optional[int] = None) -> int:
    line = {"error": kind, "exit_code": code, "message": message, "scenario_index": scenario_index}
    print(json.dumps(line, sort_keys=True), file=sys.stderr)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = config.LOG_LEVEL
    if args.verbose:
        level = "DEBUG" if args.verbose > 1 else "INFO"
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        cfg = resolve_config(args)
        path = COMMANDS[args.command](cfg)
    except FptError as e:
        return _emit_error(type(e).__name__, int(e.exit_code), e.message, e.scenario_index)
    except ValidationError as e:
        return _emit_error("ValidationError", int(ExitCode.VALIDATION), str(e))

    print(f"✅ {args.command}: wrote {path}")
    return int(ExitCode.OK)


if __name__ == "__main__":
    sys.exit(main())
