"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import conditions, equilibria, integrators, lyapunov, output, stability
from .config import CASES, Scenario, apply_updates, builtin_case, load_config
from .errors import ConfigError, NsfdError
from .scheme import DiscreteMap, iterate

EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _float_list(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _weights(text: str) -> list[float]:
    values = _float_list(text)
    if len(values) != 6:
        raise argparse.ArgumentTypeError(f"expected six weights, got {len(values)}")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--case", action="append", choices=list(CASES),
                        help="built-in parameter case (repeat for a sweep)")
    common.add_argument("--config", help="scenario file with 'key = value' lines")
    common.add_argument("--m1", type=float)
    common.add_argument("--m2", type=float)
    common.add_argument("--h", type=float, help="step size")
    common.add_argument("--n", type=int, help="number of steps")
    common.add_argument("--t-end", type=float, dest="t_end")
    common.add_argument("--x0", type=float)
    common.add_argument("--y0", type=float)
    common.add_argument("--alpha", type=_weights, help="alpha1..alpha6, comma separated")
    common.add_argument("--beta", type=_weights, help="beta1..beta6, comma separated")
    common.add_argument("--denominator", choices=["linear", "mickens"])
    common.add_argument("--q", type=float)
    common.add_argument("--csv", help="CSV output path")
    common.add_argument("--svg", help="SVG output path ('' disables)")
    common.add_argument("--methods", help="comma list of nsfd,euler,rk4")
    common.add_argument("--print-config", action="store_true",
                        help="print the resolved scenario and exit")

    parser = argparse.ArgumentParser(
        prog="nsfd-predprey",
        description="NSFD integration and dynamic-consistency checks for a predator-prey model",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="iterate the NSFD map")
    p.add_argument("--comparison-csv", default="comparison.csv")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for sweeps")

    p = sub.add_parser("analyze", parents=[common], help="equilibria, stability and certificates")
    p.add_argument("--h-list", type=_float_list, default=[0.1, 1.0, 10.0, 100.0])

    sub.add_parser("equilibria", parents=[common], help="list equilibria as CSV")
    sub.add_parser("check-scheme", parents=[common], help="print the condition report")

    p = sub.add_parser("compare", parents=[common], help="NSFD vs Euler vs RK4")
    p.add_argument("--search", action="store_true",
                   help="doubling search for the smallest positivity-breaking h")

    p = sub.add_parser("order", parents=[common], help="observed order of convergence")
    p.add_argument("--h-list", type=_float_list, default=[0.1, 0.05, 0.025, 0.0125])
    return parser


def resolve_scenarios(args) -> list[Scenario]:
    base_updates = load_config(args.config) if args.config else {}
    flag_updates = {}
    for key in ("m1", "m2", "h", "n", "t_end", "x0", "y0", "denominator", "q", "csv", "svg"):
        value = getattr(args, key, None)
        if value is not None:
            flag_updates[key] = value
    if args.methods is not None:
        flag_updates["methods"] = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    for name in ("alpha", "beta"):
        values = getattr(args, name)
        if values is not None:
            flag_updates.update({f"{name}{j + 1}": v for j, v in enumerate(values)})

    cases = args.case or [None]
    out = []
    for case in cases:
        scenario = Scenario()
        if case is not None:
            scenario = apply_updates(scenario, builtin_case(case))
        scenario = apply_updates(scenario, base_updates)
        scenario = apply_updates(scenario, flag_updates)
        if len(cases) > 1:
            scenario = _suffixed(scenario, case)
        out.append(scenario)
    return out


def _suffixed(scenario: Scenario, tag: str) -> Scenario:
    def add(path: str) -> str:
        if not path:
            return path
        p = Path(path)
        return str(p.with_name(f"{p.stem}_{tag}{p.suffix}"))

    return apply_updates(scenario, {"csv": add(scenario.csv), "svg": add(scenario.svg)})


def _report_text(model, scheme) -> str:
    try:
        return conditions.consistency_report(model, scheme).to_text()
    except NsfdError as exc:
        return f"regime = ambiguous ({exc})\n"


def _equilibrium_marks(model):
    return [(e.kind.value, e.x, e.y) for e in equilibria.enumerate_equilibria(model)]


def run_simulate(scenario: Scenario, comparison_csv: str = "comparison.csv") -> str:
    model = scenario.model()
    map_ = DiscreteMap(model, scenario.scheme, scenario.h, scenario.denominator_fn())
    traj = iterate(map_, (scenario.x0, scenario.y0), scenario.steps)
    if scenario.csv:
        output.write_text(scenario.csv, output.trajectory_csv(traj))

    lines = [f"# {scenario.name}: {len(traj) - 1} steps, h = {scenario.h!r}"]
    final = traj.final
    lines.append(f"final = ({final.x!r}, {final.y!r})")

    series = {}
    others = [m for m in scenario.methods if m != "nsfd"]
    if others:
        comp = integrators.compare_trajectories(
            model, scenario.scheme, scenario.h, scenario.steps,
            (scenario.x0, scenario.y0), scenario.denominator_fn(),
        )
        if comparison_csv:
            output.write_text(comparison_csv, comp.to_csv())
        lines.extend(_summary_lines(comp))
        for method in ("nsfd", *others):
            pts = [getattr(r, method) for r in comp.rows]
            series[method] = ([r.t for r in comp.rows], [p[0] for p in pts], [p[1] for p in pts])
    else:
        t = list(traj.times())
        series["nsfd"] = (t, [s.x for s in traj.states], [s.y for s in traj.states])

    if scenario.svg:
        output.plot_svg(scenario.svg, series, _equilibrium_marks(model), title=scenario.name)
    lines.append(_report_text(model, scenario.scheme).rstrip("\n"))
    return "\n".join(lines) + "\n"


def _summary_lines(comp, searched: bool = False) -> list[str]:
    lines = []
    for method, info in comp.summary.items():
        parts = [
            f"first_negative={info.first_negative}",
            f"diverged_at={info.diverged_at}",
            f"terminal_distance={info.terminal_distance!r}",
        ]
        if searched:
            parts.append(f"violation_threshold_h={info.violation_threshold!r}")
        lines.append(f"{method}: " + " ".join(parts))
    return lines


def run_analyze(scenario: Scenario, h_list) -> str:
    model = scenario.model()
    scheme = scenario.scheme
    out = [f"# {scenario.name}: m1 = {model.m1!r}, m2 = {model.m2!r}"]
    out.append(f"r(0) = {model.r0!r}  s(0) = {model.s0!r}  phi(0) = {model.phi0!r}")
    eqs = equilibria.enumerate_equilibria(model)
    out.append("equilibria:")
    for e in eqs:
        glob = " (globally stable)" if e.globally_stable else ""
        out.append(
            f"  {e.kind.value} ({e.x!r}, {e.y!r}) continuous: {e.continuous_verdict.value}{glob}"
        )
        for note in e.notes:
            out.append(f"    note: {note}")
        for h in h_list:
            map_ = DiscreteMap(model, scheme, h, scenario.denominator_fn())
            cls = stability.classify_discrete(map_, e)
            mods = ", ".join(f"{m:.12g}" for m in cls.moduli)
            out.append(f"    h = {h:g}: discrete {cls.verdict.value}, |lambda| = [{mods}]")

    out.append("conditions:")
    for fn in (
        conditions.predator_extinction_values,
        conditions.prey_extinction_values,
        conditions.coexistence_values,
    ):
        try:
            values = fn(model, scheme)
        except NsfdError:
            continue
        for key, value in values.items():
            out.append(f"  {key} = {value!r} ({'PASS' if value > 0 else 'FAIL'})")
    out.append(_report_text(model, scheme).rstrip("\n"))

    if model.m1 >= model.r0 and model.m2 >= model.s0:
        try:
            params = lyapunov.select_lyapunov_params(model, scheme)
        except NsfdError as exc:
            out.append(f"lyapunov: unavailable ({exc})")
        else:
            out.append(
                "lyapunov weights: "
                f"a = {params.a_V!r}, b = {params.b_V!r}, g = {params.g_V!r}, d = {params.d_V!r}"
            )
            map_ = DiscreteMap(model, scheme, scenario.h, scenario.denominator_fn())
            rep = lyapunov.verify_lyapunov_decrease(map_, params, (scenario.x0, scenario.y0), 1000)
            out.append(
                f"lyapunov spot check (h = {scenario.h:g}, 1000 steps): "
                f"max dV = {rep.max_delta!r}, min dV = {rep.min_delta!r}, "
                f"final distance = {rep.final_distance!r}"
            )
    return "\n".join(out) + "\n"


def run_order(scenario: Scenario, h_list) -> str:
    model = scenario.model()
    t_end = scenario.t_end if scenario.t_end is not None else 10.0
    lines = [f"# {scenario.name}: t_end = {t_end!r}, start ({scenario.x0!r}, {scenario.y0!r})"]
    for method in scenario.methods:
        est = integrators.estimate_order(
            method, model, (scenario.x0, scenario.y0), t_end, h_list,
            scenario.scheme, scenario.denominator_fn(),
        )
        errs = ", ".join(f"{e:.6g}" for e in est.errors)
        lines.append(f"{method}: order = {est.order:.6f}  errors = [{errs}]")
    return "\n".join(lines) + "\n"


def _simulate_job(payload):
    scenario, comparison_csv = payload
    return run_simulate(scenario, comparison_csv)


def dispatch(args) -> int:
    scenarios = resolve_scenarios(args)
    command = args.command
    if args.print_config:
        for s in scenarios:
            sys.stdout.write(s.to_text())
        return 0

    need_run = command in ("simulate", "compare")
    for s in scenarios:
        s.validate(need_run=need_run)

    if command == "simulate":
        jobs = []
        for s in scenarios:
            comp_path = args.comparison_csv
            if len(scenarios) > 1 and comp_path:
                p = Path(comp_path)
                comp_path = str(p.with_name(f"{p.stem}_{s.name}{p.suffix}"))
            jobs.append((s, comp_path))
        if args.jobs > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                texts = list(pool.map(_simulate_job, jobs))
        else:
            texts = [_simulate_job(j) for j in jobs]
        sys.stdout.write("".join(texts))
        return 0

    for s in scenarios:
        model = s.model()
        if command == "analyze":
            sys.stdout.write(run_analyze(s, args.h_list))
        elif command == "equilibria":
            text = equilibria.equilibria_to_csv(equilibria.enumerate_equilibria(model))
            if s.given and "csv" in s.given:
                output.write_text(s.csv, text)
            else:
                sys.stdout.write(text)
        elif command == "check-scheme":
            sys.stdout.write(_report_text(model, s.scheme))
        elif command == "compare":
            comp = integrators.compare_trajectories(
                model, s.scheme, s.h, s.steps, (s.x0, s.y0), s.denominator_fn(),
                search_thresholds=args.search,
            )
            path = s.csv if "csv" in s.given else "comparison.csv"
            output.write_text(path, comp.to_csv())
            sys.stdout.write(f"# {s.name}: h = {s.h!r}, {s.steps} steps -> {path}\n")
            sys.stdout.write("\n".join(_summary_lines(comp, args.search)) + "\n")
        elif command == "order":
            sys.stdout.write(run_order(s, args.h_list))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return dispatch(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NsfdError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
