#!/usr/bin/env python3

import sys
import argparse

from sources.action import (ActionFunctional, functional_from_config, parse_category,
                            trajectory_action)
from sources.agents import AgentSpec, generate_runs
from sources.config import PathrunConfig, load_config, worker_count
from sources.errors import PathrunError
from sources.exporters import CsvTable, SvgChart, RunLog, WorldsGraph
from sources.exporters.csvTable import FIELD_COLUMNS, SCREEN_COLUMNS, field_rows, screen_rows
from sources.logger import Logger
from sources.pathsearch import min_time_path, least_action_path
from sources.propagator import (WeightFunction, TransferChain, completion_distribution,
                                double_slit, hbar_sweep)
from sources.runstats import (TubeSpec, completion_histogram, trajectory_frequencies,
                              tube_fraction, completion_stats, fit_hbar, default_grid)
from sources.schemas import CommandConfig
from sources.simworld import read_level, decode_inputs, run
from sources.transitions import PlatformerSystem, lattice_system
from sources.utility import pretty_print, format_duration, timed
from sources.worlds import worlds_tree

import warnings
warnings.filterwarnings("ignore")

logger = Logger("cli.log")

def float_list(text: str) -> list:
    try:
        return [float(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}")

def int_list(text: str) -> list:
    try:
        return [int(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pathrun",
                                     description="Speedrun trajectories as discrete path integrals.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="ini or key=value configuration file")
    common.add_argument("--out", default="out", help="output directory")
    common.add_argument("--verbose", action="store_true", help="print progress to the console")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("simulate", parents=[common], help="replay an input string on a level")
    p.add_argument("--level", required=True)
    p.add_argument("--inputs", required=True, help='e.g. "R- R- RJ"')
    p.add_argument("--render", action="store_true", help="print the final frame")

    p = sub.add_parser("search", parents=[common], help="minimum-time run of a level")
    p.add_argument("--level", required=True)
    p.add_argument("--category", default=None)
    p.add_argument("--frame-cap", type=int, default=None)
    p.add_argument("--cap", type=int, default=None, help="also write up to cap co-optimal runs")

    for name, text in (("propagate", "amplitude field over frames"),
                       ("sweep", "in-tube Born mass across hbar values")):
        p = sub.add_parser(name, parents=[common], help=text)
        target = p.add_mutually_exclusive_group(required=True)
        target.add_argument("--level")
        target.add_argument("--lattice", type=int, metavar="WIDTH")
        p.add_argument("--start", type=int, default=None, help="lattice start cell")
        p.add_argument("--frames", type=int, required=(name == "propagate"), default=None)
        if name == "propagate":
            p.add_argument("--weight", choices=["feynman", "boltzmann"], default=None)
            p.add_argument("--hbar", type=float, default=None)
        else:
            p.add_argument("--weight", choices=["feynman", "boltzmann"], default="boltzmann",
                           help="boltzmann by default, feynman weights do not concentrate on a quantized action lattice")
            p.add_argument("--free-end", action="store_true",
                           help="do not fix the endpoint to the reference endpoint (lattice) or the goal (level)")
            p.add_argument("--hbars", type=float_list, default=[10.0, 1.0, 0.1, 0.01])
            p.add_argument("--radius", type=int, default=None)
            p.add_argument("--no-svg", action="store_true")

    p = sub.add_parser("doubleslit", parents=[common], help="two-slit lattice experiment")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--frames", type=int, required=True)
    p.add_argument("--slit-frame", type=int, required=True)
    p.add_argument("--slits", type=int_list, required=True, help="two cells, e.g. 5,9")
    p.add_argument("--start", type=int, default=None)
    p.add_argument("--hbar", type=float, default=None)
    p.add_argument("--weight", choices=["feynman", "boltzmann"], default=None)
    p.add_argument("--no-svg", action="store_true")

    p = sub.add_parser("runs", parents=[common], help="generate a seeded batch of runs")
    p.add_argument("--level", required=True)
    p.add_argument("--agent", choices=["optimal", "noisy", "random", "replay"], default="noisy")
    p.add_argument("--p", type=float, default=None, help="per-frame error probability")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--inputs", default=None, help="recorded inputs for the replay agent")
    p.add_argument("--category", default=None)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--progress", action="store_true")

    for name, text in (("stats", "histograms, frequencies and tube share of a run log"),
                       ("fit", "effective hbar of a run log"),
                       ("worlds", "prefix tree of a run log")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--log", required=True, help="run log, JSON lines")
        if name == "worlds":
            p.add_argument("--format", choices=["dot", "txt"], default="dot")
            continue
        p.add_argument("--level", required=True)
        p.add_argument("--category", default=None)
        if name == "stats":
            p.add_argument("--radius", type=int, default=None)
        else:
            p.add_argument("--hbars", type=float_list, default=None)
            p.add_argument("--frame-cap", type=int, default=None)
            p.add_argument("--weight", choices=["feynman", "boltzmann"], default=None)
            p.add_argument("--no-svg", action="store_true")
    return parser

def command_config(args: argparse.Namespace) -> CommandConfig:
    return CommandConfig(subcommand=args.subcommand,
                         level=getattr(args, "level", None),
                         config=args.config, out=args.out,
                         seed=getattr(args, "seed", None), n=getattr(args, "n", None),
                         p=getattr(args, "p", None), hbar=getattr(args, "hbar", None),
                         hbars=getattr(args, "hbars", None), radius=getattr(args, "radius", None),
                         frame_cap=getattr(args, "frame_cap", None),
                         category=getattr(args, "category", None) or "any%",
                         svg=not getattr(args, "no_svg", False))

def with_frame_cap(config: PathrunConfig, frame_cap: int | None) -> PathrunConfig:
    if frame_cap is None:
        return config
    return config.model_copy(update={"physics": config.physics.model_copy(update={"frame_cap": frame_cap})})

def weight_for(args, config: PathrunConfig, hbar: float | None = None) -> WeightFunction:
    kind = getattr(args, "weight", None) or config.propagator.weight
    hbar = hbar if hbar is not None else getattr(args, "hbar", None)
    hbar = hbar if hbar is not None else config.propagator.hbar
    return WeightFunction(kind, hbar)

def lattice_functional(config: PathrunConfig) -> ActionFunctional:
    return ActionFunctional.kinetic(config.action.mass)

def cmd_simulate(args, config: PathrunConfig) -> dict:
    level = read_level(args.level)
    traj = run(level, decode_inputs(args.inputs), config.physics)
    f = functional_from_config(config.action, level, config.physics)
    rows = [[s.frame, s.x, s.y, s.vx, s.vy, s.items, int(s.grounded),
             traj.inputs[k].code if k < traj.frames else ""] for k, s in enumerate(traj.states)]
    table = CsvTable(args.out)
    path = table.save("trajectory", ["frame", "x", "y", "vx", "vy", "items", "grounded", "input"], rows)
    if args.render:
        pretty_print(level.render(traj.final, config.physics.subpixels_per_tile), color="output")
    return {"completed": traj.completed, "frames": traj.frames,
            "seconds": round(traj.seconds(config.physics.fps), 6),
            "action": trajectory_action(traj, f), "files": [path]}

def cmd_search(args, config: PathrunConfig) -> dict:
    level = read_level(args.level)
    category = parse_category(args.category or config.action.category, level)
    config = with_frame_cap(config, args.frame_cap)
    result = min_time_path(level, category, physics=config.physics, cap=args.cap)
    f = functional_from_config(config.action, level, config.physics)
    records = result.to_record(f)
    if args.verbose:
        pretty_print(f"Optimal time {format_duration(result.optimal_value, config.physics.fps)}", color="output")
        for record in records:
            record.show()
    path = RunLog(args.out).save("witness", records)
    return {"optimal_frames": result.optimal_value, "optimal_count": result.optimal_count,
            "seconds": round(result.witness.seconds(config.physics.fps), 6),
            "inputs": f'"{result.witness.encoded_inputs()}"', "files": [path]}

def target_system(args, config: PathrunConfig, frames: int):
    """Transition system, functional and reference path for propagate and sweep."""
    if args.lattice is not None:
        ts = lattice_system(args.lattice, frames, start=args.start)
        return ts, lattice_functional(config), None
    level = read_level(args.level)
    category = parse_category(config.action.category, level)
    ts = PlatformerSystem(level, config.physics, category)
    return ts, functional_from_config(config.action, level, config.physics), level

def cmd_propagate(args, config: PathrunConfig) -> dict:
    if args.frames < 0:
        raise ValueError("--frames must be >= 0")
    ts, f, _ = target_system(args, config, max(args.frames, 1))
    w = weight_for(args, config)
    chain = TransferChain(ts, f, args.frames, state_budget=config.propagator.state_budget)
    fields = chain.fields(w)
    table = CsvTable(args.out)
    files = [table.save("amplitudes", FIELD_COLUMNS, field_rows(fields, ts))]
    summary = {"frames": args.frames, "states": len(fields[-1].entries),
               "final_weight": fields[-1].total_weight()}
    if args.frames >= 1:
        absorbed = chain.completion(w)
        weight = sum(abs(k) ** 2 for k in absorbed.values())
        probabilities = completion_distribution(absorbed) if weight > 0 else {}
        rows = [[t, absorbed[t].real, absorbed[t].imag, probabilities.get(t, 0.0)] for t in sorted(absorbed)]
        files.append(table.save("completion", ["frame", "re", "im", "prob"], rows))
        summary["completion_weight"] = weight
    summary["files"] = files
    return summary

def cmd_doubleslit(args, config: PathrunConfig) -> dict:
    if len(args.slits) != 2:
        raise ValueError("--slits needs exactly two cells")
    w = weight_for(args, config)
    result = double_slit(args.width, args.frames, args.slit_frame, args.slits, w,
                         lattice_functional(config), start=args.start)
    table = CsvTable(args.out)
    files = [table.save(f"doubleslit_{which}", SCREEN_COLUMNS, screen_rows(result, which))
             for which in ("both", "left", "right")]
    if not args.no_svg:
        chart = SvgChart(args.out)
        files.append(chart.save("doubleslit", {
            "both": (result.cells, list(result.p_both)),
            "classical": (result.cells, list(result.p_classical)),
        }, title=f"Double slit, hbar={w.hbar:g}", x_label="cell", y_label="probability"))
    return {"linearity_max_err": f"{result.linearity_max_err:.3e}",
            "interference_max": round(result.interference_max, 12), "files": files}

def cmd_sweep(args, config: PathrunConfig) -> dict:
    if args.lattice is not None:
        frames = args.frames if args.frames is not None else 8
        ts, f, _ = target_system(args, config, frames)
        reference = least_action_path(ts, f, frames).witness
        radius = args.radius if args.radius is not None else 0
        end = ts.position(reference.final)
        endpoint = lambda s: ts.position(s) == end
    else:
        ts, f, level = target_system(args, config, 1)
        reference = min_time_path(level, ts.category, args.frames, config.physics).witness
        radius = args.radius if args.radius is not None else config.stats.radius
        endpoint = ts.is_goal
    kind = args.weight
    rows = hbar_sweep(ts, f, args.hbars, reference, radius, kind=kind,
                      path_cap=config.propagator.path_cap, state_budget=config.propagator.state_budget,
                      endpoint=None if args.free_end else endpoint)
    table = CsvTable(args.out)
    files = [table.save("sweep", ["hbar", "in_tube", "path_tube"],
                        [[r.hbar, r.in_tube, "" if r.path_tube is None else r.path_tube] for r in rows])]
    if not args.no_svg:
        files.append(SvgChart(args.out).save("sweep", {
            "in_tube": ([r.hbar for r in rows], [r.in_tube for r in rows])},
            title=f"In-tube mass ({kind})", x_label="hbar", y_label="probability", log_x=True))
    summary = {"rows": len(rows), "in_tube_last": rows[-1].in_tube}
    if rows[-1].path_tube is not None:
        summary["path_tube_last"] = rows[-1].path_tube
    summary["files"] = files
    return summary

def cmd_runs(args, config: PathrunConfig) -> dict:
    level = read_level(args.level)
    n = args.n if args.n is not None else config.runs.count
    seed = args.seed if args.seed is not None else config.runs.seed
    p = args.p if args.p is not None else config.runs.noise
    spec = AgentSpec(kind=args.agent, p=p, seed=seed,
                     category=args.category or config.action.category, inputs=args.inputs)
    f = functional_from_config(config.action, level, config.physics)
    threads = args.threads if args.threads is not None else worker_count(config.runs.threads)
    records = generate_runs(spec, level, n, seed, f, config.physics, workers=threads,
                            progress=args.progress)
    path = RunLog(args.out).save("runs", records)
    return {"runs": len(records), "completed": sum(r.completed for r in records), "files": [path]}

def cmd_stats(args, config: PathrunConfig) -> dict:
    level = read_level(args.level)
    records = RunLog(args.out).load(args.log)
    category = parse_category(args.category or config.action.category, level)
    reference = min_time_path(level, category, physics=config.physics).witness
    radius = args.radius if args.radius is not None else config.stats.radius
    fraction = tube_fraction(records, TubeSpec(reference, radius), level, config.physics)
    stats = completion_stats(records)
    table = CsvTable(args.out)
    files = [
        table.save("histogram", ["frames", "frequency"],
                   [[k, float(v)] for k, v in completion_histogram(records).items()]),
        table.save("frequencies", ["inputs", "frequency"],
                   [[k, float(v)] for k, v in trajectory_frequencies(records).items()]),
        table.save("tube", ["run_index", "in_tube"], [[r.run_index, int(r.in_tube)] for r in records]),
    ]
    return {"runs": stats.runs, "completed": stats.completed, "tube_fraction": fraction,
            "mean_frames": stats.mean, "variance_frames": stats.variance, "files": files}

def cmd_fit(args, config: PathrunConfig) -> dict:
    level = read_level(args.level)
    records = RunLog(args.out).load(args.log)
    category = parse_category(args.category or config.action.category, level)
    f = functional_from_config(config.action, level, config.physics)
    grid = args.hbars if args.hbars is not None else default_grid(config.stats)
    fit = fit_hbar(records, level, f, grid, frame_cap=args.frame_cap, category=category,
                   physics=config.physics, kind=args.weight or config.propagator.weight,
                   epsilon=config.stats.epsilon, state_budget=config.propagator.state_budget)
    files = [CsvTable(args.out).save("fit", ["hbar", "divergence"],
                                     [[h, d] for h, d in zip(fit.grid, fit.divergence)])]
    if not args.no_svg:
        files.append(SvgChart(args.out).save("fit", {"KL": (fit.grid, fit.divergence)},
                                             title="KL(empirical || model)", x_label="hbar",
                                             y_label="divergence", log_x=True))
    return {"hbar_eff": fit.hbar_eff, "dnf_fraction": fit.dnf_fraction, "files": files}

def cmd_worlds(args, config: PathrunConfig) -> dict:
    records = RunLog(args.out).load(args.log)
    tree = worlds_tree(records)
    path = WorldsGraph(args.out, fmt=args.format).save("worlds", tree)
    return {"runs": tree.run_count, "leaves": tree.leaf_count(),
            "branch_events": tree.total_branch_events(), "consistent": tree.check(), "files": [path]}

COMMANDS = {
    "simulate": cmd_simulate,
    "search": cmd_search,
    "propagate": cmd_propagate,
    "doubleslit": cmd_doubleslit,
    "sweep": cmd_sweep,
    "runs": cmd_runs,
    "stats": cmd_stats,
    "fit": cmd_fit,
    "worlds": cmd_worlds,
}

def summary_line(summary: dict) -> str:
    parts = []
    for key, value in summary.items():
        if key == "files":
            value = ",".join(value)
        parts.append(f"{key}={value}")
    return " ".join(parts)

def dispatch(argv: list | None = None) -> int:
    """
    Run one subcommand.
    Returns:
        int: 0 on success, 1 on a domain error, 2 on a usage error.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    command = command_config(args)
    logger.info(f"Command: {command.jsonify()}")
    try:
        config = load_config(args.config)
        if args.verbose:
            pretty_print(f"Running {args.subcommand}...", color="status")
        with timed(args.subcommand, args.verbose):
            summary = COMMANDS[args.subcommand](args, config)
    except PathrunError as e:
        logger.error(f"{args.subcommand} failed: {e.name}: {e}")
        print(f"error={e.name} message=\"{e}\"")
        return 1
    except (ValueError, FileNotFoundError) as e:
        logger.error(f"{args.subcommand} usage error: {e}")
        parser.print_usage(sys.stderr)
        print(f"pathrun {args.subcommand}: error: {e}", file=sys.stderr)
        return 2
    if args.verbose:
        pretty_print("Done.", color="success")
    print(summary_line(summary))
    return 0

def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))

if __name__ == "__main__":
    main()
