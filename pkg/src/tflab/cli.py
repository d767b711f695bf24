"""Command line front end: run experiments, list the registry, check configs.

Exit codes: 0 all requested experiments passed, 1 at least one check failed,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
import time
from pathlib import Path

from . import __version__
from .experiments import REGISTRY, ExperimentContext, run_experiment
from .report import render_figure, write_rows, write_summary

RUN_KEYS = {"experiments", "seed", "output", "threads", "figures", "grid_n"}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tflab", description="time-frequency function space laboratory"
    )
    parser.add_argument("--version", action="version", version=f"tflab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run experiments and write results")
    run.add_argument("experiments", nargs="*", help="experiment names (default: all)")
    run.add_argument("--config", type=Path, help="INI config with [run] and per-experiment sections")
    run.add_argument("--seed", type=int, help="base RNG seed (default 7)")
    run.add_argument("--grid-n", type=int, dest="grid_n",
                     help="override the number of grid points per axis")
    run.add_argument("--output", type=Path, help="output directory (default ./tflab-results)")
    run.add_argument("--threads", type=int, help="worker threads for corpus maps (default 1)")
    run.add_argument("--no-figures", action="store_true", help="skip figure rendering")

    lst = sub.add_parser("list", help="list registered experiments")
    lst.add_argument("--json", action="store_true", help="machine-readable listing")
    lst.add_argument("--module", help="only experiments attached to this module")

    val = sub.add_parser("validate-config", help="check a config file without running")
    val.add_argument("config", type=Path)
    return parser


def _read_config(path: Path) -> configparser.ConfigParser:
    cp = configparser.ConfigParser()
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except OSError as e:
        raise SystemExit(f"tflab: cannot read config: {e}")
    except configparser.Error as e:
        raise SystemExit(f"tflab: malformed config: {e}")
    return cp


def _config_errors(cp: configparser.ConfigParser) -> list[str]:
    errors = []
    for key in cp["run"] if cp.has_section("run") else ():
        if key not in RUN_KEYS:
            errors.append(f"[run] has unknown key {key!r} (known: {', '.join(sorted(RUN_KEYS))})")
    if cp.has_section("run"):
        for key in ("seed", "threads", "grid_n"):
            if cp.has_option("run", key):
                try:
                    int(cp.get("run", key))
                except ValueError:
                    errors.append(f"[run] {key} must be an integer, got {cp.get('run', key)!r}")
        if cp.has_option("run", "experiments"):
            for tok in cp.get("run", "experiments").replace(",", " ").split():
                if tok not in REGISTRY:
                    errors.append(f"[run] names unknown experiment {tok!r}")
        if cp.has_option("run", "figures"):
            raw = cp.get("run", "figures").lower()
            if raw not in ("true", "false", "yes", "no", "1", "0", "on", "off"):
                errors.append(f"[run] figures must be boolean-like, got {raw!r}")
    for section in cp.sections():
        if section == "run":
            continue
        if section not in REGISTRY:
            errors.append(f"section [{section}] is not a registered experiment")
    return errors


def _cmd_validate(args) -> int:
    cp = _read_config(args.config)
    errors = _config_errors(cp)
    if errors:
        for e in errors:
            print(f"invalid: {e}", file=sys.stderr)
        return 2
    names = sorted(s for s in cp.sections() if s != "run")
    print(f"ok: {args.config} ({len(names)} experiment section(s))")
    return 0


def _cmd_list(args) -> int:
    defs = sorted(REGISTRY.values(), key=lambda d: d.name)
    if args.module:
        defs = [d for d in defs if d.module == args.module]
    if args.json:
        print(json.dumps([{"name": d.name, "module": d.module, "claim": d.claim}
                          for d in defs], indent=2))
        return 0
    width = max((len(d.name) for d in defs), default=0)
    for d in defs:
        print(f"{d.name:<{width}}  [{d.module}]  {d.claim}")
    return 0


def _truthy(raw: str) -> bool:
    return raw.lower() in ("true", "yes", "1", "on")


def _cmd_run(args) -> int:
    cp = configparser.ConfigParser()
    if args.config is not None:
        cp = _read_config(args.config)
        errors = _config_errors(cp)
        if errors:
            for e in errors:
                print(f"tflab: invalid config: {e}", file=sys.stderr)
            return 2

    names = list(args.experiments)
    if not names and cp.has_option("run", "experiments"):
        names = cp.get("run", "experiments").replace(",", " ").split()
    if not names:
        names = sorted(REGISTRY)
    unknown = [n for n in names if n not in REGISTRY]
    if unknown:
        print(f"tflab: unknown experiment(s): {', '.join(unknown)}", file=sys.stderr)
        print(f"tflab: known: {', '.join(sorted(REGISTRY))}", file=sys.stderr)
        return 2

    def setting(flag, key, default, cast):
        if flag is not None:
            return flag
        if cp.has_option("run", key):
            try:
                return cast(cp.get("run", key))
            except ValueError:
                raise SystemExit(f"tflab: [run] {key} must be {cast.__name__}")
        return default

    seed = setting(args.seed, "seed", 7, int)
    threads = setting(args.threads, "threads", 1, int)
    grid_n = setting(args.grid_n, "grid_n", None, int)
    output = args.output or (Path(cp.get("run", "output")) if cp.has_option("run", "output")
                             else Path("tflab-results"))
    figures = not args.no_figures
    if cp.has_option("run", "figures") and not args.no_figures:
        figures = _truthy(cp.get("run", "figures"))
    if threads < 1:
        print("tflab: --threads must be >= 1", file=sys.stderr)
        return 2

    results, durations, all_rows, figure_paths = [], {}, [], []
    for name in names:
        options = dict(cp[name]) if cp.has_section(name) else {}
        ctx = ExperimentContext(seed=seed, grid_points=grid_n, threads=threads,
                                options=options)
        t0 = time.perf_counter()
        result = run_experiment(name, ctx)
        durations[name] = time.perf_counter() - t0
        results.append(result)
        all_rows.extend(result.rows)
        n_pass = sum(c.passed for c in result.checks)
        verdict = "PASS" if result.passed else "FAIL"
        print(f"{name}: {verdict} (checks {n_pass}/{len(result.checks)}, "
              f"{durations[name]:.2f}s)")
        if not result.passed:
            for c in result.checks:
                if not c.passed:
                    op = "<=" if c.mode == "le" else ">="
                    print(f"  failed: {c.name} = {c.value:.6g} (needs {op} {c.threshold:g})")
        if figures:
            figure_paths.append(str(render_figure(name, result.rows, output / f"{name}.png")))

    write_rows(all_rows, output / "results.csv")
    write_summary(results, durations, output / "summary.json", extra={
        "seed": seed,
        "grid_n": grid_n,
        "threads": threads,
        "figures": figure_paths,
        "csv": str(output / "results.csv"),
    })
    overall = all(r.passed for r in results)
    print(f"overall: {'PASS' if overall else 'FAIL'} "
          f"({sum(r.passed for r in results)}/{len(results)} experiments) -> {output}")
    return 0 if overall else 1


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "list":
            return _cmd_list(args)
        return _cmd_validate(args)
    except SystemExit as e:
        if isinstance(e.code, str):
            print(e.code, file=sys.stderr)
            return 2
        return 0 if e.code is None else int(e.code)


if __name__ == "__main__":
    sys.exit(main())
