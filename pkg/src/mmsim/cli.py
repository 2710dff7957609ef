"""Command-line front end.

Subcommands: run | sweep | preset | list-presets | validate. Data goes to files
under --out; diagnostics go to stderr (MMSIM_LOG=error|warn|info|debug); stdout
stays silent unless --summary or an inspection subcommand asks for it.
Exit codes: 0 success, 1 runtime failure, 2 invalid configuration/arguments.
"""

import argparse
import dataclasses
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__, artifacts, config, sim

log = logging.getLogger("mmsim")

_LOG_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING,
               "info": logging.INFO, "debug": logging.DEBUG}


class CliError(RuntimeError):
    pass


def _setup_logging() -> None:
    raw = os.environ.get("MMSIM_LOG", "warn").lower()
    level = _LOG_LEVELS.get(raw)
    if level is None:
        print(f"mmsim: ignoring invalid MMSIM_LOG={raw!r}", file=sys.stderr)
        level = logging.WARNING
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(levelname)s %(name)s: %(message)s")


def _config_keys_epilog() -> str:
    lines = ["config file keys (JSON; dotted = nested object) and defaults:"]
    for key, default in config.describe_keys():
        lines.append(f"  {key} = {default}")
    return "\n".join(lines)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmsim",
        description="Monte Carlo link-level simulator for multi-user MIMO precoding",
        epilog=_config_keys_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"mmsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_out=True):
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--preset", metavar="NAME", help="canned experiment name")
        group.add_argument("--config", metavar="PATH", help="scenario config JSON")
        if needs_out:
            p.add_argument("--out", metavar="DIR", default=".", help="output directory")
            p.add_argument("--seed", type=int, metavar="U64", help="override master seed")
            p.add_argument("--jobs", type=int, default=os.cpu_count() or 1, metavar="N",
                           help="worker processes; 0 or 1 = sequential")
            p.add_argument("--force", action="store_true",
                           help="overwrite existing output files")
            p.add_argument("--summary", action="store_true",
                           help="also print the aggregate JSON to stdout")

    p_run = sub.add_parser("run", help="run drops, write per-drop CSV + summary JSON")
    add_common(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="mean capacity vs transmit power")
    add_common(p_sweep)
    p_sweep.add_argument("--powers", metavar="DBM,DBM,...",
                         help="comma-separated grid; defaults to the preset's grid")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_show = sub.add_parser("preset", help="print a preset's expanded config as JSON")
    p_show.add_argument("name")
    p_show.set_defaults(func=_cmd_preset)

    p_list = sub.add_parser("list-presets", help="list canned experiment names")
    p_list.set_defaults(func=_cmd_list_presets)

    p_val = sub.add_parser("validate", help="check a config file, exit 2 on problems")
    p_val.add_argument("--config", metavar="PATH", required=True)
    p_val.set_defaults(func=_cmd_validate)
    return parser


def _load_cells(args):
    """Resolve --preset/--config into (name, [PresetCell], sweep powers or None)."""
    if args.preset:
        ps = sim.preset(args.preset)
        cells = list(ps.cells)
        name = ps.name
        powers = ps.sweep_powers_dbm
    else:
        cfg = config.load_config(args.config)
        name = Path(args.config).stem
        cells = [sim.PresetCell("", cfg)]
        powers = None
    seed = getattr(args, "seed", None)
    if seed is not None:
        if not (0 <= seed < 2 ** 64):
            raise config.ConfigError("--seed must fit in u64")
        cells = [sim.PresetCell(c.label, dataclasses.replace(c.config, master_seed=seed))
                 for c in cells]
    return name, cells, powers


def _out_path(args, name: str, label: str, suffix: str) -> Path:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"{name}_{label}" if label else name
    return out_dir / f"{stem}{suffix}"


def _check_overwrite(paths, force: bool) -> None:
    existing = [str(p) for p in paths if p.exists()]
    if existing and not force:
        raise CliError(f"refusing to overwrite {', '.join(existing)} (pass --force)")


def _cmd_run(args) -> int:
    name, cells, _ = _load_cells(args)
    for cell in cells:
        csv_path = _out_path(args, name, cell.label, "_drops.csv")
        json_path = _out_path(args, name, cell.label, "_summary.json")
        _check_overwrite([csv_path, json_path], args.force)
        log.info("running %s drops for %s", cell.config.drops, csv_path.stem)
        result = sim.run_experiment(cell.config, jobs=args.jobs)
        artifacts.write_drops_csv(result, csv_path)
        artifacts.write_summary_json(result, json_path)
        log.info("wrote %s and %s", csv_path, json_path)
        if args.summary:
            json.dump(artifacts.summary_dict(result), sys.stdout, indent=2)
            sys.stdout.write("\n")
    return 0


def _cmd_sweep(args) -> int:
    name, cells, preset_powers = _load_cells(args)
    if args.powers:
        try:
            powers = [float(tok) for tok in args.powers.split(",") if tok.strip()]
        except ValueError as exc:
            raise config.ConfigError(f"--powers: {exc}") from exc
    else:
        powers = preset_powers
    if not powers:
        raise config.ConfigError("no power grid: pass --powers or use a preset that has one")
    for cell in cells:
        csv_path = _out_path(args, name, cell.label, "_sweep.csv")
        _check_overwrite([csv_path], args.force)
        points = sim.sweep_tx_power(cell.config, powers, jobs=args.jobs)
        artifacts.write_sweep_csv(points, cell.config.channel_model, csv_path)
        log.info("wrote %s", csv_path)
        if args.summary:
            json.dump([dataclasses.asdict(pt) for pt in points], sys.stdout, indent=2)
            sys.stdout.write("\n")
    return 0


def _cmd_preset(args) -> int:
    ps = sim.preset(args.name)
    doc = {
        "name": ps.name,
        "description": ps.description,
        "cells": [{"label": c.label, "config": config.to_dict(c.config)} for c in ps.cells],
        "sweep_powers_dbm": list(ps.sweep_powers_dbm) if ps.sweep_powers_dbm else None,
    }
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def _cmd_list_presets(args) -> int:
    for name in sim.preset_names():
        print(f"{name}: {sim.preset(name).description}")
    return 0


def _cmd_validate(args) -> int:
    cfg = config.load_config(args.config)  # raises ConfigError on any problem
    log.info("config OK: %s drops, model %s", cfg.drops, cfg.channel_model)
    return 0


def main(argv=None) -> int:
    _setup_logging()
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (config.ConfigError, ValueError) as exc:
        print(f"mmsim: {exc}", file=sys.stderr)
        return 2
    except CliError as exc:
        print(f"mmsim: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"mmsim: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
