"""Config-driven command line: list, run, compare, bench.

Config files are flat ``key = value`` text with dotted sections, e.g.::

    experiment = exp1-tappert
    boundary.kind = higdon
    boundary.J = 2
    T_final = 10

Unknown keys are rejected by name.  ``--override key=value`` (repeatable)
applies on top of the file.  All outputs are written atomically.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from . import harness
from .boundaries import BoundarySpec
from .errors import ConfigError, StabilityError
from .medium import (Constant, ErfStep, GaussianDuct, RangeGaussian,
                     load_speed_table)
from .solver import write_snapshot
from .source import SourceSpec


def _parse_bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _parse_speeds(s: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in s.replace(",", " ").split())


# key -> (converter, default)
_SCHEMA = {
    "experiment": (str, "exp1-tappert"),
    "h": (float, 0.1),
    "cfl_number": (float, 0.9),
    "T_final": (float, 20.0),
    "Lx": (float, 10.0),
    "Ly": (float, 10.0),
    "extension": (float, None),
    "snapshot_stride": (int, 10),
    "out_dir": (str, "out"),
    "boundary.kind": (str, None),
    "boundary.side": (str, "left"),
    "boundary.J": (int, None),
    "boundary.speeds": (_parse_speeds, None),
    "source.x": (float, None),
    "source.y": (float, None),
    "source.duration": (float, None),
    "source.amplitude": (float, None),
    "source.c0": (float, None),
    "source.waveform": (str, None),
    "source.inject_in_main": (_parse_bool, False),
    "medium.kind": (str, None),
    "medium.c": (float, 1.0),
    "medium.file": (str, None),
    "tappert.legacy_sums": (_parse_bool, False),
}

_POSITIVE_KEYS = ("h", "cfl_number", "T_final", "Lx", "Ly", "snapshot_stride")


@dataclass
class RunConfig:
    """Fully-resolved configuration for one command invocation."""

    spec: harness.ExperimentSpec
    out_dir: Path
    raw: dict


def _read_pairs(path: str | None, overrides: list[str]) -> dict:
    pairs = {}

    def add(line: str, where: str):
        if "=" not in line:
            raise ConfigError(f"{where}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        key, value = key.strip(), value.strip()
        if key not in _SCHEMA:
            raise ConfigError(f"{where}: unknown key {key!r}")
        conv = _SCHEMA[key][0]
        try:
            pairs[key] = conv(value)
        except ValueError as exc:
            raise ConfigError(f"{where}: bad value for {key!r}: {exc}") from exc

    if path is not None:
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file not found: {path}")
        for i, line in enumerate(p.read_text().splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if line:
                add(line, f"{path}:{i}")
    for ov in overrides:
        add(ov, f"--override {ov!r}")
    return pairs


def _build_medium(pairs, Lx, Ly):
    kind = pairs["medium.kind"]
    if kind == "constant":
        return Constant(pairs["medium.c"])
    if kind == "gaussian_duct":
        return GaussianDuct(Ly=Ly)
    if kind == "erf_step":
        return ErfStep(Ly=Ly)
    if kind == "range_gaussian":
        return RangeGaussian(Lx=Lx)
    if kind == "tabulated":
        if pairs["medium.file"] is None:
            raise ConfigError("medium.kind=tabulated needs medium.file")
        return load_speed_table(pairs["medium.file"])
    raise ConfigError(f"unknown medium.kind {kind!r}")


def parse_config(path: str | None = None, overrides: list[str] | None = None) -> RunConfig:
    """Resolve a config file plus overrides into an experiment spec."""
    pairs = _read_pairs(path, overrides or [])
    full = {k: pairs.get(k, d) for k, (_, d) in _SCHEMA.items()}
    for key in _POSITIVE_KEYS:
        if full[key] is not None and full[key] <= 0:
            raise ConfigError(f"{key} must be positive, got {full[key]}")

    spec = harness.find_experiment(full["experiment"], h=0.1,
                                   T_final=full["T_final"])
    spec = replace(spec, Lx=full["Lx"], Ly=full["Ly"], h=full["h"],
                   cfl_number=full["cfl_number"],
                   snapshot_stride=full["snapshot_stride"],
                   extension=full["extension"],
                   inject_in_main=full["source.inject_in_main"])

    if full["medium.kind"] is not None:
        spec = replace(spec, medium=_build_medium(full, full["Lx"], full["Ly"]))

    if full["boundary.kind"] is not None:
        kind = full["boundary.kind"]
        if kind == "higdon":
            order = full["boundary.J"] if full["boundary.J"] is not None else 2
            bc = BoundarySpec(side=full["boundary.side"], kind="higdon",
                              order=order, speeds=full["boundary.speeds"])
        else:
            bc = BoundarySpec(side=full["boundary.side"], kind=kind,
                              legacy_sums=full["tappert.legacy_sums"])
        spec = replace(spec, boundary=bc)
    elif full["tappert.legacy_sums"] and spec.boundary.kind == "tappert":
        spec = replace(spec, boundary=replace(spec.boundary, legacy_sums=True))

    src = spec.source
    updates = {}
    for field_name, key in (("x", "source.x"), ("y", "source.y"),
                            ("duration", "source.duration"),
                            ("amplitude", "source.amplitude"),
                            ("c0", "source.c0"), ("waveform", "source.waveform")):
        if full[key] is not None:
            updates[field_name] = full[key]
    if updates:
        src = SourceSpec(x=updates.get("x", src.x), y=updates.get("y", src.y),
                         duration=updates.get("duration", src.duration),
                         amplitude=updates.get("amplitude", src.amplitude),
                         c0=updates.get("c0", src.c0),
                         waveform=updates.get("waveform", src.waveform))
        spec = replace(spec, source=src)

    return RunConfig(spec=spec, out_dir=Path(full["out_dir"]), raw=full)


def _cmd_list(_args) -> int:
    for spec in harness.experiment_catalog():
        bc = spec.boundary
        detail = bc.kind if bc.kind != "higdon" else f"higdon J={bc.order}"
        print(f"{spec.name:16s} medium={type(spec.medium).__name__:14s} "
              f"boundary={detail}")
    return 0


def _cmd_run(args) -> int:
    cfg = parse_config(args.config, args.override)
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    result = harness.run(cfg.spec, truncated=True)
    for step, t, field in zip(result.steps, result.times, result.fields):
        write_snapshot(out / f"snap_{step}.txt", field, t)
    print(f"{cfg.spec.name}: {result.n_steps} steps, "
          f"{len(result.steps)} snapshots -> {out}")
    return 0


def _cmd_compare(args) -> int:
    cfg = parse_config(args.config, args.override)
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    series, _, _ = harness.compare(cfg.spec)
    harness.write_error_csv(out / "errors.csv", series)
    print(f"{cfg.spec.name}: final E={series.final_E():.6g} "
          f"e={series.final_e():.6g} -> {out / 'errors.csv'}")
    return 0


def _cmd_bench(args) -> int:
    cfg = parse_config(args.config, args.override)
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    rows = harness.timing_report(cfg.spec, n_steps=args.steps)
    harness.write_timing_csv(out / "timing.csv", rows)
    for r in rows:
        print(f"{r.kind:14s} {r.per_step_seconds * 1e6:10.2f} us/step "
              f"(boundary share {r.boundary_share_seconds * 1e6:+8.2f} us)")
    print(f"-> {out / 'timing.csv'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="waveabc",
        description="2D waveguide solver with absorbing-boundary benchmarking")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="print the experiment catalog")
    for name, help_text in (("run", "run one simulation, write snapshots"),
                            ("compare", "run a truncated/extended pair, write errors.csv"),
                            ("bench", "time the boundary kinds, write timing.csv")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", default=None, help="path to key=value config")
        p.add_argument("--out", dest="out", default=None, help="output directory")
        p.add_argument("--override", action="append", default=[],
                       metavar="KEY=VALUE", help="override a config key")
        if name == "bench":
            p.add_argument("--steps", type=int, default=200,
                           help="timed steps per variant")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command != "list" and args.out is not None:
        args.override = list(args.override) + [f"out_dir={args.out}"]
    handlers = {"list": _cmd_list, "run": _cmd_run,
                "compare": _cmd_compare, "bench": _cmd_bench}
    try:
        return handlers[args.command](args)
    except StabilityError as exc:
        print(f"error: {exc} (step {exc.step}, last max |u| = {exc.max_abs:.6g})",
              file=sys.stderr)
        return 1
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
