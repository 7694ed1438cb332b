"""Command-line entry point.

Subcommands::

    xrheadroom list-socs
    xrheadroom simulate --soc xr2-gen2 [--resolution WxH] [--fps N]
    xrheadroom compare  --socs xr2-gen2,sd8-gen3 --format csv
    xrheadroom throttle --soc xr2-gen2 [--power W]
    xrheadroom export   --format svg-bars|csv|json|text-table|trace-csv

``simulate`` exits 0 for SustainedFeasible, 2 for BurstFeasible, 3 for
Infeasible and 1 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import datetime as _dt
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .errors import XrHeadroomError
from .feasibility import VerdictKind, compare
from .report import FORMATS, render_report
from .soc_registry import Registry, builtin_profiles, parse_profiles
from .thermal import power_draw, steady_state_c, temp_trajectory, time_to_throttle
from .utilization import compute_utilization
from .workload import default_mr_scenario, parse_scenario, rescale_resolution

PROFILE_PATH_ENV = "XRHEADROOM_PROFILE_PATH"
DEFAULT_SOC = "xr2-gen2"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CODES = {
    VerdictKind.SUSTAINED_FEASIBLE: 0,
    VerdictKind.BURST_FEASIBLE: 2,
    VerdictKind.INFEASIBLE: 3,
}

_FORMAT_ALIASES = {"text": "text-table", "table": "text-table", "svg": "svg-bars"}
EXPORT_FORMATS = (*FORMATS, "trace-csv")


class CliError(Exception):
    pass


@dataclass
class CliConfig:
    profile_paths: list[Path] = field(default_factory=list)
    scenario_path: Path | None = None
    soc_names: list[str] = field(default_factory=lambda: [DEFAULT_SOC])
    output_format: str = "text-table"
    output_path: Path | None = None
    lenient: bool = False
    duration_minutes: float | None = None
    resolution: tuple[int, int] | None = None
    fps: float | None = None
    power_w: float | None = None
    stamp: bool = False

    def __post_init__(self):
        fmt = _FORMAT_ALIASES.get(self.output_format, self.output_format)
        if fmt not in EXPORT_FORMATS:
            raise CliError(f"unsupported format {self.output_format!r}")
        self.output_format = fmt
        for name in ("duration_minutes", "fps"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise CliError(f"--{name.split('_')[0]} must be positive")
        if self.resolution is not None and min(self.resolution) <= 0:
            raise CliError("--resolution must be positive")
        if self.power_w is not None and self.power_w < 0:
            raise CliError("--power must be ≥ 0")


def _profile_files(entry: Path) -> list[Path]:
    if entry.is_dir():
        return sorted(entry.glob("*.json"))
    return [entry]


def load_registry(paths, lenient: bool = False, env: dict | None = None) -> Registry:
    """Builtins, then every file on ``$XRHEADROOM_PROFILE_PATH``, then ``paths``."""
    env = os.environ if env is None else env
    search = [Path(p) for p in env.get(PROFILE_PATH_ENV, "").split(os.pathsep) if p]
    registry = builtin_profiles()
    for entry in [*search, *map(Path, paths)]:
        for path in _profile_files(entry):
            try:
                text = path.read_text(encoding="utf-8")
            except OSError as e:
                raise CliError(f"cannot read profile file {path}: {e.strerror}") from None
            try:
                registry = parse_profiles(text, base=registry, lenient=lenient)
            except XrHeadroomError as e:
                raise CliError(f"{path}: {e}") from None
    return registry


def load_scenario(config: CliConfig):
    if config.scenario_path is None:
        scenario = default_mr_scenario()
    else:
        try:
            text = Path(config.scenario_path).read_text(encoding="utf-8")
        except OSError as e:
            raise CliError(f"cannot read scenario file {config.scenario_path}: "
                           f"{e.strerror}") from None
        try:
            scenario = parse_scenario(text, lenient=config.lenient)
        except XrHeadroomError as e:
            raise CliError(f"{config.scenario_path}: {e}") from None
    if config.resolution is not None or config.fps is not None:
        w, h = config.resolution or (scenario.width_px, scenario.height_px)
        scenario = rescale_resolution(scenario, w, h, config.fps or scenario.fps)
    if config.duration_minutes is not None:
        scenario = dataclasses.replace(scenario, session_minutes=config.duration_minutes)
    return scenario


def _stamp(config: CliConfig) -> str | None:
    if not config.stamp:
        return None
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def _emit(text: str, config: CliConfig, stdout) -> None:
    if config.output_path is None:
        stdout.write(text)
        return
    try:
        Path(config.output_path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise CliError(f"cannot write {config.output_path}: {e.strerror}") from None


def _lookup(registry: Registry, names):
    for n in names:
        if n not in registry:
            raise CliError(f"unknown SoC {n!r}; known: {', '.join(registry)}")
    return [registry[n] for n in names]


def cmd_list_socs(config: CliConfig, stdout=sys.stdout) -> int:
    registry = load_registry(config.profile_paths, config.lenient)
    rows = [["name", "gpu gflops", "mem gb/s", "tdp w (sust/peak)", "ram gb (dev/total)",
             "gb6 single", "gb6 multi"]]
    for p in registry.values():
        rows.append([p.name, f"{p.gpu.gflops:.0f}", f"{p.memory_bandwidth_gbps:.1f}",
                     f"{p.tdp_sustained_w:.2f}/{p.tdp_peak_w:.2f}",
                     f"{p.dev_accessible_ram_gb:.2f}/{p.total_ram_gb:.2f}",
                     f"{p.benchmarks.geekbench6_single:.0f}",
                     f"{p.benchmarks.geekbench6_multi:.0f}"])
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    _emit("\n".join(lines) + "\n", config, stdout)
    return EXIT_OK


def cmd_simulate(config: CliConfig, stdout=sys.stdout) -> int:
    registry = load_registry(config.profile_paths, config.lenient)
    scenario = load_scenario(config)
    (soc,) = _lookup(registry, config.soc_names[:1])
    report = compare(scenario, [soc.name], registry)
    (row,) = report.rows
    fmt = "text-table" if config.output_format == "trace-csv" else config.output_format
    text = render_report(report, fmt, _stamp(config))
    if fmt == "text-table":
        text += (f"\n{scenario.width_px}x{scenario.height_px}@{scenario.fps:g} "
                 f"{scenario.mode.value}, session {scenario.session_minutes:.2f} min\n"
                 f"verdict: {row.verdict}\n")
    _emit(text, config, stdout)
    return EXIT_CODES[row.verdict.kind]


def cmd_compare(config: CliConfig, stdout=sys.stdout) -> int:
    registry = load_registry(config.profile_paths, config.lenient)
    scenario = load_scenario(config)
    _lookup(registry, config.soc_names)
    report = compare(scenario, config.soc_names, registry)
    fmt = "text-table" if config.output_format == "trace-csv" else config.output_format
    _emit(render_report(report, fmt, _stamp(config)), config, stdout)
    return EXIT_OK


def _scenario_power(config: CliConfig, registry, soc) -> float:
    scenario = load_scenario(config)
    report = compute_utilization(scenario, soc, registry)
    return power_draw(report, scenario, soc).total_w


def cmd_throttle(config: CliConfig, stdout=sys.stdout) -> int:
    registry = load_registry(config.profile_paths, config.lenient)
    (soc,) = _lookup(registry, config.soc_names[:1])
    power = config.power_w if config.power_w is not None else _scenario_power(config, registry,
                                                                              soc)
    minutes = time_to_throttle(power, soc.thermal)
    head = "Sustained" if minutes is None else f"{minutes:.2f} min"
    detail = (f"{soc.name} at {power:.2f} W: steady state "
              f"{steady_state_c(power, soc.thermal):.2f} C, throttle at "
              f"{soc.thermal.throttle_temp_c:.2f} C")
    _emit(f"{head}\n{detail}\n", config, stdout)
    return EXIT_OK


def cmd_export(config: CliConfig, stdout=sys.stdout) -> int:
    registry = load_registry(config.profile_paths, config.lenient)
    scenario = load_scenario(config)
    socs = _lookup(registry, config.soc_names)
    stamp = _stamp(config)
    if config.output_format == "trace-csv":
        soc = socs[0]
        power = (config.power_w if config.power_w is not None
                 else _scenario_power(config, registry, soc))
        trace = temp_trajectory(power, soc.thermal, scenario.session_minutes * 60.0, 1.0)
        text = trace.to_csv()
        if stamp:
            text = f"# generated {stamp}\n{text}"
    elif len(socs) == 1:
        report = compute_utilization(scenario, socs[0], registry)
        text = render_report(report, config.output_format, stamp)
    else:
        text = render_report(compare(scenario, config.soc_names, registry),
                             config.output_format, stamp)
    _emit(text, config, stdout)
    return EXIT_OK


COMMANDS = {
    "list-socs": cmd_list_socs,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "throttle": cmd_throttle,
    "export": cmd_export,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _resolution(text: str) -> tuple[int, int]:
    try:
        w, h = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WIDTHxHEIGHT, got {text!r}") from None
    return w, h


def _socs(text: str) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--profiles", action="append", default=[], metavar="JSON",
                        help="extra profile file or directory (repeatable)")
    common.add_argument("--scenario", metavar="JSON", help="scenario file (default: 720p30 MR)")
    common.add_argument("--soc", help=f"target SoC (default {DEFAULT_SOC})")
    common.add_argument("--socs", type=_socs, help="comma-separated SoC names")
    common.add_argument("--resolution", type=_resolution, metavar="WxH")
    common.add_argument("--fps", type=float)
    common.add_argument("--duration", type=float, metavar="MIN",
                        help="session length in minutes")
    common.add_argument("--power", type=float, metavar="W", help="constant power (throttle, "
                        "export trace-csv)")
    common.add_argument("--format", default="text-table",
                        help=f"one of {', '.join(EXPORT_FORMATS)}")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--lenient", action="store_true", help="ignore unknown JSON fields")
    common.add_argument("--stamp", action="store_true", help="write a timestamp into outputs")

    parser = _Parser(prog="xrheadroom", description="Utilization, power and time-to-throttle "
                     "simulator for MR compositing pipelines on ARM SoCs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def config_from_args(ns: argparse.Namespace) -> CliConfig:
    if ns.socs:
        names = ns.socs
    elif ns.soc:
        names = [ns.soc]
    else:
        names = [DEFAULT_SOC]
    return CliConfig(
        profile_paths=[Path(p) for p in ns.profiles],
        scenario_path=Path(ns.scenario) if ns.scenario else None,
        soc_names=names,
        output_format=ns.format,
        output_path=Path(ns.out) if ns.out else None,
        lenient=ns.lenient,
        duration_minutes=ns.duration,
        resolution=ns.resolution,
        fps=ns.fps,
        power_w=ns.power,
        stamp=ns.stamp,
    )


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ns = build_parser().parse_args(argv)
    try:
        config = config_from_args(ns)
        return COMMANDS[ns.command](config, stdout)
    except (CliError, XrHeadroomError) as e:
        stderr.write(f"xrheadroom: {e}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
