"""SoC hardware profiles, the builtin registry and benchmark-ratio scaling.

A profile bundles what the simulator needs to know about one chip: CPU
clusters and GPU throughput, memory bandwidth and RAM budgets, the TDP
envelope, public benchmark scores and the lumped thermal parameters used
by :mod:`xrheadroom.thermal`.

Profiles are frozen dataclasses validated on construction, so an invalid
profile can never exist in memory. ``Registry`` is an immutable name-keyed
mapping of them.
"""

from __future__ import annotations

import dataclasses
import json
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from enum import Enum
from typing import Any

from ._validation import (
    _build,
    _fields,
    _is_number,
    _nonneg,
    _object,
    _positive,
    _require,
    _text,
)
from .errors import (
    DuplicateNameError,
    MissingBenchmarkError,
    ProfileSyntaxError,
    UnknownSocError,
    ValidationError,
)


class ResourceKind(str, Enum):
    """Capability axis used for cross-SoC performance ratios."""

    CPU_SINGLE = "cpu_single"
    CPU_MULTI = "cpu_multi"
    GPU_COMPUTE = "gpu_compute"
    GPU_RASTER = "gpu_raster"
    MEM_BW = "mem_bw"


@dataclass(frozen=True)
class CpuCluster:
    core_name: str
    count: int
    clock_ghz: float

    def __post_init__(self):
        _text(self.core_name, "core_name")
        _require(isinstance(self.count, int) and not isinstance(self.count, bool),
                 "count", "count is an integer")
        _require(self.count >= 1, "count", "count ≥ 1")
        _positive(self.clock_ghz, "clock_ghz")
        _require(0.5 <= self.clock_ghz <= 5.0, "clock_ghz", "0.5 ≤ clock_ghz ≤ 5.0")


@dataclass(frozen=True)
class GpuSpec:
    name: str
    clock_mhz: float
    gflops: float

    def __post_init__(self):
        _text(self.name, "name")
        _positive(self.clock_mhz, "clock_mhz")
        _positive(self.gflops, "gflops")


@dataclass(frozen=True)
class BenchmarkScores:
    """Public benchmark results.

    ``estimated`` names the fields that are estimates rather than measured
    scores; anything derived from them is flagged ``is_estimate`` downstream.
    """

    geekbench6_single: float
    geekbench6_multi: float
    antutu10: float
    gfxbench_aztec_1080p_fps: float | None = None
    estimated: frozenset[str] = frozenset()

    SCORE_FIELDS = ("geekbench6_single", "geekbench6_multi", "antutu10",
                    "gfxbench_aztec_1080p_fps")

    def __post_init__(self):
        _positive(self.geekbench6_single, "geekbench6_single")
        _positive(self.geekbench6_multi, "geekbench6_multi")
        _positive(self.antutu10, "antutu10")
        if self.gfxbench_aztec_1080p_fps is not None:
            _positive(self.gfxbench_aztec_1080p_fps, "gfxbench_aztec_1080p_fps")
        _require(self.geekbench6_multi >= self.geekbench6_single, "geekbench6_multi",
                 "geekbench6_multi ≥ geekbench6_single")
        object.__setattr__(self, "estimated", frozenset(self.estimated))
        for name in self.estimated:
            _require(name in self.SCORE_FIELDS and getattr(self, name) is not None,
                     "estimated", "every name in estimated names an existing field")


@dataclass(frozen=True)
class ThermalParams:
    """Single-node RC thermal model plus the power split used to turn
    utilization into watts."""

    thermal_resistance_k_per_w: float
    thermal_capacitance_j_per_k: float
    ambient_c: float
    throttle_temp_c: float
    idle_power_w: float
    cpu_max_power_w: float
    gpu_max_power_w: float

    def __post_init__(self):
        _positive(self.thermal_resistance_k_per_w, "thermal_resistance_k_per_w")
        _positive(self.thermal_capacitance_j_per_k, "thermal_capacitance_j_per_k")
        _require(_is_number(self.ambient_c), "ambient_c", "ambient_c is a finite number")
        _require(_is_number(self.throttle_temp_c), "throttle_temp_c",
                 "throttle_temp_c is a finite number")
        _nonneg(self.idle_power_w, "idle_power_w")
        _positive(self.cpu_max_power_w, "cpu_max_power_w")
        _positive(self.gpu_max_power_w, "gpu_max_power_w")
        _require(self.throttle_temp_c > self.ambient_c, "throttle_temp_c",
                 "throttle_temp_c > ambient_c")
        _require(self.idle_power_w < self.cpu_max_power_w + self.gpu_max_power_w,
                 "idle_power_w", "idle_power_w < cpu_max_power_w + gpu_max_power_w")

    @property
    def time_constant_s(self) -> float:
        return self.thermal_resistance_k_per_w * self.thermal_capacitance_j_per_k


@dataclass(frozen=True)
class ValueRange:
    """Low/high bounds for a field stored as its midpoint (sensitivity runs)."""

    field: str
    low: float
    high: float


@dataclass(frozen=True)
class SocProfile:
    name: str
    process_node: str
    cpu_clusters: tuple[CpuCluster, ...]
    gpu: GpuSpec
    memory_bandwidth_gbps: float
    tdp_sustained_w: float
    tdp_peak_w: float
    total_ram_gb: float
    dev_accessible_ram_gb: float
    benchmarks: BenchmarkScores
    thermal: ThermalParams
    # multiplier on fixed-function (encoder) draw relative to a factor-1.0 SoC
    encoder_power_factor: float = 1.0
    ranges: tuple[ValueRange, ...] = ()

    def __post_init__(self):
        _text(self.name, "name")
        _text(self.process_node, "process_node")
        object.__setattr__(self, "cpu_clusters", tuple(self.cpu_clusters))
        object.__setattr__(self, "ranges", tuple(sorted(self.ranges, key=lambda r: r.field)))
        _require(len(self.cpu_clusters) >= 1, "cpu_clusters", "at least one CPU cluster")
        _positive(self.memory_bandwidth_gbps, "memory_bandwidth_gbps")
        _positive(self.tdp_sustained_w, "tdp_sustained_w")
        _positive(self.tdp_peak_w, "tdp_peak_w")
        _positive(self.total_ram_gb, "total_ram_gb")
        _positive(self.dev_accessible_ram_gb, "dev_accessible_ram_gb")
        _positive(self.encoder_power_factor, "encoder_power_factor")
        _require(self.tdp_peak_w >= self.tdp_sustained_w, "tdp_peak_w",
                 "tdp_peak_w ≥ tdp_sustained_w")
        _require(self.dev_accessible_ram_gb <= self.total_ram_gb, "dev_accessible_ram_gb",
                 "dev_accessible_ram_gb ≤ total_ram_gb")
        seen = set()
        for r in self.ranges:
            name = f"ranges.{r.field}"
            _require(r.field not in seen, name, "one range per field")
            seen.add(r.field)
            try:
                value = _get_path(self, r.field)
            except AttributeError:
                raise ValidationError(name, "range names an existing numeric field") from None
            _require(_is_number(value), name, "range names an existing numeric field")
            _require(_is_number(r.low) and _is_number(r.high), name, "low/high are numbers")
            _require(r.low <= value <= r.high, name, "low ≤ value ≤ high")

    @property
    def cpu_core_count(self) -> int:
        return sum(c.count for c in self.cpu_clusters)

    @property
    def os_reserved_ram_gb(self) -> float:
        return self.total_ram_gb - self.dev_accessible_ram_gb

    def at_range(self, point: str) -> SocProfile:
        """Return a copy with every ranged field moved to ``"low"``, ``"mid"``
        or ``"high"`` of its range."""
        if point not in ("low", "mid", "high"):
            raise ValueError(f"point must be low, mid or high, not {point!r}")
        out = self
        for r in self.ranges:
            value = {"low": r.low, "high": r.high, "mid": (r.low + r.high) / 2}[point]
            out = _replace_path(out, r.field, value)
        return out


def _get_path(obj: Any, path: str) -> Any:
    for part in path.split("."):
        obj = getattr(obj, part)
    return obj


def _replace_path(obj: Any, path: str, value: Any) -> Any:
    head, _, rest = path.partition(".")
    if not rest:
        return dataclasses.replace(obj, **{head: value})
    return dataclasses.replace(obj, **{head: _replace_path(getattr(obj, head), rest, value)})


class Registry(Mapping[str, SocProfile]):
    """Immutable, name-keyed collection of profiles. Iteration is name-sorted."""

    __slots__ = ("_profiles",)

    def __init__(self, profiles: Iterable[SocProfile] = ()):
        table: dict[str, SocProfile] = {}
        for p in profiles:
            if p.name in table:
                raise DuplicateNameError(p.name)
            table[p.name] = p
        self._profiles = dict(sorted(table.items()))

    def __getitem__(self, name: str) -> SocProfile:
        try:
            return self._profiles[name]
        except KeyError:
            raise UnknownSocError(name) from None

    def __iter__(self) -> Iterator[str]:
        return iter(self._profiles)

    def __len__(self) -> int:
        return len(self._profiles)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Registry):
            return self._profiles == other._profiles
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._profiles.items()))

    def __repr__(self) -> str:
        return f"Registry({list(self._profiles)})"

    def merged(self, profiles: Iterable[SocProfile], override: bool = False) -> Registry:
        """New registry with ``profiles`` added; a name clash raises
        :class:`DuplicateNameError` unless ``override`` is set."""
        table = dict(self._profiles)
        for p in Registry(profiles).values():
            if p.name in table and not override:
                raise DuplicateNameError(p.name)
            table[p.name] = p
        return Registry(table.values())


# ---------------------------------------------------------------------------
# builtin profiles

def _builtin_list() -> list[SocProfile]:
    xr2 = SocProfile(
        name="xr2-gen2",
        process_node="4 nm (TSMC)",
        cpu_clusters=(
            CpuCluster("Cortex-X3", 1, 2.84),
            # A715/A510 split and clocks are not published; documentation only
            CpuCluster("Cortex-A715/A510", 5, 2.0),
        ),
        gpu=GpuSpec("Adreno 740", 680.0, 2089.0),
        memory_bandwidth_gbps=64.0,
        tdp_sustained_w=5.0,
        tdp_peak_w=10.0,
        total_ram_gb=8.0,
        dev_accessible_ram_gb=5.75,
        benchmarks=BenchmarkScores(
            geekbench6_single=1350.0,
            geekbench6_multi=4250.0,
            antutu10=1_500_000.0,
            gfxbench_aztec_1080p_fps=120.0,
            estimated=frozenset({"geekbench6_single", "geekbench6_multi",
                                 "gfxbench_aztec_1080p_fps"}),
        ),
        thermal=ThermalParams(
            thermal_resistance_k_per_w=3.0,
            thermal_capacitance_j_per_k=119.0,
            ambient_c=25.0,
            throttle_temp_c=45.0,
            idle_power_w=1.0,
            cpu_max_power_w=3.5,
            gpu_max_power_w=4.5,
        ),
        encoder_power_factor=1.0,
        ranges=(
            ValueRange("benchmarks.geekbench6_single", 1300.0, 1400.0),
            ValueRange("benchmarks.geekbench6_multi", 4000.0, 4500.0),
            ValueRange("tdp_sustained_w", 4.0, 6.0),
        ),
    )
    sd8 = SocProfile(
        name="sd8-gen3",
        process_node="4 nm (TSMC)",
        cpu_clusters=(
            CpuCluster("Cortex-X4", 1, 3.3),
            CpuCluster("Cortex-A720", 3, 3.15),
            CpuCluster("Cortex-A520", 2, 2.27),
        ),
        gpu=GpuSpec("Adreno 750", 950.0, 2774.0),
        memory_bandwidth_gbps=76.8,
        tdp_sustained_w=8.0,
        tdp_peak_w=12.0,
        total_ram_gb=12.0,
        dev_accessible_ram_gb=8.0,
        benchmarks=BenchmarkScores(
            geekbench6_single=2200.0,
            geekbench6_multi=7850.0,
            antutu10=2_000_000.0,
            gfxbench_aztec_1080p_fps=241.0,
        ),
        thermal=ThermalParams(
            thermal_resistance_k_per_w=2.5,
            thermal_capacitance_j_per_k=150.0,
            ambient_c=25.0,
            throttle_temp_c=45.0,
            idle_power_w=1.0,
            cpu_max_power_w=4.0,
            gpu_max_power_w=4.2,
        ),
        encoder_power_factor=0.73,
    )
    d9300 = SocProfile(
        name="dimensity-9300",
        process_node="4 nm (TSMC)",
        cpu_clusters=(
            CpuCluster("Cortex-X4", 1, 3.25),
            CpuCluster("Cortex-A720", 3, 2.85),
            CpuCluster("Cortex-A720", 4, 2.0),
        ),
        gpu=GpuSpec("Immortalis-G720 MC12", 1300.0, 3994.0),
        memory_bandwidth_gbps=76.8,
        tdp_sustained_w=7.0,
        tdp_peak_w=11.0,
        total_ram_gb=12.0,
        dev_accessible_ram_gb=8.0,
        benchmarks=BenchmarkScores(
            geekbench6_single=2225.0,
            geekbench6_multi=7857.0,
            antutu10=2_070_000.0,
            gfxbench_aztec_1080p_fps=None,
        ),
        thermal=ThermalParams(
            thermal_resistance_k_per_w=2.6,
            thermal_capacitance_j_per_k=140.0,
            ambient_c=25.0,
            throttle_temp_c=45.0,
            idle_power_w=1.0,
            cpu_max_power_w=4.0,
            gpu_max_power_w=4.2,
        ),
    )
    return [xr2, sd8, d9300]


_BUILTINS = Registry(_builtin_list())


def builtin_profiles() -> Registry:
    """The three reference SoCs: ``xr2-gen2``, ``sd8-gen3``, ``dimensity-9300``."""
    return _BUILTINS


# ---------------------------------------------------------------------------
# capability and ratios

def capability(soc: SocProfile, kind: ResourceKind) -> tuple[float, bool]:
    """Return ``(value, is_estimate)`` for the capability measured by ``kind``.

    Raises :class:`MissingBenchmarkError` when the profile lacks the field.
    """
    kind = ResourceKind(kind)
    b = soc.benchmarks
    if kind is ResourceKind.CPU_SINGLE:
        return b.geekbench6_single, "geekbench6_single" in b.estimated
    if kind is ResourceKind.CPU_MULTI:
        return b.geekbench6_multi, "geekbench6_multi" in b.estimated
    if kind is ResourceKind.GPU_COMPUTE:
        return soc.gpu.gflops, False
    if kind is ResourceKind.GPU_RASTER:
        if b.gfxbench_aztec_1080p_fps is None:
            raise MissingBenchmarkError(kind, soc.name)
        return b.gfxbench_aztec_1080p_fps, "gfxbench_aztec_1080p_fps" in b.estimated
    return soc.memory_bandwidth_gbps, False


def perf_ratio(a: SocProfile, b: SocProfile, kind: ResourceKind) -> float:
    """How many times more capable ``a`` is than ``b`` along ``kind``."""
    return capability(a, kind)[0] / capability(b, kind)[0]


def ratio_is_estimate(a: SocProfile, b: SocProfile, kind: ResourceKind) -> bool:
    return capability(a, kind)[1] or capability(b, kind)[1]


# ---------------------------------------------------------------------------
# JSON documents

_CLUSTER_FIELDS = {f.name for f in dataclasses.fields(CpuCluster)}
_GPU_FIELDS = {f.name for f in dataclasses.fields(GpuSpec)}
_BENCH_FIELDS = {f.name for f in dataclasses.fields(BenchmarkScores)}
_THERMAL_FIELDS = {f.name for f in dataclasses.fields(ThermalParams)}
_PROFILE_FIELDS = {f.name for f in dataclasses.fields(SocProfile)}
_OPTIONAL_PROFILE_FIELDS = {"encoder_power_factor", "ranges"}
_OPTIONAL_BENCH_FIELDS = {"gfxbench_aztec_1080p_fps", "estimated"}


def profile_from_dict(obj: Any, lenient: bool = False, path: str = "profile") -> SocProfile:
    obj = _object(obj, path)
    if isinstance(obj.get("name"), str):
        path = obj["name"]
    kw = _fields(obj, _PROFILE_FIELDS, _OPTIONAL_PROFILE_FIELDS, path, lenient)
    clusters = kw["cpu_clusters"]
    if not isinstance(clusters, list):
        raise ProfileSyntaxError(f"{path}.cpu_clusters: expected a list")
    kw["cpu_clusters"] = tuple(
        _build(CpuCluster, _fields(_object(c, f"{path}.cpu_clusters[{i}]"), _CLUSTER_FIELDS,
                                   set(), f"{path}.cpu_clusters[{i}]", lenient),
               f"{path}.cpu_clusters[{i}]")
        for i, c in enumerate(clusters)
    )
    kw["gpu"] = _build(GpuSpec, _fields(_object(kw["gpu"], f"{path}.gpu"), _GPU_FIELDS, set(),
                                        f"{path}.gpu", lenient), f"{path}.gpu")
    bench = _fields(_object(kw["benchmarks"], f"{path}.benchmarks"), _BENCH_FIELDS,
                    _OPTIONAL_BENCH_FIELDS, f"{path}.benchmarks", lenient)
    est = bench.get("estimated", [])
    if not isinstance(est, list) or not all(isinstance(x, str) for x in est):
        raise ProfileSyntaxError(f"{path}.benchmarks.estimated: expected a list of names")
    bench["estimated"] = frozenset(est)
    kw["benchmarks"] = _build(BenchmarkScores, bench, f"{path}.benchmarks")
    kw["thermal"] = _build(ThermalParams,
                           _fields(_object(kw["thermal"], f"{path}.thermal"), _THERMAL_FIELDS,
                                   set(), f"{path}.thermal", lenient), f"{path}.thermal")
    ranges = kw.get("ranges", {})
    rpath = f"{path}.ranges"
    parsed_ranges = []
    for fname, bounds in sorted(_object(ranges, rpath).items()):
        b = _fields(_object(bounds, f"{rpath}.{fname}"), {"low", "high"}, set(),
                    f"{rpath}.{fname}", lenient)
        parsed_ranges.append(ValueRange(fname, b["low"], b["high"]))
    kw["ranges"] = tuple(parsed_ranges)
    return _build(SocProfile, kw, path)


def profile_to_dict(p: SocProfile) -> dict:
    bench = {
        "geekbench6_single": p.benchmarks.geekbench6_single,
        "geekbench6_multi": p.benchmarks.geekbench6_multi,
        "antutu10": p.benchmarks.antutu10,
        "gfxbench_aztec_1080p_fps": p.benchmarks.gfxbench_aztec_1080p_fps,
        "estimated": sorted(p.benchmarks.estimated),
    }
    return {
        "name": p.name,
        "process_node": p.process_node,
        "cpu_clusters": [dataclasses.asdict(c) for c in p.cpu_clusters],
        "gpu": dataclasses.asdict(p.gpu),
        "memory_bandwidth_gbps": p.memory_bandwidth_gbps,
        "tdp_sustained_w": p.tdp_sustained_w,
        "tdp_peak_w": p.tdp_peak_w,
        "total_ram_gb": p.total_ram_gb,
        "dev_accessible_ram_gb": p.dev_accessible_ram_gb,
        "benchmarks": bench,
        "thermal": dataclasses.asdict(p.thermal),
        "encoder_power_factor": p.encoder_power_factor,
        "ranges": {r.field: {"low": r.low, "high": r.high} for r in p.ranges},
    }


def serialize_profiles(profiles: Iterable[SocProfile] | Registry, override: bool = False) -> str:
    if isinstance(profiles, Mapping):
        profiles = profiles.values()
    doc = {"profiles": [profile_to_dict(p) for p in profiles], "override": override}
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def parse_profiles(document: str | bytes | Mapping, base: Registry | None = None,
                   lenient: bool = False) -> Registry:
    """Parse a profile document and merge it onto ``base`` (empty by default).

    The document is ``{"profiles": [...], "override": bool}``. Names already in
    ``base`` are only replaced when ``override`` is true.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise ProfileSyntaxError(f"malformed JSON: {e}") from None
    doc = _object(document, "document")
    unknown = set(doc) - {"profiles", "override"}
    if unknown and not lenient:
        raise ValidationError(f"document.{sorted(unknown)[0]}", "no unknown fields (strict mode)")
    items = doc.get("profiles", [])
    if not isinstance(items, list):
        raise ProfileSyntaxError("document.profiles: expected a list")
    override = doc.get("override", False)
    if not isinstance(override, bool):
        raise ProfileSyntaxError("document.override: expected a boolean")
    profiles = [profile_from_dict(p, lenient, f"profiles[{i}]") for i, p in enumerate(items)]
    return (base if base is not None else Registry()).merged(profiles, override=override)
