"""Pipeline stages, workload scenarios and how their demands move between SoCs.

Stage demands are percentages of a *reference* SoC's CPU and GPU capacity.
``scale_stage`` re-expresses them on another chip by benchmark ratio:
single-core Geekbench for CPU work (per-frame loops are latency bound)
and GFLOPS for GPU work.
"""

from __future__ import annotations

import dataclasses
import json
from collections.abc import Mapping
from dataclasses import dataclass
from enum import Enum
from typing import Any

from .errors import ProfileSyntaxError, UnknownSocError, ValidationError
from ._validation import _build, _fields, _is_number, _nonneg, _object, _positive, _require, _text
from .soc_registry import Registry, ResourceKind, SocProfile, perf_ratio, ratio_is_estimate

MAX_STAGE_PCT = 400.0


class AccountingKind(str, Enum):
    """How a stage counts toward the single combined budget."""

    GPU_BOUND = "gpu"
    CPU_BOUND = "cpu"
    CPU_GPU_MIXED = "cpu_gpu"
    OVERHEAD = "overhead"


class Mode(str, Enum):
    VR_ONLY = "vr_only"
    MIXED_REALITY = "mixed_reality"


@dataclass(frozen=True)
class PipelineStage:
    name: str
    cpu_pct: float
    gpu_pct: float
    ram_gb: float
    kind: AccountingKind
    reference_soc: str
    extra_power_w: float = 0.0
    pixel_rate_scaled: bool = False
    # set once a scaling step consumed an estimated benchmark
    is_estimate: bool = False

    def __post_init__(self):
        _text(self.name, "name")
        _nonneg(self.cpu_pct, "cpu_pct")
        _nonneg(self.gpu_pct, "gpu_pct")
        _nonneg(self.ram_gb, "ram_gb")
        _nonneg(self.extra_power_w, "extra_power_w")
        _text(self.reference_soc, "reference_soc")
        _require(isinstance(self.pixel_rate_scaled, bool), "pixel_rate_scaled",
                 "pixel_rate_scaled is a boolean")
        try:
            object.__setattr__(self, "kind", AccountingKind(self.kind))
        except ValueError:
            raise ValidationError("kind", "kind ∈ {gpu, cpu, cpu_gpu, overhead}") from None

    @property
    def combined_share(self) -> float | None:
        """Contribution to the single 100 % budget; ``None`` for Overhead."""
        if self.kind is AccountingKind.GPU_BOUND:
            return self.gpu_pct
        if self.kind is AccountingKind.CPU_BOUND:
            return self.cpu_pct
        if self.kind is AccountingKind.CPU_GPU_MIXED:
            return self.cpu_pct + self.gpu_pct
        return None


@dataclass(frozen=True)
class WorkloadScenario:
    name: str
    stages: tuple[PipelineStage, ...]
    width_px: int = 1280
    height_px: int = 720
    fps: float = 30.0
    mode: Mode = Mode.MIXED_REALITY
    session_minutes: float = 10.0
    live_streaming: bool = False

    def __post_init__(self):
        _text(self.name, "name")
        object.__setattr__(self, "stages", tuple(self.stages))
        for dim in ("width_px", "height_px"):
            v = getattr(self, dim)
            _require(isinstance(v, int) and not isinstance(v, bool) and v > 0, dim,
                     f"{dim} is a positive integer")
        _positive(self.fps, "fps")
        _positive(self.session_minutes, "session_minutes")
        _require(isinstance(self.live_streaming, bool), "live_streaming",
                 "live_streaming is a boolean")
        try:
            object.__setattr__(self, "mode", Mode(self.mode))
        except ValueError:
            raise ValidationError("mode", "mode ∈ {vr_only, mixed_reality}") from None
        names = [s.name for s in self.stages]
        _require(len(set(names)) == len(names), "stages", "stage names unique")
        _require(len({s.reference_soc for s in self.stages}) <= 1, "stages",
                 "reference_soc identical across all stages")

    @property
    def reference_soc(self) -> str | None:
        return self.stages[0].reference_soc if self.stages else None

    @property
    def has_overhead_stage(self) -> bool:
        return any(s.kind is AccountingKind.OVERHEAD for s in self.stages)

    @property
    def pixel_rate(self) -> float:
        return self.width_px * self.height_px * self.fps

    def with_stages(self, stages) -> WorkloadScenario:
        return dataclasses.replace(self, stages=tuple(stages))


def default_mr_scenario() -> WorkloadScenario:
    """Canonical 720p30 mixed-reality compositing workload on ``xr2-gen2``.

    The four accounted stages carry the combined shares 12.5 / 32.5 / 22.5 /
    27.5 %. ``runtime_sensor_baseline`` stands in for the MR runtime's sensor
    and passthrough processing so the per-resource totals land at 64.5 % CPU
    and 72.5 % GPU.
    """
    ref = "xr2-gen2"
    G, C, M, O = (AccountingKind.GPU_BOUND, AccountingKind.CPU_BOUND,
                  AccountingKind.CPU_GPU_MIXED, AccountingKind.OVERHEAD)
    return WorkloadScenario(
        name="default-720p30-mr",
        stages=(
            PipelineStage("passthrough", cpu_pct=2.0, gpu_pct=12.5, ram_gb=0.5, kind=G,
                          reference_soc=ref),
            PipelineStage("avatar_scene", cpu_pct=10.0, gpu_pct=32.5, ram_gb=1.6, kind=G,
                          reference_soc=ref),
            PipelineStage("segmentation", cpu_pct=22.5, gpu_pct=5.0, ram_gb=0.9, kind=C,
                          reference_soc=ref),
            PipelineStage("composite_encode", cpu_pct=15.0, gpu_pct=12.5, ram_gb=0.75, kind=M,
                          reference_soc=ref, extra_power_w=2.75, pixel_rate_scaled=True),
            PipelineStage("runtime_sensor_baseline", cpu_pct=15.0, gpu_pct=10.0, ram_gb=1.0,
                          kind=O, reference_soc=ref),
        ),
        width_px=1280,
        height_px=720,
        fps=30.0,
        mode=Mode.MIXED_REALITY,
        session_minutes=10.0,
    )


def _resolve(registry: Registry | Mapping[str, SocProfile], name: str) -> SocProfile:
    try:
        return registry[name]
    except KeyError:
        raise UnknownSocError(name) from None


def scale_stage(stage: PipelineStage, to: SocProfile, registry,
                gpu_kind: ResourceKind = ResourceKind.GPU_COMPUTE) -> PipelineStage:
    """Re-express ``stage`` as a demand on ``to``.

    CPU percentages divide by the single-core ratio, GPU percentages by the
    ``gpu_kind`` ratio (GFLOPS unless ``gpu_raster`` is asked for). Fixed
    extra power follows the two chips' ``encoder_power_factor``. RAM is
    content-determined and never changes.
    """
    if stage.reference_soc == to.name:
        return stage
    ref = _resolve(registry, stage.reference_soc)
    cpu_ratio = perf_ratio(to, ref, ResourceKind.CPU_SINGLE)
    gpu_ratio = perf_ratio(to, ref, gpu_kind)
    estimate = (stage.is_estimate
                or ratio_is_estimate(to, ref, ResourceKind.CPU_SINGLE)
                or ratio_is_estimate(to, ref, gpu_kind))
    return dataclasses.replace(
        stage,
        cpu_pct=stage.cpu_pct / cpu_ratio,
        gpu_pct=stage.gpu_pct / gpu_ratio,
        extra_power_w=stage.extra_power_w * to.encoder_power_factor / ref.encoder_power_factor,
        reference_soc=to.name,
        is_estimate=estimate,
    )


def scale_scenario(scenario: WorkloadScenario, to: SocProfile, registry,
                   gpu_kind: ResourceKind = ResourceKind.GPU_COMPUTE) -> WorkloadScenario:
    return scenario.with_stages(scale_stage(s, to, registry, gpu_kind) for s in scenario.stages)


def rescale_resolution(scenario: WorkloadScenario, new_width: int, new_height: int,
                       new_fps: float) -> WorkloadScenario:
    """Move the scenario to a new resolution and frame rate.

    Stages flagged ``pixel_rate_scaled`` have CPU, GPU and extra power
    multiplied by the ratio of pixel rates; the rest are untouched.
    """
    probe = dataclasses.replace(scenario, width_px=new_width, height_px=new_height,
                                fps=new_fps, stages=())
    factor = probe.pixel_rate / scenario.pixel_rate
    stages = tuple(
        dataclasses.replace(s, cpu_pct=s.cpu_pct * factor, gpu_pct=s.gpu_pct * factor,
                            extra_power_w=s.extra_power_w * factor)
        if s.pixel_rate_scaled and factor != 1.0 else s
        for s in scenario.stages
    )
    return dataclasses.replace(probe, stages=stages)


@dataclass(frozen=True)
class CapacityMultipliers:
    cpu: float
    gpu: float


# MR mode costs 14 % of CPU and 17 % of GPU throughput versus VR-only.
_MR_CAPACITY = CapacityMultipliers(cpu=0.86, gpu=0.83)
_VR_CAPACITY = CapacityMultipliers(cpu=1.0, gpu=1.0)


def mr_mode_capacity(soc: SocProfile | None, mode: Mode) -> CapacityMultipliers:
    """Fraction of nominal CPU/GPU capacity available in ``mode``.

    ``soc`` is accepted for future per-chip values; all SoCs share the same
    multipliers today.
    """
    return _MR_CAPACITY if Mode(mode) is Mode.MIXED_REALITY else _VR_CAPACITY


# ---------------------------------------------------------------------------
# JSON scenario documents

_STAGE_FIELDS = {f.name for f in dataclasses.fields(PipelineStage)} - {"is_estimate"}
_STAGE_OPTIONAL = {"extra_power_w", "pixel_rate_scaled", "reference_soc"}
_SCENARIO_FIELDS = {f.name for f in dataclasses.fields(WorkloadScenario)}
_SCENARIO_OPTIONAL = {"mode", "session_minutes", "live_streaming", "reference_soc"}


def stage_from_dict(obj: Any, lenient: bool = False, path: str = "stage",
                    reference_soc: str | None = None) -> PipelineStage:
    obj = _object(obj, path)
    kw = _fields(obj, _STAGE_FIELDS, _STAGE_OPTIONAL, path, lenient)
    kw.setdefault("reference_soc", reference_soc)
    for pct in ("cpu_pct", "gpu_pct"):
        v = kw.get(pct)
        if _is_number(v) and v > MAX_STAGE_PCT:
            raise ValidationError(f"{path}.{pct}", f"0 ≤ {pct} ≤ {MAX_STAGE_PCT:g}")
    return _build(PipelineStage, kw, path)


def stage_to_dict(s: PipelineStage) -> dict:
    return {
        "name": s.name,
        "cpu_pct": s.cpu_pct,
        "gpu_pct": s.gpu_pct,
        "ram_gb": s.ram_gb,
        "extra_power_w": s.extra_power_w,
        "kind": s.kind.value,
        "pixel_rate_scaled": s.pixel_rate_scaled,
        "reference_soc": s.reference_soc,
    }


def scenario_from_dict(obj: Any, lenient: bool = False) -> WorkloadScenario:
    """Build a scenario from its JSON form.

    A top-level ``reference_soc`` is accepted as a default for stages that
    omit their own.
    """
    obj = _object(obj, "scenario")
    kw = _fields(obj, _SCENARIO_FIELDS | {"reference_soc"}, _SCENARIO_OPTIONAL, "scenario",
                 lenient)
    default_ref = kw.pop("reference_soc", None)
    stages = kw["stages"]
    if not isinstance(stages, list):
        raise ProfileSyntaxError("scenario.stages: expected a list")
    kw["stages"] = tuple(stage_from_dict(s, lenient, f"scenario.stages[{i}]", default_ref)
                         for i, s in enumerate(stages))
    return _build(WorkloadScenario, kw, "scenario")


def scenario_to_dict(sc: WorkloadScenario) -> dict:
    return {
        "name": sc.name,
        "stages": [stage_to_dict(s) for s in sc.stages],
        "width_px": sc.width_px,
        "height_px": sc.height_px,
        "fps": sc.fps,
        "mode": sc.mode.value,
        "session_minutes": sc.session_minutes,
        "live_streaming": sc.live_streaming,
    }


def parse_scenario(document: str | bytes | Mapping, lenient: bool = False) -> WorkloadScenario:
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise ProfileSyntaxError(f"malformed JSON: {e}") from None
    return scenario_from_dict(document, lenient)


def serialize_scenario(sc: WorkloadScenario) -> str:
    return json.dumps(scenario_to_dict(sc), indent=2) + "\n"
