"""Feasibility verdicts and multi-SoC comparisons."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import UnknownSocError
from .soc_registry import Registry, ResourceKind, SocProfile, perf_ratio
from .thermal import PowerBreakdown, power_draw, time_to_throttle
from .utilization import UtilizationReport, compute_utilization
from .workload import WorkloadScenario

# SoCs at or below this peak envelope cannot carry a live stream on top of MR
STREAMING_PEAK_TDP_LIMIT_W = 10.0

# SoCs with published per-stage load targets; others are pure predictions
REFERENCE_TARGET_SOCS = frozenset({"xr2-gen2", "sd8-gen3"})
PREDICTED_LABEL = "predicted (no reference targets)"

ANNOTATED_RATIOS = (ResourceKind.CPU_SINGLE, ResourceKind.CPU_MULTI,
                    ResourceKind.GPU_COMPUTE, ResourceKind.MEM_BW)


class VerdictKind(str, Enum):
    SUSTAINED_FEASIBLE = "SustainedFeasible"
    BURST_FEASIBLE = "BurstFeasible"
    INFEASIBLE = "Infeasible"

    @property
    def rank(self) -> int:
        """Higher is better."""
        return {"SustainedFeasible": 2, "BurstFeasible": 1, "Infeasible": 0}[self.value]


@dataclass(frozen=True)
class Reason:
    code: str
    detail: str | None = None

    def __str__(self) -> str:
        return self.code if self.detail is None else f"{self.code}({self.detail})"

    @classmethod
    def parse(cls, text: str) -> Reason:
        if text.endswith(")") and "(" in text:
            code, _, detail = text[:-1].partition("(")
            return cls(code, detail)
        return cls(text)


def resource_over(resource: str) -> Reason:
    return Reason("ResourceOver", resource)


RAM_OVER_DEV_BUDGET = Reason("RamOverDevBudget")
STREAMING_UNSUPPORTED = Reason("StreamingUnsupported")


def thermal_limited(minutes: float) -> Reason:
    return Reason("ThermalLimited", f"{minutes:.2f}")


@dataclass(frozen=True)
class FeasibilityVerdict:
    kind: VerdictKind
    minutes: float | None = None
    reasons: tuple[Reason, ...] = ()

    def __post_init__(self):
        if self.kind is VerdictKind.INFEASIBLE and not self.reasons:
            raise ValueError("an Infeasible verdict needs at least one reason")
        if self.kind is VerdictKind.BURST_FEASIBLE and self.minutes is None:
            raise ValueError("BurstFeasible carries the throttle time")

    def __str__(self) -> str:
        head = self.kind.value
        if self.kind is VerdictKind.BURST_FEASIBLE:
            head += f"({self.minutes:.2f} min)"
        if self.reasons:
            head += " [" + ", ".join(str(r) for r in self.reasons) + "]"
        return head

    def at_least_as_good_as(self, other: FeasibilityVerdict) -> bool:
        if self.kind.rank != other.kind.rank:
            return self.kind.rank > other.kind.rank
        if self.kind is VerdictKind.BURST_FEASIBLE:
            return self.minutes >= other.minutes
        return True


def _classify(report: UtilizationReport, power: PowerBreakdown, soc: SocProfile,
              scenario: WorkloadScenario) -> tuple[FeasibilityVerdict, float | None]:
    reasons = []
    if report.cpu_total_pct > 100.0:
        reasons.append(resource_over("cpu"))
    if report.gpu_total_pct > 100.0:
        reasons.append(resource_over("gpu"))
    if report.ram_app_visible_gb > soc.dev_accessible_ram_gb:
        reasons.append(RAM_OVER_DEV_BUDGET)
    infeasible = bool(reasons)

    minutes = time_to_throttle(power.total_w, soc.thermal)
    if minutes is not None:
        reasons.append(thermal_limited(minutes))
    if scenario.live_streaming:
        reasons.append(STREAMING_UNSUPPORTED)
        if soc.tdp_peak_w <= STREAMING_PEAK_TDP_LIMIT_W:
            infeasible = True

    if infeasible:
        kind = VerdictKind.INFEASIBLE
    elif minutes is not None:
        kind = VerdictKind.BURST_FEASIBLE
    else:
        kind = VerdictKind.SUSTAINED_FEASIBLE
    burst = minutes if kind is VerdictKind.BURST_FEASIBLE else None
    return FeasibilityVerdict(kind, burst, tuple(reasons)), minutes


def verdict(scenario: WorkloadScenario, soc: SocProfile, registry,
            apply_mode_capacity: bool | None = None) -> FeasibilityVerdict:
    """Classify ``scenario`` on ``soc``.

    Infeasible if CPU or GPU total exceeds 100 % (exactly 100 % is allowed),
    if the app RAM exceeds the developer budget, or if a live stream is asked
    of an SoC peaking at ``STREAMING_PEAK_TDP_LIMIT_W`` or less. Otherwise
    BurstFeasible when the load eventually throttles, else SustainedFeasible.
    """
    report = compute_utilization(scenario, soc, registry, apply_mode_capacity)
    power = power_draw(report, scenario, soc)
    return _classify(report, power, soc, scenario)[0]


@dataclass(frozen=True)
class ComparisonRow:
    report: UtilizationReport
    power: PowerBreakdown
    throttle_minutes: float | None
    verdict: FeasibilityVerdict
    label: str | None = None

    @property
    def soc(self) -> str:
        return self.report.soc


@dataclass(frozen=True)
class ComparisonReport:
    scenario: str
    baseline: str
    rows: tuple[ComparisonRow, ...]
    # soc name -> ratio kind -> capability ratio over baseline (None when missing)
    ratios: dict[str, dict[str, float | None]] = field(default_factory=dict)

    def row(self, soc: str) -> ComparisonRow:
        for r in self.rows:
            if r.soc == soc:
                return r
        raise UnknownSocError(soc)


def evaluate(scenario: WorkloadScenario, soc: SocProfile, registry,
             apply_mode_capacity: bool | None = None) -> ComparisonRow:
    """Scale, aggregate, convert to power and classify on one SoC."""
    report = compute_utilization(scenario, soc, registry, apply_mode_capacity)
    power = power_draw(report, scenario, soc)
    v, minutes = _classify(report, power, soc, scenario)
    label = None if soc.name in REFERENCE_TARGET_SOCS else PREDICTED_LABEL
    return ComparisonRow(report, power, minutes, v, label)


def compare(scenario: WorkloadScenario, soc_names, registry: Registry,
            apply_mode_capacity: bool | None = None) -> ComparisonReport:
    """One row per SoC in ``soc_names`` order, plus capability ratios of each
    SoC over the scenario's reference SoC."""
    soc_names = list(soc_names)
    if not soc_names:
        raise ValueError("compare needs at least one SoC")
    socs = [registry[n] for n in soc_names]
    baseline_name = scenario.reference_soc or soc_names[0]
    baseline = registry[baseline_name]
    rows = tuple(evaluate(scenario, s, registry, apply_mode_capacity) for s in socs)
    ratios = {}
    for s in socs:
        entry = {}
        for kind in ANNOTATED_RATIOS:
            try:
                entry[kind.value] = perf_ratio(s, baseline, kind)
            except LookupError:
                entry[kind.value] = None
        ratios[s.name] = entry
    return ComparisonReport(scenario.name, baseline_name, rows, ratios)
