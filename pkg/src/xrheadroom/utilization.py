"""Aggregate a scenario's stage demands on one SoC.

Two views are produced side by side:

* per-resource totals (sum of every stage's CPU % and GPU %, Overhead
  included), and
* single-budget accounting, where each non-Overhead stage contributes one
  *combined share* keyed by its dominant resource and headroom is whatever
  is left of 100 %.

The two views intentionally differ: on the default scenario the GPU total
is 72.5 % while the combined shares sum to 95 %.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import ConflictingOverheadModelError
from .soc_registry import SocProfile
from .workload import (
    AccountingKind,
    WorkloadScenario,
    mr_mode_capacity,
    scale_scenario,
)


class BudgetFlag(str, Enum):
    CPU_OVER = "CpuOver"
    GPU_OVER = "GpuOver"
    RAM_OVER_DEV_BUDGET = "RamOverDevBudget"
    RAM_OVER_TOTAL = "RamOverTotal"


@dataclass(frozen=True)
class StageUsage:
    """One stage as seen on the target SoC (scaled and mode-adjusted)."""

    name: str
    kind: AccountingKind
    cpu_pct: float
    gpu_pct: float
    combined_share: float | None
    ram_gb: float
    extra_power_w: float


@dataclass(frozen=True)
class RamAccount:
    ram_used_gb: float
    ram_os_reserved_gb: float
    ram_app_visible_gb: float
    flags: frozenset[BudgetFlag]


@dataclass(frozen=True)
class UtilizationReport:
    soc: str
    scenario: str
    stages: tuple[StageUsage, ...]
    cpu_total_pct: float
    gpu_total_pct: float
    combined_total_pct: float
    headroom_pct: float
    ram_used_gb: float
    ram_os_reserved_gb: float
    ram_app_visible_gb: float
    over_budget_flags: frozenset[BudgetFlag]
    is_estimate: bool
    mode_capacity_applied: bool = False

    @property
    def combined_shares(self) -> tuple[tuple[str, float], ...]:
        return tuple((s.name, s.combined_share) for s in self.stages
                     if s.combined_share is not None)

    @property
    def fixed_power_w(self) -> float:
        return sum(s.extra_power_w for s in self.stages)


def ram_accounting(scenario: WorkloadScenario, soc: SocProfile) -> RamAccount:
    """RAM in use on ``soc``: the OS reservation plus every stage's footprint."""
    os_reserved = soc.total_ram_gb - soc.dev_accessible_ram_gb
    app_visible = sum(s.ram_gb for s in scenario.stages)
    used = os_reserved + app_visible
    flags = set()
    if app_visible > soc.dev_accessible_ram_gb:
        flags.add(BudgetFlag.RAM_OVER_DEV_BUDGET)
    if used > soc.total_ram_gb:
        flags.add(BudgetFlag.RAM_OVER_TOTAL)
    return RamAccount(used, os_reserved, app_visible, frozenset(flags))


def compute_utilization(scenario: WorkloadScenario, soc: SocProfile, registry,
                        apply_mode_capacity: bool | None = None) -> UtilizationReport:
    """Utilization of ``scenario`` on ``soc``.

    Stages referenced to another chip are scaled to ``soc`` first.

    ``apply_mode_capacity`` controls the MR-mode capacity penalty. ``None``
    (default) applies it only to MixedReality scenarios without an Overhead
    stage; ``True`` forces it, which is an error when an Overhead stage is
    present because both model the same runtime cost; ``False`` disables it.
    """
    if apply_mode_capacity and scenario.has_overhead_stage:
        raise ConflictingOverheadModelError(
            f"scenario {scenario.name!r} has an Overhead stage; MR capacity multipliers "
            "would double count the runtime cost")
    if apply_mode_capacity is None:
        apply_mode_capacity = not scenario.has_overhead_stage
    mult = mr_mode_capacity(soc, scenario.mode if apply_mode_capacity else "vr_only")
    applied = apply_mode_capacity and (mult.cpu != 1.0 or mult.gpu != 1.0)

    scaled = scale_scenario(scenario, soc, registry)
    usages = []
    for s in scaled.stages:
        cpu = s.cpu_pct / mult.cpu
        gpu = s.gpu_pct / mult.gpu
        if s.kind is AccountingKind.GPU_BOUND:
            share = gpu
        elif s.kind is AccountingKind.CPU_BOUND:
            share = cpu
        elif s.kind is AccountingKind.CPU_GPU_MIXED:
            share = cpu + gpu
        else:
            share = None
        usages.append(StageUsage(s.name, s.kind, cpu, gpu, share, s.ram_gb, s.extra_power_w))

    cpu_total = sum(u.cpu_pct for u in usages)
    gpu_total = sum(u.gpu_pct for u in usages)
    combined = sum(u.combined_share for u in usages if u.combined_share is not None)
    ram = ram_accounting(scaled, soc)
    flags = set(ram.flags)
    if cpu_total > 100.0:
        flags.add(BudgetFlag.CPU_OVER)
    if gpu_total > 100.0:
        flags.add(BudgetFlag.GPU_OVER)
    return UtilizationReport(
        soc=soc.name,
        scenario=scenario.name,
        stages=tuple(usages),
        cpu_total_pct=cpu_total,
        gpu_total_pct=gpu_total,
        combined_total_pct=combined,
        headroom_pct=100.0 - combined,
        ram_used_gb=ram.ram_used_gb,
        ram_os_reserved_gb=ram.ram_os_reserved_gb,
        ram_app_visible_gb=ram.ram_app_visible_gb,
        over_budget_flags=frozenset(flags),
        is_estimate=any(s.is_estimate for s in scaled.stages),
        mode_capacity_applied=applied,
    )
