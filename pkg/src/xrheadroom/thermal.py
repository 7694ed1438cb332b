"""Power draw and a single-node RC thermal model.

The die/skin lumped node obeys ``C dT/dt = P - (T - T_amb) / R``, so for a
constant power step from ambient

    T(t) = T_amb + P R (1 - exp(-t / (R C)))

and throttling starts at the first crossing of ``throttle_temp_c``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .soc_registry import SocProfile, ThermalParams
from .utilization import UtilizationReport
from .workload import WorkloadScenario


@dataclass(frozen=True)
class PowerBreakdown:
    idle_w: float
    cpu_w: float
    gpu_w: float
    fixed_w: float
    total_w: float


def power_draw(report: UtilizationReport, scenario: WorkloadScenario | None,
               soc: SocProfile) -> PowerBreakdown:
    """Watts drawn while running the workload summarised by ``report``.

    CPU and GPU draw are linear in utilization up to the profile's
    ``cpu_max_power_w`` / ``gpu_max_power_w``; fixed-function draw (the video
    encoder) is added on top. ``scenario`` is only used to check that the
    report belongs to it.
    """
    if report.soc != soc.name:
        raise ValueError(f"report was computed for {report.soc!r}, not {soc.name!r}")
    if scenario is not None and report.scenario != scenario.name:
        raise ValueError(f"report was computed for scenario {report.scenario!r}")
    t = soc.thermal
    idle = t.idle_power_w
    cpu = report.cpu_total_pct / 100.0 * t.cpu_max_power_w
    gpu = report.gpu_total_pct / 100.0 * t.gpu_max_power_w
    fixed = report.fixed_power_w
    return PowerBreakdown(idle, cpu, gpu, fixed, idle + cpu + gpu + fixed)


@dataclass(frozen=True)
class ThermalTrace:
    timestep_s: float
    temps_c: tuple[float, ...]
    throttle_index: int | None

    @property
    def times_s(self) -> np.ndarray:
        return np.arange(len(self.temps_c)) * self.timestep_s

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["time_s", "temp_c"])
        for t, temp in zip(self.times_s, self.temps_c):
            w.writerow([f"{t:.2f}", f"{temp:.4f}"])
        return buf.getvalue()


def steady_state_c(power_w: float, params: ThermalParams) -> float:
    return params.ambient_c + power_w * params.thermal_resistance_k_per_w


def temp_trajectory(power_w: float, params: ThermalParams, duration_s: float,
                    timestep_s: float = 1.0) -> ThermalTrace:
    """Sample the constant-power step response at ``k * timestep_s``."""
    if timestep_s <= 0:
        raise ValueError("timestep_s must be > 0")
    if duration_s < timestep_s:
        raise ValueError("duration_s must be ≥ timestep_s")
    if power_w < 0:
        raise ValueError("power_w must be ≥ 0")
    n = int(math.floor(duration_s / timestep_s + 1e-9)) + 1
    t = np.arange(n) * timestep_s
    rise = power_w * params.thermal_resistance_k_per_w
    temps = params.ambient_c + rise * -np.expm1(-t / params.time_constant_s)
    # exp rounding must not break monotonicity at the tail
    temps = np.maximum.accumulate(temps)
    hot = np.nonzero(temps >= params.throttle_temp_c)[0]
    idx = int(hot[0]) if hot.size else None
    return ThermalTrace(timestep_s, tuple(float(x) for x in temps), idx)


def time_to_throttle(power_w: float, params: ThermalParams) -> float | None:
    """Minutes from ambient until the throttle threshold, or ``None`` when the
    steady-state temperature never exceeds it (sustainable load)."""
    if power_w < 0:
        raise ValueError("power_w must be ≥ 0")
    rise = power_w * params.thermal_resistance_k_per_w
    margin = params.throttle_temp_c - params.ambient_c
    if rise <= margin:
        return None
    seconds = params.time_constant_s * math.log(rise / (rise - margin))
    return seconds / 60.0


def sustainable_power_w(params: ThermalParams) -> float:
    """Largest constant power that never reaches the throttle threshold."""
    return (params.throttle_temp_c - params.ambient_c) / params.thermal_resistance_k_per_w
