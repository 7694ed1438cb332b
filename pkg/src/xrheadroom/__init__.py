"""Utilization, power and time-to-throttle simulator for mixed-reality
compositing pipelines on ARM SoCs."""

from .errors import (
    ConflictingOverheadModelError,
    DuplicateNameError,
    MissingBenchmarkError,
    ProfileSyntaxError,
    UnknownSocError,
    UnsupportedFormatError,
    ValidationError,
    XrHeadroomError,
)
from .feasibility import (
    ComparisonReport,
    ComparisonRow,
    FeasibilityVerdict,
    Reason,
    VerdictKind,
    compare,
    evaluate,
    verdict,
)
from .report import render_report, report_from_json
from .soc_registry import (
    BenchmarkScores,
    CpuCluster,
    GpuSpec,
    Registry,
    ResourceKind,
    SocProfile,
    ThermalParams,
    ValueRange,
    builtin_profiles,
    parse_profiles,
    perf_ratio,
    serialize_profiles,
)
from .thermal import (
    PowerBreakdown,
    ThermalTrace,
    power_draw,
    temp_trajectory,
    time_to_throttle,
)
from .utilization import BudgetFlag, UtilizationReport, compute_utilization, ram_accounting
from .workload import (
    AccountingKind,
    Mode,
    PipelineStage,
    WorkloadScenario,
    default_mr_scenario,
    mr_mode_capacity,
    parse_scenario,
    rescale_resolution,
    scale_stage,
)

__version__ = "0.1.0"
