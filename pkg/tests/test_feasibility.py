import dataclasses

import pytest
from hypothesis import given, settings, strategies as st

from xrheadroom import (
    AccountingKind,
    FeasibilityVerdict,
    Mode,
    PipelineStage,
    Reason,
    UnknownSocError,
    VerdictKind,
    WorkloadScenario,
    builtin_profiles,
    compare,
    compute_utilization,
    default_mr_scenario,
    rescale_resolution,
    verdict,
)
from xrheadroom.feasibility import PREDICTED_LABEL


def test_default_xr2_is_burst(default, xr2, registry):
    v = verdict(default, xr2, registry)
    assert v.kind is VerdictKind.BURST_FEASIBLE
    assert v.minutes == pytest.approx(7.556, abs=1e-3)
    assert 5 <= v.minutes <= 10
    assert Reason("ThermalLimited", "7.56") in v.reasons


def test_default_sd8_is_sustained(default, sd8, registry):
    v = verdict(default, sd8, registry)
    assert v.kind is VerdictKind.SUSTAINED_FEASIBLE
    assert v.reasons == ()


def test_1080p60_xr2_infeasible(default, xr2, registry):
    sc = rescale_resolution(default, 1920, 1080, 60)
    assert compute_utilization(sc, xr2, registry).gpu_total_pct == pytest.approx(116.25)
    v = verdict(sc, xr2, registry)
    assert v.kind is VerdictKind.INFEASIBLE
    assert Reason("ResourceOver", "gpu") in v.reasons
    assert Reason("ResourceOver", "cpu") in v.reasons


def test_exactly_100_percent_is_not_infeasible(xr2, registry):
    full = PipelineStage("full", 0, 100.0, 0, "gpu", "xr2-gen2")
    v = verdict(WorkloadScenario("f", (full,), mode="vr_only"), xr2, registry)
    assert v.kind is not VerdictKind.INFEASIBLE


def test_ram_over_budget_infeasible(default, xr2, registry):
    extra = PipelineStage("extra", 0, 0, 1.01, "gpu", "xr2-gen2")
    v = verdict(default.with_stages([*default.stages, extra]), xr2, registry)
    assert v.kind is VerdictKind.INFEASIBLE
    assert Reason("RamOverDevBudget") in v.reasons


def test_live_streaming(default, xr2, sd8, registry):
    live = dataclasses.replace(default, live_streaming=True)
    v = verdict(live, xr2, registry)
    assert v.kind is VerdictKind.INFEASIBLE
    assert Reason("StreamingUnsupported") in v.reasons
    v8 = verdict(live, sd8, registry)
    assert Reason("StreamingUnsupported") in v8.reasons
    assert v8.kind is VerdictKind.SUSTAINED_FEASIBLE


def test_verdict_invariants():
    with pytest.raises(ValueError):
        FeasibilityVerdict(VerdictKind.INFEASIBLE)
    with pytest.raises(ValueError):
        FeasibilityVerdict(VerdictKind.BURST_FEASIBLE)
    assert Reason.parse("ResourceOver(gpu)") == Reason("ResourceOver", "gpu")
    assert Reason.parse("RamOverDevBudget") == Reason("RamOverDevBudget")


def test_compare_headrooms(default, registry):
    c = compare(default, ["xr2-gen2", "sd8-gen3"], registry)
    assert [r.soc for r in c.rows] == ["xr2-gen2", "sd8-gen3"]
    assert c.rows[0].report.headroom_pct == 5.0
    assert c.rows[1].report.headroom_pct == pytest.approx(34, abs=3)
    assert c.ratios["sd8-gen3"]["cpu_multi"] == pytest.approx(1.847, abs=1e-3)
    assert 1.5 <= c.ratios["sd8-gen3"]["cpu_multi"] <= 2.0
    assert c.ratios["sd8-gen3"]["mem_bw"] == pytest.approx(1.2)
    assert c.baseline == "xr2-gen2"


def test_compare_single_row_is_projection(default, xr2, registry):
    c = compare(default, ["xr2-gen2"], registry)
    assert len(c.rows) == 1
    assert c.rows[0].report == compute_utilization(default, xr2, registry)


def test_compare_labels_and_errors(default, registry):
    c = compare(default, ["dimensity-9300", "xr2-gen2"], registry)
    assert c.row("dimensity-9300").label == PREDICTED_LABEL
    assert c.row("xr2-gen2").label is None
    with pytest.raises(UnknownSocError):
        compare(default, ["xr2-gen2", "snapdragon-9000"], registry)
    with pytest.raises(ValueError):
        compare(default, [], registry)


@given(st.permutations(sorted(builtin_profiles())))
def test_compare_permutation_equivariant(names):
    reg = builtin_profiles()
    sc = default_mr_scenario()
    ref = compare(sc, sorted(reg), reg)
    perm = compare(sc, names, reg)
    assert [r.soc for r in perm.rows] == list(names)
    for row in perm.rows:
        assert row == ref.row(row.soc)
    assert perm.ratios == ref.ratios


added_stage = st.tuples(st.floats(0, 60), st.floats(0, 60), st.floats(0, 1.5), st.floats(0, 3),
                        st.sampled_from([AccountingKind.GPU_BOUND, AccountingKind.CPU_BOUND,
                                         AccountingKind.CPU_GPU_MIXED]))


def _with_added(sc, spec, i):
    cpu, gpu, ram, power, kind = spec
    extra = PipelineStage(f"added{i}", cpu, gpu, ram, kind, sc.reference_soc or "xr2-gen2",
                          extra_power_w=power)
    return sc.with_stages([*sc.stages, extra])


@settings(max_examples=300, deadline=None)
@given(st.lists(added_stage, min_size=1, max_size=4), st.sampled_from(sorted(builtin_profiles())),
       st.booleans(), st.sampled_from(list(Mode)))
def test_verdict_monotone_under_stage_addition(extras, soc, keep_overhead, mode):
    reg = builtin_profiles()
    base = default_mr_scenario()
    if not keep_overhead:
        base = base.with_stages(s for s in base.stages if s.kind is not AccountingKind.OVERHEAD)
    base = dataclasses.replace(base, mode=mode)
    prev = verdict(base, reg[soc], reg)
    sc = base
    for i, spec in enumerate(extras):
        sc = _with_added(sc, spec, i)
        cur = verdict(sc, reg[soc], reg)
        assert prev.at_least_as_good_as(cur)
        prev = cur
