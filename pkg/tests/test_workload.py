import dataclasses
import json

import pytest
from hypothesis import given, strategies as st

from xrheadroom import (
    AccountingKind,
    MissingBenchmarkError,
    Mode,
    PipelineStage,
    ResourceKind,
    UnknownSocError,
    ValidationError,
    WorkloadScenario,
    builtin_profiles,
    default_mr_scenario,
    mr_mode_capacity,
    parse_scenario,
    rescale_resolution,
    scale_stage,
)
from xrheadroom.workload import scale_scenario, scenario_to_dict, serialize_scenario


def stage(default, name):
    return next(s for s in default.stages if s.name == name)


def test_default_stage_table(default):
    got = {s.name: (s.cpu_pct, s.gpu_pct, s.ram_gb, s.kind, s.extra_power_w, s.pixel_rate_scaled)
           for s in default.stages}
    G, C, M, O = (AccountingKind.GPU_BOUND, AccountingKind.CPU_BOUND,
                  AccountingKind.CPU_GPU_MIXED, AccountingKind.OVERHEAD)
    assert got == {
        "passthrough": (2.0, 12.5, 0.5, G, 0.0, False),
        "avatar_scene": (10.0, 32.5, 1.6, G, 0.0, False),
        "segmentation": (22.5, 5.0, 0.9, C, 0.0, False),
        "composite_encode": (15.0, 12.5, 0.75, M, 2.75, True),
        "runtime_sensor_baseline": (15.0, 10.0, 1.0, O, 0.0, False),
    }
    assert (default.width_px, default.height_px, default.fps) == (1280, 720, 30.0)
    assert default.mode is Mode.MIXED_REALITY
    assert default.reference_soc == "xr2-gen2"


def test_dominant_shares(default):
    shares = tuple(s.combined_share for s in default.stages if s.combined_share is not None)
    assert shares == (12.5, 32.5, 22.5, 27.5)
    assert sum(shares) == 95.0


def test_scale_avatar_to_sd8(default, sd8, registry):
    scaled = scale_stage(stage(default, "avatar_scene"), sd8, registry)
    assert scaled.gpu_pct == pytest.approx(32.5 * 2089 / 2774)
    assert 20.0 <= scaled.gpu_pct <= 25.0
    assert scaled.reference_soc == "sd8-gen3"
    assert scaled.is_estimate  # XR2 single-core score is an estimate


def test_scale_segmentation_to_sd8(default, sd8, registry):
    scaled = scale_stage(stage(default, "segmentation"), sd8, registry)
    assert scaled.cpu_pct == pytest.approx(22.5 * 1350 / 2200)
    assert scaled.cpu_pct == pytest.approx(13.8, abs=0.05)
    assert abs(scaled.cpu_pct - 17.5) <= 5.0


def test_scale_encoder_power(default, sd8, xr2, registry):
    s = stage(default, "composite_encode")
    on_sd8 = scale_stage(s, sd8, registry)
    assert on_sd8.extra_power_w == pytest.approx(2.75 * 0.73)
    back = scale_stage(on_sd8, xr2, registry)
    assert back.extra_power_w == pytest.approx(2.75)


def test_scale_identity(default, xr2, registry):
    for s in default.stages:
        assert scale_stage(s, xr2, registry) is s


def test_scale_unknown_reference(default, sd8):
    with pytest.raises(UnknownSocError):
        scale_stage(default.stages[0], sd8, {})


def test_scale_gpu_raster(default, sd8, d9300, registry):
    s = stage(default, "avatar_scene")
    raster = scale_stage(s, sd8, registry, gpu_kind=ResourceKind.GPU_RASTER)
    assert raster.gpu_pct == pytest.approx(32.5 * 120 / 241)
    with pytest.raises(MissingBenchmarkError):
        scale_stage(s, d9300, registry, gpu_kind=ResourceKind.GPU_RASTER)


stages = st.builds(
    lambda cpu, gpu, ram, power, kind: PipelineStage(
        "s", cpu_pct=cpu, gpu_pct=gpu, ram_gb=ram, kind=kind, reference_soc="xr2-gen2",
        extra_power_w=power),
    st.floats(0, 400), st.floats(0, 400), st.floats(0, 8), st.floats(0, 5),
    st.sampled_from(list(AccountingKind)),
)
socs = st.sampled_from(sorted(builtin_profiles()))


@given(stages, socs, socs)
def test_scaling_composition(s, b, c):
    reg = builtin_profiles()
    two_step = scale_stage(scale_stage(s, reg[b], reg), reg[c], reg)
    direct = scale_stage(s, reg[c], reg)
    for f in ("cpu_pct", "gpu_pct", "extra_power_w", "ram_gb"):
        assert getattr(two_step, f) == pytest.approx(getattr(direct, f), rel=1e-9, abs=1e-12)
    assert two_step.reference_soc == direct.reference_soc


@given(stages, socs)
def test_ram_invariant_under_scaling(s, target):
    reg = builtin_profiles()
    assert scale_stage(s, reg[target], reg).ram_gb == s.ram_gb


def test_rescale_identity(default):
    assert rescale_resolution(default, 1280, 720, 30) == default


def test_rescale_1080p60(default):
    out = rescale_resolution(default, 1920, 1080, 60)
    factor = (1920 * 1080 * 60) / (1280 * 720 * 30)
    assert factor == 4.5
    ce = stage(out, "composite_encode")
    assert ce.gpu_pct == pytest.approx(12.5 * 4.5)
    assert ce.cpu_pct == pytest.approx(15 * 4.5)
    assert ce.extra_power_w == pytest.approx(2.75 * 4.5)
    assert stage(out, "avatar_scene") == stage(default, "avatar_scene")
    assert (out.width_px, out.height_px, out.fps) == (1920, 1080, 60)


def test_rescale_720p60(default):
    out = rescale_resolution(default, 1280, 720, 60)
    assert stage(out, "composite_encode").gpu_pct == 25.0


@given(st.sampled_from([(640, 360), (1280, 720), (1920, 1080), (3840, 2160)]),
       st.sampled_from([24.0, 30.0, 60.0, 90.0]),
       st.sampled_from([(640, 360), (1280, 720), (1920, 1080), (2560, 1440)]),
       st.sampled_from([30.0, 45.0, 72.0, 120.0]))
def test_rescale_multiplicative(r1, f1, r2, f2):
    base = default_mr_scenario()
    chained = rescale_resolution(rescale_resolution(base, *r1, f1), *r2, f2)
    direct = rescale_resolution(base, *r2, f2)
    for a, b in zip(chained.stages, direct.stages):
        assert a.cpu_pct == pytest.approx(b.cpu_pct, rel=1e-12)
        assert a.gpu_pct == pytest.approx(b.gpu_pct, rel=1e-12)
        assert a.extra_power_w == pytest.approx(b.extra_power_w, rel=1e-12)


def test_mr_mode_capacity(xr2):
    mr = mr_mode_capacity(xr2, Mode.MIXED_REALITY)
    assert (mr.cpu, mr.gpu) == (0.86, 0.83)
    vr = mr_mode_capacity(xr2, "vr_only")
    assert (vr.cpu, vr.gpu) == (1.0, 1.0)


def test_scenario_invariants():
    a = PipelineStage("a", 1, 1, 0, "gpu", "xr2-gen2")
    b = PipelineStage("b", 1, 1, 0, "cpu", "sd8-gen3")
    with pytest.raises(ValidationError, match="unique"):
        WorkloadScenario("x", (a, a))
    with pytest.raises(ValidationError, match="reference_soc identical"):
        WorkloadScenario("x", (a, b))
    with pytest.raises(ValidationError, match="kind"):
        PipelineStage("a", 1, 1, 0, "npu", "xr2-gen2")
    with pytest.raises(ValidationError):
        PipelineStage("a", -1, 1, 0, "gpu", "xr2-gen2")
    with pytest.raises(ValidationError, match="positive integer"):
        WorkloadScenario("x", (a,), width_px=0)


def test_scenario_json_round_trip(default):
    doc = serialize_scenario(default)
    assert parse_scenario(doc) == default
    assert json.loads(doc)["stages"][3]["kind"] == "cpu_gpu"


def test_scenario_json_validation(default):
    d = scenario_to_dict(default)
    d["stages"][0]["gpu_pct"] = 401
    with pytest.raises(ValidationError, match="400"):
        parse_scenario(json.dumps(d))
    d = scenario_to_dict(default)
    d["stages"][0]["colour"] = "blue"
    with pytest.raises(ValidationError, match="unknown"):
        parse_scenario(d)
    assert parse_scenario(d, lenient=True).stages[0].name == "passthrough"


def test_scenario_json_shared_reference():
    doc = {"name": "mini", "reference_soc": "sd8-gen3", "width_px": 1280, "height_px": 720,
           "fps": 30, "stages": [{"name": "p", "cpu_pct": 1, "gpu_pct": 2, "ram_gb": 0.1,
                                  "kind": "gpu"}]}
    sc = parse_scenario(doc)
    assert sc.stages[0].reference_soc == "sd8-gen3"
    assert sc.mode is Mode.MIXED_REALITY


def test_scale_scenario_keeps_order(default, sd8, registry):
    out = scale_scenario(default, sd8, registry)
    assert [s.name for s in out.stages] == [s.name for s in default.stages]
    assert dataclasses.replace(out, stages=()) == dataclasses.replace(default, stages=())
