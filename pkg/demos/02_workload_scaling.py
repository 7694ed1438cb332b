# %% [markdown]
# # Moving the MR workload between chips
#
# Stage demands are percentages of the reference chip. Scaling divides CPU
# work by the single-core ratio and GPU work by the GFLOPS ratio.

# %%
from xrheadroom import builtin_profiles, default_mr_scenario, rescale_resolution, scale_stage

reg = builtin_profiles()
sc = default_mr_scenario()
print(f"{'stage':25s} {'xr2 cpu':>8s} {'xr2 gpu':>8s} {'sd8 cpu':>8s} {'sd8 gpu':>8s}")
for s in sc.stages:
    t = scale_stage(s, reg["sd8-gen3"], reg)
    print(f"{s.name:25s} {s.cpu_pct:8.1f} {s.gpu_pct:8.1f} {t.cpu_pct:8.1f} {t.gpu_pct:8.1f}")

# %% [markdown]
# Resolution and frame rate only touch stages marked `pixel_rate_scaled`
# (compositing and encoding).

# %%
for w, h, fps in [(1280, 720, 30), (1280, 720, 60), (1920, 1080, 30), (1920, 1080, 60)]:
    enc = next(s for s in rescale_resolution(sc, w, h, fps).stages
               if s.name == "composite_encode")
    print(f"{w}x{h}@{fps}: encode cpu {enc.cpu_pct:.1f} gpu {enc.gpu_pct:.1f} "
          f"extra {enc.extra_power_w:.2f} W")
