# %% [markdown]
# # Compression sweeps and energy profiles
#
# Trains two fractional orders, then compresses every layer at increasing
# C_R (fraction of rank removed) and measures test SNR. Run
# 04_denoising_end_to_end.py first if you only want one model.

# %%
from fcae.pipeline import report, runner
from fcae.pipeline.config import SWEEP_RATIOS, PRESETS, ExperimentConfig

models = []
for alpha in (1.0, 1.7):
    config = ExperimentConfig(data_source="synthetic:40x2500", sigma=15.0,
                              training=PRESETS["desk"].with_(alpha=alpha), output_dir=f"out/sweep/a{alpha}")
    result = runner.run_training(config)
    models.append(result.model)
clean, noisy = result.dataset.subset(result.dataset.test_idx)

# %%
ratios = (0.0,) + SWEEP_RATIOS
cells = runner.run_sweep(models, noisy, clean, ratios, ((1, 2, 3, 4), (1, 4), (2, 3)))
for c in cells:
    print(c.alpha, c.layer_subset, c.c_r, round(c.mean_snr_db, 2))

# %% [markdown]
# Energy profile: the fraction of singular values needed to keep 90% of each
# layer's singular-value sum.

# %%
profiles = {f"a{m.alpha}": runner.energy_profile(m.params) for m in models}
for label, profile in profiles.items():
    for layer, points in profile.items():
        print(label, layer, min(f for f, e in points if e >= 0.9))

# %%
for path in report.emit_report(cells, profiles, "out/sweep"):
    print(path)
