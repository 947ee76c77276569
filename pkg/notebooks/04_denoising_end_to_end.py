# %% [markdown]
# # Denoising synthetic EEG-like signals end to end
#
# Clean signals are sums of sinusoids, noise is white Gaussian with sigma = 15.
# Fragments go through the Tchebichef transform, min-max scaling and the
# five-layer autoencoder. This takes about a minute on one core.

# %%
import numpy as np

from fcae.pipeline import runner
from fcae.pipeline.config import PRESETS, ExperimentConfig
from fcae.signal import snr

config = ExperimentConfig(data_source="synthetic:40x2500", sigma=15.0,
                          training=PRESETS["desk"].with_(alpha=1.0, epochs=500), output_dir="out/denoise")
result = runner.run_training(config)
print("loss", result.losses[0], "->", result.losses[-1])

# %%
clean, noisy = result.dataset.subset(result.dataset.test_idx)
snr_in = np.mean([snr(c.samples, n.samples) for c, n in zip(clean, noisy)])
snr_out, prd_out = runner.evaluate(result.model, noisy, clean)
print(f"test SNR {snr_in:.2f} dB -> {snr_out:.2f} dB, PRD {prd_out:.1f} %")

# %% [markdown]
# The checkpoint and its JSON sidecar reload to the same model.

# %%
model = runner.load_model(result.checkpoint)
out = runner.run_denoise(model, noisy[:1], clean[:1])[0]
print(f"first test signal: SNR {out.report.snr_db:.2f} dB, PRD {out.report.prd_pct:.1f} %")

# %%
import matplotlib.pyplot as plt

fig, ax = plt.subplots(figsize=(9, 3))
t = np.arange(500)
ax.plot(t, noisy[0].samples[:500], color="0.8", label="noisy")
ax.plot(t, clean[0].samples[:500], label="clean")
ax.plot(t, out.signal.samples[:500], label="denoised")
ax.legend()
fig.savefig("out/denoise/example.svg")
