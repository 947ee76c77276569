# %% [markdown]
# # Discrete Tchebichef moments
#
# Fragments of 250 samples are mapped to 250 moments with an orthonormal
# polynomial basis. The transform is a plain matrix product, so the inverse is
# the transpose.

# %%
import numpy as np

from fcae.tchebichef import build_basis, forward_moments, inverse_moments

basis = build_basis(250, 250)
Q = basis.Q
print("max |QQ^T - I| =", np.abs(Q @ Q.T - np.eye(250)).max())

# %% [markdown]
# Low orders are smooth, high orders oscillate. A smooth fragment therefore
# concentrates its energy in the first moments.

# %%
x = np.arange(250)
frag = 30 * np.sin(2 * np.pi * 3 * x / 250) + 10 * np.cos(2 * np.pi * 7 * x / 250)
m = forward_moments(frag, basis).coeffs
energy = np.cumsum(m ** 2) / np.sum(m ** 2)
print("moments needed for 99% energy:", int(np.searchsorted(energy, 0.99)) + 1)

# %%
back = inverse_moments(m, basis)
print("round trip error:", np.abs(back - frag).max())

# %% [markdown]
# Truncating the moment vector is a crude low-pass filter; the autoencoder
# learns a better map from noisy moments to clean ones.

# %%
noisy = frag + np.random.default_rng(0).normal(0, 15, 250)
mn = forward_moments(noisy, basis).coeffs
for keep in (10, 25, 50, 250):
    est = inverse_moments(np.where(np.arange(250) < keep, mn, 0.0), basis)
    print(keep, "moments: rms error", round(float(np.sqrt(np.mean((est - frag) ** 2))), 2))
