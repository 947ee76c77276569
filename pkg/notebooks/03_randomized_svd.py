# %% [markdown]
# # Randomized SVD and weight compression
#
# A Gaussian sketch plus a few power iterations gives a near-optimal low-rank
# factorization. The optimized rank keeps 90% of the singular-value sum.

# %%
import numpy as np

from fcae.rsvd import check_optimized_rank, compress_at_ratio, compress_opt, energy_fraction, exact_svd, rsvd, \
    singular_values

rng = np.random.default_rng(0)
A = rng.standard_normal((150, 250))
for p in (1, 2, 5):
    err = np.linalg.norm(A - rsvd(A, 10, p, seed=1).reconstruct())
    best = np.linalg.norm(A - exact_svd(A, 10).reconstruct())
    print(f"power iterations {p}: error / optimal = {err / best:.4f}")

# %% [markdown]
# A matrix with a decaying spectrum, closer to trained weights.

# %%
U, _ = np.linalg.qr(rng.standard_normal((150, 150)))
V, _ = np.linalg.qr(rng.standard_normal((250, 150)))
W = (U * 0.9 ** np.arange(150)) @ V.T
S = singular_values(W)
r = check_optimized_rank(S)
print("optimized rank", r, "energy, F_s =", energy_fraction(S, r))

# %%
Wc = compress_opt(W)
print("relative error", np.linalg.norm(W - Wc) / np.linalg.norm(W))
for c_r in (0.5, 0.8, 0.95):
    Wr = compress_at_ratio(W, c_r)
    print(c_r, "rank", np.linalg.matrix_rank(Wr), "rel err", round(float(np.linalg.norm(W - Wr) / np.linalg.norm(W)), 4))
