# %% [markdown]
# # Caputo fractional gradients
#
# The integer gradient of each weight is scaled by |w|^(1-alpha)/Gamma(2-alpha)
# and the weight decay term becomes sign(w)|w|^(2-alpha)/Gamma(3-alpha).
# At alpha = 1 both collapse to ordinary backprop with L2 decay.

# %%
import numpy as np

from fcae.fractional import caputo_reg_term, caputo_weight_factor

w = np.array([-1.0, -0.1, -1e-3, 0.0, 1e-3, 0.1, 1.0])
for alpha in (1.0, 1.3, 1.7):
    print(alpha, np.round(caputo_weight_factor(w, alpha), 3))

# %% [markdown]
# For alpha > 1 small weights get large factors. The clamp `eps` keeps the
# factor finite at w = 0, but the step size still has to absorb the extra gain.

# %%
for eps in (1e-8, 1e-3, 1e-2):
    print(eps, caputo_weight_factor(0.0, 1.7, eps))

# %%
print(caputo_reg_term(w, 1.0, 1e-3))
print(caputo_reg_term(w, 1.6, 1e-3))

# %% [markdown]
# The backward pass on a small network: at alpha = 1.7 every weight gradient
# is the alpha = 1 gradient times the factor above.

# %%
from fcae.autoencoder import LayerSpec, forward, fractional_backward, init_params

spec = LayerSpec(16, 8, 4)
params = init_params(spec, 0)
rng = np.random.default_rng(1)
X, Y = rng.uniform(0, 1, (5, 16)), rng.uniform(0, 1, (5, 16))
cache = forward(params, X)
g1 = fractional_backward(params, cache, Y, 1.0, 0.0, 1e-8)
g17 = fractional_backward(params, cache, Y, 1.7, 0.0, 1e-8)
ratio = g17.dW[0] / g1.dW[0]
print(np.allclose(ratio, caputo_weight_factor(params.W[0], 1.7)))
