# %% [markdown]
# # Norms and products on a frequency lattice
#
# A function is stored through samples of its Fourier transform.  The
# weighted norm `||f||_{B^s}` is a lattice sum, and pointwise products become
# convolutions of the samples.

# %%
import math

import numpy as np

from spectral_barron import Gaussian, Lorentzian1D, barron_norm, eval_spatial, make_grid, multiply, sample
from spectral_barron.spectral import product_bound

grid = make_grid(1, 12.0, 481)
g = sample(Gaussian(1, 0.5), grid)
for s in (0, 1, 2):
    print(f"||exp(-x^2/2)||_B{s} = {barron_norm(g, s):.10f}")
print("2 pi =", 2 * math.pi, " 4 pi =", 4 * math.pi)

# %% [markdown]
# The sup norm is controlled by the B^0 norm: |f(x)| <= (2 pi)^-1 ||f||_{B^0}.

# %%
xs = np.linspace(-4, 4, 9)
print(np.round(eval_spatial(g, xs).real, 6))
print("bound:", barron_norm(g) / (2 * math.pi))

# %% [markdown]
# Products.  For a nonnegative spectrum the product estimate is an equality.
# The Lorentzian 1/(1+x^2) has a cusp in frequency, so it needs a much finer
# lattice before the lattice error drops below 1e-4.

# %%
p, lost = multiply(g, g)
print("Gaussian: ||g^2|| =", barron_norm(p), " bound =", product_bound(g, g, 0.0), " lost mass =", lost)

fine = make_grid(1, 20.0, 8001)
lor = sample(Lorentzian1D(), fine)
q, lost = multiply(lor, lor)
print("Lorentzian: ||l^2|| =", barron_norm(q), " bound =", product_bound(lor, lor, 0.0))
coarse = sample(Lorentzian1D(), grid)
print("Lorentzian B^0 error on the coarse grid:", abs(barron_norm(coarse) - 2 * math.pi))
