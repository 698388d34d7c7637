# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Calibrating the penalty by dimension jump
#
# The penalty has a known shape, proportional to the model dimension, and an
# unknown constant kappa.  As kappa grows the selected degree falls; it
# usually drops sharply at one value, and twice that value is used.

# %%
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from circcensor import REFERENCE_MODELS, generate_sample, replication_rng
from circcensor.sieve import calibrate_kappa, fit_coefficients, select_model, selection_path

out = Path(__file__).resolve().parent / "output"
out.mkdir(exist_ok=True)

model = REFERENCE_MODELS[1]
smp = generate_sample(model.distribution, model.censoring, 500, replication_rng(7))
a_hat = fit_coefficients(smp)

# %% [markdown]
# ## The exact selection path
#
# `selection_path` returns every kappa where the selected degree changes.

# %%
breaks, degrees = selection_path(a_hat, smp.n, smp.delta_bar)
kappa_hat = calibrate_kappa(a_hat, smp.n, smp.delta_bar)
print(f"{len(breaks)} changes; kappa_hat = {kappa_hat:.3f}")
print("degree selected at kappa_hat:", select_model(a_hat, smp.n, smp.delta_bar, kappa_hat))

fig, ax = plt.subplots(figsize=(7, 4))
ax.step(np.concatenate([[1e-3], breaks]), 2 * degrees + 1, where="post")
ax.axvline(kappa_hat / 2, color="grey", ls=":", label="largest jump")
ax.axvline(kappa_hat, color="k", ls="--", label="kappa_hat")
ax.set_xscale("log")
ax.set_xlim(1e-2, 300)
ax.set_xlabel("kappa")
ax.set_ylabel("selected dimension 2m+1")
ax.legend()
fig.tight_layout()
fig.savefig(out / "dimension_jump.png", dpi=120)

# %% [markdown]
# ## Spread of kappa_hat over samples

# %%
values = []
for i in range(50):
    s = generate_sample(model.distribution, model.censoring, 500, replication_rng(7, i))
    a = fit_coefficients(s)
    values.append(calibrate_kappa(a, s.n, s.delta_bar))
print("kappa_hat quartiles:", np.round(np.percentile(values, [25, 50, 75]), 3))
