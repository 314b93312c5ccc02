# %% [markdown]
# # Performance of the banded transform versus register size
#
# We sweep the smallest five semiprimes for each register size n and average
# the normalised success probability over each order spectrum. Taking the
# log, the decay is close to linear in n, with a rate falling as 4^-b.
#
# The full sweep to n = 21 takes about half a minute. Set `N_MAX` lower for a
# quicker look.

# %%
from bandqft import analytics as an
from bandqft import store

N_MAX = 21
config = store.SweepConfig(tuple(range(9, N_MAX + 1)), (1, 2, 3, 4), per_n=5)
rows = store.run_sweep(config).rows
print(f"{len(rows)} rows, config {config.config_hash()}")

# %%
for b in (1, 2, 3, 4):
    fit = an.fit_exponential(rows, b)
    print(
        f"b={b}: fitted xi={fit.xi_fitted:.5f}  model 1.1*4^-b={fit.xi_model:.5f}  "
        f"random-bit estimate={fit.xi_analytic:.5f}  ratio {fit.ratio_to_model:.2f}"
    )

# %% [markdown]
# ## Orders of the form 3 * 2^a
#
# When the odd part r of the order is 3, narrow bandwidths leave only the peaks
# with beta = 0 intact, so the unnormalised probability approaches 1/r = 1/3.

# %%
from bandqft import performance as pf

for n in (12, 16, 20):
    print(f"n={n}: P~(n, b=1, w=6) = {pf.raw_measure(n, 1, 6):.4f}")

# %% [markdown]
# ## Two regimes and where they meet
#
# For small n the performance follows a Gaussian in phi_max. For large n it
# follows the exponential law. The crossing point has a closed form once b >= 8.

# %%
for b in (8, 10, 12):
    tp = an.transition_point(b, empirical=True)
    print(
        f"b={b}: n_t formula {tp.n_t_formula:.2f}, quadratic root {tp.n_t_quadratic:.2f}, "
        f"model crossing {tp.n_t_empirical:.2f}"
    )
print(f"extrapolated P(n=4096, b=8) = {an.model_P_large_n(4096, 8):.4f}")
print(f"extrapolated P(n=4096, b=9) = {an.model_P_large_n(4096, 9):.4f}")
print(f"sigma^2 < 1 holds up to n = {an.validity_bound(8)} for b = 8")
