# %% [markdown]
# # Order spectra of small semiprimes
#
# Period finding on N = pq succeeds or fails depending on the order of the
# randomly chosen seed. This walk-through builds the full order spectrum for a
# few semiprimes, checks the two structural facts used later (a single
# order-2 seed below N/2 and a cap on even orders), and looks at how the mean
# order grows with N.

# %%
from bandqft import number_theory as nt

for N in (15, 21, 35, 247):
    rec = nt.semiprime_record(N)
    sp = nt.order_spectrum(rec)
    print(f"N={N:4d} = {rec.p}*{rec.q}, n={rec.n}, totient={sp.totient}")
    print("   orders:", sp.as_dict())

# %% [markdown]
# N = 15 only has power-of-two orders, which is why the banded transform works
# perfectly for it. N = 21 already has orders 3 and 6.
#
# The spectrum is built from the cyclic structure of the unit group. A slow
# per-seed scan gives the same counts:

# %%
rec = nt.semiprime_record(247)
assert nt.order_spectrum(rec, method="seeds") == nt.order_spectrum(rec)
print("cyclic construction agrees with the seed scan for N=247")

# %%
for report in (nt.verify_order2_uniqueness(10_000), nt.verify_max_order_bound(10_000)):
    print(report)

# %% [markdown]
# ## Mean order versus N
#
# Averaging the mean order over bins of width 500 gives a ratio close to 1/5.

# %%
_, binned = nt.omega_statistics(10_000, bin_width=500)
for center, mean, count in binned[::4]:
    print(f"bin centre {center:7.0f}: <<w>> = {mean:8.1f}, ratio {mean / center:.3f} ({count} semiprimes)")

# %% [markdown]
# ## The odd part of the order
#
# Writing w = r 2^a, only r matters for the banded transform. Its inverse,
# averaged over the seeds, decays with the register size.

# %%
import numpy as np

rows = nt.inv_r_sweep(range(9, 22), count=7)
n = np.array([r[0] for r in rows], float)
y = np.log2([r[2] for r in rows])
print(f"fitted slope of log2 <1/r>: {np.polyfit(n, y, 1)[0]:.3f}  (model: {-1 / 2.6:.3f})")
