# %% [markdown]
# # Does the truncation error factorise?
#
# The random-bit estimate of the decay rate assumes the truncation phase can be
# averaged over k separately from the ideal peak sum, and then over the peaks
# j. This script measures how large the error of each step is at n = 16.

# %%
import math

import numpy as np

from bandqft import number_theory as nt
from bandqft import performance as pf

recs = nt.semiprimes_for_n(16, 5)
print("semiprimes:", [r.N for r in recs])

bs = list(range(1, 7))
log_k, log_j = [], []
for b in bs:
    reps = [pf.separability(rec, b) for rec in recs]
    log_k.append(np.mean([math.log2(r.delta_k) for r in reps]))
    log_j.append(np.mean([math.log2(r.delta_j) for r in reps]))
    print(f"b={b}: <log2 D_k> = {log_k[-1]:7.2f}   <log2 D_j> = {log_j[-1]:7.2f}")

# %%
print(f"slope of log2 D_k: {np.polyfit(bs, log_k, 1)[0]:.2f}")
print(f"slope of log2 D_j: {np.polyfit(bs, log_j, 1)[0]:.2f}")
print(f"mean log2(D_j / D_k): {np.mean(np.subtract(log_j, log_k)):.2f}")

# %% [markdown]
# Both errors shrink quickly with bandwidth. The j step decays at about
# 2^(-2.3 b). The k step decays more slowly, at about 2^(-1.6 b), but starts
# roughly 2^4 times smaller.
