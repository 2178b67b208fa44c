# %% [markdown]
# # How much of the undetected ARQ error can list decoding recover?
#
# After ARQ every delivered word is a codeword. An undetected error whose
# delivered word lies at the minimum distance d from the sent one is still
# inside the radius-d list; `P_b` is the share of such errors.

# %%
import numpy as np

from arqlist import arq_metrics, hamming_code, reed_muller_code, sweep, weight_distribution
from arqlist.analysis import sweep_csv

# %%
a = arq_metrics(weight_distribution(hamming_code(3)), 0.1)
print("Hamming(7,4) at p=0.1: Pe_arq=%.6f  P_b=%.4f  list size %d" % (a.Pe_arq, a.P_b, a.list_size))

# %% [markdown]
# Hamming codes: longer codes have more undetected errors and a smaller
# recoverable share.

# %%
grid = np.linspace(0.01, 0.2, 20)
for m in (3, 4, 5):
    rows = sweep(weight_distribution(hamming_code(m)), grid)
    print("m=%d" % m, " ".join("%.2f" % r.P_b for r in rows[::4]))

# %% [markdown]
# Reed-Muller codes: the benefit where the ARQ error rate is still usable.

# %%
for r, m in ((2, 4), (2, 5), (3, 5), (4, 6), (5, 7)):
    rows = sweep(weight_distribution(reed_muller_code(r, m)), grid)
    usable = [x for x in rows if x.Pe_arq < 0.4]
    print("RM(%d,%d): %2d usable points, min P_b %.3f" % (r, m, len(usable), min(x.P_b for x in usable)))

# %%
# the same table as CSV, as the `analyze` command writes it
print(sweep_csv(sweep(weight_distribution(hamming_code(4)), [0.05, 0.1, 0.2])))
