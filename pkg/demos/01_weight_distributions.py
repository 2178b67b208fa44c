# %% [markdown]
# # Weight distributions of Hamming and Reed-Muller codes
#
# Low-rate codes are enumerated directly; high-rate codes go through the
# dual and the MacWilliams transform. Both routes give exact integers.

# %%
import numpy as np

from arqlist import (hamming_code, macwilliams_transform, reed_muller_code,
                     weight_distribution, weight_distribution_exhaustive)
from arqlist.codes import dual_code

# %%
h = hamming_code(3)
print(h, weight_distribution_exhaustive(h).counts)

# %% [markdown]
# The [7,3] simplex code is the dual of Hamming(7,4); transforming its
# distribution gives back the Hamming one.

# %%
simplex = dual_code(h)
B = weight_distribution_exhaustive(simplex)
print("simplex:", B.counts)
print("transformed:", macwilliams_transform(B, h.n, simplex.k).counts)

# %% [markdown]
# RM(3,5) has 2^26 codewords, its dual RM(1,5) only 64.

# %%
rm35 = reed_muller_code(3, 5)
A = weight_distribution(rm35)
nz = {i: a for i, a in enumerate(A.counts) if a}
print(rm35, "nonzero A_i:", nz)
print("sum =", A.total, "= 2^%d" % A.k)

# %%
# A long code: the counts no longer fit a machine word
big = weight_distribution(hamming_code(10))
print("Hamming(1023,1013): A_3 =", big[3], " log2(A_511) ~", np.log2(float(big[511])))
