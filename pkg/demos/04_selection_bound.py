# %% [markdown]
# # Lower bound on selecting the right sentence
#
# Each position contributes (P_c + (|S| - 1) p^d (1-p)^(n-d)) / A(1-p, p),
# where S is the set of codewords sharing the sent word's list.

# %%
import numpy as np

from arqlist import (in_list_probability, lower_bound_ec, max_sentence_length, reed_muller_code,
                     repetition_code, same_list_set, weight_distribution)

code = reed_muller_code(3, 5)
dist = weight_distribution(code)
print("|S(0)| for RM(3,5):", len(same_list_set(code, 0)))
print("|S(0)| for the [3,1] repetition code:", sorted(same_list_set(repetition_code(3), 0)))

# %%
grid = np.linspace(0, 0.1, 11)
for N in (10, 20):
    vals = [lower_bound_ec(code, dist, [0] * N, p).lower_bound for p in grid]
    print("N=%d" % N, " ".join("%.3f" % v for v in vals))

# %%
# bound against N at p = 0.06, and the longest sentence meeting a target
print([round(lower_bound_ec(code, dist, [0] * N, 0.06).lower_bound, 3) for N in range(5, 31, 5)])
print("longest N with bound >= 0.8 at p=0.06:", max_sentence_length(code, dist, 0.06, 0.8))

# %% [markdown]
# For comparison, the probability that every sent word is in its list.

# %%
for p in (0.04, 0.05, 0.06):
    print("p=%.2f bound %.4f  in-list %.4f" % (p, lower_bound_ec(code, dist, [0] * 10, p).lower_bound,
                                              in_list_probability(dist, p, 10)))
