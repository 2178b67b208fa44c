# %% [markdown]
# # Selecting a sentence from per-position lists
#
# A three-state Markov context and three lists that each hold every state.
# The table `T` holds the best partial-sentence weight ending at each list
# entry and `D` the predecessor that achieved it.

# %%
import numpy as np

from arqlist import clda_select, example1_context, example1_lists, exhaustive_select, sentence_weight

ctx, lists = example1_context(), example1_lists()
print("P =\n", ctx.P.round(4), "\nprior =", ctx.prior)

# %%
F, trace = clda_select(ctx, lists)
np.set_printoptions(precision=5, suppress=True)
print("T =\n", trace.T)
print("D =\n", trace.D)
print("F =", F, " weight", sentence_weight(ctx, F), "= 5/27 ~", 5 / 27)

# %%
# brute force over all 27 sentences agrees
print("exhaustive:", exhaustive_select(ctx, lists))

# %% [markdown]
# Zero transitions are -inf in the log domain, so sentences through them
# are never chosen, and long sentences do not underflow.

# %%
F, trace = clda_select(ctx, [[0, 2]] * 50)
print(F[:10], "... log weight", trace.logT[:, -1].max())
