# %% [markdown]
# # End to end: Markov source, ARQ over a BSC, lists, selection
#
# Every codeword of a sentence is retransmitted until a codeword arrives,
# list-decoded at radius d, and the sentence is then chosen from the lists.

# %%
from arqlist import (cyclic_context, hamming_code, monte_carlo_arq, p_average, repetition_code,
                     simulate_clda, uniform_context)

code = hamming_code(3)
rep = monte_carlo_arq(code, 0.1, 200_000, seed=7)
print(rep.to_json())

# %% [markdown]
# A deterministic cycle through the 16 messages (in a shuffled order) is a
# context where the sent sentence is the unique best in its own lists.

# %%
ctx = cyclic_context(16, seed=0)
r = simulate_clda(code, ctx, 0.05, 10, 2000, seed=1)
print("selected correctly: %.4f (Assumption held in %.0f%% of trials), bound %.4f"
      % (r.empirical_Ec, 100 * r.assumption_hold_rate, r.bound.lower_bound))

# %% [markdown]
# With a context that carries no information the choice is arbitrary:
# the two-word repetition code gets a quarter of two-word sentences right.

# %%
rep3 = repetition_code(3)
print("exact:", p_average(rep3, uniform_context(2), 2, 0.1).value)
sim = simulate_clda(rep3, uniform_context(2), 0.1, 2, 20_000, seed=2, selector="exhaustive")
print("simulated:", sim.empirical_Ec)
