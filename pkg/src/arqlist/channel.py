"""Binary symmetric channel, the ARQ retransmission loop, and Monte Carlo.

Randomness is counter-based: trial blocks (and, in sentence simulations,
single trials) draw from a Philox stream keyed by ``(seed, index)``, so
results do not depend on how work is split across workers.
"""

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import gf2
from .codes import is_codeword
from .weights import weight_distribution

MAX_RETRANSMISSIONS = 10**6
BLOCK = 1 << 15


class RunawayChannelError(RuntimeError):
    """More retransmissions than the configured cap without receiving a codeword."""


def stream(seed, *index):
    """Independent generator for ``(seed, *index)``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(i) for i in index))
    return np.random.Generator(np.random.Philox(ss))


class BscChannel:
    """A BSC with crossover probability ``p`` and its own random stream."""

    def __init__(self, p, seed=0, rng=None):
        if not 0.0 <= p <= 0.5:
            raise ValueError("crossover probability must lie in [0, 0.5], got %r" % (p,))
        self.p = p
        self.seed = seed
        self.rng = rng if rng is not None else stream(seed)

    def __repr__(self):
        return "BscChannel(p=%r, seed=%r)" % (self.p, self.seed)

    def transmit(self, x):
        x = gf2.as_bits(x)
        if self.p == 0:
            return x.copy()
        flips = (self.rng.random(x.shape[0]) < self.p).astype(np.uint8)
        return x ^ flips


@dataclass(frozen=True)
class ArqOutcome:
    delivered: np.ndarray
    retransmissions: int
    undetected_error: bool


def transmit(ch, x):
    return ch.transmit(x)


def arq_transmit(ch, code, x, max_retransmissions=MAX_RETRANSMISSIONS):
    """Send ``x`` until the receiver sees a codeword."""
    x = gf2.as_bits(x, code.n)
    for alpha in range(max_retransmissions + 1):
        y = ch.transmit(x)
        if is_codeword(code, y):
            return ArqOutcome(y, alpha, bool((y != x).any()))
    raise RunawayChannelError("no codeword after %d retransmissions" % max_retransmissions)


def sample_sentence(ctx, N, rng):
    """Draw ``N`` states from the Markov chain ``ctx``."""
    if N < 1:
        raise ValueError("sentence length must be at least 1")
    out = np.empty(N, dtype=np.int64)
    u = rng.random(N)
    cdf = np.cumsum(ctx.prior)
    out[0] = min(int(np.searchsorted(cdf, u[0] * cdf[-1], side="right")), ctx.M - 1)
    cdfs = np.cumsum(ctx.P, axis=1)
    for t in range(1, N):
        row = cdfs[out[t - 1]]
        out[t] = min(int(np.searchsorted(row, u[t] * row[-1], side="right")), ctx.M - 1)
    return out


def _arq_block(H, n, d, p, count, rng, cap):
    """Vectorised ARQ loop on ``count`` trials sending the all-zero word."""
    weights = np.zeros(count, dtype=np.int64)
    alphas = np.zeros(count, dtype=np.int64)
    active = np.arange(count)
    attempts = 0
    Ht = H.T.astype(np.int64)
    while active.size:
        if attempts > cap:
            raise RunawayChannelError("no codeword after %d retransmissions" % cap)
        e = (rng.random((active.size, n)) < p).astype(np.int64)
        ok = ~((e @ Ht) & 1).any(axis=1) if Ht.shape[1] else np.ones(active.size, bool)
        done = active[ok]
        weights[done] = e[ok].sum(axis=1)
        alphas[done] = attempts
        active = active[~ok]
        attempts += 1
    return {
        "undetected": int(np.count_nonzero(weights)),
        "at_d": int(np.count_nonzero(weights == d)),
        "min_undetected_weight": int(weights[weights > 0].min()) if (weights > 0).any() else None,
        "retrans_sum": int(alphas.sum()),
        "retrans_sq_sum": int((alphas * alphas).sum()),
        "attempts_sum": int(alphas.sum() + count),
        "alpha_hist": [int(np.count_nonzero(alphas == a)) for a in range(3)],
    }


@dataclass
class ArqReport:
    trials: int
    seed: int
    p: float
    counts: dict
    estimates: dict
    ci: dict

    def to_dict(self):
        return {"trials": self.trials, "seed": self.seed, "p": self.p,
                "counts": self.counts, "estimates": self.estimates, "ci": self.ci}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


def _halfwidth(phat, n, z=3.0):
    if n == 0:
        return None
    return z * math.sqrt(max(phat * (1 - phat), 0.0) / n)


def monte_carlo_arq(code, p, trials, seed, workers=1, block=BLOCK,
                    max_retransmissions=MAX_RETRANSMISSIONS):
    """Estimate ARQ error rates by simulation.

    The all-zero codeword is sent in every trial (linearity makes this
    general). Confidence half-widths are 3 binomial standard errors.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    d = weight_distribution(code).min_distance
    H = code.parity_check
    nblocks = -(-trials // block)

    def run(b):
        count = min(block, trials - b * block)
        return _arq_block(H, code.n, d, p, count, stream(seed, b), max_retransmissions)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, range(nblocks)))
    else:
        parts = [run(b) for b in range(nblocks)]

    undetected = sum(x["undetected"] for x in parts)
    at_d = sum(x["at_d"] for x in parts)
    retrans = sum(x["retrans_sum"] for x in parts)
    retrans_sq = sum(x["retrans_sq_sum"] for x in parts)
    attempts = sum(x["attempts_sum"] for x in parts)
    hist = [sum(x["alpha_hist"][a] for x in parts) for a in range(3)]
    mins = [x["min_undetected_weight"] for x in parts if x["min_undetected_weight"] is not None]

    pe = undetected / trials
    share = at_d / undetected if undetected else None
    retrans_freq = retrans / attempts
    counts = {"undetected": undetected, "undetected_at_d": at_d,
              "retransmissions": retrans, "attempts": attempts,
              "alpha_histogram": hist, "min_undetected_weight": min(mins) if mins else None}
    mean_alpha = retrans / trials
    var_alpha = max(retrans_sq / trials - mean_alpha ** 2, 0.0)
    estimates = {"Pe_arq": pe, "P_list_share": share,
                 "mean_retransmissions": mean_alpha,
                 "retransmission_rate": retrans_freq}
    ci = {"Pe_arq": _halfwidth(pe, trials),
          "P_list_share": _halfwidth(share, undetected) if share is not None else None,
          "mean_retransmissions": 3.0 * math.sqrt(var_alpha / trials),
          "retransmission_rate": _halfwidth(retrans_freq, attempts)}
    return ArqReport(trials, seed, p, counts, estimates, ci)
