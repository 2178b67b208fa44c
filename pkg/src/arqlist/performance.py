"""How often context selection recovers the sent sentence.

Closed forms: retransmission probability, the product-form lower bound on
correct selection, the in-list probability, and the brute-force average
correct-selection probability. :func:`simulate_clda` runs the whole
pipeline (Markov source, ARQ over a BSC, list decoding, selection) for an
empirical check.
"""

import csv
import io
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from . import clda as _clda
from .channel import BscChannel, arq_transmit, sample_sentence, stream
from .codes import CapacityError, CodeParameterError, encode
from .listdec import decode_list, list_size, list_stabilizer
from .weights import weight_distribution, weight_enumerator_eval

PAVERAGE_SENTENCE_BUDGET = 10**5
PAVERAGE_LIST_BUDGET = 10**6
ASSUMPTION_RTOL = 1e-12


def p_retrans(dist, p):
    """Probability that one transmission is not a codeword and must be repeated."""
    return 1.0 - weight_enumerator_eval(dist, 1.0 - p, p)


@dataclass(frozen=True)
class BoundReport:
    p: float
    N: int
    per_position_S_sizes: tuple
    lower_bound: float
    assume_singleton: bool

    def to_dict(self):
        return asdict(self)


def _factor_terms(dist, p):
    n, d = dist.n, dist.min_distance
    accept = weight_enumerator_eval(dist, 1.0 - p, p)
    P_c = (1.0 - p) ** n
    q = p ** d * (1.0 - p) ** (n - d)
    return accept, P_c, q


def lower_bound_ec(code, dist, s, p, assume_singleton=False):
    """Lower bound on the probability that the sent sentence ``s`` is recovered.

    Each position contributes ``(P_c + (|S(s_i)| - 1) p^d (1-p)^(n-d)) / A(1-p, p)``.
    ``|S(s_i)|`` comes from :func:`same_list_set` unless ``assume_singleton``
    is set or the computation is over budget, in which case 1 is used (the
    dropped term is nonnegative, so the result is still a lower bound).
    """
    s = [int(v) for v in s]
    if not s:
        raise ValueError("empty sentence")
    sizes = None
    if not assume_singleton:
        try:
            stab = len(list_stabilizer(code))
            # S(s) is a translate of the stabilizer, so its size is the same for every s
            sizes = tuple(stab for _ in s)
        except CapacityError:
            assume_singleton = True
    if sizes is None:
        sizes = tuple(1 for _ in s)
    accept, P_c, q = _factor_terms(dist, p)
    log_b = 0.0
    for size in sizes:
        f = (P_c + (size - 1) * q) / accept
        log_b += math.log(f) if f > 0 else -math.inf
    bound = min(1.0, max(0.0, math.exp(log_b)))
    return BoundReport(p, len(s), sizes, bound, assume_singleton)


def in_list_probability(dist, p, N):
    """Probability that every sent codeword lies in its received list.

    ``((P_c + A_d p^d (1-p)^(n-d)) / A(1-p, p))^N``: the sent word is in the
    list when the delivered word is either correct or at distance ``d``.
    """
    accept, P_c, q = _factor_terms(dist, p)
    f = (P_c + dist[dist.min_distance] * q) / accept
    return min(1.0, f ** N)


def max_sentence_length(code, dist, p, target):
    """Largest ``N`` whose singleton-S bound still reaches ``target``.

    Returns 0 when even ``N = 1`` falls short and ``None`` when the bound is
    identically 1 (``p = 0``), so every ``N`` qualifies.
    """
    accept, P_c, _ = _factor_terms(dist, p)
    f = P_c / accept
    if f >= 1.0:
        return None
    if target <= 0:
        raise ValueError("target must be positive")
    N = max(0, int(math.floor(math.log(target) / math.log(f))))
    while f ** (N + 1) >= target:
        N += 1
    while N > 0 and f ** N < target:
        N -= 1
    return N


@dataclass(frozen=True)
class PAverageResult:
    value: float
    tie_rule: str
    sentences: int
    list_size: int


def _check_context(code, ctx):
    if ctx.M != code.size:
        raise CodeParameterError(
            "context has %d states but %s has %d codewords" % (ctx.M, code.name, code.size))


def p_average(code, ctx, N, p, radius=None):
    """Average probability that the selected sentence equals the sent one.

    Sentences are ranked by weight (descending; equal weights in
    lexicographic state order). A received sentence is credited to the
    first-ranked sentence whose lists contain it, and each sentence
    collects the channel probability of the received sentences credited to
    it, conditioned on ARQ delivering codewords.
    """
    _check_context(code, ctx)
    M = ctx.M
    if M ** N > PAVERAGE_SENTENCE_BUDGET:
        raise CapacityError("M^N = %d exceeds %d" % (M ** N, PAVERAGE_SENTENCE_BUDGET))
    L = list_size(code, radius)
    if L ** N > PAVERAGE_LIST_BUDGET:
        raise CapacityError("L^N = %d exceeds %d" % (L ** N, PAVERAGE_LIST_BUDGET))
    n = code.n
    lists = np.empty((M, L), dtype=np.int64)
    dists = np.empty((M, L), dtype=np.int64)
    for c in range(M):
        dl = decode_list(code, c, radius)
        lists[c] = dl.members
        dists[c] = dl.distances
    accept = weight_enumerator_eval(weight_distribution(code), 1.0 - p, p)
    log_pd = _log_pattern_probs(n, p)

    logw = ctx.log_prior.copy()
    for _ in range(1, N):
        logw = (logw[..., None] + ctx.logP.reshape((1,) * (logw.ndim - 1) + (M, M)))
    logw = logw.reshape(-1) if N > 1 else logw
    key = np.round(logw, 11)
    order = np.lexsort((np.arange(M ** N), -key))

    place = M ** np.arange(N - 1, -1, -1)
    claimed = np.zeros(M ** N, dtype=bool)
    total = 0.0
    for idx in order:
        if logw[idx] == -np.inf:
            break
        s = (idx // place) % M
        r_idx = np.zeros((1,), dtype=np.int64)
        r_lp = np.zeros((1,))
        for k in range(N):
            r_idx = (r_idx[:, None] + lists[s[k]][None, :] * place[k]).ravel()
            r_lp = (r_lp[:, None] + log_pd[dists[s[k]]][None, :]).ravel()
        fresh = ~claimed[r_idx]
        if fresh.any():
            total += math.exp(logw[idx]) * float(np.exp(r_lp[fresh]).sum())
        claimed[r_idx] = True
    value = total / accept ** N
    return PAverageResult(min(1.0, value), "weight desc, then lexicographic states", M ** N, L)


def _log_pattern_probs(n, p):
    """``log(p^w (1-p)^(n-w))`` for ``w = 0..n``."""
    w = np.arange(n + 1)
    if p == 0:
        return np.where(w == 0, 0.0, -np.inf)
    return w * math.log(p) + (n - w) * math.log1p(-p)


@dataclass
class CldaReport:
    trials: int
    seed: int
    p: float
    N: int
    selector: str
    successes: int
    assumption_trials: int
    assumption_successes: int
    bound: BoundReport
    in_list_trials: int

    @property
    def empirical_Ec(self):
        return self.successes / self.trials

    @property
    def assumption_hold_rate(self):
        return self.assumption_trials / self.trials

    @property
    def empirical_Ec_assumption(self):
        if not self.assumption_trials:
            return None
        return self.assumption_successes / self.assumption_trials

    def sigma(self, which="all"):
        if which == "all":
            ph, m = self.empirical_Ec, self.trials
        else:
            ph, m = self.empirical_Ec_assumption, self.assumption_trials
            if ph is None:
                return None
        return math.sqrt(max(ph * (1 - ph), 0.0) / m)

    def to_dict(self):
        return {
            "trials": self.trials,
            "seed": self.seed,
            "p": self.p,
            "N": self.N,
            "selector": self.selector,
            "estimates": {
                "empirical_Ec": self.empirical_Ec,
                "empirical_Ec_assumption": self.empirical_Ec_assumption,
                "in_list_rate": self.in_list_trials / self.trials,
            },
            "ci": {
                "empirical_Ec": 3 * self.sigma("all"),
                "empirical_Ec_assumption": None if self.sigma("assumption") is None
                else 3 * self.sigma("assumption"),
            },
            "bound": self.bound.to_dict(),
            "assumption_hold_rate": self.assumption_hold_rate,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


def assumption_holds(code, ctx, sent, radius=None):
    """Whether ``sent`` is the unique heaviest sentence in the product of its own lists."""
    lists = [decode_list(code, int(c), radius).members for c in sent]
    best, count = _clda.count_optimal(ctx, lists)
    own = _clda.sentence_weight(ctx, sent, log=True)
    if own == -math.inf or count != 1:
        return False
    return math.isclose(best, own, rel_tol=ASSUMPTION_RTOL, abs_tol=1e-300)


def simulate_clda(code, ctx, p, N, trials, seed, selector="clda", check_assumption=True,
                  radius=None):
    """End-to-end Monte Carlo of sentence selection.

    Each trial draws a sentence from ``ctx``, sends every codeword through
    ARQ over the BSC, list-decodes what arrives and selects a sentence.
    ``selector="clda"`` runs the dynamic program on lists in decoder order;
    ``selector="exhaustive"`` searches the whole product with lists sorted by
    state, so ties go to the lexicographically smallest sentence. Trial ``t``
    draws all of its randomness from the stream ``(seed, t)``.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if selector not in ("clda", "exhaustive"):
        raise ValueError("selector must be 'clda' or 'exhaustive'")
    _check_context(code, ctx)
    codebook = [encode(code, i) for i in range(code.size)]
    lookup = {cw.tobytes(): i for i, cw in enumerate(codebook)}
    successes = a_trials = a_successes = in_list = 0
    holds = {}
    # selection is a pure function of the received indices, so both are memoised
    lists_of = {}
    chosen = {}
    for t in range(trials):
        rng = stream(seed, t)
        sent = sample_sentence(ctx, N, rng)
        ch = BscChannel(p, seed=seed, rng=rng)
        received = tuple(lookup[arq_transmit(ch, code, codebook[s]).delivered.tobytes()]
                         for s in sent)
        for r in received:
            if r not in lists_of:
                lists_of[r] = decode_list(code, r, radius).members
        lists = [lists_of[r] for r in received]
        if all(int(s) in lst for s, lst in zip(sent, lists)):
            in_list += 1
        if received not in chosen:
            if selector == "clda":
                chosen[received] = tuple(_clda.clda_select(ctx, lists)[0])
            else:
                chosen[received] = tuple(_clda.exhaustive_select(ctx, [sorted(x) for x in lists]))
        ok = list(chosen[received]) == [int(s) for s in sent]
        successes += ok
        key = tuple(int(v) for v in sent)
        if check_assumption and key not in holds:
            holds[key] = assumption_holds(code, ctx, sent, radius)
        if check_assumption and holds[key]:
            a_trials += 1
            a_successes += ok
    bound = lower_bound_ec(code, weight_distribution(code), [0] * N, p)
    return CldaReport(trials, seed, p, N, selector, successes, a_trials, a_successes, bound, in_list)


def bound_sweep(code, dist, p_grid, N_values, assume_singleton=False):
    rows = []
    for N in N_values:
        for p in p_grid:
            rows.append(lower_bound_ec(code, dist, [0] * N, p, assume_singleton))
    return rows


def bound_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("p", "N", "lower_bound", "assume_singleton"))
    for r in rows:
        w.writerow(("%.10g" % r.p, r.N, "%.10g" % r.lower_bound, str(r.assume_singleton).lower()))
    return buf.getvalue()
