"""Markov context model and most-probable-sentence selection from lists.

A *sentence* is a sequence of codeword states (message indices). Given one
candidate list per position, :func:`clda_select` finds the sentence of
largest probability under the Markov context with a Viterbi-style pass:
``T[i, j]`` is the best weight of any partial sentence ending at entry ``i``
of list ``j`` and ``D[i, j]`` is the entry of list ``j - 1`` it came from.
"""

import json
from dataclasses import dataclass, field

import numpy as np

ROW_TOL = 1e-12
TIE_RTOL = 1e-12
EXHAUSTIVE_BUDGET = 10**7


class ContextError(ValueError):
    pass


@dataclass(eq=False)
class MarkovContext:
    """Row-stochastic transition matrix ``P`` and initial distribution ``prior``.

    ``P[i, j]`` is the probability that state ``j`` follows state ``i``.
    """

    P: np.ndarray
    prior: np.ndarray
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        self.P = np.asarray(self.P, dtype=float)
        self.prior = np.asarray(self.prior, dtype=float)
        M = self.prior.shape[0]
        if self.P.shape != (M, M):
            raise ContextError("P must be %dx%d to match the prior, got %r" % (M, M, self.P.shape))
        if self.check:
            if (self.P < 0).any() or (self.prior < 0).any():
                raise ContextError("probabilities must be nonnegative")
            if np.abs(self.P.sum(axis=1) - 1).max() > ROW_TOL:
                raise ContextError("rows of P must sum to 1")
            if abs(self.prior.sum() - 1) > ROW_TOL:
                raise ContextError("prior must sum to 1")
        with np.errstate(divide="ignore"):
            self.logP = np.log(self.P)
            self.log_prior = np.log(self.prior)

    @property
    def M(self):
        return self.prior.shape[0]

    @classmethod
    def from_sparse(cls, M, transitions, prior=None, default="uniform"):
        """Build from ``(i, j, P_ij)`` triples; rows with no triple get ``default``."""
        if default != "uniform":
            raise ContextError("only the 'uniform' default row is supported")
        P = np.zeros((M, M))
        given = np.zeros(M, dtype=bool)
        for i, j, pij in transitions:
            i, j = int(i), int(j)
            if not (0 <= i < M and 0 <= j < M):
                raise ContextError("transition (%d, %d) outside %d states" % (i, j, M))
            P[i, j] = float(pij)
            given[i] = True
        P[~given] = 1.0 / M
        if prior is None:
            prior = np.full(M, 1.0 / M)
        return cls(P, prior)

    def to_json(self):
        trans = [[int(i), int(j), float(self.P[i, j])] for i, j in zip(*np.nonzero(self.P))]
        return json.dumps({"M": self.M, "prior": [float(v) for v in self.prior],
                           "transitions": trans, "default": "uniform"})

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)
        return cls.from_sparse(int(obj["M"]), obj.get("transitions", []),
                               prior=obj.get("prior"), default=obj.get("default", "uniform"))


def load_context(path):
    with open(path) as fh:
        return MarkovContext.from_json(fh.read())


def example1_context():
    P = np.array([[1 / 3, 2 / 3, 0],
                  [2 / 9, 5 / 9, 2 / 9],
                  [0, 2 / 3, 1 / 3]])
    return MarkovContext(P, np.array([1 / 5, 3 / 5, 1 / 5]))


def example1_lists():
    return [[0, 1, 2], [0, 1, 2], [0, 1, 2]]


def uniform_context(M):
    return MarkovContext(np.full((M, M), 1.0 / M), np.full(M, 1.0 / M))


def cyclic_context(M, step=1, stay=0.0, seed=None):
    """Deterministic cycle through the states, with a uniform prior.

    State ``order[t]`` moves to ``order[t + step mod M]``, or stays put with
    probability ``stay``. ``order`` is ``0..M-1`` unless ``seed`` is given,
    in which case it is a seeded random permutation.
    """
    order = np.arange(M) if seed is None else np.random.default_rng(seed).permutation(M)
    P = np.zeros((M, M))
    P[order, np.roll(order, -step)] = 1.0 - stay
    P[order, order] += stay
    return MarkovContext(P, np.full(M, 1.0 / M))


def random_context(M, seed, support=None):
    """Seeded random row-stochastic context.

    With ``support`` set, each row has that many nonzero entries.
    """
    rng = np.random.default_rng(seed)
    P = rng.random((M, M))
    if support is not None and support < M:
        for row in P:
            row[rng.permutation(M)[support:]] = 0.0
    P /= P.sum(axis=1, keepdims=True)
    prior = rng.random(M)
    return MarkovContext(P, prior / prior.sum())


def sentence_weight(ctx, s, log=False):
    """Probability of the state sequence ``s`` under the chain."""
    s = [int(v) for v in s]
    if not s:
        raise ContextError("empty sentence")
    if min(s) < 0 or max(s) >= ctx.M:
        raise ContextError("state out of range for M=%d" % ctx.M)
    if log:
        return float(ctx.log_prior[s[0]] + sum(ctx.logP[a, b] for a, b in zip(s, s[1:])))
    w = ctx.prior[s[0]]
    for a, b in zip(s, s[1:]):
        w *= ctx.P[a, b]
    return float(w)


def _as_lists(lists, M):
    out = []
    for lst in lists:
        arr = np.array(list(lst), dtype=np.int64)
        if arr.size == 0:
            raise ContextError("every list needs at least one entry")
        if arr.min() < 0 or arr.max() >= M:
            raise ContextError("list entry outside the %d context states" % M)
        out.append(arr)
    if not out:
        raise ContextError("need at least one list")
    return out


def _near_max(values, axis=0):
    """Mask of entries within relative 1e-12 of the maximum along ``axis``.

    Works for log weights (-inf for impossible) and linear weights alike: when
    the maximum is -inf or 0 every entry counts as tied.
    """
    best = values.max(axis=axis, keepdims=True)
    with np.errstate(invalid="ignore"):
        return values >= best - TIE_RTOL * np.abs(best)


def _pick(values, ties, rng):
    """Row index of the best entry in each column of ``values``."""
    mask = _near_max(values, axis=0)
    if ties == "first":
        return np.argmax(mask, axis=0)
    return np.array([int(rng.choice(np.flatnonzero(col))) for col in mask.T])


@dataclass
class CldaTrace:
    lists: list
    T: np.ndarray
    logT: np.ndarray
    D: np.ndarray
    R: list
    F: list

    def to_dict(self):
        return {
            "lists": [[int(v) for v in lst] for lst in self.lists],
            "logT": [[_jnum(v) for v in row] for row in self.logT],
            "D": self.D.tolist(),
            "R": list(self.R),
            "F": list(self.F),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


def _jnum(v):
    return None if v == -np.inf else float(v)


def clda_select(ctx, lists, domain="log", ties="first", seed=None):
    """Most probable sentence from the product of ``lists``.

    ``domain`` is ``"log"`` (sum of log weights; zero transitions are -inf)
    or ``"linear"``. ``ties="first"`` keeps the smallest entry index among
    equal-weight predecessors; ``ties="random"`` picks uniformly with a
    generator seeded from ``seed``.

    Returns ``(F, trace)``. ``trace.T`` and ``trace.D`` are ``L x N``; lists
    shorter than the longest are padded with -inf / zero weight.
    """
    if domain not in ("log", "linear"):
        raise ValueError("domain must be 'log' or 'linear'")
    if ties not in ("first", "random"):
        raise ValueError("ties must be 'first' or 'random'")
    rng = np.random.default_rng(seed) if ties == "random" else None
    ls = _as_lists(lists, ctx.M)
    N = len(ls)
    L = max(len(x) for x in ls)
    log = domain == "log"
    fill = -np.inf if log else 0.0
    T = np.full((L, N), fill)
    D = np.zeros((L, N), dtype=np.int64)
    T[:len(ls[0]), 0] = ctx.log_prior[ls[0]] if log else ctx.prior[ls[0]]
    for j in range(1, N):
        prev, cur = ls[j - 1], ls[j]
        tp = T[:len(prev), j - 1]
        if log:
            cand = tp[:, None] + ctx.logP[np.ix_(prev, cur)]
        else:
            cand = tp[:, None] * ctx.P[np.ix_(prev, cur)]
        k = _pick(cand, ties, rng)
        D[:len(cur), j] = k
        T[:len(cur), j] = cand[k, np.arange(len(cur))]
    R = [0] * N
    R[-1] = int(_pick(T[:len(ls[-1]), N - 1, None], ties, rng)[0])
    for k in range(N - 1, 0, -1):
        R[k - 1] = int(D[R[k], k])
    F = [int(ls[k][R[k]]) for k in range(N)]
    if log:
        logT = T
        with np.errstate(over="ignore"):
            lin = np.exp(T)
    else:
        lin = T
        with np.errstate(divide="ignore"):
            logT = np.log(T)
    return F, CldaTrace([x.tolist() for x in ls], lin, logT, D, R, F)


def exhaustive_select(ctx, lists, budget=EXHAUSTIVE_BUDGET):
    """Brute-force argmax over every tuple of the product of ``lists``.

    Ties (within relative 1e-12) go to the lexicographically smallest tuple of
    entry indices.
    """
    ls = _as_lists(lists, ctx.M)
    total = int(np.prod([len(x) for x in ls], dtype=object))
    if total > budget:
        raise ValueError("product space of %d tuples exceeds the budget %d" % (total, budget))
    W = ctx.log_prior[ls[0]]
    for j in range(1, len(ls)):
        W = W[..., None] + ctx.logP[np.ix_(ls[j - 1], ls[j])].reshape((1,) * (j - 1) + (len(ls[j - 1]), len(ls[j])))
    flat_idx = int(np.argmax(_near_max(W.ravel())))
    rows = np.unravel_index(flat_idx, W.shape)
    return [int(ls[k][r]) for k, r in enumerate(rows)]


def count_optimal(ctx, lists):
    """Best log weight over the product of ``lists`` and how many tuples attain it."""
    ls = _as_lists(lists, ctx.M)
    best = ctx.log_prior[ls[0]].astype(float)
    count = np.ones(len(ls[0]), dtype=np.int64)
    for j in range(1, len(ls)):
        cand = best[:, None] + ctx.logP[np.ix_(ls[j - 1], ls[j])]
        count = count @ _near_max(cand, axis=0).astype(np.int64)
        best = cand.max(axis=0)
    return float(best.max()), int(count[_near_max(best)].sum())
