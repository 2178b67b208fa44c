"""Weight distributions, the MacWilliams transform and enumerator evaluation."""

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb

import numpy as np

from . import gf2
from .codes import CapacityError

EXHAUSTIVE_MAX_K = 28
_FLOAT_SAFE = 2 ** 1000
_TINY = 1e-290


class ConsistencyError(ArithmeticError):
    """MacWilliams produced a non-integer count: the input was not a dual distribution."""


@dataclass(frozen=True)
class WeightDistribution:
    """Exact counts ``A_0 .. A_n`` (Python ints, unbounded)."""

    counts: tuple

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if any(c < 0 for c in self.counts):
            raise ValueError("weight counts must be nonnegative")

    @property
    def n(self):
        return len(self.counts) - 1

    @property
    def total(self):
        return sum(self.counts)

    @property
    def k(self):
        t = self.total
        if t & (t - 1):
            raise ValueError("counts sum to %d, not a power of two" % t)
        return t.bit_length() - 1

    @property
    def min_distance(self):
        """Smallest nonzero weight, or ``None`` for the zero code."""
        for i, a in enumerate(self.counts[1:], start=1):
            if a:
                return i
        return None

    def __getitem__(self, i):
        return self.counts[i]

    def __len__(self):
        return len(self.counts)

    def to_json(self):
        return json.dumps({"n": self.n, "counts": [str(c) for c in self.counts]})

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)
        counts = [int(c) for c in obj["counts"]]
        if len(counts) != obj.get("n", len(counts) - 1) + 1:
            raise ValueError("count array length does not match n")
        return cls(tuple(counts))


def weight_distribution_exhaustive(code, max_k=EXHAUSTIVE_MAX_K, workers=1):
    """Count codeword weights by enumerating every codeword.

    The generator is split into two halves; for each combination of the
    smaller half the whole span of the larger half is XORed in and weights
    are histogrammed. Counts are summed as integers, so the result does not
    depend on ``workers``.
    """
    if code.k > max_k:
        raise CapacityError(
            "k=%d exceeds the exhaustive budget of %d; use the dual code and "
            "macwilliams_transform instead" % (code.k, max_k))
    if code.k == 0:
        return WeightDistribution((1,) + (0,) * code.n)
    return _span_distribution(code.packed_generator, code.n, workers)


def _span_distribution(rows, n, workers=1):
    k = rows.shape[0]
    k_big = (k + 1) // 2
    big = gf2.span_packed(rows[:k_big])
    small = gf2.span_packed(rows[k_big:])
    chunk = max(1, (1 << 20) // big.shape[0])

    if rows.shape[1] == 1:
        big1 = big[:, 0]

        def count(lo):
            hi = min(lo + chunk, small.shape[0])
            w = np.bitwise_count(big1[None, :] ^ small[lo:hi, 0, None])
            return np.bincount(w.ravel(), minlength=n + 1)
    else:
        def count(lo):
            hi = min(lo + chunk, small.shape[0])
            w = gf2.popcount(big[None, :, :] ^ small[lo:hi, None, :])
            return np.bincount(w.ravel(), minlength=n + 1)

    starts = range(0, small.shape[0], chunk)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(count, starts))
    else:
        parts = [count(lo) for lo in starts]
    total = [0] * (n + 1)
    for part in parts:
        for i, c in enumerate(part):
            total[i] += int(c)
    return WeightDistribution(tuple(total))


def krawtchouk(n, i, j):
    """Coefficient of ``x^(n-i) y^i`` in ``(x + y)^(n-j) (x - y)^j``."""
    return sum((-1) ** l * comb(j, l) * comb(n - j, i - l)
               for l in range(max(0, i - n + j), min(i, j) + 1))


def krawtchouk_column(n, j):
    """``[K_0(j), ..., K_n(j)]`` by the three-term recurrence (exact ints)."""
    K = [1]
    if n >= 1:
        K.append(n - 2 * j)
    for i in range(1, n):
        num = (n - 2 * j) * K[i] - (n - i + 1) * K[i - 1]
        K.append(num // (i + 1))
    return K


def macwilliams_transform(dual_dist, n=None, dual_k=None):
    """Primal weight distribution from the dual's, in exact integers.

    ``A_i = 2^-dual_k * sum_j B_j K_i(j)`` where ``K_i(j)`` is the Krawtchouk
    polynomial; only weights ``j`` with ``B_j > 0`` contribute.
    """
    B = dual_dist.counts if isinstance(dual_dist, WeightDistribution) else tuple(dual_dist)
    if n is None:
        n = len(B) - 1
    if len(B) != n + 1:
        raise ValueError("dual distribution has %d entries, expected %d" % (len(B), n + 1))
    if dual_k is None:
        dual_k = WeightDistribution(B).k
    acc = [0] * (n + 1)
    for j, b in enumerate(B):
        if b:
            for i, kij in enumerate(krawtchouk_column(n, j)):
                acc[i] += b * kij
    scale = 1 << dual_k
    out = []
    for i, s in enumerate(acc):
        q, rem = divmod(s, scale)
        if rem:
            raise ConsistencyError("A_%d = %d / 2^%d is not an integer" % (i, s, dual_k))
        out.append(q)
    if any(a < 0 for a in out):
        raise ConsistencyError("MacWilliams produced a negative count")
    return WeightDistribution(tuple(out))


def weight_distribution(code, workers=1):
    """Weight distribution by the cheaper exact route (direct or via the dual).

    Cached on the code object.
    """
    wd = code.__dict__.get("_weight_distribution")
    if wd is not None:
        return wd
    dual_k = code.n - code.k
    if code.k <= min(dual_k, EXHAUSTIVE_MAX_K):
        wd = weight_distribution_exhaustive(code, workers=workers)
    elif dual_k <= EXHAUSTIVE_MAX_K:
        # span of H directly: avoids materialising the dual's own parity check
        H = code.parity_check
        if dual_k == 0:
            dual = WeightDistribution((1,) + (0,) * code.n)
        else:
            dual = _span_distribution(gf2.pack(H), code.n, workers)
        wd = macwilliams_transform(dual, code.n, dual_k)
    else:
        raise CapacityError("both %s and its dual exceed the enumeration budget" % code.name)
    code.__dict__["_weight_distribution"] = wd
    return wd


def _term_values(dist, x, y):
    """``(i, A_i x^(n-i) y^i)`` for the nonzero ``A_i``.

    A term is the plain float product when ``A_i`` fits a double and the
    result is a normal number; otherwise it goes through
    ``exp(ln A_i + (n-i) ln x + i ln y)``, which survives counts near
    ``2^247`` and products far below the double range.
    """
    n = dist.n
    lx = math.log(x) if x > 0 else -math.inf
    ly = math.log(y) if y > 0 else -math.inf
    out = []
    for i, a in enumerate(dist.counts):
        if not a:
            continue
        if (n - i and x == 0) or (i and y == 0):
            out.append((i, 0.0))
            continue
        if a < _FLOAT_SAFE:
            v = float(a) * x ** (n - i) * y ** i
            if v >= _TINY:
                out.append((i, v))
                continue
        t = math.log(a) + (n - i) * lx + i * ly
        out.append((i, math.exp(t)))
    return out


def enumerator_terms(dist, x, y):
    """Individual terms ``A_i x^(n-i) y^i`` as floats, indexed by weight."""
    out = np.zeros(dist.n + 1)
    for i, v in _term_values(dist, x, y):
        out[i] = v
    return out


def weight_enumerator_eval(dist, x, y, weights=None):
    """``sum_i A_i x^(n-i) y^i``, term by term with a compensated sum.

    ``weights`` optionally restricts the sum to a set of weights ``i``.
    """
    terms = _term_values(dist, x, y)
    if weights is not None:
        keep = set(weights)
        terms = [(i, v) for i, v in terms if i in keep]
    return math.fsum(v for _, v in terms)
