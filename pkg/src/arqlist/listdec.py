"""Radius-r list decoding over the codebook and same-list equivalence sets.

Lists hold message indices. Because the message map is linear, the list
around codeword ``c`` is the list around zero translated by ``c``, which in
index space is an XOR with the index of ``c``.
"""

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from . import gf2
from .codes import CapacityError, CodeParameterError, is_codeword
from .weights import weight_distribution

BALL_BUDGET = 1 << 24
STABILIZER_BUDGET = 50_000


@dataclass(frozen=True)
class DecodeList:
    center: int
    members: tuple
    distances: tuple
    radius: int

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, item):
        return item in self.members


def _ball_scan(code, y, r):
    cb = code.codebook_packed()
    dist = gf2.popcount(cb ^ gf2.pack(y))
    idx = np.flatnonzero(dist <= r)
    return {int(i): int(dist[i]) for i in idx}


def _ball_patterns(code, y, r):
    cols = code._syndrome_cols
    s0 = gf2.row_to_int(gf2.matmul(code.parity_check, y[:, None])[:, 0]) if code.parity_check.size else 0
    out = {}
    for w in range(r + 1):
        for pos in itertools.combinations(range(code.n), w):
            s = s0
            for j in pos:
                s ^= cols[j]
            if s == 0:
                z = y.copy()
                z[list(pos)] ^= 1
                out[code.message_of(z)] = w
    return out


def ball(code, y, r, method="auto"):
    """Codewords within distance ``r`` of ``y`` as ``{message index: distance}``.

    ``method`` is ``"scan"`` (walk the codebook), ``"patterns"`` (walk error
    patterns of weight <= r and keep those landing on codewords) or
    ``"auto"`` for the cheaper of the two.
    """
    if r < 0:
        raise CodeParameterError("radius must be nonnegative")
    y = gf2.as_bits(y, code.n)
    r = min(r, code.n)
    scan_cost = code.size
    pattern_cost = sum(comb(code.n, i) for i in range(r + 1))
    if method == "auto":
        method = "scan" if scan_cost <= pattern_cost else "patterns"
    cost = scan_cost if method == "scan" else pattern_cost
    if cost > BALL_BUDGET or (method == "scan" and code.k > 24):
        raise CapacityError("ball enumeration needs %d steps (budget %d)" % (cost, BALL_BUDGET))
    if method == "scan":
        return _ball_scan(code, y, r)
    if method == "patterns":
        return _ball_patterns(code, y, r)
    raise ValueError("unknown method %r" % (method,))


def _zero_ball(code, radius):
    cache = code.__dict__.setdefault("_zero_balls", {})
    if radius not in cache:
        b = ball(code, np.zeros(code.n, dtype=np.uint8), radius)
        order = sorted(b.items(), key=lambda kv: (kv[1], kv[0]))
        idx = np.array([i for i, _ in order], dtype=np.int64)
        dist = np.array([w for _, w in order], dtype=np.int64)
        cache[radius] = (idx, dist)
    return cache[radius]


def _default_radius(code):
    d = weight_distribution(code).min_distance
    if d is None:
        return 0
    return d


def _center_index(code, received):
    if isinstance(received, (int, np.integer)):
        i = int(received)
        if not 0 <= i < code.size:
            raise CodeParameterError("message index %d out of range" % i)
        return i
    received = gf2.as_bits(received, code.n)
    if not is_codeword(code, received):
        raise CodeParameterError("decode_list expects a codeword; ARQ only delivers codewords")
    return code.message_of(received)


def decode_list(code, received, radius=None):
    """List of all codewords within ``radius`` (default ``d``) of a codeword.

    ``received`` is a codeword bit vector or its message index. Members are
    ordered by (distance, message index), so the center comes first.
    """
    if radius is None:
        radius = _default_radius(code)
    c = _center_index(code, received)
    idx, dist = _zero_ball(code, radius)
    members = idx ^ c
    order = np.lexsort((members, dist))
    return DecodeList(center=c, members=tuple(int(v) for v in members[order]),
                      distances=tuple(int(v) for v in dist[order]), radius=radius)


def list_size(code, radius=None):
    if radius is None:
        radius = _default_radius(code)
    return len(_zero_ball(code, radius)[0])


def list_stabilizer(code, radius=None):
    """Message indices ``t`` with ``t + L(0) = L(0)``, as a sorted array.

    Since every list is a translate of ``L(0)``, ``L(c) = L(s)`` exactly when
    ``c - s`` lies in this set. Candidates are restricted to ``L(0)`` itself
    because ``0`` is in it.
    """
    if radius is None:
        radius = _default_radius(code)
    cache = code.__dict__.setdefault("_stabilizers", {})
    if radius in cache:
        return cache[radius]
    base = np.sort(_zero_ball(code, radius)[0])
    if len(base) > STABILIZER_BUDGET:
        raise CapacityError(
            "list size %d too large for same-list sets; fall back to |S| = 1, "
            "which keeps the bound valid" % len(base))
    keep = [int(t) for t in base if np.isin(base ^ t, base, assume_unique=True).all()]
    cache[radius] = np.array(keep, dtype=np.int64)
    return cache[radius]


def same_list_set(code, s, radius=None):
    """``S(s)``: codewords whose list equals the list of ``s``, as message indices."""
    c = _center_index(code, s)
    return frozenset(int(t) ^ c for t in list_stabilizer(code, radius))
