"""Binary linear codes: construction, encoding and membership.

Messages are indexed by integers: bit ``j`` of a message index is message
bit ``u_j``, so ``encode(code, index)`` is ``u @ G`` with that ``u``. This
fixes the message <-> codeword bijection used everywhere states of a Markov
context are identified with codewords.
"""

import itertools
import json
from functools import cached_property
from math import comb

import numpy as np

from . import gf2


class CodeParameterError(ValueError):
    """Invalid code parameters or mismatched vector lengths."""


class CapacityError(RuntimeError):
    """An enumeration would exceed its configured budget."""


class LinearCode:
    """A binary ``[n, k]`` linear code.

    Either matrix may be omitted; the missing one is derived. For very long
    codes (large Hamming codes) the generator can be supplied lazily through
    ``generator_factory`` so that only the parity-check matrix is held.
    """

    def __init__(self, generator=None, parity_check=None, name=None,
                 generator_factory=None, check=True):
        if generator is None and parity_check is None:
            raise CodeParameterError("need a generator or a parity-check matrix")
        if generator is not None:
            generator = np.atleast_2d(np.asarray(generator, dtype=np.uint8))
            n = generator.shape[1]
        else:
            parity_check = np.atleast_2d(np.asarray(parity_check, dtype=np.uint8))
            n = parity_check.shape[1]
        if parity_check is None:
            parity_check = gf2.nullspace(generator, n)
        parity_check = np.asarray(parity_check, dtype=np.uint8).reshape(-1, n)
        self.n = n
        self.parity_check = parity_check
        self._generator = generator
        self._factory = generator_factory
        if generator is not None:
            self.k = generator.shape[0]
        else:
            self.k = n - gf2.rank(parity_check)
        self.name = name or "[%d,%d]" % (self.n, self.k)
        if generator is not None and check:
            self.check()

    def __repr__(self):
        return "LinearCode(%s, n=%d, k=%d)" % (self.name, self.n, self.k)

    @property
    def generator(self):
        if self._generator is None:
            if self._factory is not None:
                G = self._factory()
            else:
                G = gf2.nullspace(self.parity_check, self.n)
            self._generator = np.asarray(G, dtype=np.uint8).reshape(-1, self.n)
            self.check()
        return self._generator

    @property
    def size(self):
        """Number of codewords, ``2^k``."""
        return 1 << self.k

    def check(self):
        G, H = self._generator, self.parity_check
        if G.shape[0] and gf2.rank(G) != G.shape[0]:
            raise CodeParameterError("generator rows are linearly dependent")
        if G.shape[0] != self.n - gf2.rank(H):
            raise CodeParameterError("generator and parity-check dimensions disagree")
        if G.size and H.size and gf2.matmul(G, H.T).any():
            raise CodeParameterError("G H^T != 0")

    @cached_property
    def _syndrome_cols(self):
        # column j of H as a Python int, for syndrome updates by bit flips
        return [gf2.row_to_int(col) for col in self.parity_check.T]

    @cached_property
    def _info_set(self):
        """Information-set columns and the inverse of G restricted to them."""
        G = self.generator
        if self.k == 0:
            return [], np.zeros((0, 0), dtype=np.uint8)
        _, pivots = gf2.rref(G)
        return pivots, gf2.inverse(G[:, pivots])

    @cached_property
    def packed_generator(self):
        return gf2.pack(self.generator)

    def codebook_packed(self):
        """All codewords, packed, in message-index order. Cached for ``k <= 20``."""
        cb = self.__dict__.get("_codebook")
        if cb is not None:
            return cb
        if self.k > 24:
            raise CapacityError("codebook of 2^%d words is too large to materialise" % self.k)
        cb = gf2.span_packed(self.packed_generator) if self.k else np.zeros((1, gf2.n_words(self.n)), np.uint64)
        if self.k <= 20:
            self.__dict__["_codebook"] = cb
        return cb

    def message_of(self, word):
        """Message index of a codeword (inverse of :func:`encode`)."""
        word = gf2.as_bits(word, self.n)
        if not is_codeword(self, word):
            raise CodeParameterError("vector is not a codeword")
        cols, inv = self._info_set
        if not cols:
            return 0
        u = gf2.matmul(word[cols][None, :], inv)[0]
        return int(sum(1 << j for j in np.flatnonzero(u)))


def hamming_code(m):
    """The ``[2^m - 1, 2^m - 1 - m]`` Hamming code.

    Column ``j`` of the parity-check matrix is the binary expansion of
    ``j + 1``; the generator has one row per non-power-of-two position.
    """
    if not isinstance(m, (int, np.integer)) or not 2 <= m <= 16:
        raise CodeParameterError("Hamming parameter m must be an integer in [2, 16], got %r" % (m,))
    m = int(m)
    n = (1 << m) - 1
    pos = np.arange(1, n + 1)
    H = ((pos[None, :] >> np.arange(m)[:, None]) & 1).astype(np.uint8)

    def build():
        data = [j for j in range(n) if (j + 1) & j]
        G = np.zeros((len(data), n), dtype=np.uint8)
        for r, j in enumerate(data):
            G[r, j] = 1
            for b in range(m):
                if (j + 1) >> b & 1:
                    G[r, (1 << b) - 1] = 1
        return G

    name = "Hamming(%d,%d)" % (n, n - m)
    if n <= 1023:
        return LinearCode(build(), H, name=name)
    return LinearCode(parity_check=H, name=name, generator_factory=build)


def _monomials(m, r):
    # graded lexicographic: by degree, then by variable tuple
    for deg in range(r + 1):
        yield from itertools.combinations(range(m), deg)


def _rm_generator(r, m):
    n = 1 << m
    pts = np.arange(n)
    x = ((pts[None, :] >> np.arange(m)[:, None]) & 1).astype(np.uint8)
    rows = []
    for mono in _monomials(m, r):
        row = np.ones(n, dtype=np.uint8)
        for v in mono:
            row &= x[v]
        rows.append(row)
    if not rows:
        return np.zeros((0, n), dtype=np.uint8)
    return np.array(rows, dtype=np.uint8)


def reed_muller_code(r, m):
    """Reed-Muller code RM(r, m) of length ``2^m``.

    Generator rows are the evaluation vectors of the monomials of degree at
    most ``r`` over all points of ``GF(2)^m``, in graded-lex order; point
    ``i`` has coordinates given by the bits of ``i``. The parity-check matrix
    is the generator of RM(m - r - 1, m).
    """
    if not (0 <= m <= 10) or not (0 <= r <= m):
        raise CodeParameterError("RM(r, m) needs 0 <= r <= m <= 10, got r=%r, m=%r" % (r, m))
    G = _rm_generator(r, m)
    H = _rm_generator(m - r - 1, m)
    return LinearCode(G, H, name="RM(%d,%d)" % (r, m))


def repetition_code(n):
    return LinearCode(np.ones((1, n), dtype=np.uint8), name="Rep(%d)" % n)


def dual_code(code):
    return LinearCode(code.parity_check, code.generator, name="dual(%s)" % code.name)


def rm_dimension(r, m):
    return sum(comb(m, i) for i in range(r + 1))


def encode(code, message):
    """Encode a message given either as ``k`` bits or as a message index."""
    if isinstance(message, (int, np.integer)):
        idx = int(message)
        if not 0 <= idx < code.size:
            raise CodeParameterError("message index %d out of range for k=%d" % (idx, code.k))
        u = np.array([(idx >> j) & 1 for j in range(code.k)], dtype=np.uint8)
    else:
        try:
            u = gf2.as_bits(message, code.k)
        except ValueError as exc:
            raise CodeParameterError(str(exc)) from None
    if code.k == 0:
        return np.zeros(code.n, dtype=np.uint8)
    return gf2.matmul(u[None, :], code.generator)[0]


def syndrome(code, v):
    try:
        v = gf2.as_bits(v, code.n)
    except ValueError as exc:
        raise CodeParameterError(str(exc)) from None
    if code.parity_check.shape[0] == 0:
        return np.zeros(0, dtype=np.uint8)
    return gf2.matmul(code.parity_check, v[:, None])[:, 0]


def is_codeword(code, v):
    return not syndrome(code, v).any()


def hamming_distance(a, b):
    a = gf2.as_bits(a)
    b = gf2.as_bits(b)
    if a.shape != b.shape:
        raise CodeParameterError("length mismatch: %d vs %d" % (a.shape[0], b.shape[0]))
    return int(np.count_nonzero(a ^ b))


def hamming_weight(a):
    return int(np.count_nonzero(gf2.as_bits(a)))


def code_from_spec(spec):
    """Build a code from a dict like ``{"family": "reed_muller", "r": 2, "m": 4}``."""
    family = spec.get("family")
    if family == "hamming":
        return hamming_code(int(spec["m"]))
    if family == "reed_muller":
        return reed_muller_code(int(spec["r"]), int(spec["m"]))
    if family == "repetition":
        return repetition_code(int(spec["n"]))
    if family == "explicit":
        G = np.array(spec["generator"], dtype=np.uint8)
        return LinearCode(G, name=spec.get("name"))
    raise CodeParameterError("unknown code family %r" % (family,))


def load_code(path):
    with open(path) as fh:
        return code_from_spec(json.load(fh))


def parse_code(text):
    """Parse the short CLI form: ``hamming:3``, ``rm:2,4``, ``rep:3`` or a JSON path."""
    family, _, args = text.partition(":")
    try:
        if family == "hamming":
            return hamming_code(int(args))
        if family == "rm":
            r, m = (int(a) for a in args.split(","))
            return reed_muller_code(r, m)
        if family == "rep":
            return repetition_code(int(args))
    except ValueError as exc:
        raise CodeParameterError("bad code spec %r: %s" % (text, exc)) from None
    if text.endswith(".json"):
        return load_code(text)
    raise CodeParameterError("bad code spec %r" % (text,))
