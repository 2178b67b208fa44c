"""GF(2) linear algebra and bit packing helpers.

Matrices are numpy ``uint8`` arrays of 0/1. Elimination and codeword
enumeration work on rows packed into little-endian ``uint64`` words (bit
``j`` of the row is column ``j``).
"""

import numpy as np

WORD = 64


def as_bits(v, n=None):
    """Coerce ``v`` to a 1-D ``uint8`` 0/1 array, optionally checking length."""
    a = np.asarray(v, dtype=np.uint8)
    if a.ndim != 1:
        raise ValueError("expected a 1-D bit vector, got shape %r" % (a.shape,))
    if np.any(a > 1):
        raise ValueError("bit vector entries must be 0 or 1")
    if n is not None and a.shape[0] != n:
        raise ValueError("expected length %d, got %d" % (n, a.shape[0]))
    return a


def n_words(n):
    return max(1, -(-n // WORD))


def pack(bits):
    """Pack ``(..., n)`` 0/1 arrays into ``(..., W)`` little-endian uint64 words."""
    bits = np.asarray(bits, dtype=np.uint8)
    n = bits.shape[-1]
    W = n_words(n)
    pad = W * WORD - n
    if pad:
        widths = [(0, 0)] * (bits.ndim - 1) + [(0, pad)]
        bits = np.pad(bits, widths)
    by = np.packbits(bits, axis=-1, bitorder="little")
    return np.ascontiguousarray(by).view("<u8").astype(np.uint64, copy=False)


def unpack(words, n):
    words = np.ascontiguousarray(np.asarray(words, dtype="<u8"))
    by = words.view(np.uint8)
    bits = np.unpackbits(by, axis=-1, bitorder="little")
    return bits[..., :n]


def popcount(words):
    """Total set bits along the last axis of a packed array."""
    return np.bitwise_count(words).sum(axis=-1, dtype=np.int64)


def row_to_int(row):
    out = 0
    for j in np.flatnonzero(row):
        out |= 1 << int(j)
    return out


def int_to_row(x, n):
    return np.array([(x >> j) & 1 for j in range(n)], dtype=np.uint8)


def rref(M):
    """Reduced row echelon form over GF(2).

    Returns ``(R, pivots)``: the nonzero reduced rows as a uint8 array and the
    leading column of each row.
    """
    M = np.atleast_2d(np.asarray(M, dtype=np.uint8))
    rows, n = M.shape
    P = pack(M) if rows else np.zeros((0, n_words(n)), np.uint64)
    pivots = []
    top = 0
    for col in range(n):
        if top == rows:
            break
        w, b = divmod(col, WORD)
        bit = np.uint64(1) << np.uint64(b)
        has = (P[top:, w] & bit) != 0
        if not has.any():
            continue
        hit = top + int(np.argmax(has))
        if hit != top:
            P[[top, hit]] = P[[hit, top]]
        mask = (P[:, w] & bit) != 0
        mask[top] = False
        P[mask] ^= P[top]
        pivots.append(col)
        top += 1
    return unpack(P[:top], n).astype(np.uint8), pivots


def rank(M):
    M = np.asarray(M, dtype=np.uint8)
    if M.size == 0:
        return 0
    return len(rref(M)[1])


def nullspace(M, n=None):
    """Basis of ``{x : M x^T = 0}`` as a ``(n - rank, n)`` uint8 array."""
    M = np.asarray(M, dtype=np.uint8)
    if n is None:
        n = M.shape[1]
    if M.size == 0:
        return np.eye(n, dtype=np.uint8)
    R, pivots = rref(M)
    piv = set(pivots)
    free = [j for j in range(n) if j not in piv]
    basis = np.zeros((len(free), n), dtype=np.uint8)
    basis[np.arange(len(free)), free] = 1
    if pivots:
        # x_pivot = sum of free entries in that reduced row
        basis[:, pivots] = R[:, free].T
    return basis


def inverse(A):
    """Inverse of a square nonsingular GF(2) matrix."""
    A = np.asarray(A, dtype=np.uint8)
    k = A.shape[0]
    if A.shape != (k, k):
        raise ValueError("matrix must be square")
    aug = np.concatenate([A, np.eye(k, dtype=np.uint8)], axis=1)
    R, pivots = rref(aug)
    if pivots[:k] != list(range(k)):
        raise ValueError("matrix is singular over GF(2)")
    return np.ascontiguousarray(R[:k, k:])


def matmul(A, B):
    """``A @ B`` over GF(2)."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    return ((A @ B) & 1).astype(np.uint8)


def same_row_space(A, B):
    A = np.asarray(A, dtype=np.uint8)
    B = np.asarray(B, dtype=np.uint8)
    ra, rb = rank(A), rank(B)
    if ra != rb:
        return False
    if ra == 0:
        return True
    return rank(np.concatenate([A, B], axis=0)) == ra


def span_packed(rows_packed):
    """All ``2^r`` XOR combinations of packed rows.

    Index ``i`` of the result is the combination selected by the bits of
    ``i`` (bit ``j`` picks row ``j``).
    """
    rows_packed = np.asarray(rows_packed, dtype=np.uint64)
    W = rows_packed.shape[1] if rows_packed.ndim == 2 else 1
    out = np.zeros((1, W), dtype=np.uint64)
    for row in rows_packed:
        out = np.concatenate([out, out ^ row], axis=0)
    return out
