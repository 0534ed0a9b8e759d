"""Pure numpy fallback with the same contract as the compiled ``_kernels``."""

import numpy as np


def _first_nonzero(col: np.ndarray) -> int:
    hits = np.flatnonzero(col)
    return int(hits[0]) if hits.size else -1


def echelon(A: np.ndarray, p: int, reduced: bool = False) -> list[int]:
    rows, cols = A.shape
    r = 0
    pivots = []
    for c in range(cols):
        if r >= rows:
            break
        off = _first_nonzero(A[r:, c])
        if off < 0:
            continue
        i = r + off
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r, c:] = (A[r, c:] * inv) % p
        nz = c + np.flatnonzero(A[r, c:])
        targets = np.flatnonzero(A[:, c]) if reduced else r + 1 + np.flatnonzero(A[r + 1:, c])
        targets = targets[targets != r]
        if targets.size:
            g = (p - A[targets, c])[:, None]
            block = A[np.ix_(targets, nz)]
            A[np.ix_(targets, nz)] = (block + g * A[r, nz][None, :]) % p
        pivots.append(c)
        r += 1
    return pivots


def bareiss_rank(A: np.ndarray, p: int) -> int:
    rows, cols = A.shape
    r = 0
    prev = 1
    for c in range(cols):
        if r >= rows:
            break
        off = _first_nonzero(A[r:, c])
        if off < 0:
            continue
        i = r + off
        if i != r:
            A[[r, i]] = A[[i, r]]
        piv = int(A[r, c])
        inv_prev = pow(prev, -1, p)
        targets = r + 1 + np.flatnonzero(A[r + 1:, c])
        if targets.size:
            f = A[targets, c][:, None]
            block = A[targets, c + 1:]
            block = (block * piv) % p
            block = (block + (p - f) * A[r, c + 1:][None, :]) % p
            A[targets, c + 1:] = (block * inv_prev) % p
            A[targets, c] = 0
        prev = piv
        r += 1
    return r
