"""Elimination over Q.

Gaussian elimination works on sparse dict rows of ``Fraction``; the Koszul
matrices are mostly signed 0/1 blocks, so rows stay short.  The Bareiss
routine is a fraction-free integer algorithm on the same sparse rows and
serves as the independent rank oracle.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

import numpy as np

Row = dict[int, Fraction]


def sparse_rows(M: np.ndarray) -> list[Row]:
    rows = []
    for line in M.tolist():
        rows.append({j: x if type(x) is Fraction else Fraction(x) for j, x in enumerate(line) if x})
    return rows


def _reduce(row: Row, pivots: dict[int, Row]) -> Row:
    while row:
        c = min(row)
        prow = pivots.get(c)
        if prow is None:
            return row
        f = row[c]
        for j, x in prow.items():
            y = row.get(j, 0) - f * x
            if y:
                row[j] = y
            else:
                row.pop(j, None)
    return row


def echelon(M: np.ndarray) -> dict[int, Row]:
    """Pivot rows keyed by leading column, each with leading entry 1."""
    return echelon_rows(sparse_rows(M))


def echelon_rows(rows: list[Row]) -> dict[int, Row]:
    """As :func:`echelon` on sparse rows; the rows are consumed."""
    pivots: dict[int, Row] = {}
    for row in rows:
        row = _reduce(row, pivots)
        if row:
            c = min(row)
            lead = row[c]
            pivots[c] = {j: x / lead for j, x in row.items()}
    return pivots


def rref(M: np.ndarray) -> tuple[list[Row], list[int]]:
    pivots = echelon(M)
    cols = sorted(pivots)
    # back substitution from the right
    for idx in range(len(cols) - 1, -1, -1):
        c = cols[idx]
        row = pivots[c]
        for c2 in cols[idx + 1:]:
            f = row.get(c2)
            if f:
                for j, x in pivots[c2].items():
                    y = row.get(j, 0) - f * x
                    if y:
                        row[j] = y
                    else:
                        row.pop(j, None)
    return [pivots[c] for c in cols], cols


def rank_gauss(M: np.ndarray) -> int:
    return len(echelon(M))


def _integer_rows(rows: list[Row]) -> list[dict[int, int]]:
    """Sparse rows with denominators cleared row by row."""
    out = []
    for row in rows:
        den = lcm(*(x.denominator for x in row.values())) if row else 1
        out.append({j: int(x * den) for j, x in row.items()})
    return out


def rank_bareiss(M: np.ndarray) -> int:
    return rank_bareiss_rows(sparse_rows(M))


def rank_bareiss_rows(source: list[Row]) -> int:
    """Fraction-free Bareiss elimination on sparse integer rows.

    A row with no entry in the pivot column would only be rescaled by
    piv_k / piv_{k-1}; those factors telescope, so each row remembers the
    pivot it was last brought up to date with and is rescaled lazily.
    """
    rows = _integer_rows(source)
    base = [1] * len(rows)
    by_col: dict[int, set[int]] = {}
    for i, row in enumerate(rows):
        for j in row:
            by_col.setdefault(j, set()).add(i)
    prev = 1
    r = 0

    def current(i: int) -> dict[int, int]:
        row = rows[i]
        if base[i] != prev:
            for j, x in row.items():
                q, rem = divmod(x * prev, base[i])
                if rem:
                    raise ArithmeticError("Bareiss rescaling was not exact")
                row[j] = q
            base[i] = prev
        return row

    for c in sorted(by_col):
        live = by_col.pop(c)
        if not live:
            continue
        p = min(live, key=lambda i: (len(rows[i]), i))
        prow = current(p)
        piv = prow[c]
        for i in live:
            if i == p:
                continue
            row = current(i)
            f = row.pop(c)
            for j in set(row) | set(prow):
                if j == c:
                    continue
                num = piv * row.get(j, 0) - f * prow.get(j, 0)
                q, rem = divmod(num, prev)
                if rem:
                    raise ArithmeticError("Bareiss division was not exact")
                if q:
                    if j not in row:
                        by_col[j].add(i)
                    row[j] = q
                elif j in row:
                    del row[j]
                    by_col[j].discard(i)
            base[i] = piv
        for j in prow:
            if j != c:
                by_col[j].discard(p)
        rows[p] = {}
        prev = piv
        r += 1
    return r
