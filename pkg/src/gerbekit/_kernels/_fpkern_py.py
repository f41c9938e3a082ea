"""Pure-Python elimination kernels.

Rows over F_2 are Python ints used as bitsets (bit i = column i); rows over
odd primes are lists of residues.  The compiled backend exposes the same
two entry points with identical results.
"""

from __future__ import annotations

BACKEND = "py"


def echelon_f2(rows, ncols):
    """Row echelon by leading bit.  Returns (rank, pivot_rows).

    pivot_rows are the nonzero reduced rows sorted by leading bit,
    highest first; every row of the input is in their span.
    """
    pivots = {}
    for r in rows:
        while r:
            lead = r.bit_length() - 1
            p = pivots.get(lead)
            if p is None:
                pivots[lead] = r
                break
            r ^= p
    return len(pivots), [pivots[b] for b in sorted(pivots, reverse=True)]


def echelon_fp(rows, ncols, p):
    """Row echelon over F_p with leftmost-column pivots.

    Returns (rank, pivot_cols, pivot_rows) with each pivot row scaled to a
    leading 1 and sorted by pivot column.
    """
    pivots = []  # (col, row) pairs, kept sorted by col
    for row in rows:
        r = [a % p for a in row]
        for col, prow in pivots:
            f = r[col]
            if f:
                r = [(a - f * b) % p for a, b in zip(r, prow)]
        lead = next((i for i, a in enumerate(r) if a), None)
        if lead is None:
            continue
        inv = pow(r[lead], -1, p)
        r = [(a * inv) % p for a in r]
        pivots.append((lead, r))
        pivots.sort(key=lambda t: t[0])
    return (
        len(pivots),
        [c for c, _ in pivots],
        [r for _, r in pivots],
    )
