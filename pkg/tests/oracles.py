"""Independent oracles for the test suite.

Everything here is deliberately self-contained: its own rank routine, its
own bar-complex differentials, its own bijection filters.  Nothing imports
the package's linear algebra or nerve machinery, so agreement between the
two paths is meaningful.
"""

from __future__ import annotations

from itertools import permutations, product


def rank_mod_p(rows, p):
    """Gaussian elimination on dense rows, fractions-free, standalone."""
    work = [[a % p for a in row] for row in rows]
    ncols = len(work[0]) if work else 0
    rank = 0
    row_at = 0
    for col in range(ncols):
        pivot = None
        for r in range(row_at, len(work)):
            if work[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        work[row_at], work[pivot] = work[pivot], work[row_at]
        inv = pow(work[row_at][col], p - 2, p)
        work[row_at] = [(a * inv) % p for a in work[row_at]]
        for r in range(len(work)):
            if r != row_at and work[r][col]:
                f = work[r][col]
                work[r] = [
                    (a - f * b) % p for a, b in zip(work[r], work[row_at])
                ]
        rank += 1
        row_at += 1
        if row_at == len(work):
            break
    return rank


def bar_cohomology_dims(mult, unit, p, max_q):
    """Group cohomology dims H^q(G; F_p), trivial coefficients, bar complex.

    ``mult`` is the full multiplication table (indices), ``unit`` the unit
    index.  C^q = maps G^q -> F_p with the standard inhomogeneous
    differential; dims computed with the local rank routine.
    """
    n = len(mult)
    tuples = {q: list(product(range(n), repeat=q)) for q in range(max_q + 2)}

    def delta_matrix(q):
        # rows: (q+1)-tuples, cols: q-tuples
        rows = []
        col_index = {t: i for i, t in enumerate(tuples[q])}
        for gs in tuples[q + 1]:
            row = [0] * len(tuples[q])
            row[col_index[gs[1:]]] += 1
            for i in range(1, q + 1):
                merged = gs[: i - 1] + (mult[gs[i - 1]][gs[i]],) + gs[i + 1 :]
                row[col_index[merged]] += (-1) ** i
            row[col_index[gs[:-1]]] += (-1) ** (q + 1)
            rows.append([a % p for a in row])
        return rows

    dims = []
    ranks = {}
    for q in range(max_q + 1):
        if q not in ranks:
            ranks[q] = rank_mod_p(delta_matrix(q), p)
        if q - 1 >= 0 and (q - 1) not in ranks:
            ranks[q - 1] = rank_mod_p(delta_matrix(q - 1), p)
        dim_cq = len(tuples[q])
        ker = dim_cq - ranks[q]
        im = ranks[q - 1] if q > 0 else 0
        dims.append(ker - im)
    return dims


def brute_force_automorphisms(mult, unit):
    """All bijections of element indices preserving the table."""
    n = len(mult)
    autos = []
    for perm in permutations(range(n)):
        if perm[unit] != unit:
            continue
        if all(
            perm[mult[a][b]] == mult[perm[a]][perm[b]]
            for a in range(n)
            for b in range(n)
        ):
            autos.append(perm)
    return autos


def brute_force_center(mult):
    n = len(mult)
    return [
        a for a in range(n) if all(mult[a][b] == mult[b][a] for b in range(n))
    ]


def one_kernel_three_simplices(n):
    """Tuples (a0..a3) in (Z/n)^4 with a3 + a1 = a0 + a2."""
    return [
        (a0, a1, a2, a3)
        for a0 in range(n)
        for a1 in range(n)
        for a2 in range(n)
        for a3 in range(n)
        if (a3 + a1) % n == (a0 + a2) % n
    ]
