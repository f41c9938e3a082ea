# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled elimination kernels; mirrors _fpkern_py exactly.

Rows over F_2 are packed into 64-bit words; reductions only touch words up
to the current leading word, which shrinks as elimination proceeds.  Rows
over odd primes stream through a dense work vector, so the input may be
any iterable of indexable rows.
"""

import numpy as np

BACKEND = "c"


cdef int _lead_bit_word(unsigned long long w):
    cdef int b = 0
    if w >> 32:
        b += 32
        w >>= 32
    if w >> 16:
        b += 16
        w >>= 16
    if w >> 8:
        b += 8
        w >>= 8
    if w >> 4:
        b += 4
        w >>= 4
    if w >> 2:
        b += 2
        w >>= 2
    if w >> 1:
        b += 1
    return b


def echelon_f2(rows, ncols):
    """Row echelon by leading bit; (rank, pivot_rows) like the py backend."""
    rows = list(rows)
    cdef Py_ssize_t n = len(rows)
    if n == 0:
        return 0, []
    cdef Py_ssize_t nwords = (max(ncols, 1) + 63) // 64
    widest = max((r.bit_length() for r in rows), default=0)
    if widest > nwords * 64:
        nwords = (widest + 63) // 64
    nbytes = nwords * 8
    buf = np.frombuffer(
        b"".join(r.to_bytes(nbytes, "little") for r in rows), dtype=np.uint8
    ).reshape(n, nbytes).copy()
    mat = buf.view(np.uint64)
    cdef unsigned long long[:, ::1] m = mat
    pol_arr = np.full(nwords * 64, -1, dtype=np.int64)
    cdef long long[::1] pol = pol_arr
    cdef Py_ssize_t i, w, wl
    cdef long long j
    cdef int lead
    order = []
    for i in range(n):
        wl = nwords - 1
        while True:
            # locate the leading word, scanning downward from the hint
            while wl >= 0 and m[i, wl] == 0:
                wl -= 1
            if wl < 0:
                break
            lead = <int> (64 * wl) + _lead_bit_word(m[i, wl])
            j = pol[lead]
            if j < 0:
                pol[lead] = i
                order.append((lead, i))
                break
            # pivot row has no content above word wl
            for w in range(wl + 1):
                m[i, w] ^= m[j, w]
    order.sort(key=lambda t: -t[0])
    pivots = [
        int.from_bytes(buf[i].tobytes(), "little") for (_lead, i) in order
    ]
    return len(pivots), pivots


def echelon_fp(rows, ncols, p):
    """Row echelon over F_p, leftmost pivots; mirrors the py backend.

    ``rows`` may be any iterable of indexable rows of length ncols.
    """
    cdef Py_ssize_t m_ = ncols
    if ncols == 0:
        return 0, [], []
    piv = np.zeros((m_, m_), dtype=np.int64)
    cdef long long[:, ::1] pv = piv
    piv_cols = np.full(m_, -1, dtype=np.int64)
    cdef long long[::1] pc = piv_cols
    work = np.zeros(m_, dtype=np.int64)
    cdef long long[::1] wk = work
    cdef Py_ssize_t nk = 0
    cdef Py_ssize_t k, c
    cdef long long f, inv, pp = p
    cdef long long lead
    for row in rows:
        if nk == m_:
            break
        for c in range(m_):
            wk[c] = row[c] % pp
        for k in range(nk):
            f = wk[pc[k]]
            if f:
                for c in range(m_):
                    wk[c] = ((wk[c] - f * pv[k, c]) % pp + pp) % pp
        lead = -1
        for c in range(m_):
            if wk[c]:
                lead = c
                break
        if lead < 0:
            continue
        inv = pow(int(wk[lead]), int(pp) - 2, int(pp))
        for c in range(m_):
            wk[c] = (wk[c] * inv) % pp
        k = nk
        while k > 0 and pc[k - 1] > lead:
            for c in range(m_):
                pv[k, c] = pv[k - 1, c]
            pc[k] = pc[k - 1]
            k -= 1
        for c in range(m_):
            pv[k, c] = wk[c]
        pc[k] = lead
        nk += 1
    cols = [int(pc[k]) for k in range(nk)]
    out_rows = [[int(pv[k, c]) for c in range(m_)] for k in range(nk)]
    return nk, cols, out_rows
