# cython: language_level=3
"""Compiled kernels.

Mirror of ``pure.py``, operation for operation.  Keep every floating
point expression split into single-rounding steps (one multiply or add
per statement where it matters) so the C compiler cannot contract a
multiply-add pair into an fma; the two backends must agree bitwise.
"""

import numpy as np

from libc.math cimport INFINITY, M_PI, asin, cos, sin, sqrt

BACKEND_NAME = "native"

EARTH_RADIUS_M = 6371008.8

cdef double _R = 6371008.8
cdef double _DEG = M_PI / 180.0


def haversine_m(double lat1, double lon1, double lat2, double lon2):
    """Great-circle distance in meters between two WGS84 points."""
    cdef double p1 = lat1 * _DEG
    cdef double p2 = lat2 * _DEG
    cdef double dp = (lat2 - lat1) * _DEG
    cdef double dl = (lon2 - lon1) * _DEG
    cdef double sp = sin(dp * 0.5)
    cdef double sl = sin(dl * 0.5)
    cdef double spp = sp * sp
    cdef double cc = cos(p1) * cos(p2)
    cdef double sll = sl * sl
    cdef double a = spp + cc * sll
    if a > 1.0:
        a = 1.0
    return 2.0 * _R * asin(sqrt(a))


def nearest_segment(px, py, ax, ay, bx, by):
    """Closest segment to a planar point among (ax,ay)->(bx,by) pairs.

    Same contract as the pure version: (index, squared_distance, t),
    first index wins ties, index -1 on empty input.
    """
    cdef double[::1] axv = np.ascontiguousarray(ax, dtype=np.float64)
    cdef double[::1] ayv = np.ascontiguousarray(ay, dtype=np.float64)
    cdef double[::1] bxv = np.ascontiguousarray(bx, dtype=np.float64)
    cdef double[::1] byv = np.ascontiguousarray(by, dtype=np.float64)
    cdef double pxd = px
    cdef double pyd = py
    cdef Py_ssize_t n = axv.shape[0]
    cdef Py_ssize_t i, best_i = -1
    cdef double best_d2 = INFINITY
    cdef double best_t = 0.0
    cdef double x1, y1, dx, dy, dx2, dy2, l2, u1, u2, m1, m2, s, t
    cdef double tdx, tdy, cx, cy, ex, ey, ex2, ey2, d2
    for i in range(n):
        x1 = axv[i]
        y1 = ayv[i]
        dx = bxv[i] - x1
        dy = byv[i] - y1
        dx2 = dx * dx
        dy2 = dy * dy
        l2 = dx2 + dy2
        if l2 == 0.0:
            t = 0.0
        else:
            u1 = pxd - x1
            u2 = pyd - y1
            m1 = u1 * dx
            m2 = u2 * dy
            s = m1 + m2
            t = s / l2
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
        tdx = t * dx
        tdy = t * dy
        cx = x1 + tdx
        cy = y1 + tdy
        ex = pxd - cx
        ey = pyd - cy
        ex2 = ex * ex
        ey2 = ey * ey
        d2 = ex2 + ey2
        if d2 < best_d2:
            best_d2 = d2
            best_i = i
            best_t = t
    return best_i, best_d2, best_t


cdef inline Py_ssize_t _heap_push(
    double[::1] hk, long[::1] hn, Py_ssize_t size, double key, long node
):
    cdef Py_ssize_t i = size
    cdef Py_ssize_t p
    while i > 0:
        p = (i - 1) >> 1
        if hk[p] > key or (hk[p] == key and hn[p] > node):
            hk[i] = hk[p]
            hn[i] = hn[p]
            i = p
        else:
            break
    hk[i] = key
    hn[i] = node
    return size + 1


cdef inline Py_ssize_t _heap_pop(double[::1] hk, long[::1] hn, Py_ssize_t size):
    # root was already read by the caller; move the tail down into place
    cdef double key = hk[size - 1]
    cdef long node = hn[size - 1]
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t c
    size -= 1
    if size == 0:
        return 0
    while True:
        c = 2 * i + 1
        if c >= size:
            break
        if c + 1 < size and (
            hk[c + 1] < hk[c] or (hk[c + 1] == hk[c] and hn[c + 1] < hn[c])
        ):
            c += 1
        if hk[c] < key or (hk[c] == key and hn[c] < node):
            hk[i] = hk[c]
            hn[i] = hn[c]
            i = c
        else:
            break
    hk[i] = key
    hn[i] = node
    return size


def dijkstra_dist(indptr, indices, weights, h, long source, long target):
    """Label-setting shortest-path distances on a CSR adjacency.

    Same contract and same float op order as the pure version.  The heap
    orders entries by (key, node), a total order, so both backends pop
    in the identical sequence.
    """
    cdef long[::1] iptr = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef long[::1] idx = np.ascontiguousarray(indices, dtype=np.int64)
    cdef double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef double[::1] hh = np.ascontiguousarray(h, dtype=np.float64)
    cdef Py_ssize_t n = iptr.shape[0] - 1
    dist_arr = np.full(n, INFINITY, dtype=np.float64)
    cdef double[::1] dist = dist_arr
    settled_arr = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] settled = settled_arr
    cdef Py_ssize_t cap = idx.shape[0] + 2
    hk_arr = np.empty(cap, dtype=np.float64)
    hn_arr = np.empty(cap, dtype=np.int64)
    cdef double[::1] hk = hk_arr
    cdef long[::1] hn = hn_arr
    cdef Py_ssize_t hs = 0
    cdef double cutoff = INFINITY
    cdef double key, du, nd
    cdef long u, v
    cdef Py_ssize_t e
    dist[source] = 0.0
    hs = _heap_push(hk, hn, hs, 0.0 + hh[source], source)
    while hs > 0:
        key = hk[0]
        u = hn[0]
        hs = _heap_pop(hk, hn, hs)
        if key > cutoff:
            break
        if settled[u]:
            continue
        settled[u] = 1
        if u == target and cutoff == INFINITY:
            cutoff = key
        du = dist[u]
        for e in range(iptr[u], iptr[u + 1]):
            v = idx[e]
            if settled[v]:
                continue
            nd = du + w[e]
            if nd < dist[v]:
                dist[v] = nd
                hs = _heap_push(hk, hn, hs, nd + hh[v], v)
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] outv = out
    cdef Py_ssize_t i
    for i in range(n):
        outv[i] = dist[i] if settled[i] else INFINITY
    return out


cdef inline int _ctz(long bit):
    cdef int k = 0
    while not (bit >> k) & 1:
        k += 1
    return k


def kemeny(P):
    """Exact consensus order minimizing total pairwise disagreement.

    Same contract as the pure version: subset DP over m <= 16 items,
    lexicographically smallest optimal order, (order, total) result.
    All arithmetic is integral so agreement is trivial; this exists for
    speed on the full 2^m table.
    """
    arr = np.ascontiguousarray(np.asarray(P, dtype=np.int64))
    if len(arr) == 0:
        # the empty table never reaches the 2-D view; np gives it shape (0,)
        return [], 0
    cdef long[:, ::1] Pm = arr
    cdef Py_ssize_t m = Pm.shape[0]
    if m == 1:
        return [0], 0
    cols_arr = np.empty((m, m), dtype=np.int64)
    cdef long[:, ::1] cols = cols_arr
    colsum_arr = np.zeros(m, dtype=np.int64)
    cdef long[::1] colsum = colsum_arr
    cdef Py_ssize_t j, k
    for k in range(m):
        for j in range(m):
            cols[k, j] = Pm[j, k]
            colsum[k] = colsum[k] + Pm[j, k]
    lo_arr = np.zeros((m, 256), dtype=np.int64)
    hi_arr = np.zeros((m, 256), dtype=np.int64)
    cdef long[:, ::1] lo_tab = lo_arr
    cdef long[:, ::1] hi_tab = hi_arr
    cdef int lo_n = 8 if m > 8 else <int>m
    cdef int hi_n = <int>m - 8 if m > 8 else 0
    cdef long b
    for k in range(m):
        for b in range(1, 1 << lo_n):
            j = _ctz(b & -b)
            lo_tab[k, b] = lo_tab[k, b & (b - 1)] + cols[k, j]
        for b in range(1, 1 << hi_n):
            j = _ctz(b & -b)
            hi_tab[k, b] = hi_tab[k, b & (b - 1)] + cols[k, 8 + j]
    cdef long full = (1 << m) - 1
    cdef long INF = <long>1 << 62
    hval_arr = np.empty(full + 1, dtype=np.int64)
    cdef long[::1] hval = hval_arr
    hval[full] = 0
    cdef long S, r, bit, delta, cand, best
    for S in range(full - 1, -1, -1):
        best = INF
        r = full & ~S
        while r:
            bit = r & -r
            r ^= bit
            k = _ctz(bit)
            delta = (
                colsum[k]
                - lo_tab[k, S & 0xFF]
                - hi_tab[k, (S >> 8) & 0xFF]
                - cols[k, k]
            )
            cand = delta + hval[S | bit]
            if cand < best:
                best = cand
        hval[S] = best
    order = []
    S = 0
    while S != full:
        r = full & ~S
        while r:
            bit = r & -r
            r ^= bit
            k = _ctz(bit)
            delta = (
                colsum[k]
                - lo_tab[k, S & 0xFF]
                - hi_tab[k, (S >> 8) & 0xFF]
                - cols[k, k]
            )
            if delta + hval[S | bit] == hval[S]:
                order.append(k)
                S |= bit
                break
    return order, int(hval[0])
