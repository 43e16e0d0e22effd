"""Pure-Python reference kernels.

These mirror the compiled extension in ``_native.pyx`` operation for
operation.  Both backends must produce bitwise-identical results: every
floating point expression here is written as the exact sequence of IEEE
double ops the C code performs, so do not "simplify" the arithmetic.
"""

from __future__ import annotations

import heapq
import math

import numpy as np

BACKEND_NAME = "pure"

EARTH_RADIUS_M = 6371008.8


def haversine_m(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Great-circle distance in meters between two WGS84 points."""
    p1 = math.radians(lat1)
    p2 = math.radians(lat2)
    dp = math.radians(lat2 - lat1)
    dl = math.radians(lon2 - lon1)
    sp = math.sin(dp * 0.5)
    sl = math.sin(dl * 0.5)
    a = sp * sp + math.cos(p1) * math.cos(p2) * (sl * sl)
    if a > 1.0:
        a = 1.0
    return 2.0 * EARTH_RADIUS_M * math.asin(math.sqrt(a))


def nearest_segment(px, py, ax, ay, bx, by):
    """Closest segment to a planar point among (ax,ay)->(bx,by) pairs.

    Returns (index, squared_distance, t) where t in [0, 1] is the position
    of the foot point along the winning segment.  Ties keep the first
    index.  Index is -1 when the arrays are empty.
    """
    axl = ax.tolist() if isinstance(ax, np.ndarray) else list(ax)
    ayl = ay.tolist() if isinstance(ay, np.ndarray) else list(ay)
    bxl = bx.tolist() if isinstance(bx, np.ndarray) else list(bx)
    byl = by.tolist() if isinstance(by, np.ndarray) else list(by)
    px = float(px)
    py = float(py)
    best_i = -1
    best_d2 = math.inf
    best_t = 0.0
    for i in range(len(axl)):
        x1 = axl[i]
        y1 = ayl[i]
        dx = bxl[i] - x1
        dy = byl[i] - y1
        l2 = dx * dx + dy * dy
        if l2 == 0.0:
            t = 0.0
        else:
            t = ((px - x1) * dx + (py - y1) * dy) / l2
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
        cx = x1 + t * dx
        cy = y1 + t * dy
        ex = px - cx
        ey = py - cy
        d2 = ex * ex + ey * ey
        if d2 < best_d2:
            best_d2 = d2
            best_i = i
            best_t = t
    return best_i, best_d2, best_t


def dijkstra_dist(indptr, indices, weights, h, source: int, target: int):
    """Label-setting shortest-path distances on a CSR adjacency.

    ``h`` is a per-node key offset (all zeros gives plain Dijkstra; a
    consistent underestimate gives A*).  With ``target >= 0`` the search
    stops once every remaining heap key exceeds the key at which the
    target was first settled, so all nodes that can lie on an optimal
    source-target path end up settled.  ``target == -1`` settles every
    reachable node.  Unsettled nodes report +inf.
    """
    indptr_l = indptr.tolist() if isinstance(indptr, np.ndarray) else list(indptr)
    indices_l = indices.tolist() if isinstance(indices, np.ndarray) else list(indices)
    weights_l = weights.tolist() if isinstance(weights, np.ndarray) else list(weights)
    h_l = h.tolist() if isinstance(h, np.ndarray) else list(h)
    n = len(indptr_l) - 1
    dist = [math.inf] * n
    settled = [False] * n
    dist[source] = 0.0
    heap = [(0.0 + h_l[source], source)]
    cutoff = math.inf
    while heap:
        key, u = heapq.heappop(heap)
        if key > cutoff:
            break
        if settled[u]:
            continue
        settled[u] = True
        if u == target and cutoff == math.inf:
            cutoff = key
        du = dist[u]
        for e in range(indptr_l[u], indptr_l[u + 1]):
            v = indices_l[e]
            if settled[v]:
                continue
            nd = du + weights_l[e]
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd + h_l[v], v))
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        out[i] = dist[i] if settled[i] else math.inf
    return out


def kemeny(P):
    """Exact consensus order minimizing total pairwise disagreement.

    ``P[i][j]`` counts voters who rank item i strictly above item j.
    Returns (order, total) where ``order`` lists item indices best-first
    and ``total`` is the summed Kendall tau distance to all voters.
    Among optimal orders the lexicographically smallest index sequence
    wins.  Subset DP, so callers must keep m <= 16.
    """
    P = np.asarray(P, dtype=np.int64)
    m = P.shape[0]
    if m == 0:
        return [], 0
    if m == 1:
        return [0], 0
    cols = [[int(P[j][k]) for j in range(m)] for k in range(m)]
    colsum = [sum(c) for c in cols]
    # Per-column byte lookup tables: partial column sums over the items
    # named by each 8-bit mask, so delta(S, k) is O(1) per transition.
    lo_tab = []
    hi_tab = []
    lo_n = min(m, 8)
    hi_n = max(m - 8, 0)
    for k in range(m):
        col = cols[k]
        lo = [0] * 256
        for b in range(1, 1 << lo_n):
            j = (b & -b).bit_length() - 1
            lo[b] = lo[b & (b - 1)] + col[j]
        hi = [0] * 256
        for b in range(1, 1 << hi_n):
            j = (b & -b).bit_length() - 1
            hi[b] = hi[b & (b - 1)] + col[8 + j]
        lo_tab.append(lo)
        hi_tab.append(hi)
    full = (1 << m) - 1
    INF = 1 << 62
    hval = [INF] * (full + 1)
    hval[full] = 0
    for S in range(full - 1, -1, -1):
        best = INF
        r = full & ~S
        while r:
            bit = r & -r
            r ^= bit
            k = bit.bit_length() - 1
            # delta = sum of P[j][k] over items j not yet placed and != k:
            # the disagreements locked in by placing k next.
            delta = (
                colsum[k]
                - lo_tab[k][S & 0xFF]
                - hi_tab[k][(S >> 8) & 0xFF]
                - cols[k][k]
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
            k = bit.bit_length() - 1
            delta = (
                colsum[k]
                - lo_tab[k][S & 0xFF]
                - hi_tab[k][(S >> 8) & 0xFF]
                - cols[k][k]
            )
            if delta + hval[S | bit] == hval[S]:
                order.append(k)
                S |= bit
                break
    return order, hval[0]
