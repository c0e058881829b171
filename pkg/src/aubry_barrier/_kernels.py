"""Numba kernels for banded min-plus products on the circle grid.

Tables store v[a, j] = h(a/N, (a+d)/N) with d = d_min + j.  A product
C(x, x') = min_y A(x, y) + B(y, x') becomes, per output row a and output
displacement d, a windowed minimum over the inner displacement e:

    C[a, d] = min_e A[a, e] + B[(a+e) mod N, d-e]

Ties always resolve to the smallest e (smallest middle point).  The naive
kernel scans the whole window and is the oracle; the fast kernel exploits
that for row/column-exchange (Monge) tables the leftmost argmin is
nondecreasing in d, which allows divide-and-conquer over the output band.
Both kernels evaluate identical sums and tie rules, so on Monge input they
agree bitwise.  Rows are independent, so the thread count cannot change
any result.

Both kernels also count argmins that land on a physical band edge, but
only for output columns inside [core_jlo, core_jhi]: near the band rim an
edge argmin is expected (the rim entries are upper bounds that no minimal
path uses), while pressure in the core means the band was truly too thin.
"""

import numpy as np
from numba import njit, prange


@njit(cache=True, parallel=True)
def conjoin_naive(a_vals, b_vals, a_dmin, b_dmin, c_dmin, c_width,
                  core_jlo, core_jhi):
    n = a_vals.shape[0]
    a_dmax = a_dmin + a_vals.shape[1] - 1
    b_dmax = b_dmin + b_vals.shape[1] - 1
    c_vals = np.empty((n, c_width), np.float64)
    edge_touches = 0
    for a in prange(n):
        touches = 0
        for j in range(c_width):
            d = c_dmin + j
            w_lo = max(a_dmin, d - b_dmax)
            w_hi = min(a_dmax, d - b_dmin)
            best = np.inf
            best_e = w_lo
            for e in range(w_lo, w_hi + 1):
                val = a_vals[a, e - a_dmin] + b_vals[(a + e) % n, d - e - b_dmin]
                if val < best:
                    best = val
                    best_e = e
            c_vals[a, j] = best
            if (core_jlo <= j <= core_jhi and w_hi - w_lo >= 2
                    and (best_e == w_lo or best_e == w_hi)):
                touches += 1
        edge_touches += touches
    return c_vals, edge_touches


@njit(cache=True, parallel=True)
def conjoin_fast(a_vals, b_vals, a_dmin, b_dmin, c_dmin, c_width,
                 core_jlo, core_jhi):
    n = a_vals.shape[0]
    a_dmax = a_dmin + a_vals.shape[1] - 1
    b_dmax = b_dmin + b_vals.shape[1] - 1
    c_vals = np.empty((n, c_width), np.float64)
    edge_touches = 0
    for a in prange(n):
        touches = 0
        # DFS over (j_lo, j_hi, e_lo, e_hi) column ranges with inherited
        # argmin bounds; depth is logarithmic in the band width.
        stack = np.empty((128, 4), np.int64)
        stack[0, 0] = 0
        stack[0, 1] = c_width - 1
        stack[0, 2] = a_dmin
        stack[0, 3] = a_dmax
        top = 1
        while top > 0:
            top -= 1
            j_lo = stack[top, 0]
            j_hi = stack[top, 1]
            e_lo = stack[top, 2]
            e_hi = stack[top, 3]
            if j_lo > j_hi:
                continue
            mid = (j_lo + j_hi) // 2
            d = c_dmin + mid
            w_lo = max(a_dmin, d - b_dmax)
            w_hi = min(a_dmax, d - b_dmin)
            s_lo = max(w_lo, e_lo)
            s_hi = min(w_hi, e_hi)
            if s_lo > s_hi:
                # Inherited bounds can only be inconsistent if the input
                # was not Monge; fall back to the full physical window.
                s_lo = w_lo
                s_hi = w_hi
            best = np.inf
            best_e = s_lo
            for e in range(s_lo, s_hi + 1):
                val = a_vals[a, e - a_dmin] + b_vals[(a + e) % n, d - e - b_dmin]
                if val < best:
                    best = val
                    best_e = e
            c_vals[a, mid] = best
            if (core_jlo <= mid <= core_jhi and w_hi - w_lo >= 2
                    and (best_e == w_lo or best_e == w_hi)):
                touches += 1
            if j_lo < mid:
                stack[top, 0] = j_lo
                stack[top, 1] = mid - 1
                stack[top, 2] = e_lo
                stack[top, 3] = best_e
                top += 1
            if mid < j_hi:
                stack[top, 0] = mid + 1
                stack[top, 1] = j_hi
                stack[top, 2] = best_e
                stack[top, 3] = e_hi
                top += 1
        edge_touches += touches
    return c_vals, edge_touches


@njit(cache=True)
def vector_minplus(f_vals, f_lo, t_vals, t_dmin, g_lo, g_width):
    """One min-plus step of a position-indexed vector through a table.

    f_vals[i] is the best action from the source to absolute grid position
    f_lo + i; the result covers positions g_lo .. g_lo + g_width - 1.
    """
    n = t_vals.shape[0]
    t_dmax = t_dmin + t_vals.shape[1] - 1
    f_hi = f_lo + f_vals.shape[0] - 1
    g_vals = np.full(g_width, np.inf, np.float64)
    for i in range(g_width):
        zp = g_lo + i
        lo = max(f_lo, zp - t_dmax)
        hi = min(f_hi, zp - t_dmin)
        best = np.inf
        for z in range(lo, hi + 1):
            if f_vals[z - f_lo] == np.inf:
                continue
            val = f_vals[z - f_lo] + t_vals[z % n, zp - z - t_dmin]
            if val < best:
                best = val
        g_vals[i] = best
    return g_vals


@njit(cache=True)
def brute_force_pinned(t_vals, t_dmin, windows_lo, windows_hi,
                       start, end, length, min_step_value):
    """Exhaustive minimum over grid paths from start to end (absolute nodes).

    windows_lo/hi give the admissible absolute positions per interior site.
    Depth-first enumeration summing left to right; branches are pruned with
    the sound lower bound  partial + remaining_steps * min_step_value.
    Small-instance oracle only.
    """
    n = t_vals.shape[0]
    t_dmax = t_dmin + t_vals.shape[1] - 1
    sites = length - 1
    if sites == 0:
        d = end - start
        if d < t_dmin or d > t_dmax:
            return np.inf
        return t_vals[start % n, d - t_dmin]
    pos = np.empty(sites, np.int64)
    acc = np.empty(sites + 1, np.float64)
    best = np.inf
    level = 0
    pos[0] = windows_lo[0] - 1
    acc[0] = 0.0
    while level >= 0:
        pos[level] += 1
        if pos[level] > windows_hi[level]:
            level -= 1
            continue
        prev = start if level == 0 else pos[level - 1]
        d = pos[level] - prev
        if d < t_dmin or d > t_dmax:
            continue
        val = acc[level] + t_vals[prev % n, d - t_dmin]
        remaining = sites - level
        if val + remaining * min_step_value >= best:
            continue
        if level == sites - 1:
            d_end = end - pos[level]
            if t_dmin <= d_end <= t_dmax:
                total = val + t_vals[pos[level] % n, d_end - t_dmin]
                if total < best:
                    best = total
        else:
            acc[level + 1] = val
            level += 1
            pos[level] = windows_lo[level] - 1
    return best
