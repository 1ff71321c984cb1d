"""Compiled kernels for growing and evaluating Gini decision trees.

Features are read column-wise: sparse columns from CSC arrays, dense columns
(most rows non-zero) from a transposed dense copy. Randomness comes from a
splitmix64 stream seeded per tree, so results do not depend on scheduling.
"""

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


@njit(cache=True, nogil=True)
def _next(state):
    state[0] += _GOLDEN
    z = state[0]
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


@njit(cache=True, nogil=True)
def _randbelow(state, n):
    return np.int64(_next(state) % np.uint64(n))


@njit(cache=True, nogil=True)
def _column_values(f, start, end, samples, node_id, node_mark, indptr, indices, data,
                   dense_map, dense_t, out_rows, out_vals):
    """Collect (row, value) for the node's samples that are stored in column ``f``.

    For dense columns every node sample is returned; for sparse columns only
    the non-zero ones (the rest are implicitly 0).
    """
    m = 0
    dj = dense_map[f]
    if dj >= 0:
        for p in range(start, end):
            r = samples[p]
            out_rows[m] = r
            out_vals[m] = dense_t[dj, r]
            m += 1
    else:
        for p in range(indptr[f], indptr[f + 1]):
            r = indices[p]
            if node_mark[r] == node_id:
                out_rows[m] = r
                out_vals[m] = data[p]
                m += 1
    return m


@njit(cache=True, nogil=True)
def _best_split_on(m, rows, vals, y, w, cnt, node_hist, node_cnt, K, left, zero_hist):
    """Best threshold for one feature; returns (score, threshold) or (-1, 0)."""
    order = np.argsort(vals[:m])
    listed_cnt = 0
    for k in range(K):
        zero_hist[k] = node_hist[k]
    for q in range(m):
        r = rows[q]
        zero_hist[y[r]] -= w[r]
        listed_cnt += cnt[r]
    zero_cnt = node_cnt - listed_cnt
    for k in range(K):
        if zero_hist[k] < 0.0:
            zero_hist[k] = 0.0
        left[k] = 0.0
    left_w = 0.0
    left_cnt = 0
    total_w = 0.0
    for k in range(K):
        total_w += node_hist[k]

    best_score = -1.0
    best_thr = 0.0
    zero_done = zero_cnt == 0
    prev_val = 0.0
    have_prev = False
    q = 0
    while q < m or not zero_done:
        # next group: the implicit zeros sit between negatives and positives
        if not zero_done and (q >= m or vals[order[q]] > 0.0):
            cur = 0.0
        else:
            cur = vals[order[q]]
        if have_prev and cur > prev_val and left_cnt > 0 and left_cnt < node_cnt:
            right_w = total_w - left_w
            if left_w > 0.0 and right_w > 0.0:
                sl = 0.0
                sr = 0.0
                for k in range(K):
                    sl += left[k] * left[k]
                    rk = node_hist[k] - left[k]
                    sr += rk * rk
                score = sl / left_w + sr / right_w
                if score > best_score:
                    best_score = score
                    thr = 0.5 * (prev_val + cur)
                    if thr >= cur:
                        thr = prev_val
                    best_thr = thr
        if not zero_done and (q >= m or vals[order[q]] > 0.0):
            for k in range(K):
                left[k] += zero_hist[k]
                left_w += zero_hist[k]
            left_cnt += zero_cnt
            zero_done = True
        else:
            # consume all listed entries equal to cur
            while q < m and vals[order[q]] == cur:
                r = rows[order[q]]
                left[y[r]] += w[r]
                left_w += w[r]
                left_cnt += cnt[r]
                q += 1
        prev_val = cur
        have_prev = True
    return best_score, best_thr


@njit(cache=True, nogil=True)
def grow_tree(indptr, indices, data, dense_map, dense_t, y, w, cnt, K, min_samples_split, mtry, seed):
    n = y.shape[0]
    d = dense_map.shape[0]
    state = np.empty(1, dtype=np.uint64)
    state[0] = np.uint64(seed)

    n_active = 0
    for i in range(n):
        if cnt[i] > 0:
            n_active += 1
    samples = np.empty(n_active, dtype=np.int64)
    j = 0
    for i in range(n):
        if cnt[i] > 0:
            samples[j] = i
            j += 1

    cap = 2 * n_active + 1
    feature = np.full(cap, -1, dtype=np.int64)
    threshold = np.zeros(cap, dtype=np.float64)
    left_child = np.full(cap, -1, dtype=np.int64)
    right_child = np.full(cap, -1, dtype=np.int64)
    value = np.zeros((cap, K), dtype=np.float64)

    node_mark = np.full(n, -1, dtype=np.int64)
    goes_right = np.zeros(n, dtype=np.bool_)
    perm = np.arange(d)
    rows = np.empty(n, dtype=np.int64)
    vals = np.empty(n, dtype=np.float64)
    hist = np.zeros(K, dtype=np.float64)
    left = np.zeros(K, dtype=np.float64)
    zero_hist = np.zeros(K, dtype=np.float64)

    stack_start = np.empty(cap, dtype=np.int64)
    stack_end = np.empty(cap, dtype=np.int64)
    stack_node = np.empty(cap, dtype=np.int64)
    stack_start[0] = 0
    stack_end[0] = n_active
    stack_node[0] = 0
    top = 1
    n_nodes = 1

    while top > 0:
        top -= 1
        start = stack_start[top]
        end = stack_end[top]
        node = stack_node[top]

        for k in range(K):
            hist[k] = 0.0
        node_cnt = 0
        for p in range(start, end):
            r = samples[p]
            hist[y[r]] += w[r]
            node_cnt += cnt[r]
            node_mark[r] = node
        for k in range(K):
            value[node, k] = hist[k]
        n_present = 0
        for k in range(K):
            if hist[k] > 0.0:
                n_present += 1
        if node_cnt < min_samples_split or n_present <= 1 or end - start < 2:
            continue

        best_score = -1.0
        best_f = -1
        best_thr = 0.0
        jj = 0
        while jj < d:
            if jj >= mtry and best_f >= 0:
                break
            swap = jj + _randbelow(state, d - jj)
            tmp = perm[jj]
            perm[jj] = perm[swap]
            perm[swap] = tmp
            f = perm[jj]
            jj += 1
            m = _column_values(f, start, end, samples, node, node_mark, indptr, indices, data,
                               dense_map, dense_t, rows, vals)
            score, thr = _best_split_on(m, rows, vals, y, w, cnt, hist, node_cnt, K, left, zero_hist)
            if score > best_score:
                best_score = score
                best_f = f
                best_thr = thr
        if best_f < 0:
            continue

        # partition samples[start:end] by value <= threshold
        zero_right = 0.0 > best_thr
        for p in range(start, end):
            goes_right[samples[p]] = zero_right
        m = _column_values(best_f, start, end, samples, node, node_mark, indptr, indices, data,
                           dense_map, dense_t, rows, vals)
        for q in range(m):
            goes_right[rows[q]] = vals[q] > best_thr
        lo = start
        hi = end - 1
        while lo <= hi:
            if goes_right[samples[lo]]:
                tmp = samples[lo]
                samples[lo] = samples[hi]
                samples[hi] = tmp
                hi -= 1
            else:
                lo += 1
        mid = lo

        lnode = n_nodes
        rnode = n_nodes + 1
        n_nodes += 2
        feature[node] = best_f
        threshold[node] = best_thr
        left_child[node] = lnode
        right_child[node] = rnode
        stack_start[top] = mid
        stack_end[top] = end
        stack_node[top] = rnode
        top += 1
        stack_start[top] = start
        stack_end[top] = mid
        stack_node[top] = lnode
        top += 1

    return (feature[:n_nodes].copy(), threshold[:n_nodes].copy(), left_child[:n_nodes].copy(),
            right_child[:n_nodes].copy(), value[:n_nodes].copy())


@njit(cache=True, nogil=True)
def apply_tree(indptr, indices, data, n_rows, feature, threshold, left_child, right_child):
    """Leaf index reached by every row of a CSR matrix with sorted indices."""
    out = np.empty(n_rows, dtype=np.int64)
    for i in range(n_rows):
        lo0 = indptr[i]
        hi0 = indptr[i + 1]
        node = 0
        while left_child[node] >= 0:
            f = feature[node]
            lo = lo0
            hi = hi0
            v = 0.0
            while lo < hi:
                mid = (lo + hi) // 2
                if indices[mid] < f:
                    lo = mid + 1
                else:
                    hi = mid
            if lo < hi0 and indices[lo] == f:
                v = data[lo]
            if v <= threshold[node]:
                node = left_child[node]
            else:
                node = right_child[node]
        out[i] = node
    return out
