"""Compiled kernels for decision-tree growth and forest prediction.

Trees are grown depth-first with an explicit stack into flat preallocated
arrays (feature, threshold, left, right, per-node weighted class counts).
Each tree owns a SplitMix64 stream seeded from (forest seed, tree index), so
the result is identical no matter how trees are scheduled across threads.
The uint64 SplitMix64 here mirrors ``specgraph.rng``; tests pin the two
streams against each other.

Split search: at every node, ceil(sqrt(d)) candidate features are drawn
without replacement; for each, node samples are sorted by value and every
boundary between distinct consecutive values is scored by the decrease in
weighted Gini impurity, maintained incrementally via sums of squared class
weights. A node becomes a leaf when it is pure, too small, at max depth, or
no candidate cut has positive decrease.
"""

import numpy as np
from numba import njit

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)

#: minimum weighted impurity decrease for a split to be executed
_GAIN_EPS = 1e-12


@njit(cache=True, nogil=True, inline="always")
def _next_u64(state):
    state[0] = state[0] + GOLDEN
    z = state[0]
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


@njit(cache=True, nogil=True, inline="always")
def _below(state, n):
    # unbiased draw in [0, n) by rejection
    nn = np.uint64(n)
    threshold = (np.uint64(0) - nn) % nn
    while True:
        r = _next_u64(state)
        if r >= threshold:
            return np.int64(r % nn)


@njit(cache=True, nogil=True)
def splitmix_stream(seed, count):
    """First ``count`` outputs of the SplitMix64 stream (for stream pinning tests)."""
    state = np.empty(1, np.uint64)
    state[0] = seed
    out = np.empty(count, np.uint64)
    for i in range(count):
        out[i] = _next_u64(state)
    return out


@njit(cache=True, nogil=True)
def build_tree(xt, y, w, n_classes, seed_state, bootstrap, max_depth,
               min_samples_leaf, mtry, feature, threshold, left, right, value):
    """Grow one tree; returns the number of nodes written.

    xt is (n_features, n_samples), transposed for contiguous per-feature
    gathers. Output arrays must have capacity 2*n_samples + 1. ``feature``
    is -1 at leaves; ``value`` row holds the node's weighted class counts.
    """
    n_features, n_samples = xt.shape
    state = np.empty(1, np.uint64)
    state[0] = seed_state

    idx = np.empty(n_samples, np.int64)
    if bootstrap:
        for i in range(n_samples):
            idx[i] = _below(state, n_samples)
    else:
        for i in range(n_samples):
            idx[i] = i

    scratch = np.empty(n_samples, np.int64)
    vals = np.empty(n_samples, np.float64)
    feat_pool = np.empty(n_features, np.int64)
    for f in range(n_features):
        feat_pool[f] = f
    wl = np.empty(n_classes, np.float64)
    wtot = np.empty(n_classes, np.float64)

    cap = 2 * n_samples + 1
    st_start = np.empty(cap, np.int64)
    st_end = np.empty(cap, np.int64)
    st_depth = np.empty(cap, np.int64)
    st_parent = np.empty(cap, np.int64)
    st_isleft = np.empty(cap, np.uint8)
    st_start[0] = 0
    st_end[0] = n_samples
    st_depth[0] = 0
    st_parent[0] = -1
    st_isleft[0] = 0
    top = 1
    n_nodes = 0

    while top > 0:
        top -= 1
        start = st_start[top]
        end = st_end[top]
        depth = st_depth[top]
        parent = st_parent[top]
        node = n_nodes
        n_nodes += 1
        if parent >= 0:
            if st_isleft[top] == 1:
                left[parent] = node
            else:
                right[parent] = node

        m = end - start
        for c in range(n_classes):
            wtot[c] = 0.0
        for i in range(start, end):
            row = idx[i]
            wtot[y[row]] += w[row]
        wp = 0.0
        sqp = 0.0
        n_present = 0
        for c in range(n_classes):
            value[node, c] = wtot[c]
            wp += wtot[c]
            sqp += wtot[c] * wtot[c]
            if wtot[c] > 0.0:
                n_present += 1

        feature[node] = -1
        threshold[node] = 0.0
        left[node] = -1
        right[node] = -1

        if depth >= max_depth or m < 2 * min_samples_leaf or n_present <= 1:
            continue

        # examine mtry non-constant features; features that are constant on
        # this node's samples do not consume the budget (library semantics)
        best_gain = _GAIN_EPS
        best_feat = -1
        best_thr = 0.0
        drawn = 0
        examined = 0
        while drawn < n_features and examined < mtry:
            t = drawn
            j = t + _below(state, n_features - t)
            tmp = feat_pool[t]
            feat_pool[t] = feat_pool[j]
            feat_pool[j] = tmp
            f = feat_pool[t]
            drawn += 1
            for i in range(m):
                vals[i] = xt[f, idx[start + i]]
            order = np.argsort(vals[:m])
            if vals[order[0]] == vals[order[m - 1]]:
                continue  # constant on this node
            examined += 1

            for c in range(n_classes):
                wl[c] = 0.0
            wleft = 0.0
            sql = 0.0
            sqr = sqp
            for i in range(m - 1):
                row = idx[start + order[i]]
                cw = w[row]
                cy = y[row]
                sql += cw * (2.0 * wl[cy] + cw)
                sqr += cw * (cw - 2.0 * (wtot[cy] - wl[cy]))
                wl[cy] += cw
                wleft += cw
                if i + 1 < min_samples_leaf or m - i - 1 < min_samples_leaf:
                    continue
                vlo = vals[order[i]]
                vhi = vals[order[i + 1]]
                if vhi <= vlo:
                    continue
                gain = sql / wleft + sqr / (wp - wleft) - sqp / wp
                if gain > best_gain:
                    best_gain = gain
                    best_feat = f
                    thr = vlo + 0.5 * (vhi - vlo)
                    if thr == vhi:  # adjacent floats: keep the cut below vhi
                        thr = vlo
                    best_thr = thr

        if best_feat < 0:
            continue

        # stable partition: x[best_feat] <= best_thr goes left
        nl = 0
        nr = 0
        for i in range(start, end):
            row = idx[i]
            if xt[best_feat, row] <= best_thr:
                idx[start + nl] = row
                nl += 1
            else:
                scratch[nr] = row
                nr += 1
        for i in range(nr):
            idx[start + nl + i] = scratch[i]
        if nl == 0 or nr == 0:  # cannot happen; guards the node capacity
            continue

        feature[node] = best_feat
        threshold[node] = best_thr
        st_start[top] = start + nl
        st_end[top] = end
        st_depth[top] = depth + 1
        st_parent[top] = node
        st_isleft[top] = 0
        top += 1
        st_start[top] = start
        st_end[top] = start + nl
        st_depth[top] = depth + 1
        st_parent[top] = node
        st_isleft[top] = 1
        top += 1

    return n_nodes


@njit(cache=True, nogil=True)
def accumulate_votes(x, tree_offsets, feature, threshold, left, right, value, out):
    """Accumulate per-leaf class distributions over all trees into out
    (n_rows, n_classes). Each leaf's weighted class counts are normalized to
    sum 1 before accumulation, so every tree carries the same vote."""
    n_rows = x.shape[0]
    n_classes = value.shape[1]
    for t in range(tree_offsets.shape[0] - 1):
        base = tree_offsets[t]
        for i in range(n_rows):
            node = np.int64(0)
            while feature[base + node] >= 0:
                if x[i, feature[base + node]] <= threshold[base + node]:
                    node = np.int64(left[base + node])
                else:
                    node = np.int64(right[base + node])
            total = 0.0
            for c in range(n_classes):
                total += value[base + node, c]
            for c in range(n_classes):
                out[i, c] += value[base + node, c] / total
