"""Exact maximum-weight perfect matching on dense graphs (blossom algorithm).

Array-based primal-dual implementation in O(n^3): alternating trees grow
from every free vertex, tight edges trigger grow / shrink / augment steps,
and dual variables adjust lazily.  Blossoms occupy id slots above n with
explicit child cycles, so shrinking and expansion are array surgery;
``g[a][b]`` always caches a concrete minimum-slack edge between groups.

Weights are doubled internally so duals stay integral; recursion is
replaced by explicit stacks so the whole kernel JIT-compiles.  The public
wrapper solves minimum-weight perfect matching by weight complementation.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit
except Exception:  # pragma: no cover

    def njit(*args, **kwargs):
        def deco(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return deco


INF = 1 << 60


@njit(cache=True)
def _mwpm_core(n, w):
    """Maximum-weight perfect matching on the complete graph.

    w: (n+1, n+1) int64 symmetric, 1-indexed, weights >= 0, n even.
    Returns the 1-indexed mate array; all zeros when infeasible.
    """
    N = 2 * n + 1
    eu = np.zeros((N, N), dtype=np.int64)
    ev = np.zeros((N, N), dtype=np.int64)
    ew = np.full((N, N), -INF, dtype=np.int64)
    lab = np.zeros(N, dtype=np.int64)
    match = np.zeros(N, dtype=np.int64)
    slack = np.zeros(N, dtype=np.int64)
    st = np.zeros(N, dtype=np.int64)
    pa = np.zeros(N, dtype=np.int64)
    S = np.full(N, -1, dtype=np.int64)
    vis = np.zeros(N, dtype=np.int64)
    flo = np.zeros((N, N), dtype=np.int64)
    flo_n = np.zeros(N, dtype=np.int64)
    flo_from = np.zeros((N, n + 1), dtype=np.int64)
    q = np.zeros(8 * N * N + 16, dtype=np.int64)
    stack = np.zeros(16 * N + 16, dtype=np.int64)
    box = np.zeros(4, dtype=np.int64)  # q_lo, q_hi, n_x, vis timestamp

    max_w = 0
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            eu[u, v] = u
            ev[u, v] = v
            if u != v:
                ew[u, v] = 2 * w[u, v]
                if w[u, v] > max_w:
                    max_w = w[u, v]
    for u in range(1, n + 1):
        st[u] = u
        lab[u] = max_w
        flo_from[u, u] = u
    box[2] = n

    def e_dist(u0, v0):
        # u0, v0 are concrete vertices: edge slack uses vertex duals only
        # (blossom duals affect interior edges, which are never queried)
        return lab[u0] + lab[v0] - ew[u0, v0]

    def q_push(x):
        sp = 0
        stack[sp] = x
        sp += 1
        while sp > 0:
            sp -= 1
            y = stack[sp]
            if y <= n:
                q[box[1]] = y
                box[1] += 1
            else:
                for i in range(flo_n[y]):
                    stack[sp] = flo[y, i]
                    sp += 1

    def set_st(x, b):
        sp = 0
        stack[sp] = x
        sp += 1
        while sp > 0:
            sp -= 1
            y = stack[sp]
            st[y] = b
            if y > n:
                for i in range(flo_n[y]):
                    stack[sp] = flo[y, i]
                    sp += 1

    def get_pr(b, xr):
        pr = 0
        for i in range(flo_n[b]):
            if flo[b, i] == xr:
                pr = i
                break
        if pr % 2 == 1:
            i, j = 1, flo_n[b] - 1
            while i < j:
                tmp = flo[b, i]
                flo[b, i] = flo[b, j]
                flo[b, j] = tmp
                i += 1
                j -= 1
            pr = flo_n[b] - pr
        return pr

    def update_slack(u0, x):
        if slack[x] == 0 or e_dist(u0, ev[u0, x]) < e_dist(slack[x], ev[slack[x], x]):
            slack[x] = u0

    def recompute_slack(x):
        slack[x] = 0
        for u0 in range(1, n + 1):
            if ew[u0, x] > -INF and st[u0] != x and S[st[u0]] == 0:
                update_slack(u0, x)

    def set_match(u_in, v_in):
        # stack entries carry the concrete edge so both sides of the
        # matched group pair agree on the original endpoints
        sp = 0
        stack[sp] = u_in
        stack[sp + 1] = v_in
        stack[sp + 2] = eu[u_in, v_in]
        stack[sp + 3] = ev[u_in, v_in]
        sp += 4
        while sp > 0:
            sp -= 4
            uu = stack[sp]
            vv = stack[sp + 1]
            cu = stack[sp + 2]
            cv = stack[sp + 3]
            match[uu] = cv
            if uu > n:
                xr = flo_from[uu, cu]
                pr = get_pr(uu, xr)
                for i in range(pr):
                    a = flo[uu, i]
                    b = flo[uu, i ^ 1]
                    stack[sp] = a
                    stack[sp + 1] = b
                    stack[sp + 2] = eu[a, b]
                    stack[sp + 3] = ev[a, b]
                    sp += 4
                stack[sp] = xr
                stack[sp + 1] = vv
                stack[sp + 2] = cu
                stack[sp + 3] = cv
                sp += 4
                m = flo_n[uu]
                tmp = np.empty(m, dtype=np.int64)
                for i in range(m):
                    tmp[i] = flo[uu, (pr + i) % m]
                for i in range(m):
                    flo[uu, i] = tmp[i]

    def augment(u_in, v_in):
        u = u_in
        v = v_in
        while True:
            xnv = st[match[u]]
            set_match(u, v)
            if xnv == 0:
                return
            parent = st[pa[xnv]]
            set_match(xnv, parent)
            u = parent
            v = xnv

    def get_lca(u_in, v_in):
        box[3] += 1
        t = box[3]
        u = u_in
        v = v_in
        while u != 0 or v != 0:
            if u != 0:
                if vis[u] == t:
                    return u
                vis[u] = t
                if match[u] != 0:
                    u = st[pa[st[match[u]]]]
                else:
                    u = 0
            tmp = u
            u = v
            v = tmp
        return 0

    def add_blossom(u, lca, v):
        b = n + 1
        while b <= box[2]:
            if st[b] == b and flo_n[b] == 0:
                break
            b += 1
        if b > box[2]:
            box[2] = b
        lab[b] = 0
        S[b] = 0
        match[b] = match[lca]
        pa[b] = pa[lca]
        flo[b, 0] = lca
        flo_n[b] = 1
        # u's side up to the lca (pairs of T, S groups)
        x = u
        while x != lca:
            flo[b, flo_n[b]] = x
            flo_n[b] += 1
            y = st[match[x]]
            flo[b, flo_n[b]] = y
            flo_n[b] += 1
            q_push(y)
            x = st[pa[y]]
        i, j = 1, flo_n[b] - 1
        while i < j:
            tmp = flo[b, i]
            flo[b, i] = flo[b, j]
            flo[b, j] = tmp
            i += 1
            j -= 1
        # v's side
        x = v
        while x != lca:
            flo[b, flo_n[b]] = x
            flo_n[b] += 1
            y = st[match[x]]
            flo[b, flo_n[b]] = y
            flo_n[b] += 1
            q_push(y)
            x = st[pa[y]]
        set_st(b, b)
        for ci in range(flo_n[b]):
            set_st(flo[b, ci], b)
        for x0 in range(1, N):
            ew[b, x0] = -INF
            ew[x0, b] = -INF
        for x0 in range(1, n + 1):
            flo_from[b, x0] = 0
        for ci in range(flo_n[b]):
            c = flo[b, ci]
            if c <= n:
                flo_from[b, c] = c
            else:
                for x0 in range(1, n + 1):
                    if flo_from[c, x0] != 0:
                        flo_from[b, x0] = c
        for ci in range(flo_n[b]):
            c = flo[b, ci]
            for x0 in range(1, box[2] + 1):
                if x0 == b or ew[c, x0] <= -INF:
                    continue
                other = ev[c, x0]
                if flo_from[b, other] != 0:
                    continue  # edge now internal to b
                if ew[b, x0] == -INF or e_dist(eu[c, x0], ev[c, x0]) < e_dist(
                    eu[b, x0], ev[b, x0]
                ):
                    eu[b, x0] = eu[c, x0]
                    ev[b, x0] = ev[c, x0]
                    ew[b, x0] = ew[c, x0]
                    eu[x0, b] = ev[c, x0]
                    ev[x0, b] = eu[c, x0]
                    ew[x0, b] = ew[c, x0]
        recompute_slack(b)

    def expand_blossom(b):
        for ci in range(flo_n[b]):
            set_st(flo[b, ci], flo[b, ci])
        xr = flo_from[b, ev[pa[b], b]]
        pr = get_pr(b, xr)
        i = 0
        while i < pr:
            xs = flo[b, i]
            xns = flo[b, i + 1]
            S[xs] = 1
            S[xns] = 0
            slack[xs] = 0
            recompute_slack(xns)
            pa[xs] = eu[xns, xs]
            q_push(xns)
            i += 2
        S[xr] = 1
        pa[xr] = pa[b]
        slack[xr] = 0
        i = pr + 1
        while i < flo_n[b]:
            c = flo[b, i]
            S[c] = -1
            recompute_slack(c)
            i += 1
        flo_n[b] = 0
        st[b] = b

    def on_found_edge(u0, v0):
        u = st[u0]
        v = st[v0]
        if S[v] == -1:
            pa[v] = u0
            S[v] = 1
            nu = st[match[v]]
            slack[v] = 0
            # nu's cached candidate stays valid as an S-S witness: relative
            # distances among S-side candidates drift uniformly
            S[nu] = 0
            q_push(nu)
            return 0
        if S[v] == 0:
            lca = get_lca(u, v)
            eu[u, v] = u0
            ev[u, v] = v0
            ew[u, v] = ew[u0, v0]
            eu[v, u] = v0
            ev[v, u] = u0
            ew[v, u] = ew[u0, v0]
            if lca == 0:
                augment(u, v)
                augment(v, u)
                return 1
            add_blossom(u, lca, v)
        return 0

    while True:
        for x in range(1, box[2] + 1):
            if st[x] == x:
                S[x] = -1
                slack[x] = 0
                pa[x] = 0
        box[0] = 0
        box[1] = 0
        n_free = 0
        for x in range(1, box[2] + 1):
            if st[x] == x and match[x] == 0 and (x <= n or flo_n[x] > 0):
                S[x] = 0
                q_push(x)
                n_free += 1
        if n_free == 0:
            break
        augmented = 0
        while augmented == 0:
            while box[0] < box[1] and augmented == 0:
                u0 = q[box[0]]
                box[0] += 1
                if S[st[u0]] != 0:
                    continue
                for v0 in range(1, n + 1):
                    if ew[u0, v0] > -INF and st[u0] != st[v0]:
                        d = e_dist(u0, v0)
                        if d == 0:
                            augmented = on_found_edge(u0, v0)
                            if augmented:
                                break
                        elif S[st[v0]] != 1:
                            update_slack(u0, st[v0])
            if augmented:
                break
            # delta1: an S-vertex dual hitting zero ends the algorithm
            # (maximum matching reached); ties prefer the other deltas.
            d = INF
            for u in range(1, n + 1):
                if S[st[u]] == 0 and lab[u] < d:
                    d = lab[u]
            d_is_final = 1
            for b in range(n + 1, box[2] + 1):
                if st[b] == b and flo_n[b] > 0 and S[b] == 1:
                    half = lab[b] // 2
                    if half <= d:
                        d = half
                        d_is_final = 0
            for x in range(1, box[2] + 1):
                if st[x] == x and (x <= n or flo_n[x] > 0) and slack[x] != 0:
                    if st[slack[x]] == x or S[st[slack[x]]] != 0:
                        continue
                    dist = e_dist(slack[x], ev[slack[x], x])
                    if S[x] == -1:
                        if dist <= d:
                            d = dist
                            d_is_final = 0
                    elif S[x] == 0:
                        half = dist // 2
                        if half <= d:
                            d = half
                            d_is_final = 0
            if d >= INF:
                return match[: n + 1]
            for u in range(1, n + 1):
                if S[st[u]] == 0:
                    lab[u] -= d
                elif S[st[u]] == 1:
                    lab[u] += d
            for b in range(n + 1, box[2] + 1):
                if st[b] == b and flo_n[b] > 0:
                    if S[b] == 0:
                        lab[b] += 2 * d
                    elif S[b] == 1:
                        lab[b] -= 2 * d
            if d_is_final == 1:
                return match[: n + 1]
            for x in range(1, box[2] + 1):
                if (
                    st[x] == x
                    and (x <= n or flo_n[x] > 0)
                    and slack[x] != 0
                    and st[slack[x]] != x
                    and S[st[slack[x]]] == 0
                    and e_dist(slack[x], ev[slack[x], x]) == 0
                ):
                    if on_found_edge(slack[x], ev[slack[x], x]):
                        augmented = 1
                        break
            if augmented:
                break
            for b in range(n + 1, box[2] + 1):
                if st[b] == b and flo_n[b] > 0 and S[b] == 1 and lab[b] == 0:
                    expand_blossom(b)
    return match[: n + 1]


def min_weight_perfect_matching(weights: np.ndarray) -> np.ndarray:
    """Minimum-weight perfect matching of a complete graph.

    weights: (n, n) int64 symmetric, 0-indexed.  Returns the 0-indexed
    mate array.  Raises when n is odd or no perfect matching exists.
    """
    n = weights.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    if n % 2 == 1:
        raise ValueError("odd number of vertices has no perfect matching")
    weights = np.ascontiguousarray(weights, dtype=np.int64)
    big = int(weights.max()) + 1
    # complement to a maximization problem; x2 keeps all weights even so
    # dual variables and S-S slacks stay integral throughout
    w = np.zeros((n + 1, n + 1), dtype=np.int64)
    w[1:, 1:] = 2 * (big - weights)
    np.fill_diagonal(w, 0)
    match = _mwpm_core(n, w)
    if np.any(match[1:] == 0):
        raise ValueError("no perfect matching found")
    mate = np.asarray(match[1:]) - 1
    return mate
