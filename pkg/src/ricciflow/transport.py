"""Exact solver for the discrete transportation problem between two vertex
measures under a given cost matrix.

The solver is a dense transportation simplex with Bland's rule (smallest
index) for both the entering and leaving variable, which guarantees
termination without perturbing the supplies and makes the pivot sequence a
pure function of the input. The curvature pipeline divides transport costs by
(1 - alpha) with alpha near 1, which amplifies solver error roughly a
hundredfold, so an exact basic solution is required here; iterative or
entropic approximations are deliberately not used.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from numba import njit

from .errors import InvalidParams, MassImbalance, OracleTooLarge

_MASS_TOL = 1e-12


@njit(cache=True, nogil=True)
def _simplex_kernel(mu, nu, cost):
    """Returns (flow, u, v, status); status 0 = optimal, 1 = pivot cap hit."""
    m = mu.size
    n = nu.size
    flow = np.zeros((m, n))
    basic = np.zeros((m, n), np.uint8)

    # Least-cost start: allocate cells in cost order, retiring one row or
    # column per allocation. The m+n-1 chosen cells form a spanning tree
    # (a cycle would need its first-allocated cell to retire a line that a
    # later cycle cell still requires active), and starting near the optimum
    # keeps the pivot count low.
    a = mu.copy()
    b = nu.copy()
    order = np.argsort(cost.ravel(), kind="mergesort")  # stable: ties by index
    row_active = np.ones(m, np.uint8)
    col_active = np.ones(n, np.uint8)
    rows_left = m
    cols_left = n
    ptr = 0
    for _ in range(m + n - 1):
        while True:
            idx = order[ptr]
            i = idx // n
            j = idx % n
            if row_active[i] == 1 and col_active[j] == 1:
                break
            ptr += 1
        q = a[i] if a[i] < b[j] else b[j]
        flow[i, j] = q
        basic[i, j] = 1
        a[i] -= q
        b[j] -= q
        if cols_left == 1 or (rows_left > 1 and a[i] <= b[j]):
            row_active[i] = 0
            rows_left -= 1
        else:
            col_active[j] = 0
            cols_left -= 1

    # Basis adjacency, maintained incrementally: for each row the column
    # indices of its basic cells, and vice versa (swap-delete on removal).
    row_js = np.empty((m, n), np.int64)
    row_cnt = np.zeros(m, np.int64)
    col_is = np.empty((n, m), np.int64)
    col_cnt = np.zeros(n, np.int64)
    for ii in range(m):
        for jj in range(n):
            if basic[ii, jj] == 1:
                row_js[ii, row_cnt[ii]] = jj
                row_cnt[ii] += 1
                col_is[jj, col_cnt[jj]] = ii
                col_cnt[jj] += 1

    u = np.zeros(m)
    v = np.zeros(n)
    nodes = m + n
    parent = np.empty(nodes, np.int64)
    queue = np.empty(nodes, np.int64)
    path_i = np.empty(nodes, np.int64)
    path_j = np.empty(nodes, np.int64)

    cmax = 0.0
    for ii in range(m):
        for jj in range(n):
            if cost[ii, jj] > cmax:
                cmax = cost[ii, jj]
    tol = 1e-11 * (1.0 if cmax < 1.0 else cmax)

    status = 1
    max_pivots = 200 + 20 * m * n
    for _pivot in range(max_pivots):
        # Dual potentials from the tree, rooted at row 0 with u[0] = 0.
        seen = np.zeros(nodes, np.uint8)
        u[0] = 0.0
        seen[0] = 1
        queue[0] = 0
        head = 0
        tail = 1
        while head < tail:
            t = queue[head]
            head += 1
            if t < m:
                for k in range(row_cnt[t]):
                    jj = row_js[t, k]
                    if seen[m + jj] == 0:
                        seen[m + jj] = 1
                        v[jj] = cost[t, jj] - u[t]
                        queue[tail] = m + jj
                        tail += 1
            else:
                jj = t - m
                for k in range(col_cnt[jj]):
                    ii = col_is[jj, k]
                    if seen[ii] == 0:
                        seen[ii] = 1
                        u[ii] = cost[ii, jj] - v[jj]
                        queue[tail] = ii
                        tail += 1

        # Entering cell: first (row-major) with negative reduced cost.
        ei = -1
        ej = -1
        for ii in range(m):
            done = False
            ui = u[ii]
            for jj in range(n):
                if basic[ii, jj] == 0 and cost[ii, jj] - ui - v[jj] < -tol:
                    ei = ii
                    ej = jj
                    done = True
                    break
            if done:
                break
        if ei < 0:
            status = 0
            break

        # Unique tree path from row node ei to col node m+ej.
        for t in range(nodes):
            parent[t] = -1
        parent[ei] = ei
        queue[0] = ei
        head = 0
        tail = 1
        target = m + ej
        while head < tail:
            t = queue[head]
            head += 1
            if t == target:
                break
            if t < m:
                for k in range(row_cnt[t]):
                    o = m + row_js[t, k]
                    if parent[o] == -1:
                        parent[o] = t
                        queue[tail] = o
                        tail += 1
            else:
                jj = t - m
                for k in range(col_cnt[jj]):
                    o = col_is[jj, k]
                    if parent[o] == -1:
                        parent[o] = t
                        queue[tail] = o
                        tail += 1

        plen = 0
        t = target
        while t != ei:
            p = parent[t]
            if t >= m:
                path_i[plen] = p
                path_j[plen] = t - m
            else:
                path_i[plen] = t
                path_j[plen] = p - m
            plen += 1
            t = p

        # Walking back from the entering column, odd positions gain flow and
        # even positions lose it; theta is the smallest losing flow.
        theta = np.inf
        li = -1
        lj = -1
        for k in range(0, plen, 2):
            fi = path_i[k]
            fj = path_j[k]
            f = flow[fi, fj]
            if f < theta or (f == theta and fi * n + fj < li * n + lj):
                theta = f
                li = fi
                lj = fj
        flow[ei, ej] = theta
        basic[ei, ej] = 1
        row_js[ei, row_cnt[ei]] = ej
        row_cnt[ei] += 1
        col_is[ej, col_cnt[ej]] = ei
        col_cnt[ej] += 1
        for k in range(plen):
            fi = path_i[k]
            fj = path_j[k]
            if k % 2 == 0:
                flow[fi, fj] -= theta
            else:
                flow[fi, fj] += theta
        basic[li, lj] = 0
        flow[li, lj] = 0.0
        for k in range(row_cnt[li]):
            if row_js[li, k] == lj:
                row_cnt[li] -= 1
                row_js[li, k] = row_js[li, row_cnt[li]]
                break
        for k in range(col_cnt[lj]):
            if col_is[lj, k] == li:
                col_cnt[lj] -= 1
                col_is[lj, k] = col_is[lj, col_cnt[lj]]
                break

    return flow, u, v, status


@dataclass(frozen=True)
class TransportProblem:
    """Probability vector ``mu`` over sources, ``nu`` over sinks, and the
    nonnegative cost matrix between them."""

    mu: np.ndarray
    nu: np.ndarray
    cost: np.ndarray

    def __post_init__(self):
        mu = np.ascontiguousarray(self.mu, dtype=np.float64)
        nu = np.ascontiguousarray(self.nu, dtype=np.float64)
        cost = np.ascontiguousarray(self.cost, dtype=np.float64)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "cost", cost)
        if cost.shape != (mu.size, nu.size):
            raise InvalidParams(
                f"cost shape {cost.shape} does not match measures "
                f"({mu.size}, {nu.size})"
            )
        if mu.size == 0 or nu.size == 0:
            raise MassImbalance("measures must be non-empty")
        if (mu < 0).any() or (nu < 0).any():
            raise MassImbalance("measures must be nonnegative")
        if abs(mu.sum() - 1.0) > _MASS_TOL or abs(nu.sum() - 1.0) > _MASS_TOL:
            raise MassImbalance(
                f"measures must each sum to 1 (got {mu.sum()!r}, {nu.sum()!r})"
            )
        if not np.isfinite(cost).all() or (cost < 0).any():
            raise InvalidParams("cost entries must be finite and nonnegative")


@dataclass(frozen=True)
class TransportPlan:
    theta: np.ndarray
    total_cost: float


def solve(p: TransportProblem) -> TransportPlan:
    """Optimal basic solution of the transportation problem.

    Zero-mass sources and sinks are dropped before solving (supports shrink
    as the idleness parameter concentrates mass at the endpoints) and their
    rows/columns of the returned plan are zero.
    """
    rows = np.flatnonzero(p.mu > 0.0)
    cols = np.flatnonzero(p.nu > 0.0)
    mu = np.ascontiguousarray(p.mu[rows])
    nu = np.ascontiguousarray(p.nu[cols])
    cost = np.ascontiguousarray(p.cost[np.ix_(rows, cols)])
    flow, u, v, status = _simplex_kernel(mu, nu, cost)
    if status != 0:
        raise RuntimeError("transportation simplex exceeded its pivot cap")
    total = float((flow * cost).sum())
    if __debug__:
        _certify(mu, nu, cost, flow, u, v, total)
    theta = np.zeros_like(p.cost)
    theta[np.ix_(rows, cols)] = flow
    return TransportPlan(theta=theta, total_cost=total)


def _certify(mu, nu, cost, flow, u, v, total, tol=1e-9):
    """Optimality certificate: dual feasibility plus strong duality."""
    scale = max(1.0, float(cost.max(initial=0.0)))
    slack = cost - u[:, None] - v[None, :]
    if slack.min(initial=0.0) < -tol * scale:
        raise AssertionError("dual potentials violate feasibility")
    dual_obj = float(u @ mu + v @ nu)
    if abs(dual_obj - total) > tol * scale:
        raise AssertionError("primal and dual objectives disagree")


def _tree_flows(cells, mu, nu, m, n):
    """Flows forced by a candidate basis; None if the cells do not form a
    spanning tree of the bipartite supply/demand graph."""
    nodes = m + n
    incident: list[list[int]] = [[] for _ in range(nodes)]
    for idx, (i, j) in enumerate(cells):
        incident[i].append(idx)
        incident[m + j].append(idx)
    if any(not inc for inc in incident):
        return None
    remaining = [float(x) for x in mu] + [float(x) for x in nu]
    alive = [True] * len(cells)
    alive_deg = [len(inc) for inc in incident]
    flows = [0.0] * len(cells)
    leaves = [t for t in range(nodes) if alive_deg[t] == 1]
    done = 0
    while leaves:
        t = leaves.pop()
        if alive_deg[t] != 1:
            continue
        idx = next(k for k in incident[t] if alive[k])
        i, j = cells[idx]
        flows[idx] = remaining[t]
        other = m + j if t == i else i
        remaining[other] -= remaining[t]
        remaining[t] = 0.0
        alive[idx] = False
        alive_deg[t] -= 1
        alive_deg[other] -= 1
        if alive_deg[other] == 1:
            leaves.append(other)
        done += 1
    if done != len(cells):
        return None
    return flows


def oracle_cost(p: TransportProblem) -> float:
    """Optimal cost by exhaustive enumeration of spanning-tree basic
    solutions (the optimum of the transportation LP is attained at a vertex
    of the polytope, and every vertex corresponds to a spanning tree).

    Test-scale only: requires m <= 4 and n <= 4.
    """
    m, n = p.mu.size, p.nu.size
    if m > 4 or n > 4:
        raise OracleTooLarge(f"oracle limited to 4x4 instances, got {m}x{n}")
    cells_all = [(i, j) for i in range(m) for j in range(n)]
    best = np.inf
    for cells in combinations(cells_all, m + n - 1):
        flows = _tree_flows(cells, p.mu, p.nu, m, n)
        if flows is None:
            continue
        if any(f < -1e-12 for f in flows):
            continue
        c = sum(f * p.cost[i, j] for f, (i, j) in zip(flows, cells))
        if c < best:
            best = c
    return float(best)
