"""Blocking-flow (Dinic) maximum flow on integer capacities.

Arcs are stored as paired forward/backward entries (arc i's reverse is i^1)
in head/next adjacency arrays, which both the numba kernel and the plain
Python fallback walk.  The flow value is exact on integer capacities; the
returned source side is the set of nodes reachable in the residual graph,
which is the same for every maximum flow.
"""

from __future__ import annotations

import numpy as np

from . import _backend


class ArcListBuilder:
    """Accumulates directed arcs; ``done`` freezes them into flat arrays."""

    def __init__(self, n_nodes: int):
        self.n_nodes = n_nodes
        self.head = [-1] * n_nodes
        self.nxt = []
        self.to = []
        self.cap = []

    def add_arc(self, u: int, v: int, capacity: int) -> None:
        for a, b, c in ((u, v, capacity), (v, u, 0)):
            self.nxt.append(self.head[a])
            self.head[a] = len(self.to)
            self.to.append(b)
            self.cap.append(c)

    def done(self):
        return (
            np.asarray(self.head, dtype=np.int64),
            np.asarray(self.nxt, dtype=np.int64),
            np.asarray(self.to, dtype=np.int64),
            np.asarray(self.cap, dtype=np.int64),
        )


def _dinic_python(n, source, sink, head, nxt, to, cap):
    head = head.tolist()
    nxt = nxt.tolist()
    to = to.tolist()
    cap = cap.tolist()
    flow = 0
    while True:
        level = [-1] * n
        level[source] = 0
        queue = [source]
        for u in queue:
            e = head[u]
            while e != -1:
                v = to[e]
                if cap[e] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
                e = nxt[e]
        if level[sink] < 0:
            break
        it = list(head)
        path_nodes = [source]
        path_arcs = []
        while path_nodes:
            u = path_nodes[-1]
            if u == sink:
                bottleneck = min(cap[e] for e in path_arcs)
                for e in path_arcs:
                    cap[e] -= bottleneck
                    cap[e ^ 1] += bottleneck
                flow += bottleneck
                path_nodes = [source]
                path_arcs = []
                continue
            e = it[u]
            while e != -1 and not (cap[e] > 0 and level[to[e]] == level[u] + 1):
                e = nxt[e]
            it[u] = e
            if e == -1:
                level[u] = -1
                path_nodes.pop()
                if path_arcs:
                    dead = path_arcs.pop()
                    it[path_nodes[-1]] = nxt[dead]
            else:
                path_nodes.append(to[e])
                path_arcs.append(e)

    side = [False] * n
    side[source] = True
    stack = [source]
    while stack:
        u = stack.pop()
        e = head[u]
        while e != -1:
            v = to[e]
            if cap[e] > 0 and not side[v]:
                side[v] = True
                stack.append(v)
            e = nxt[e]
    return flow, np.asarray(side, dtype=np.bool_)


def _make_dinic_numba():
    njit = _backend.njit

    @njit(cache=True)
    def dinic(n, source, sink, head, nxt, to, cap):
        cap = cap.copy()
        level = np.empty(n, dtype=np.int64)
        it = np.empty(n, dtype=np.int64)
        queue = np.empty(n, dtype=np.int64)
        stack_nodes = np.empty(n + 1, dtype=np.int64)
        stack_arcs = np.empty(n + 1, dtype=np.int64)
        flow = np.int64(0)
        while True:
            for i in range(n):
                level[i] = -1
            level[source] = 0
            queue[0] = source
            qhead = 0
            qtail = 1
            while qhead < qtail:
                u = queue[qhead]
                qhead += 1
                e = head[u]
                while e != -1:
                    v = to[e]
                    if cap[e] > 0 and level[v] < 0:
                        level[v] = level[u] + 1
                        queue[qtail] = v
                        qtail += 1
                    e = nxt[e]
            if level[sink] < 0:
                break
            for i in range(n):
                it[i] = head[i]
            top = 0
            stack_nodes[0] = source
            while top >= 0:
                u = stack_nodes[top]
                if u == sink:
                    bottleneck = cap[stack_arcs[1]]
                    for d in range(2, top + 1):
                        r = cap[stack_arcs[d]]
                        if r < bottleneck:
                            bottleneck = r
                    for d in range(1, top + 1):
                        e = stack_arcs[d]
                        cap[e] -= bottleneck
                        cap[e ^ 1] += bottleneck
                    flow += bottleneck
                    top = 0
                    continue
                e = it[u]
                while e != -1 and not (cap[e] > 0 and level[to[e]] == level[u] + 1):
                    e = nxt[e]
                it[u] = e
                if e == -1:
                    level[u] = -1
                    top -= 1
                    if top >= 0:
                        it[stack_nodes[top]] = nxt[stack_arcs[top + 1]]
                else:
                    top += 1
                    stack_nodes[top] = to[e]
                    stack_arcs[top] = e

        side = np.zeros(n, dtype=np.bool_)
        side[source] = True
        sp = 0
        stack_nodes[0] = source
        while sp >= 0:
            u = stack_nodes[sp]
            sp -= 1
            e = head[u]
            while e != -1:
                v = to[e]
                if cap[e] > 0 and not side[v]:
                    side[v] = True
                    sp += 1
                    stack_nodes[sp] = v
                e = nxt[e]
        return flow, side

    return dinic


_dinic_numba = _make_dinic_numba() if _backend.HAVE_NUMBA else None


def max_flow(n, source, sink, head, nxt, to, cap, use_numba=None):
    """(flow value, residual source-side boolean array)."""
    lane_numba = _backend.USE_NUMBA if use_numba is None else use_numba
    if lane_numba:
        if _dinic_numba is None:
            raise RuntimeError("numba lane requested but numba is unavailable")
        flow, side = _dinic_numba(n, source, sink, head, nxt, to, cap)
        return int(flow), side
    flow, side = _dinic_python(n, source, sink, head, nxt, to, cap)
    return int(flow), side
