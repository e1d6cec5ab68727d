"""Minimum-weight perfect matching and minimum-weight edge covers.

The matching solver is Edmonds' primal-dual blossom algorithm in the
O(n^3) formulation popularised by Galil. It runs on exact Python integers:
float weights are scaled by a power of two and rounded, then every edge gets
a tie-breaking bonus ``2**(m-1-k)`` that is smaller than one unit of the
scaled weight. Among optimal matchings this selects the lexicographically
smallest sorted edge-index set. The final primal/dual pair is re-checked in
floating point against the caller's weights before anything is returned.

Edge covers use the classical reduction to perfect matching on a doubled
graph (two copies of G plus one cross edge per vertex).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, Infeasible, SolverError
from .graph import Graph

__all__ = [
    "Matching",
    "min_weight_perfect_matching",
    "brute_force_mwpm",
    "min_weight_edge_cover",
    "is_edge_cover",
    "CERTIFICATE_TOL",
]

CERTIFICATE_TOL = 1e-9
BRUTE_FORCE_MAX_VERTICES = 12


@dataclass(frozen=True)
class Matching:
    edges: frozenset[int]
    weight: float

    def sorted_edges(self) -> tuple[int, ...]:
        return tuple(sorted(self.edges))


def _check_weights(g: Graph, w) -> np.ndarray:
    w = np.asarray(w, dtype=float).reshape(-1)
    if w.shape != (g.n_edges,):
        raise DomainError(f"expected {g.n_edges} weights, got {w.shape[0]}")
    if not np.all(np.isfinite(w)):
        raise DomainError("weights must be finite")
    if np.any(w < 0):
        raise DomainError("weights must be nonnegative")
    return w


class _Blossom:
    """State of one run of the max-weight blossom algorithm.

    Vertices are ``0..n-1``; non-trivial blossoms use ids ``n..2n-1``. Edge
    ``k`` has endpoints ``2k`` and ``2k+1``; ``endpoint[p]`` is the vertex at
    endpoint ``p`` and ``p ^ 1`` is the opposite endpoint. ``dualvar[v]``
    holds twice the vertex dual, ``dualvar[b]`` the blossom dual itself.
    """

    def __init__(self, nvertex: int, edges: list[tuple[int, int, int]]):
        self.n = n = nvertex
        self.edges = edges
        maxweight = max([0] + [wt for _, _, wt in edges])
        self.endpoint = [edges[p // 2][p % 2] for p in range(2 * len(edges))]
        self.neighbend: list[list[int]] = [[] for _ in range(n)]
        for k, (i, j, _) in enumerate(edges):
            self.neighbend[i].append(2 * k + 1)
            self.neighbend[j].append(2 * k)
        self.mate = [-1] * n
        self.label = [0] * (2 * n)
        self.labelend = [-1] * (2 * n)
        self.inblossom = list(range(n))
        self.blossomparent = [-1] * (2 * n)
        self.blossomchilds: list[list[int] | None] = [None] * (2 * n)
        self.blossombase = list(range(n)) + [-1] * n
        self.blossomendps: list[list[int] | None] = [None] * (2 * n)
        self.bestedge = [-1] * (2 * n)
        self.blossombestedges: list[list[int] | None] = [None] * (2 * n)
        self.unusedblossoms = list(range(n, 2 * n))
        self.dualvar = [maxweight] * n + [0] * n
        self.allowedge = [False] * len(edges)
        self.queue: list[int] = []

    def slack(self, k: int) -> int:
        i, j, wt = self.edges[k]
        return self.dualvar[i] + self.dualvar[j] - 2 * wt

    def leaves(self, b: int):
        if b < self.n:
            yield b
            return
        stack = list(self.blossomchilds[b])
        while stack:
            t = stack.pop()
            if t < self.n:
                yield t
            else:
                stack.extend(self.blossomchilds[t])

    def assign_label(self, w: int, t: int, p: int) -> None:
        while True:
            b = self.inblossom[w]
            self.label[w] = self.label[b] = t
            self.labelend[w] = self.labelend[b] = p
            self.bestedge[w] = self.bestedge[b] = -1
            if t == 1:
                self.queue.extend(self.leaves(b))
                return
            base = self.blossombase[b]
            mp = self.mate[base]
            w, t, p = self.endpoint[mp], 1, mp ^ 1

    def scan_blossom(self, v: int, w: int) -> int:
        """Trace back from v and w; return the base of a new blossom or -1."""
        path = []
        base = -1
        while v != -1 or w != -1:
            b = self.inblossom[v]
            if self.label[b] & 4:
                base = self.blossombase[b]
                break
            path.append(b)
            self.label[b] = 5
            if self.labelend[b] == -1:
                v = -1
            else:
                v = self.endpoint[self.labelend[b]]
                b = self.inblossom[v]
                v = self.endpoint[self.labelend[b]]
            if w != -1:
                v, w = w, v
        for b in path:
            self.label[b] = 1
        return base

    def add_blossom(self, base: int, k: int) -> None:
        v, w, _ = self.edges[k]
        inb = self.inblossom
        bb, bv, bw = inb[base], inb[v], inb[w]
        b = self.unusedblossoms.pop()
        self.blossombase[b] = base
        self.blossomparent[b] = -1
        self.blossomparent[bb] = b
        path: list[int] = []
        endps: list[int] = []
        while bv != bb:
            self.blossomparent[bv] = b
            path.append(bv)
            endps.append(self.labelend[bv])
            v = self.endpoint[self.labelend[bv]]
            bv = inb[v]
        path.append(bb)
        path.reverse()
        endps.reverse()
        endps.append(2 * k)
        while bw != bb:
            self.blossomparent[bw] = b
            path.append(bw)
            endps.append(self.labelend[bw] ^ 1)
            w = self.endpoint[self.labelend[bw]]
            bw = inb[w]
        self.blossomchilds[b] = path
        self.blossomendps[b] = endps
        self.label[b] = 1
        self.labelend[b] = self.labelend[bb]
        self.dualvar[b] = 0
        for x in self.leaves(b):
            if self.label[inb[x]] == 2:
                self.queue.append(x)
            inb[x] = b
        bestedgeto = [-1] * (2 * self.n)
        for sub in path:
            if self.blossombestedges[sub] is None:
                nblists = [[p // 2 for p in self.neighbend[x]] for x in self.leaves(sub)]
            else:
                nblists = [self.blossombestedges[sub]]
            for nblist in nblists:
                for kk in nblist:
                    i, j, _ = self.edges[kk]
                    if inb[j] == b:
                        i, j = j, i
                    bj = inb[j]
                    if (
                        bj != b
                        and self.label[bj] == 1
                        and (bestedgeto[bj] == -1 or self.slack(kk) < self.slack(bestedgeto[bj]))
                    ):
                        bestedgeto[bj] = kk
            self.blossombestedges[sub] = None
            self.bestedge[sub] = -1
        self.blossombestedges[b] = [kk for kk in bestedgeto if kk != -1]
        self.bestedge[b] = -1
        for kk in self.blossombestedges[b]:
            if self.bestedge[b] == -1 or self.slack(kk) < self.slack(self.bestedge[b]):
                self.bestedge[b] = kk

    def expand_blossom(self, b: int, endstage: bool) -> None:
        n = self.n
        for s in self.blossomchilds[b]:
            self.blossomparent[s] = -1
            if s < n:
                self.inblossom[s] = s
            elif endstage and self.dualvar[s] == 0:
                self.expand_blossom(s, endstage)
            else:
                for x in self.leaves(s):
                    self.inblossom[x] = s
        if not endstage and self.label[b] == 2:
            childs = self.blossomchilds[b]
            endps = self.blossomendps[b]
            entrychild = self.inblossom[self.endpoint[self.labelend[b] ^ 1]]
            j = childs.index(entrychild)
            if j & 1:
                j -= len(childs)
                jstep, endptrick = 1, 0
            else:
                jstep, endptrick = -1, 1
            p = self.labelend[b]
            while j != 0:
                self.label[self.endpoint[p ^ 1]] = 0
                self.label[self.endpoint[endps[j - endptrick] ^ endptrick ^ 1]] = 0
                self.assign_label(self.endpoint[p ^ 1], 2, p)
                self.allowedge[endps[j - endptrick] // 2] = True
                j += jstep
                p = endps[j - endptrick] ^ endptrick
                self.allowedge[p // 2] = True
                j += jstep
            bv = childs[j]
            self.label[self.endpoint[p ^ 1]] = self.label[bv] = 2
            self.labelend[self.endpoint[p ^ 1]] = self.labelend[bv] = p
            self.bestedge[bv] = -1
            j += jstep
            while childs[j] != entrychild:
                bv = childs[j]
                if self.label[bv] == 1:
                    j += jstep
                    continue
                reached = -1
                for x in self.leaves(bv):
                    if self.label[x] != 0:
                        reached = x
                        break
                if reached != -1:
                    self.label[reached] = 0
                    self.label[self.endpoint[self.mate[self.blossombase[bv]]]] = 0
                    self.assign_label(reached, 2, self.labelend[reached])
                j += jstep
        self.label[b] = self.labelend[b] = -1
        self.blossomchilds[b] = self.blossomendps[b] = None
        self.blossombase[b] = -1
        self.blossombestedges[b] = None
        self.bestedge[b] = -1
        self.unusedblossoms.append(b)

    def augment_blossom(self, b: int, v: int) -> None:
        t = v
        while self.blossomparent[t] != b:
            t = self.blossomparent[t]
        if t >= self.n:
            self.augment_blossom(t, v)
        childs = self.blossomchilds[b]
        endps = self.blossomendps[b]
        i = j = childs.index(t)
        if i & 1:
            j -= len(childs)
            jstep, endptrick = 1, 0
        else:
            jstep, endptrick = -1, 1
        while j != 0:
            j += jstep
            t = childs[j]
            p = endps[j - endptrick] ^ endptrick
            if t >= self.n:
                self.augment_blossom(t, self.endpoint[p])
            j += jstep
            t = childs[j]
            if t >= self.n:
                self.augment_blossom(t, self.endpoint[p ^ 1])
            self.mate[self.endpoint[p]] = p ^ 1
            self.mate[self.endpoint[p ^ 1]] = p
        self.blossomchilds[b] = childs[i:] + childs[:i]
        self.blossomendps[b] = endps[i:] + endps[:i]
        self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]]

    def augment_matching(self, k: int) -> None:
        v, w, _ = self.edges[k]
        for s, p in ((v, 2 * k + 1), (w, 2 * k)):
            while True:
                bs = self.inblossom[s]
                if bs >= self.n:
                    self.augment_blossom(bs, s)
                self.mate[s] = p
                if self.labelend[bs] == -1:
                    break
                t = self.endpoint[self.labelend[bs]]
                bt = self.inblossom[t]
                s = self.endpoint[self.labelend[bt]]
                j = self.endpoint[self.labelend[bt] ^ 1]
                if bt >= self.n:
                    self.augment_blossom(bt, j)
                self.mate[j] = self.labelend[bt]
                p = self.labelend[bt] ^ 1

    def run(self) -> None:
        """Grow a maximum-weight maximum-cardinality matching."""
        n = self.n
        label, inb = self.label, self.inblossom
        for _ in range(n):
            label[:] = [0] * (2 * n)
            self.bestedge[:] = [-1] * (2 * n)
            self.blossombestedges[n:] = [None] * n
            self.allowedge[:] = [False] * len(self.edges)
            self.queue[:] = []
            for v in range(n):
                if self.mate[v] == -1 and label[inb[v]] == 0:
                    self.assign_label(v, 1, -1)
            augmented = False
            while True:
                while self.queue and not augmented:
                    v = self.queue.pop()
                    for p in self.neighbend[v]:
                        k = p // 2
                        w = self.endpoint[p]
                        if inb[v] == inb[w]:
                            continue
                        if not self.allowedge[k]:
                            kslack = self.slack(k)
                            if kslack <= 0:
                                self.allowedge[k] = True
                        if self.allowedge[k]:
                            if label[inb[w]] == 0:
                                self.assign_label(w, 2, p ^ 1)
                            elif label[inb[w]] == 1:
                                base = self.scan_blossom(v, w)
                                if base >= 0:
                                    self.add_blossom(base, k)
                                else:
                                    self.augment_matching(k)
                                    augmented = True
                                    break
                            elif label[w] == 0:
                                label[w] = 2
                                self.labelend[w] = p ^ 1
                        elif label[inb[w]] == 1:
                            b = inb[v]
                            if self.bestedge[b] == -1 or kslack < self.slack(self.bestedge[b]):
                                self.bestedge[b] = k
                        elif label[w] == 0:
                            if self.bestedge[w] == -1 or kslack < self.slack(self.bestedge[w]):
                                self.bestedge[w] = k
                if augmented:
                    break

                # No augmenting path under the current duals: pick the
                # largest dual step that keeps every slack nonnegative.
                deltatype = -1
                delta = deltaedge = deltablossom = None
                for v in range(n):
                    if label[inb[v]] == 0 and self.bestedge[v] != -1:
                        d = self.slack(self.bestedge[v])
                        if deltatype == -1 or d < delta:
                            delta, deltatype, deltaedge = d, 2, self.bestedge[v]
                for b in range(2 * n):
                    if self.blossomparent[b] == -1 and label[b] == 1 and self.bestedge[b] != -1:
                        kslack = self.slack(self.bestedge[b])
                        if kslack % 2:
                            raise SolverError("odd slack between S-blossoms")
                        d = kslack // 2
                        if deltatype == -1 or d < delta:
                            delta, deltatype, deltaedge = d, 3, self.bestedge[b]
                for b in range(n, 2 * n):
                    if (
                        self.blossombase[b] >= 0
                        and self.blossomparent[b] == -1
                        and label[b] == 2
                        and (deltatype == -1 or self.dualvar[b] < delta)
                    ):
                        delta, deltatype, deltablossom = self.dualvar[b], 4, b
                if deltatype == -1:
                    deltatype = 1
                    delta = max(0, min(self.dualvar[:n]))

                for v in range(n):
                    if label[inb[v]] == 1:
                        self.dualvar[v] -= delta
                    elif label[inb[v]] == 2:
                        self.dualvar[v] += delta
                for b in range(n, 2 * n):
                    if self.blossombase[b] >= 0 and self.blossomparent[b] == -1:
                        if label[b] == 1:
                            self.dualvar[b] += delta
                        elif label[b] == 2:
                            self.dualvar[b] -= delta

                if deltatype == 1:
                    break
                if deltatype == 2:
                    self.allowedge[deltaedge] = True
                    i, j, _ = self.edges[deltaedge]
                    if label[inb[i]] == 0:
                        i, j = j, i
                    self.queue.append(i)
                elif deltatype == 3:
                    self.allowedge[deltaedge] = True
                    i, j, _ = self.edges[deltaedge]
                    self.queue.append(i)
                else:
                    self.expand_blossom(deltablossom, False)
            if not augmented:
                break
            for b in range(n, 2 * n):
                if (
                    self.blossomparent[b] == -1
                    and self.blossombase[b] >= 0
                    and label[b] == 1
                    and self.dualvar[b] == 0
                ):
                    self.expand_blossom(b, True)

    def mate_vertex(self) -> list[int]:
        return [self.endpoint[p] if p >= 0 else -1 for p in self.mate]

    def vertex_blossom_chain(self, v: int) -> list[int]:
        """Non-trivial blossoms containing v, outermost first."""
        chain = []
        b = self.blossomparent[v]
        while b != -1:
            chain.append(b)
            b = self.blossomparent[b]
        chain.reverse()
        return chain


def _weight_scale(w: np.ndarray) -> int:
    """Power of two mapping the largest weight just below 2**52."""
    wmax = float(w.max()) if len(w) else 0.0
    exp = math.frexp(wmax)[1] if wmax > 0 else 0
    return 2 ** (52 - exp) if exp <= 52 else 1


def _integer_costs(w: np.ndarray, scale: int) -> list[int]:
    """Exact integer costs: scaled weight, then a lexicographic tie-break bonus."""
    m = len(w)
    unit = 1 << m
    return [int(round(float(x) * scale)) * unit - (1 << (m - 1 - k)) for k, x in enumerate(w)]


def _certify(
    run: _Blossom,
    g: Graph,
    w: np.ndarray,
    matched: list[int],
    shift: int,
    denom: int,
) -> None:
    """Re-check dual feasibility and complementary slackness in float.

    The run maximised ``shift - cost``; in caller units that weight is
    ``shift/denom - w``. Vertex duals are stored doubled. Integer true
    division keeps the conversion exact up to float rounding for any size.
    """
    n = g.n_vertices
    tol = CERTIFICATE_TOL * max(1.0, float(w.max()) if len(w) else 1.0)
    u = [run.dualvar[v] / (2 * denom) for v in range(n)]
    z = {b: run.dualvar[b] / denom for b in range(n, 2 * n) if run.blossombase[b] >= 0}
    if any(val < -tol for val in z.values()):
        raise SolverError("matching certificate: negative blossom dual")
    chains = [run.vertex_blossom_chain(v) for v in range(n)]
    kshift = shift / denom
    matched_set = set(matched)
    for k, (a, b) in enumerate(g.edges):
        s = u[a] + u[b] - (kshift - w[k])
        for ba, bb in zip(chains[a], chains[b]):
            if ba != bb:
                break
            s += z[ba]
        if s < -tol:
            raise SolverError(f"matching certificate: edge {k} has negative slack {s:.3e}")
        if k in matched_set and abs(s) > tol:
            raise SolverError(f"matching certificate: matched edge {k} not tight ({s:.3e})")
    mate = run.mate_vertex()
    for b, zb in z.items():
        if zb > tol:
            verts = list(run.leaves(b))
            inside = sum(1 for x in verts if mate[x] in verts)
            if inside != len(verts) - 1:
                raise SolverError("matching certificate: positive-dual blossom is not full")


def min_weight_perfect_matching(g: Graph, w) -> Matching:
    """Exact minimum-weight perfect matching.

    Ties are broken towards the lexicographically smallest sorted edge-index
    set. Raises :class:`Infeasible` when no perfect matching exists.
    """
    w = _check_weights(g, w)
    n = g.n_vertices
    if n % 2:
        raise Infeasible(f"odd number of vertices ({n})")
    if n == 0:
        return Matching(frozenset(), 0.0)
    scale = _weight_scale(w)
    costs = _integer_costs(w, scale)
    shift = max(costs) + 1 if costs else 1
    run = _Blossom(n, [(a, b, shift - c) for (a, b), c in zip(g.edges, costs)])
    run.run()
    mate = run.mate_vertex()
    if any(m < 0 for m in mate):
        raise Infeasible("graph has no perfect matching")
    adj = g.adjacency()
    matched = sorted({adj[v][mate[v]] for v in range(n)})
    _certify(run, g, w, matched, shift, scale << g.n_edges)
    return Matching(frozenset(matched), math.fsum(w[k] for k in matched))


def brute_force_mwpm(g: Graph, w) -> Matching:
    """Exhaustive minimum-weight perfect matching for |V| <= 12.

    Uses the same tie rule as :func:`min_weight_perfect_matching`: the
    lexicographically smallest sorted edge-index set among exact minima.
    """
    w = _check_weights(g, w)
    n = g.n_vertices
    if n > BRUTE_FORCE_MAX_VERTICES:
        raise DomainError(f"brute force limited to {BRUTE_FORCE_MAX_VERTICES} vertices")
    if n % 2:
        raise Infeasible(f"odd number of vertices ({n})")
    adj = g.adjacency()
    best: tuple[float, tuple[int, ...]] | None = None

    def extend(free: frozenset[int], chosen: list[int]) -> None:
        nonlocal best
        if not free:
            key = (math.fsum(w[k] for k in chosen), tuple(sorted(chosen)))
            if best is None or key < best:
                best = key
            return
        v = min(free)
        for u, k in adj[v].items():
            if u in free:
                chosen.append(k)
                extend(free - {u, v}, chosen)
                chosen.pop()

    extend(frozenset(range(n)), [])
    if best is None:
        raise Infeasible("graph has no perfect matching")
    return Matching(frozenset(best[1]), best[0])


def is_edge_cover(g: Graph, edges) -> bool:
    covered = np.zeros(g.n_vertices, dtype=bool)
    for k in edges:
        a, b = g.edges[k]
        covered[a] = covered[b] = True
    return bool(covered.all())


def min_weight_edge_cover(g: Graph, w) -> frozenset[int]:
    """Minimum-weight edge cover through perfect matching on a doubled graph.

    The auxiliary graph holds two copies of G (each edge keeps its weight)
    and a cross edge ``(v, v')`` of weight ``2 * min_{e at v} w(e)``. Matched
    edges of the first copy enter the cover and every vertex matched across
    takes its cheapest incident edge (lowest index on ties). The cover weight
    equals half the auxiliary matching weight. Redundant edges, which can only
    appear through zero weights, are then pruned from the highest index down.
    """
    w = _check_weights(g, w)
    n, m = g.n_vertices, g.n_edges
    incident = g.incident_edges()
    if any(not inc for inc in incident):
        raise Infeasible(f"isolated vertices: {g.isolated_vertices()}")
    cheapest = [min(inc, key=lambda k: (w[k], k)) for inc in incident]
    pairs = list(g.edges) + [(a + n, b + n) for a, b in g.edges] + [(v, v + n) for v in range(n)]
    weights = np.concatenate([w, w, [2.0 * w[cheapest[v]] for v in range(n)]])
    aux = Graph(tuple(f"{i}" for i in range(2 * n)), tuple(pairs), np.ones(len(pairs)))
    matching = min_weight_perfect_matching(aux, weights)
    cover = {k for k in matching.edges if k < m}
    cover |= {cheapest[k - 2 * m] for k in matching.edges if k >= 2 * m}
    for k in sorted(cover, reverse=True):
        if is_edge_cover(g, cover - {k}):
            cover.discard(k)
    return frozenset(cover)
