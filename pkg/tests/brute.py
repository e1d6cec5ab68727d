"""Slow, independent reference computations used only by the tests.

Nothing here imports the matching or enumeration code under test; each
routine works straight from the definitions by exhaustive search or a
subset dynamic program.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from modkit.graph import Graph, make_standard, random_bipartite_graph, random_graph


def subset_minimal_covers(g: Graph) -> set[frozenset[int]]:
    """All inclusion-minimal edge covers, by checking every edge subset."""
    m, n = g.n_edges, g.n_vertices
    full = (1 << n) - 1
    emask = [(1 << a) | (1 << b) for a, b in g.edges]
    out = set()
    for bits in range(1 << m):
        chosen = [k for k in range(m) if bits >> k & 1]
        covered = 0
        for k in chosen:
            covered |= emask[k]
        if covered != full:
            continue
        minimal = True
        for k in chosen:
            rest = 0
            for j in chosen:
                if j != k:
                    rest |= emask[j]
            if rest == full:
                minimal = False
                break
        if minimal:
            out.add(frozenset(chosen))
    return out


def dp_min_cover_weight(g: Graph, w) -> float:
    """Minimum edge cover weight by a knapsack over covered-vertex masks."""
    n = g.n_vertices
    full = (1 << n) - 1
    inf = float("inf")
    best = [inf] * (1 << n)
    best[0] = 0.0
    for (a, b), wk in zip(g.edges, w):
        e = (1 << a) | (1 << b)
        nxt = best[:]
        for mask in range(1 << n):
            if best[mask] < inf:
                t = mask | e
                if best[mask] + wk < nxt[t]:
                    nxt[t] = best[mask] + wk
        best = nxt
    return best[full]


def dp_mwpm_weight(g: Graph, w) -> float | None:
    """Minimum perfect matching weight, or None when no perfect matching exists."""
    n = g.n_vertices
    if n % 2:
        return None
    wt = {}
    for (a, b), wk in zip(g.edges, w):
        wt[(a, b)] = wt[(b, a)] = float(wk)

    @lru_cache(maxsize=None)
    def solve(mask: int) -> float:
        if mask == 0:
            return 0.0
        i = (mask & -mask).bit_length() - 1
        best = float("inf")
        for j in range(i + 1, n):
            if mask >> j & 1 and (i, j) in wt:
                best = min(best, wt[(i, j)] + solve(mask & ~(1 << i) & ~(1 << j)))
        return best

    res = solve((1 << n) - 1)
    return None if res == float("inf") else res


def _components(nv: int, edges) -> list[tuple[set[int], list[tuple[int, int]]]]:
    parent = list(range(nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    touched = set()
    for a, b in edges:
        touched |= {a, b}
        parent[find(a)] = find(b)
    groups: dict[int, tuple[set[int], list]] = {}
    for v in touched:
        groups.setdefault(find(v), (set(), []))[0].add(v)
    for a, b in edges:
        groups[find(a)][1].append((a, b))
    return list(groups.values())


def satisfies_basic_definition(g: Graph, gamma) -> bool:
    """Check a {0, 1/2, 1} vector against the basic fractional cover definition.

    Value-one edges must form vertex-disjoint substars, value-half edges
    vertex-disjoint odd cycles, the two parts must not share a vertex, and
    every vertex must be covered.
    """
    gamma = np.asarray(gamma, dtype=float)
    ones = [g.edges[k] for k in range(g.n_edges) if gamma[k] == 1.0]
    halves = [g.edges[k] for k in range(g.n_edges) if gamma[k] == 0.5]
    if len(ones) + len(halves) != int(np.count_nonzero(gamma)):
        return False
    touched_one = {v for e in ones for v in e}
    touched_half = {v for e in halves for v in e}
    if touched_one & touched_half:
        return False
    if touched_one | touched_half != set(range(g.n_vertices)):
        return False
    for verts, es in _components(g.n_vertices, ones):
        if len(es) != len(verts) - 1:
            return False
        deg = {v: 0 for v in verts}
        for a, b in es:
            deg[a] += 1
            deg[b] += 1
        if sum(1 for d in deg.values() if d > 1) > 1:
            return False
    for verts, es in _components(g.n_vertices, halves):
        deg = {v: 0 for v in verts}
        for a, b in es:
            deg[a] += 1
            deg[b] += 1
        if any(d != 2 for d in deg.values()) or len(verts) % 2 == 0:
            return False
    return True


def grid_basic_fecs(g: Graph) -> set[tuple[float, ...]]:
    """Every vector in {0, 1/2, 1}^E meeting the basic fractional cover definition."""
    out = set()
    for vals in itertools.product((0.0, 0.5, 1.0), repeat=g.n_edges):
        if satisfies_basic_definition(g, vals):
            out.add(vals)
    return out


def is_vertex_of_cover_polyhedron(g: Graph, gamma, tol: float = 1e-12) -> bool:
    """True when ``gamma`` is an extreme point of {x >= 0, vertex sums >= 1}.

    A feasible point is extreme exactly when its tight constraints have full
    column rank.
    """
    gamma = np.asarray(gamma, dtype=float)
    A = g.incidence_matrix()
    sums = A @ gamma
    if np.any(gamma < -tol) or np.any(sums < 1 - tol):
        return False
    tight = [A[i] for i in range(g.n_vertices) if abs(sums[i] - 1) <= tol]
    tight += [np.eye(g.n_edges)[k] for k in range(g.n_edges) if abs(gamma[k]) <= tol]
    if not tight:
        return False
    return np.linalg.matrix_rank(np.array(tight)) == g.n_edges


def all_stars(g: Graph) -> list[np.ndarray]:
    return [row for row in g.incidence_matrix().astype(float)]


def regular_graphs() -> list[tuple[str, Graph, int]]:
    """Named d-regular graphs: cycles, complete graphs, K_{3,3}, cube, Petersen."""
    out = []
    for n in (4, 5, 7):
        out.append((f"cycle{n}", make_standard("cycle", n), 2))
    for n in (4, 5, 6):
        out.append((f"complete{n}", make_standard("complete", n), n - 1))
    out.append(("K33", Graph.from_edges([(a, b) for a in "abc" for b in "xyz"]), 3))
    cube = [(i, i ^ (1 << k)) for i in range(8) for k in range(3) if i < i ^ (1 << k)]
    out.append(("cube", Graph.from_edges(cube), 3))
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    out.append(("petersen", Graph.from_edges(outer + inner + spokes), 3))
    return out


def standard_corpus(max_n: int = 10, barbell_max: int = 5) -> list[tuple[str, Graph]]:
    out = []
    for kind, lo in (("star", 3), ("cycle", 3), ("complete", 3), ("path", 3), ("wheel", 4)):
        for n in range(lo, max_n + 1):
            out.append((f"{kind}:{n}", make_standard(kind, n)))
    for n in range(3, barbell_max + 1):
        out.append((f"barbell:{n}", make_standard("barbell", n)))
    return out


def random_corpus(count: int, seed: int, n_range=(3, 12), weighted: bool = True) -> list[tuple[str, Graph]]:
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        g = random_graph(n, float(rng.uniform(0.3, 0.9)), rng, weighted=weighted)
        out.append((f"random#{i}(n={n})", g))
    return out


def bipartite_corpus(count: int, seed: int, weighted: bool = False) -> list[tuple[str, Graph]]:
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        a, b = int(rng.integers(2, 6)), int(rng.integers(2, 6))
        g = random_bipartite_graph(a, b, float(rng.uniform(0.4, 0.9)), rng, weighted=weighted)
        out.append((f"bipartite#{i}({a}+{b})", g))
    return out
