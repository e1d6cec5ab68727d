"""Immutable weighted graphs, stars, and the standard example families.

Edges are stored in a fixed order and that order is the coordinate order of
every edge-indexed vector in the package (densities, usage rows, weights).
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ParseError

__all__ = [
    "Graph",
    "parse_graph",
    "format_edge_list",
    "graph_to_json",
    "graph_from_json",
    "star",
    "min_degree",
    "make_standard",
    "standard_from_string",
    "random_graph",
    "random_bipartite_graph",
    "STANDARD_KINDS",
]


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph with positive edge weights.

    Parameters
    ----------
    vertices : sequence of str
        Vertex ids. Their order fixes the dense vertex indices.
    edges : sequence of (int, int)
        Pairs of vertex indices. Their order fixes the edge coordinates.
    sigma : array_like, optional
        Positive weight per edge; defaults to all ones.
    """

    vertices: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]
    sigma: np.ndarray = field(default=None)  # type: ignore[assignment]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        vertices = tuple(str(v) for v in self.vertices)
        edges = tuple((int(a), int(b)) for a, b in self.edges)
        n = len(vertices)
        if len(set(vertices)) != n:
            raise DomainError("duplicate vertex id")
        seen = set()
        for a, b in edges:
            if not (0 <= a < n and 0 <= b < n):
                raise DomainError(f"edge ({a}, {b}) refers to an unknown vertex")
            if a == b:
                raise DomainError(f"self-loop at vertex {vertices[a]!r}")
            key = (min(a, b), max(a, b))
            if key in seen:
                raise DomainError(f"duplicate edge {vertices[a]}-{vertices[b]}")
            seen.add(key)
        if self.sigma is None:
            sigma = np.ones(len(edges))
        else:
            sigma = np.array(self.sigma, dtype=float).reshape(-1)
        if sigma.shape != (len(edges),):
            raise DomainError("sigma must have one entry per edge")
        if not np.all(np.isfinite(sigma)) or np.any(sigma <= 0):
            raise DomainError("edge weights must be finite and positive")
        sigma.setflags(write=False)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(vertices)})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.vertices == other.vertices
            and self.edges == other.edges
            and np.array_equal(self.sigma, other.sigma)
        )

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges, self.sigma.tobytes()))

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def index(self, v: str) -> int:
        """Dense index of vertex id `v` (KeyError if unknown)."""
        return self._index[str(v)]

    def edge_label(self, k: int) -> str:
        a, b = self.edges[k]
        return f"{self.vertices[a]}-{self.vertices[b]}"

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n_vertices, dtype=int)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def incidence_matrix(self) -> np.ndarray:
        """Dense |V| x |E| 0/1 matrix; row v is the indicator of the star of v."""
        inc = np.zeros((self.n_vertices, self.n_edges))
        for k, (a, b) in enumerate(self.edges):
            inc[a, k] = 1.0
            inc[b, k] = 1.0
        return inc

    def incident_edges(self) -> list[list[int]]:
        """Per vertex index, the edge indices incident to it (ascending)."""
        out: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for k, (a, b) in enumerate(self.edges):
            out[a].append(k)
            out[b].append(k)
        return out

    def adjacency(self) -> list[dict[int, int]]:
        """Per vertex index, a map neighbour index -> edge index."""
        adj: list[dict[int, int]] = [{} for _ in range(self.n_vertices)]
        for k, (a, b) in enumerate(self.edges):
            adj[a][b] = k
            adj[b][a] = k
        return adj

    def isolated_vertices(self) -> list[str]:
        return [self.vertices[i] for i, d in enumerate(self.degrees()) if d == 0]

    def is_bipartite(self) -> bool:
        adj = self.adjacency()
        colour = [-1] * self.n_vertices
        for s in range(self.n_vertices):
            if colour[s] >= 0:
                continue
            colour[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in adj[u]:
                    if colour[w] < 0:
                        colour[w] = 1 - colour[u]
                        queue.append(w)
                    elif colour[w] == colour[u]:
                        return False
        return True

    def with_sigma(self, sigma: Sequence[float] | np.ndarray) -> "Graph":
        return Graph(self.vertices, self.edges, np.asarray(sigma, dtype=float))

    @classmethod
    def from_edges(
        cls,
        pairs: Iterable[tuple[object, object]],
        sigma: Sequence[float] | None = None,
        vertices: Iterable[object] | None = None,
    ) -> "Graph":
        """Build a graph from vertex-id pairs, assigning indices by first appearance."""
        order: dict[str, int] = {}
        if vertices is not None:
            for v in vertices:
                order.setdefault(str(v), len(order))
        edges = []
        for u, v in pairs:
            iu = order.setdefault(str(u), len(order))
            iv = order.setdefault(str(v), len(order))
            edges.append((iu, iv))
        return cls(tuple(order), tuple(edges), sigma)


def parse_graph(text: str) -> Graph:
    """Parse an edge-list document.

    Each non-blank line is ``u v [w]``; ``#`` starts a comment. Vertices are
    numbered in order of first appearance and edges keep line order.
    """
    order: dict[str, int] = {}
    edges: list[tuple[int, int]] = []
    weights: list[float] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"line {lineno}: expected 'u v [w]', got {raw!r}")
        u, v = parts[0], parts[1]
        if u == v:
            raise ParseError(f"line {lineno}: self-loop at {u!r}")
        w = 1.0
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise ParseError(f"line {lineno}: bad weight {parts[2]!r}") from None
            if not (w > 0) or not math.isfinite(w):
                raise ParseError(f"line {lineno}: weight must be positive, got {parts[2]}")
        iu = order.setdefault(u, len(order))
        iv = order.setdefault(v, len(order))
        key = (min(iu, iv), max(iu, iv))
        if key in seen:
            raise ParseError(f"line {lineno}: duplicate edge {u}-{v}")
        seen.add(key)
        edges.append((iu, iv))
        weights.append(w)
    return Graph(tuple(order), tuple(edges), np.array(weights, dtype=float))


def format_edge_list(g: Graph) -> str:
    """Serialize to the edge-list format; ``parse_graph`` inverts this exactly."""
    if g.isolated_vertices():
        raise DomainError("isolated vertices cannot be written as an edge list")
    lines = [
        f"{g.vertices[a]} {g.vertices[b]} {float(w)!r}"
        for (a, b), w in zip(g.edges, g.sigma)
    ]
    return "\n".join(lines) + "\n"


def graph_to_json(g: Graph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [
            [g.vertices[a], g.vertices[b], float(w)]
            for (a, b), w in zip(g.edges, g.sigma)
        ],
    }


def graph_from_json(obj: dict | str) -> Graph:
    if isinstance(obj, str):
        obj = json.loads(obj)
    vertices = [str(v) for v in obj["vertices"]]
    index = {v: i for i, v in enumerate(vertices)}
    edges, weights = [], []
    for item in obj["edges"]:
        u, v = str(item[0]), str(item[1])
        if u not in index or v not in index:
            raise ParseError(f"edge {u}-{v} names an unlisted vertex")
        edges.append((index[u], index[v]))
        weights.append(float(item[2]) if len(item) > 2 else 1.0)
    try:
        return Graph(tuple(vertices), tuple(edges), np.array(weights, dtype=float))
    except DomainError as exc:
        raise ParseError(str(exc)) from None


def star(g: Graph, v: str) -> frozenset[int]:
    """Edge indices incident to vertex `v`."""
    i = g.index(v)
    return frozenset(k for k, (a, b) in enumerate(g.edges) if a == i or b == i)


def min_degree(g: Graph) -> int:
    if g.n_vertices == 0:
        raise DomainError("graph has no vertices")
    return int(g.degrees().min())


STANDARD_KINDS = {"star": 3, "cycle": 3, "complete": 2, "path": 3, "wheel": 4, "barbell": 3}


def make_standard(kind: str, n: int) -> Graph:
    """Unweighted instance of a standard family.

    ``star`` S_n has center ``0`` and leaves ``1..n-1``. ``wheel`` W_n has hub
    ``0`` and rim ``1..n-1`` (spokes first, then rim edges). ``barbell`` joins
    two copies of K_n on ``0..n-1`` and ``n..2n-1`` by the bridge
    ``(n-1, n)``, which is always the last edge.
    """
    if kind not in STANDARD_KINDS:
        raise DomainError(f"unknown graph kind {kind!r}")
    n = int(n)
    if n < STANDARD_KINDS[kind]:
        raise DomainError(f"{kind} requires n >= {STANDARD_KINDS[kind]}, got {n}")
    if kind == "star":
        pairs = [(0, i) for i in range(1, n)]
        nv = n
    elif kind == "cycle":
        pairs = [(i, (i + 1) % n) for i in range(n)]
        nv = n
    elif kind == "complete":
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        nv = n
    elif kind == "path":
        pairs = [(i, i + 1) for i in range(n - 1)]
        nv = n
    elif kind == "wheel":
        rim = n - 1
        pairs = [(0, i) for i in range(1, n)]
        pairs += [(i, i % rim + 1) for i in range(1, n)]
        nv = n
    else:
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        pairs += [(n + i, n + j) for i in range(n) for j in range(i + 1, n)]
        pairs.append((n - 1, n))
        nv = 2 * n
    return Graph(tuple(str(i) for i in range(nv)), tuple(pairs))


def standard_from_string(text: str) -> Graph:
    """``"complete:6"`` -> ``make_standard("complete", 6)``."""
    try:
        kind, n = text.split(":")
        size = int(n)
    except ValueError:
        raise DomainError(f"expected 'kind:n', got {text!r}") from None
    return make_standard(kind.strip(), size)


def _attach_isolated(
    n: int, pairs: set[tuple[int, int]], rng: np.random.Generator, allowed=None
) -> None:
    deg = [0] * n
    for a, b in pairs:
        deg[a] += 1
        deg[b] += 1
    for v in range(n):
        if deg[v]:
            continue
        candidates = [u for u in range(n) if u != v and (allowed is None or allowed(u, v))]
        u = int(rng.choice(candidates))
        pairs.add((min(u, v), max(u, v)))
        deg[u] += 1
        deg[v] += 1


def random_graph(
    n: int,
    edge_prob: float,
    rng: np.random.Generator,
    weighted: bool = False,
    weight_range: tuple[float, float] = (0.5, 2.0),
) -> Graph:
    """Erdos-Renyi style graph on ``n`` vertices with no isolated vertices."""
    if n < 2:
        raise DomainError("need at least two vertices")
    pairs = {
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < edge_prob
    }
    _attach_isolated(n, pairs, rng)
    ordered = sorted(pairs)
    sigma = rng.uniform(*weight_range, size=len(ordered)) if weighted else None
    return Graph(tuple(str(i) for i in range(n)), tuple(ordered), sigma)


def random_bipartite_graph(
    n_left: int,
    n_right: int,
    edge_prob: float,
    rng: np.random.Generator,
    weighted: bool = False,
    weight_range: tuple[float, float] = (0.5, 2.0),
) -> Graph:
    """Random bipartite graph, left part ``0..n_left-1``, no isolated vertices."""
    n = n_left + n_right
    pairs = {
        (i, j)
        for i in range(n_left)
        for j in range(n_left, n)
        if rng.random() < edge_prob
    }
    _attach_isolated(n, pairs, rng, allowed=lambda u, v: (u < n_left) != (v < n_left))
    ordered = sorted(pairs)
    sigma = rng.uniform(*weight_range, size=len(ordered)) if weighted else None
    return Graph(tuple(str(i) for i in range(n)), tuple(ordered), sigma)
