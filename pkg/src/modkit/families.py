"""Object families on a graph: usage rows plus a shortest-object oracle.

A family is described by rows ``N(gamma, .)`` over the edges. The modulus
solver only ever asks for a rho-shortest member, so each family exposes a
``shortest(rho)`` callback; small families also carry their explicit rows.

Besides the oracles, this module enumerates minimal edge covers and basic
fractional edge covers of small graphs. Both enumerations walk vertex
partitions into structured blocks (substars, and for the fractional case odd
cycles) instead of scanning a value grid over the edges.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterator, Sequence

import numpy as np

from .errors import DomainError, Infeasible, SolverError
from .graph import Graph
from .matching import min_weight_edge_cover

__all__ = [
    "UsageRow",
    "FamilyOracle",
    "BasicFec",
    "star_family",
    "edge_cover_family",
    "explicit_family",
    "fractional_edge_cover_family",
    "enumerate_minimal_edge_covers",
    "enumerate_basic_fecs",
    "is_fractional_edge_cover",
    "rows_to_json",
    "cover_indicator",
    "MAX_COVER_EDGES",
    "MAX_BFEC_VERTICES",
]

MAX_COVER_EDGES = 25
MAX_BFEC_VERTICES = 12
FEC_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class UsageRow:
    """One family member: its usage vector and a hashable descriptor."""

    usage: np.ndarray
    label: Hashable

    def __post_init__(self):
        u = np.array(self.usage, dtype=float).reshape(-1)
        if np.any(u < 0):
            raise DomainError("usage must be nonnegative")
        if not np.any(u > 0):
            raise DomainError("usage row must have a positive entry")
        u.setflags(write=False)
        object.__setattr__(self, "usage", u)

    def key(self) -> bytes:
        """Identity of the row for duplicate detection."""
        return self.usage.tobytes()

    def __eq__(self, other):
        return isinstance(other, UsageRow) and np.array_equal(self.usage, other.usage)

    def __hash__(self):
        return hash(self.key())


ShortestFn = Callable[[np.ndarray], "tuple[UsageRow, float]"]


@dataclass(frozen=True)
class FamilyOracle:
    """A family given by a shortest-object callback.

    ``shortest(rho)`` returns a member minimising the rho-length together
    with that length. ``rows`` is filled only when the family is small
    enough to list.
    """

    graph: Graph
    shortest: ShortestFn
    rows: tuple[UsageRow, ...] | None = None
    name: str = "family"

    def usage_matrix(self) -> np.ndarray:
        if self.rows is None:
            raise DomainError(f"family {self.name!r} has no explicit rows")
        return np.vstack([r.usage for r in self.rows])


@dataclass(frozen=True, eq=False)
class BasicFec:
    """A basic fractional edge cover.

    ``components`` lists the blocks of the vertex partition: ``("star",
    center, leaves)`` or ``("cycle", vertices_in_order)``, with vertex
    indices. Usage is 1 on star edges and 1/2 on cycle edges.
    """

    usage: np.ndarray
    components: tuple = field(default=())

    def __eq__(self, other):
        return isinstance(other, BasicFec) and np.array_equal(self.usage, other.usage)

    def __hash__(self):
        return hash(self.usage.tobytes())

    def cycle_edges(self, g: Graph) -> set[int]:
        adj = g.adjacency()
        out = set()
        for comp in self.components:
            if comp[0] == "cycle":
                cyc = comp[1]
                for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                    out.add(adj[a][b])
        return out


def _require_no_isolated(g: Graph) -> None:
    iso = g.isolated_vertices()
    if iso:
        raise Infeasible(f"isolated vertices: {iso}")


def _as_density(g: Graph, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=float).reshape(-1)
    if rho.shape != (g.n_edges,):
        raise DomainError(f"density has {rho.shape[0]} entries, graph has {g.n_edges} edges")
    return np.maximum(rho, 0.0)


def star_family(g: Graph) -> FamilyOracle:
    """Vertex stars ``delta(v)``; shortest scans all of them."""
    _require_no_isolated(g)
    inc = g.incidence_matrix()
    rows = tuple(UsageRow(inc[i], g.vertices[i]) for i in range(g.n_vertices))

    def shortest(rho):
        lengths = inc @ _as_density(g, rho)
        i = int(np.argmin(lengths))
        return rows[i], float(lengths[i])

    return FamilyOracle(g, shortest, rows, "stars")


def edge_cover_family(g: Graph) -> FamilyOracle:
    """Edge covers; shortest is a minimum-weight edge cover under rho."""
    _require_no_isolated(g)
    m = g.n_edges

    def shortest(rho):
        rho = _as_density(g, rho)
        cover = min_weight_edge_cover(g, rho)
        usage = np.zeros(m)
        usage[list(cover)] = 1.0
        return UsageRow(usage, tuple(sorted(cover))), math.fsum(rho[k] for k in cover)

    return FamilyOracle(g, shortest, None, "edge covers")


def explicit_family(g: Graph, rows: Sequence, name: str = "explicit") -> FamilyOracle:
    """Family given by a list of usage vectors (or rows); ties go to the first."""
    built = []
    for i, r in enumerate(rows):
        if isinstance(r, UsageRow):
            built.append(r)
        elif isinstance(r, BasicFec):
            built.append(UsageRow(r.usage, i))
        else:
            built.append(UsageRow(r, i))
    if not built:
        raise DomainError("explicit family needs at least one row")
    if any(r.usage.shape != (g.n_edges,) for r in built):
        raise DomainError("row length does not match the edge count")
    built = tuple(built)
    mat = np.vstack([r.usage for r in built])

    def shortest(rho):
        lengths = mat @ _as_density(g, rho)
        i = int(np.argmin(lengths))
        return built[i], float(lengths[i])

    return FamilyOracle(g, shortest, built, name)


def fractional_edge_cover_family(g: Graph) -> FamilyOracle:
    """Fractional edge covers through a vertex-optimal LP solve.

    Meant as an independent cross-check of the duality route, not as the
    production path. The simplex optimum is a vertex of the cover polytope,
    hence half-integral; it is snapped to halves and re-verified. If the
    snap fails the minimum over enumerated basic covers is used instead.
    """
    from scipy.optimize import linprog

    _require_no_isolated(g)
    inc = g.incidence_matrix()
    m = g.n_edges

    def shortest(rho):
        rho = _as_density(g, rho)
        res = linprog(
            rho,
            A_ub=-inc,
            b_ub=-np.ones(g.n_vertices),
            bounds=[(0, None)] * m,
            method="highs-ds",
            options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10},
        )
        if res.status == 0:
            gamma = np.round(2 * res.x) / 2
            length = float(gamma @ rho)
            if is_fractional_edge_cover(g, gamma) and length <= res.fun + 1e-9 * max(1.0, abs(res.fun)):
                return UsageRow(gamma, tuple(gamma.tolist())), length
        if g.n_vertices > MAX_BFEC_VERTICES:
            raise SolverError("fractional cover LP did not return a half-integral vertex")
        best = min(enumerate_basic_fecs(g), key=lambda b: float(b.usage @ rho))
        return UsageRow(best.usage, tuple(best.usage.tolist())), float(best.usage @ rho)

    return FamilyOracle(g, shortest, None, "fractional edge covers")


def is_fractional_edge_cover(g: Graph, gamma) -> bool:
    """True iff every vertex receives total weight at least 1 (to 1e-12)."""
    gamma = np.asarray(gamma, dtype=float).reshape(-1)
    if gamma.shape != (g.n_edges,):
        raise DomainError("gamma length does not match the edge count")
    if np.any(gamma < 0):
        raise DomainError("gamma must be nonnegative")
    return bool(np.all(g.incidence_matrix() @ gamma >= 1 - FEC_TOL))


def _nonempty_subsets(items: list[int]) -> Iterator[tuple[int, ...]]:
    n = len(items)
    for mask in range(1, 1 << n):
        yield tuple(items[i] for i in range(n) if mask >> i & 1)


def _odd_cycles_from(v: int, free: frozenset[int], adj) -> Iterator[tuple[int, ...]]:
    """Odd cycles through v on free vertices, v smallest, one orientation."""
    path = [v]

    def walk(u: int, used: set[int]):
        for x in sorted(adj[u]):
            if x == v and len(path) >= 3 and len(path) % 2 == 1 and path[1] < path[-1]:
                yield tuple(path)
            if x in free and x not in used and x > v:
                path.append(x)
                used.add(x)
                yield from walk(x, used)
                used.discard(x)
                path.pop()

    yield from walk(v, {v})


def _partitions(g: Graph, with_cycles: bool) -> Iterator[tuple]:
    """Vertex partitions into substar blocks (and odd-cycle blocks)."""
    adj = g.adjacency()
    blocks: list[tuple] = []

    def rec(free: frozenset[int]):
        if not free:
            yield tuple(blocks)
            return
        v = min(free)
        nbrs = sorted(u for u in adj[v] if u in free)
        for leaves in _nonempty_subsets(nbrs):
            blocks.append(("star", v, leaves))
            yield from rec(free - {v, *leaves})
            blocks.pop()
        for c in nbrs:
            others = sorted(u for u in adj[c] if u in free and u != v)
            for extra in _nonempty_subsets(others):
                leaves = tuple(sorted((v, *extra)))
                blocks.append(("star", c, leaves))
                yield from rec(free - {c, *leaves})
                blocks.pop()
        if with_cycles:
            for cyc in _odd_cycles_from(v, free, adj):
                blocks.append(("cycle", cyc))
                yield from rec(free - set(cyc))
                blocks.pop()

    yield from rec(frozenset(range(g.n_vertices)))


def _usage_of(g: Graph, blocks, adj) -> np.ndarray:
    usage = np.zeros(g.n_edges)
    for blk in blocks:
        if blk[0] == "star":
            for leaf in blk[2]:
                usage[adj[blk[1]][leaf]] = 1.0
        else:
            cyc = blk[1]
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                usage[adj[a][b]] = 0.5
    return usage


def enumerate_minimal_edge_covers(g: Graph) -> list[frozenset[int]]:
    """All inclusion-minimal edge covers, sorted by their edge-index tuples.

    A minimal cover has no path of three edges, so its components are stars;
    the enumeration walks partitions of V into star blocks.
    """
    if g.n_edges > MAX_COVER_EDGES:
        raise DomainError(f"enumeration limited to {MAX_COVER_EDGES} edges")
    if g.isolated_vertices():
        return []
    adj = g.adjacency()
    seen = set()
    for blocks in _partitions(g, with_cycles=False):
        cover = frozenset(adj[b[1]][leaf] for b in blocks for leaf in b[2])
        seen.add(cover)
    return sorted(seen, key=lambda c: tuple(sorted(c)))


def enumerate_basic_fecs(g: Graph) -> list[BasicFec]:
    """All basic fractional edge covers, deduplicated by usage vector.

    Order is deterministic: lexicographic in the usage vector.
    """
    if g.n_vertices > MAX_BFEC_VERTICES:
        raise DomainError(f"enumeration limited to {MAX_BFEC_VERTICES} vertices")
    if g.isolated_vertices():
        return []
    adj = g.adjacency()
    found: dict[bytes, BasicFec] = {}
    for blocks in _partitions(g, with_cycles=True):
        usage = _usage_of(g, blocks, adj)
        key = usage.tobytes()
        if key not in found:
            usage.setflags(write=False)
            found[key] = BasicFec(usage, blocks)
    return sorted(found.values(), key=lambda b: tuple(b.usage))


def cover_indicator(g: Graph, cover) -> np.ndarray:
    usage = np.zeros(g.n_edges)
    usage[list(cover)] = 1.0
    return usage


def rows_to_json(items, indent: int | None = None) -> str:
    """JSON array of usage vectors for rows, basic covers or plain vectors.

    Convert edge sets with :func:`cover_indicator` first.
    """
    out = []
    for it in items:
        if isinstance(it, (UsageRow, BasicFec)):
            out.append([float(x) for x in it.usage])
        else:
            out.append([float(x) for x in np.asarray(it, dtype=float)])
    return json.dumps(out, indent=indent)
