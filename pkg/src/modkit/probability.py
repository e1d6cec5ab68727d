"""Probabilistic reading of a solved modulus problem.

The normalised multipliers of the active rows form a pmf ``mu`` on the
family. At the optimum the expected usage of each edge under ``mu`` is
``sigma * rho**(p-1) / Mod``, and for ``p = 2`` with unit weights and
subset families the expected overlap of two independent draws is
``1 / Mod``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateResult, DomainError
from .families import UsageRow
from .graph import Graph
from .solver import ModulusResult

__all__ = [
    "Pmf",
    "pmf_from_result",
    "expected_edge_usage",
    "expected_overlap",
    "uniform_star_lower_bound",
    "optimal_expected_usage",
]


@dataclass(frozen=True)
class Pmf:
    """Probability masses over family rows, keyed by row label."""

    rows: tuple[UsageRow, ...]
    mass: np.ndarray

    def __post_init__(self):
        mass = np.array(self.mass, dtype=float).reshape(-1)
        if mass.shape != (len(self.rows),):
            raise DomainError("one mass per row expected")
        if np.any(mass < 0):
            raise DomainError("masses must be nonnegative")
        if abs(math.fsum(mass) - 1.0) > 1e-12:
            raise DomainError("masses must sum to 1")
        mass.setflags(write=False)
        object.__setattr__(self, "mass", mass)
        labels = [r.label for r in self.rows]
        if len(set(labels)) != len(labels):
            raise DomainError("row labels must be distinct")

    def as_dict(self) -> dict:
        return {r.label: float(m) for r, m in zip(self.rows, self.mass)}

    def to_dict(self, graph: Graph | None = None) -> dict:
        usage = expected_edge_usage(self, self.rows)
        names = [graph.edge_label(k) if graph is not None else str(k) for k in range(len(usage))]
        return {
            "objects": [
                {"label": _json_label(r.label), "mass": float(m)} for r, m in zip(self.rows, self.mass)
            ],
            "expected_usage": {name: float(v) for name, v in zip(names, usage)},
        }

    def to_json(self, graph: Graph | None = None, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(graph), indent=indent)


def _json_label(label):
    if isinstance(label, tuple):
        return [_json_label(x) for x in label]
    if isinstance(label, np.generic):
        return label.item()
    return label


def pmf_from_result(result: ModulusResult) -> Pmf:
    """Normalise the multipliers of a solved problem into a pmf."""
    lam = np.maximum(np.asarray(result.lam, dtype=float), 0.0)
    total = math.fsum(lam)
    if not total > 0:
        raise DegenerateResult("multipliers sum to zero")
    mass = lam / total
    mass = mass / math.fsum(mass)
    return Pmf(tuple(result.active_rows), mass)


def _masses_for(pmf: Pmf, rows) -> np.ndarray:
    index = {r.label: i for i, r in enumerate(rows)}
    weights = np.zeros(len(rows))
    for r, m in zip(pmf.rows, pmf.mass):
        i = index.get(r.label)
        if i is None:
            if m == 0:
                continue
            raise DomainError(f"pmf label {r.label!r} not among the rows")
        if not np.array_equal(rows[i].usage, r.usage):
            raise DomainError(f"row {r.label!r} differs from the pmf's row")
        weights[i] += m
    return weights


def expected_edge_usage(pmf: Pmf, rows) -> np.ndarray:
    """``sum_rows mu(row) * usage(row, e)`` for every edge."""
    rows = tuple(rows)
    if not rows:
        raise DomainError("no rows given")
    weights = _masses_for(pmf, rows)
    return weights @ np.vstack([r.usage for r in rows])


def expected_overlap(pmf: Pmf, rows) -> float:
    """Expected shared edge count of two independent draws from ``pmf``.

    Rows must be 0/1 indicators; the value is ``sum_e P(e in draw)**2``.
    """
    rows = tuple(rows)
    for r in rows:
        if not np.all((r.usage == 0) | (r.usage == 1)):
            raise DomainError(f"row {r.label!r} is not an edge-set indicator")
    usage = expected_edge_usage(pmf, rows)
    return math.fsum(usage**2)


def uniform_star_lower_bound(g: Graph, p: float = 2.0, sigma=None) -> float:
    """Lower bound on the star modulus from the uniform pmf on stars.

    Each edge has expected usage ``2/|V|`` under that pmf, which gives
    ``(|V|/2)**p * (sum_e sigma**(-q/p))**(-p/q)``.
    """
    p = float(p)
    if not (1.0 < p < math.inf):
        raise DomainError(f"exponent p must lie in (1, inf), got {p}")
    q = p / (p - 1)
    sigma = np.asarray(g.sigma if sigma is None else sigma, dtype=float)
    return (g.n_vertices / 2) ** p * math.fsum(sigma ** (-q / p)) ** (-p / q)


def optimal_expected_usage(result: ModulusResult) -> np.ndarray:
    """Expected usage an optimal pmf must produce: ``sigma rho**(p-1) / Mod``."""
    return result.sigma * result.rho_star ** (result.p - 1) / result.modulus
