"""Reproducible experiment drivers: the barbell sweep and the verify suite."""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .duality import fec_modulus_via_stars, verify_reciprocal
from .errors import DomainError, ModkitError
from .families import (
    edge_cover_family,
    enumerate_basic_fecs,
    explicit_family,
    fractional_edge_cover_family,
    star_family,
)
from .graph import make_standard, random_bipartite_graph, random_graph
from .matching import brute_force_mwpm, min_weight_perfect_matching
from .oracles import oracle_table
from .probability import optimal_expected_usage
from .solver import DEFAULT_TOL, basic_algorithm

__all__ = [
    "BARBELL_TOL",
    "BARBELL_COLUMNS",
    "BarbellRow",
    "barbell_row",
    "barbell_experiment",
    "barbell_csv",
    "Check",
    "verify_suite",
    "solve_standard",
]

BARBELL_TOL = DEFAULT_TOL
BARBELL_COLUMNS = ("n", "mod_ec", "mod_fec", "ratio", "bridge_usage_ec", "bridge_usage_fec")


@dataclass(frozen=True)
class BarbellRow:
    n: int
    mod_ec: float
    mod_fec: float
    ratio: float
    bridge_usage_ec: float
    bridge_usage_fec: float
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None


def barbell_row(n: int, tol: float = BARBELL_TOL) -> BarbellRow:
    """Edge cover and fractional edge cover moduli of the ``n``-barbell (p = 2)."""
    try:
        g = make_standard("barbell", n)
        bridge = g.n_edges - 1
        ec = basic_algorithm(edge_cover_family(g), 2.0, tol=tol)
        fec = fec_modulus_via_stars(g, 2.0, tol=tol)
        return BarbellRow(
            n,
            ec.modulus,
            fec.primal_modulus,
            ec.modulus / fec.primal_modulus,
            float(optimal_expected_usage(ec)[bridge]),
            float(fec.expected_usage()[bridge]),
        )
    except (ModkitError, ValueError) as exc:
        nan = math.nan
        return BarbellRow(n, nan, nan, nan, nan, nan, f"{type(exc).__name__}: {exc}")


def barbell_experiment(n_min: int, n_max: int, tol: float = BARBELL_TOL, workers: int = 1) -> list[BarbellRow]:
    """Rows for ``n_min <= n <= n_max``, ordered by ``n`` whatever the worker count."""
    if not (3 <= n_min <= n_max <= 30):
        raise DomainError("need 3 <= n_min <= n_max <= 30")
    ns = list(range(n_min, n_max + 1))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(barbell_row, ns, [tol] * len(ns)))
    else:
        rows = [barbell_row(n, tol) for n in ns]
    return sorted(rows, key=lambda r: r.n)


def barbell_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BARBELL_COLUMNS + ("status",))
    for r in rows:
        vals = [r.n] + [repr(float(getattr(r, c))) for c in BARBELL_COLUMNS[1:]]
        w.writerow(vals + ["failed: " + r.error if r.failed else "ok"])
    return buf.getvalue()


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    expected: object = None
    actual: object = None
    tolerance: float | None = None
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        parts = [f"{status} {self.name}"]
        if self.expected is not None:
            parts.append(f"expected={self.expected}")
        if self.actual is not None:
            parts.append(f"actual={self.actual}")
        if self.tolerance is not None:
            parts.append(f"tol={self.tolerance:g}")
        if self.detail:
            parts.append(self.detail)
        return "  ".join(parts)


def solve_standard(kind: str, n: int, family: str, p: float = 2.0, tol: float = DEFAULT_TOL) -> float:
    """Modulus of a standard graph for ``family`` in {star, ec, fec}."""
    g = make_standard(kind, n)
    if family == "star":
        return basic_algorithm(star_family(g), p, tol=tol).modulus
    if family == "ec":
        return basic_algorithm(edge_cover_family(g), p, tol=tol).modulus
    if family == "fec":
        return fec_modulus_via_stars(g, p, tol=tol).primal_modulus
    raise DomainError(f"unknown family {family!r}")


def _rel_check(name: str, expected: float, fn, tol: float) -> Check:
    try:
        actual = fn()
    except (ModkitError, ValueError) as exc:
        return Check(name, False, expected, None, tol, f"{type(exc).__name__}: {exc}")
    rel = abs(actual - expected) / abs(expected)
    return Check(name, rel <= tol, f"{expected:.9g}", f"{actual:.9g}", tol)


def _oracle_checks(n_values, kinds, tol: float) -> list[Check]:
    out = []
    for e in oracle_table(n_values):
        if e.kind not in kinds:
            continue
        out.append(
            _rel_check(
                f"oracle {e.kind}:{e.n} {e.family}",
                float(e.value),
                lambda e=e: solve_standard(e.kind, e.n, e.family, tol=tol * 1e-2),
                tol,
            )
        )
    return out


def verify_suite(scope: str = "quick", seed: int = 20240601) -> list[Check]:
    """Cross-checks of solver, oracles, duality, enumeration and matching.

    ``quick`` compares star, cycle and complete graphs with ``n <= 8``
    against their closed forms. ``full`` adds paths, wheels, n up to 10,
    duality products, enumeration counts, bipartite equality, the
    enumerated-basic-cover solve and matching against brute force.
    """
    if scope not in ("quick", "full"):
        raise DomainError(f"scope must be quick or full, not {scope!r}")
    checks: list[Check] = []
    if scope == "quick":
        return _oracle_checks(range(3, 9), {"star", "cycle", "complete"}, 1e-6)

    checks += _oracle_checks(range(3, 11), {"star", "cycle", "complete", "path", "wheel"}, 1e-6)
    for kind, n, count in (("wheel", 5, 25), ("wheel", 6, 36)):
        got = len(enumerate_basic_fecs(make_standard(kind, n)))
        checks.append(Check(f"basic cover count {kind}:{n}", got == count, count, got))

    rng = np.random.default_rng(seed)
    for p in (1.5, 2.0, 3.0):
        for kind, n in (("cycle", 7), ("complete", 6), ("wheel", 7), ("path", 6)):
            g = make_standard(kind, n)
            rep = verify_reciprocal(g, star_family(g), fractional_edge_cover_family(g), p)
            checks.append(
                Check(f"reciprocal star/fec {kind}:{n} p={p}", rep.passes(1e-6), 0.0, rep.deviation, 1e-6, rep.error or "")
            )

    for i in range(10):
        g = random_bipartite_graph(int(rng.integers(2, 5)), int(rng.integers(2, 5)), 0.7, rng)
        ec = basic_algorithm(edge_cover_family(g)).modulus
        fec = fec_modulus_via_stars(g).primal_modulus
        checks.append(
            Check(f"bipartite ec = fec #{i}", abs(ec - fec) <= 1e-6 * fec, f"{fec:.9g}", f"{ec:.9g}", 1e-6)
        )

    for kind, n in (("cycle", 5), ("complete", 5), ("wheel", 6), ("barbell", 4)):
        g = make_standard(kind, n)
        direct = basic_algorithm(explicit_family(g, enumerate_basic_fecs(g))).modulus
        checks.append(
            _rel_check(f"basic covers vs duality {kind}:{n}", direct, lambda g=g: fec_modulus_via_stars(g).primal_modulus, 1e-6)
        )

    t0 = time.perf_counter()
    bad = 0
    for _ in range(50):
        g = random_graph(2 * int(rng.integers(1, 6)), float(rng.uniform(0.4, 1.0)), rng)
        w = rng.uniform(0, 10, g.n_edges)
        try:
            a = min_weight_perfect_matching(g, w).weight
        except ModkitError:
            a = None
        try:
            b = brute_force_mwpm(g, w).weight
        except ModkitError:
            b = None
        if (a is None) != (b is None) or (a is not None and abs(a - b) > 1e-9 * max(1.0, b)):
            bad += 1
    checks.append(
        Check("matching vs brute force (50 graphs)", bad == 0, 0, bad, None, f"{time.perf_counter() - t0:.2f}s")
    )
    return checks

