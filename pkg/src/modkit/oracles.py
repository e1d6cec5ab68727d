"""Exact closed-form moduli for standard graphs (p = 2, unit weights).

Values are exact rationals and serve as ground truth for solver checks.
Graph sizes follow :func:`modkit.graph.make_standard`: ``n`` counts all
vertices (for the star graph that is the center plus ``n - 1`` leaves, for
the wheel the hub plus an ``n - 1`` rim), except the barbell where ``n`` is
the size of each clique.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction as F

from .errors import DomainError
from .graph import STANDARD_KINDS

__all__ = [
    "OracleEntry",
    "closed_form_modulus",
    "barbell_bridge_usage",
    "ec_fec_ratio_complete",
    "oracle_table",
    "oracle_table_csv",
    "ORACLE_FAMILIES",
]

ORACLE_FAMILIES = ("star", "ec", "fec")


@dataclass(frozen=True)
class OracleEntry:
    kind: str
    n: int
    family: str
    value: F
    p: int = 2


def _min_size(kind: str, n: int) -> None:
    if kind not in STANDARD_KINDS:
        raise DomainError(f"unknown graph kind {kind!r}")
    lo = max(3, STANDARD_KINDS[kind])
    if n < lo:
        raise DomainError(f"{kind} graphs with a closed form need n >= {lo}")


def _path_star(n: int) -> F:
    if n in (3, 4):
        return F(2)
    if n % 2:
        return F(n + 5, 4)
    return F(n * n + 2 * n - 16, 2 * (2 * n - 6))


def _wheel_star(n: int) -> F:
    if n <= 5:
        return F(4 + (n - 2) ** 2, 4 * (n - 1))
    return F(n - 1, 5)


def closed_form_modulus(kind: str, n: int, family: str) -> F:
    """Exact ``Mod_2`` with unit weights.

    Parameters
    ----------
    kind : str
        ``star``, ``cycle``, ``complete``, ``path`` or ``wheel``.
    n : int
        Number of vertices.
    family : str
        ``star`` (vertex stars), ``ec`` (edge covers) or ``fec``
        (fractional edge covers). Paths and wheels only have the star family.

    Examples
    --------
    >>> closed_form_modulus("complete", 5, "ec")
    Fraction(10, 9)
    >>> closed_form_modulus("wheel", 5, "star")
    Fraction(13, 16)
    """
    if family not in ORACLE_FAMILIES:
        raise DomainError(f"unknown family {family!r}")
    _min_size(kind, n)
    odd = n % 2 == 1
    if kind == "star":
        return F(n - 1) if family == "star" else F(1, n - 1)
    if kind == "cycle":
        if family == "star":
            return F(n, 4)
        if family == "ec" and odd:
            return F(4 * n, (n + 1) ** 2)
        return F(4, n)
    if kind == "complete":
        if family == "star":
            return F(n, 2 * (n - 1))
        if family == "ec" and odd:
            return F(2 * n * (n - 1), (n + 1) ** 2)
        return F(2 * (n - 1), n)
    if family != "star":
        raise DomainError(f"no closed form for {family} on {kind} graphs")
    if kind == "path":
        return _path_star(n)
    if kind == "wheel":
        return _wheel_star(n)
    raise DomainError(f"no closed form for {kind} graphs")


def barbell_bridge_usage(n: int, family: str) -> F:
    """Tabulated expected usage of the bridge in the two-clique barbell.

    Defined for ``n >= 4``; the three-vertex cliques behave differently and
    are not covered.

    Notes
    -----
    The solver does not reproduce this table. Every route available here
    (edge cover oracle, explicit minimal covers, star duality, the LP cover
    oracle, explicit basic fractional covers) agrees on

    * edge covers: 0 for even ``n``, ``(2n+2)/(n^2-n+4)`` for odd ``n``;
    * fractional edge covers: ``(n-2)/(n^2-n-1)`` for every ``n``,

    i.e. the two rational expressions below with their roles exchanged.
    The table is kept unchanged so the discrepancy stays visible.
    """
    if family not in ("ec", "fec"):
        raise DomainError(f"bridge usage is tabulated for ec and fec, not {family!r}")
    if n == 3:
        raise DomainError("n = 3 is a special case without a closed form")
    if n < 3:
        raise DomainError("barbell cliques need n >= 4")
    if family == "fec":
        return F(2 * n + 2, n * n - n + 4)
    if n % 2 == 0:
        return F(0)
    return F(n - 2, n * n - n - 1)


def ec_fec_ratio_complete(n: int) -> F:
    """``Mod_2(ec) / Mod_2(fec)`` on the complete graph ``K_n``."""
    if n < 3:
        raise DomainError("need n >= 3")
    if n % 2 == 0:
        return F(1)
    return F(n * n, (n + 1) ** 2)


def oracle_table(n_values=range(3, 11)) -> list[OracleEntry]:
    """Every supported (kind, n, family) combination for the given sizes."""
    out = []
    combos = [(k, f) for k in ("star", "cycle", "complete") for f in ORACLE_FAMILIES]
    combos += [("path", "star"), ("wheel", "star")]
    for kind, fam in combos:
        for n in n_values:
            try:
                out.append(OracleEntry(kind, n, fam, closed_form_modulus(kind, n, fam)))
            except DomainError:
                continue
    return out


def oracle_table_csv(n_values=range(3, 11)) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "n", "family", "p", "value", "value_float"])
    for e in oracle_table(n_values):
        w.writerow([e.kind, e.n, e.family, e.p, str(e.value), repr(float(e.value))])
    return buf.getvalue()
