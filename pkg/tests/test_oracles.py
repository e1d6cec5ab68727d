import math
from fractions import Fraction as F

import pytest

from modkit.duality import fec_modulus_via_stars
from modkit.errors import DomainError
from modkit.families import (
    cover_indicator,
    edge_cover_family,
    enumerate_basic_fecs,
    enumerate_minimal_edge_covers,
    explicit_family,
    fractional_edge_cover_family,
)
from modkit.graph import make_standard, min_degree
from modkit.oracles import (
    barbell_bridge_usage,
    closed_form_modulus,
    ec_fec_ratio_complete,
    oracle_table,
    oracle_table_csv,
)
from modkit.probability import expected_edge_usage, optimal_expected_usage, pmf_from_result
from modkit.solver import basic_algorithm


def test_closed_form_examples():
    assert closed_form_modulus("complete", 5, "ec") == F(10, 9)
    assert closed_form_modulus("path", 8, "star") == F(16, 5)
    assert closed_form_modulus("wheel", 5, "star") == F(13, 16)
    assert closed_form_modulus("cycle", 6, "fec") == F(2, 3)
    assert closed_form_modulus("star", 6, "star") == 5


def test_closed_form_errors():
    with pytest.raises(DomainError):
        closed_form_modulus("path", 5, "ec")
    with pytest.raises(DomainError):
        closed_form_modulus("barbell", 5, "ec")
    with pytest.raises(DomainError):
        closed_form_modulus("cycle", 2, "star")
    with pytest.raises(DomainError):
        closed_form_modulus("cycle", 5, "spanning trees")


def test_bridge_usage_table_examples():
    assert barbell_bridge_usage(7, "fec") == F(8, 23)
    assert barbell_bridge_usage(8, "ec") == 0
    assert barbell_bridge_usage(7, "ec") == F(5, 41)
    with pytest.raises(DomainError):
        barbell_bridge_usage(3, "ec")
    with pytest.raises(DomainError):
        barbell_bridge_usage(6, "stars")


def test_complete_ratio():
    assert ec_fec_ratio_complete(6) == 1
    assert ec_fec_ratio_complete(5) == F(25, 36)
    vals = [ec_fec_ratio_complete(n) for n in range(3, 60)]
    assert all(F(9, 16) <= v <= 1 for v in vals)
    odd = [ec_fec_ratio_complete(n) for n in range(3, 60, 2)]
    assert odd == sorted(odd)


@pytest.mark.parametrize("n", range(3, 20))
def test_complete_ratio_consistent_with_moduli(n):
    ratio = closed_form_modulus("complete", n, "ec") / closed_form_modulus("complete", n, "fec")
    assert ratio == ec_fec_ratio_complete(n)


@pytest.mark.parametrize("entry", oracle_table(range(3, 16)), ids=lambda e: f"{e.kind}:{e.n}:{e.family}")
def test_oracle_values_within_generic_bounds(entry):
    g = make_standard(entry.kind, entry.n)
    v = entry.value
    assert v > 0 and entry.p == 2
    if entry.family == "star":
        d = min_degree(g)
        assert F(1, d * d) <= v <= F(g.n_edges, d * d)
    else:
        # every cover has total usage at least n/2 (at least ceil(n/2) if integral)
        half = F((g.n_vertices + 1) // 2) if entry.family == "ec" else F(g.n_vertices, 2)
        assert v <= g.n_edges / (half * half)
    if entry.kind != "star" and entry.family == "ec":
        ratio = v / closed_form_modulus(entry.kind, entry.n, "fec")
        assert F(9, 16) <= ratio <= 1


def test_star_graph_ec_equals_fec():
    for n in range(3, 12):
        assert closed_form_modulus("star", n, "ec") == closed_form_modulus("star", n, "fec") == F(1, n - 1)


def test_oracle_csv():
    lines = oracle_table_csv(range(3, 5)).splitlines()
    assert lines[0] == "kind,n,family,p,value,value_float"
    assert "complete,3,ec,2,3/4,0.75" in lines


# Bridge usage obtained by independent computations. Edge covers: the
# minimum-weight edge cover oracle and an explicit list of all minimal
# covers. Fractional covers: star duality, the LP oracle and an explicit
# list of basic fractional covers. The agreed values are
#   edge covers: 0 for even n, (2n+2)/(n^2-n+4) for odd n,
#   fractional edge covers: (n-2)/(n^2-n-1),
# which is the tabulated pair of formulas with the two expressions exchanged.


def _computed_ec(n):
    return 0 if n % 2 == 0 else F(2 * n + 2, n * n - n + 4)


def _computed_fec(n):
    return F(n - 2, n * n - n - 1)


def _bridge_routes(n):
    g = make_standard("barbell", n)
    b = g.n_edges - 1
    ec = [optimal_expected_usage(basic_algorithm(edge_cover_family(g)))[b]]
    fec = [
        fec_modulus_via_stars(g).expected_usage()[b],
        optimal_expected_usage(basic_algorithm(fractional_edge_cover_family(g)))[b],
    ]
    if g.n_edges <= 25:
        res = basic_algorithm(explicit_family(g, [cover_indicator(g, c) for c in enumerate_minimal_edge_covers(g)]))
        ec.append(expected_edge_usage(pmf_from_result(res), res.active_rows)[b])
    if n <= 5:
        res = basic_algorithm(explicit_family(g, enumerate_basic_fecs(g)))
        fec.append(expected_edge_usage(pmf_from_result(res), res.active_rows)[b])
    return ec, fec


@pytest.mark.parametrize("n", range(4, 8))
def test_bridge_usage_agrees_across_routes(n):
    ec, fec = _bridge_routes(n)
    for v in ec:
        assert math.isclose(v, float(_computed_ec(n)), abs_tol=1e-6)
    for v in fec:
        assert math.isclose(v, float(_computed_fec(n)), abs_tol=1e-6)


@pytest.mark.parametrize("n", range(4, 13))
def test_tabulated_bridge_formulas_are_exchanged(n):
    if n % 2:
        assert _computed_ec(n) == barbell_bridge_usage(n, "fec")
        assert _computed_fec(n) == barbell_bridge_usage(n, "ec")
    else:
        assert _computed_ec(n) == barbell_bridge_usage(n, "ec") == 0
        assert _computed_fec(n) != barbell_bridge_usage(n, "fec")
