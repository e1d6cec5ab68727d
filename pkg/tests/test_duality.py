import math

import numpy as np
import pytest
from brute import bipartite_corpus, random_corpus, standard_corpus
from hypothesis import given, settings
from hypothesis import strategies as st

from modkit.duality import (
    conjugate_exponent,
    dual_weights,
    extreme_exponent_product,
    fec_modulus_via_stars,
    verify_reciprocal,
)
from modkit.errors import DomainError
from modkit.families import (
    edge_cover_family,
    enumerate_basic_fecs,
    explicit_family,
    fractional_edge_cover_family,
    star_family,
)
from modkit.graph import make_standard
from modkit.solver import basic_algorithm

P_VALUES = (1.5, 2.0, 3.0)


def test_dual_weight_examples():
    assert np.array_equal(dual_weights(np.ones(4), 2.5), np.ones(4))
    assert np.allclose(dual_weights([2.0, 4.0], 2), [0.5, 0.25])
    assert math.isclose(dual_weights([8.0], 3)[0], 8**-0.5, rel_tol=1e-15)
    for bad in (1.0, 0.5, math.inf):
        with pytest.raises(DomainError):
            dual_weights([1.0], bad)
    with pytest.raises(DomainError):
        dual_weights([1.0, 0.0], 2)


@settings(max_examples=50, deadline=None)
@given(
    st.floats(1.05, 20.0),
    st.lists(st.floats(0.01, 100.0), min_size=1, max_size=8),
)
def test_dual_weights_involution(p, sigma):
    q = conjugate_exponent(p)
    assert math.isclose(conjugate_exponent(q), p, rel_tol=1e-12)
    back = dual_weights(dual_weights(sigma, p), q)
    assert np.allclose(back, sigma, rtol=1e-12)


def test_fec_examples():
    k5 = fec_modulus_via_stars(make_standard("complete", 5))
    assert math.isclose(k5.primal_modulus, 1.6, rel_tol=1e-8)
    assert math.isclose(fec_modulus_via_stars(make_standard("cycle", 7)).primal_modulus, 4 / 7, rel_tol=1e-8)
    for n in (4, 5, 6, 7):
        res = fec_modulus_via_stars(make_standard("complete", n))
        assert np.allclose(res.eta_star, 2 / n, atol=1e-9)
        assert res.product_deviation <= 1e-12


def test_reciprocal_examples():
    c6 = make_standard("cycle", 6)
    rep = verify_reciprocal(c6, star_family(c6), fractional_edge_cover_family(c6), 2)
    assert rep.passes(1e-6)
    k6 = make_standard("complete", 6)
    rep = verify_reciprocal(k6, star_family(k6), fractional_edge_cover_family(k6), 2)
    assert math.isclose(rep.primal_modulus, 0.6, rel_tol=1e-8)
    assert math.isclose(rep.dual_modulus, 5 / 3, rel_tol=1e-8)
    rng = np.random.default_rng(5)
    from modkit.graph import random_graph

    g = random_graph(8, 0.5, rng, weighted=True)
    rep = verify_reciprocal(g, star_family(g), fractional_edge_cover_family(g), 2.5)
    assert rep.passes(1e-5)


def test_reciprocal_report_carries_errors():
    g = make_standard("cycle", 4)
    rep = verify_reciprocal(g, star_family(g), star_family(g), 1.0)
    assert not rep.ok and not rep.passes(1.0)
    assert "DomainError" in rep.error


def test_extreme_exponent_product():
    assert extreme_exponent_product(0.5, 2.0) == 1.0


SMALL = [(n, g) for n, g in standard_corpus(8, 4) if g.n_vertices <= 8] + random_corpus(6, seed=3, n_range=(3, 8))


@pytest.mark.parametrize("name,g", SMALL, ids=[c[0] for c in SMALL])
@pytest.mark.parametrize("p", P_VALUES)
def test_enumerated_basic_covers_match_duality(name, g, p):
    bfecs = enumerate_basic_fecs(g)
    direct = basic_algorithm(explicit_family(g, bfecs), p, g.sigma).modulus
    res = fec_modulus_via_stars(g, p, g.sigma)
    assert math.isclose(direct, res.primal_modulus, rel_tol=1e-6)
    lengths = np.array([b.usage @ res.eta_star for b in bfecs])
    assert lengths.min() >= 1 - 1e-7
    sigma = g.sigma
    assert math.isclose(float(sigma @ res.eta_star**p), res.primal_modulus, rel_tol=1e-6)


@pytest.mark.parametrize("name,g", SMALL, ids=[c[0] for c in SMALL])
def test_lp_route_matches_duality(name, g):
    for p in P_VALUES:
        lp = basic_algorithm(fractional_edge_cover_family(g), p, g.sigma).modulus
        assert math.isclose(lp, fec_modulus_via_stars(g, p, g.sigma).primal_modulus, rel_tol=1e-6)


BIP = bipartite_corpus(8, seed=21, weighted=True)


@pytest.mark.parametrize("name,g", BIP, ids=[c[0] for c in BIP])
@pytest.mark.parametrize("p", P_VALUES)
def test_bipartite_cover_moduli_agree(name, g, p):
    ec = basic_algorithm(edge_cover_family(g), p, g.sigma).modulus
    fec = fec_modulus_via_stars(g, p, g.sigma).primal_modulus
    assert math.isclose(ec, fec, rel_tol=1e-6)


def test_dual_result_json():
    res = fec_modulus_via_stars(make_standard("wheel", 6), 3.0)
    d = res.to_dict()
    assert d["q"] == 1.5
    assert set(d) >= {"modulus", "p", "rho", "active", "lambda", "iterations", "dual_modulus", "eta_star"}
    assert np.all(res.expected_usage() >= 0)
