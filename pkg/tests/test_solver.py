import json
import math

import numpy as np
import pytest
from brute import all_stars, random_corpus, regular_graphs, standard_corpus
from hypothesis import given, settings
from hypothesis import strategies as st

from modkit.duality import fec_modulus_via_stars
from modkit.errors import DomainError, SolverError
from modkit.families import (
    UsageRow,
    cover_indicator,
    edge_cover_family,
    enumerate_minimal_edge_covers,
    explicit_family,
    star_family,
)
from modkit.graph import make_standard, min_degree, random_graph
from modkit.solver import basic_algorithm, energy, rho_length, solve_subproblem

P_VALUES = (1.5, 2.0, 3.0)


def test_energy_examples():
    for n in (4, 7):
        assert energy(np.full(n, 0.5), 2, np.ones(n)) == n / 4
    assert energy(np.zeros(3), 2, np.ones(3)) == 0
    assert energy([1, 2], math.inf, [3, 1]) == 3
    assert energy([1, 2], 1, [3, 1]) == 5
    with pytest.raises(DomainError):
        energy([1, 2], 0.5, [1, 1])


def test_rho_length_examples():
    assert rho_length(np.ones(5), UsageRow([1, 1, 1, 0, 0], "v")) == 3
    n = 6
    assert math.isclose(rho_length(np.full(n - 1, 1 / (n - 1)), np.ones(n - 1)), 1.0)
    assert math.isclose(rho_length(np.full(5, 2 / 5), np.full(5, 0.5)), 1.0)
    with pytest.raises(DomainError):
        rho_length(np.ones(3), np.ones(4))


def test_subproblem_complete_stars():
    g = make_standard("complete", 6)
    rho, lam = solve_subproblem(list(star_family(g).rows), 2, np.ones(15))
    assert np.allclose(rho, 0.2, atol=1e-12)
    assert math.isclose(energy(rho, 2, np.ones(15)), 0.6, rel_tol=1e-12)
    assert np.all(lam >= 0)


def test_subproblem_single_and_separable():
    rho, lam = solve_subproblem([UsageRow([0, 1, 0], "e")], 2, np.array([1.0, 3.0, 1.0]))
    assert np.allclose(rho, [0, 1, 0], atol=1e-12)
    assert math.isclose(energy(rho, 2, [1, 3, 1]), 3.0, rel_tol=1e-12)
    rho, lam = solve_subproblem([[1, 0], [0, 1]], 2, np.ones(2))
    assert np.allclose(rho, 1, atol=1e-12)


def test_subproblem_errors():
    with pytest.raises(DomainError):
        solve_subproblem([], 2, np.ones(2))
    with pytest.raises(DomainError):
        solve_subproblem([[1, 0]], 1.0, np.ones(2))
    with pytest.raises(DomainError):
        solve_subproblem([[1, 0]], 2, np.array([1.0, -1.0]))


@pytest.mark.parametrize("p", P_VALUES)
def test_subproblem_kkt(p):
    rng = np.random.default_rng(int(p * 10))
    for _ in range(10):
        rows = (rng.random((6, 9)) < 0.4).astype(float)
        rows[rows.sum(axis=1) == 0, 0] = 1.0
        sigma = rng.uniform(0.5, 2, 9)
        rho, lam = solve_subproblem(list(rows), p, sigma, 1e-10)
        grad = p * sigma * rho ** (p - 1)
        slack = rows @ rho - 1
        assert np.all(rho >= 0) and np.all(lam >= 0)
        assert slack.min() >= -1e-9
        assert np.max(np.abs(lam * slack)) <= 1e-8
        support = rho > 1e-6
        assert np.allclose(grad[support], (rows.T @ lam)[support], atol=1e-7)
        assert np.all(rows.T @ lam <= grad + 1e-7)


def test_basic_algorithm_examples():
    assert math.isclose(basic_algorithm(star_family(make_standard("star", 6))).modulus, 5, rel_tol=1e-8)
    assert math.isclose(basic_algorithm(edge_cover_family(make_standard("cycle", 6))).modulus, 2 / 3, rel_tol=1e-8)
    assert math.isclose(basic_algorithm(edge_cover_family(make_standard("complete", 5))).modulus, 10 / 9, rel_tol=1e-8)


def test_basic_algorithm_rejects_bad_input():
    fam = star_family(make_standard("cycle", 4))
    with pytest.raises(DomainError):
        basic_algorithm(fam, p=1.0)
    with pytest.raises(DomainError):
        basic_algorithm(fam, p=math.inf)
    with pytest.raises(DomainError):
        basic_algorithm(fam, tol=0.0)


def test_duplicate_row_guard():
    g = make_standard("cycle", 4)
    real = star_family(g)

    def lying(rho):
        row, _ = real.shortest(rho)
        return row, 0.0

    fam = type(real)(g, lying, None, "liar")
    with pytest.raises(SolverError, match="stall"):
        basic_algorithm(fam)


def test_result_json_schema():
    g = make_standard("cycle", 5)
    res = basic_algorithm(edge_cover_family(g))
    d = json.loads(res.to_json())
    assert list(d) == ["modulus", "p", "rho", "active", "lambda", "iterations"]
    assert set(d["rho"]) == {g.edge_label(k) for k in range(5)}
    assert len(d["active"]) == len(d["lambda"]) == len(res.active_rows)


def _result_invariants(res, tol):
    p, sigma, rho = res.p, res.sigma, res.rho_star
    assert math.isclose(energy(rho, p, sigma), res.modulus, rel_tol=1e-12)
    N = np.vstack([r.usage for r in res.active_rows])
    lengths = N @ rho
    assert np.all(res.lam >= 0)
    assert np.all(np.abs(lengths[res.lam > 1e-8] - 1) <= 10 * tol)
    grad = p * sigma * rho ** (p - 1)
    pos = rho > tol
    assert np.allclose(grad[pos], (N.T @ res.lam)[pos], rtol=1e-6, atol=1e-7)
    assert math.isclose(res.lam.sum(), p * res.modulus, rel_tol=1e-6)


SMALL = [g for _, g in standard_corpus(8, 4) if g.n_vertices <= 8]


@pytest.mark.parametrize("g", SMALL, ids=lambda g: f"{g.n_vertices}v{g.n_edges}e")
@pytest.mark.parametrize("p", P_VALUES)
def test_admissible_at_exit(g, p):
    tol = 1e-8
    st_res = basic_algorithm(star_family(g), p, tol=tol)
    assert min(row @ st_res.rho_star for row in all_stars(g)) >= 1 - 10 * tol
    _result_invariants(st_res, tol)
    if g.n_edges <= 25:
        ec = basic_algorithm(edge_cover_family(g), p, tol=tol)
        lengths = [cover_indicator(g, c) @ ec.rho_star for c in enumerate_minimal_edge_covers(g)]
        assert min(lengths) >= 1 - 10 * tol
        _result_invariants(ec, tol)


@pytest.mark.parametrize("name,g,d", regular_graphs(), ids=lambda x: x if isinstance(x, str) else "")
@pytest.mark.parametrize("p", P_VALUES)
def test_regular_star_modulus(name, g, d, p):
    got = basic_algorithm(star_family(g), p).modulus
    assert math.isclose(got, g.n_edges / d**p, rel_tol=1e-6)


CORPUS = standard_corpus(8, 4) + random_corpus(8, seed=11, n_range=(3, 9))


@pytest.mark.parametrize("name,g", CORPUS, ids=[c[0] for c in CORPUS])
@pytest.mark.parametrize("p", P_VALUES)
def test_edge_cover_bounds(name, g, p):
    ec = basic_algorithm(edge_cover_family(g), p).modulus
    fec = fec_modulus_via_stars(g, p).primal_modulus
    assert ec <= fec * (1 + 1e-6)
    assert ec >= 0.75**p * fec * (1 - 1e-6)


@pytest.mark.parametrize("name,g", CORPUS, ids=[c[0] for c in CORPUS])
@pytest.mark.parametrize("p", P_VALUES)
def test_star_sandwich(name, g, p):
    m = basic_algorithm(star_family(g), p).modulus
    d = min_degree(g)
    assert g.sigma.min() / d**p * (1 - 1e-9) <= m <= g.sigma.sum() / d**p * (1 + 1e-9)


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=25, deadline=None)
@given(seeds, st.sampled_from(P_VALUES), st.floats(0.01, 100.0), st.sampled_from(["stars", "ec"]))
def test_sigma_scaling(seed, p, c, which):
    rng = np.random.default_rng(seed)
    g = random_graph(int(rng.integers(3, 9)), 0.6, rng, weighted=True)
    build = star_family if which == "stars" else edge_cover_family
    a = basic_algorithm(build(g), p, g.sigma, 1e-10)
    b = basic_algorithm(build(g), p, c * g.sigma, 1e-10)
    assert math.isclose(b.modulus, c * a.modulus, rel_tol=1e-7)
    assert np.allclose(a.rho_star, b.rho_star, atol=1e-6)


@settings(max_examples=15, deadline=None)
@given(seeds, st.sampled_from(P_VALUES))
def test_restart_determinism(seed, p):
    rng = np.random.default_rng(seed)
    g = random_graph(int(rng.integers(3, 10)), 0.5, rng, weighted=True)
    runs = [basic_algorithm(edge_cover_family(g), p) for _ in range(2)]
    assert runs[0].modulus == runs[1].modulus
    assert [r.label for r in runs[0].active_rows] == [r.label for r in runs[1].active_rows]
    assert np.array_equal(runs[0].rho_star, runs[1].rho_star)


@settings(max_examples=20, deadline=None)
@given(seeds, st.sampled_from(P_VALUES))
def test_family_inclusion_monotone(seed, p):
    rng = np.random.default_rng(seed)
    g = random_graph(int(rng.integers(3, 8)), 0.6, rng)
    covers = [cover_indicator(g, c) for c in enumerate_minimal_edge_covers(g)]
    if len(covers) < 2:
        return
    sub = covers[: len(covers) // 2]
    small = basic_algorithm(explicit_family(g, sub), p).modulus
    big = basic_algorithm(explicit_family(g, covers), p).modulus
    assert small <= big * (1 + 1e-7)
    assert math.isclose(big, basic_algorithm(edge_cover_family(g), p).modulus, rel_tol=1e-6)
