"""
Minimum-weight edge covers through perfect matching
===================================================

The edge cover oracle doubles the graph, joins each vertex to its copy by
an edge of twice its cheapest incident weight, and solves a minimum-weight
perfect matching. The result is compared with a brute-force search.
"""

import itertools
import math

import numpy as np

from modkit.graph import random_graph
from modkit.matching import is_edge_cover, min_weight_edge_cover, min_weight_perfect_matching

rng = np.random.default_rng(11)
g = random_graph(7, 0.5, rng)
w = rng.uniform(0, 5, g.n_edges).round(2)

cover = min_weight_edge_cover(g, w)
print("cover:", sorted(g.edge_label(k) for k in cover), "weight", round(math.fsum(w[k] for k in cover), 2))

# exhaustive check over all edge subsets
best = min(
    math.fsum(w[k] for k in sub)
    for r in range(1, g.n_edges + 1)
    for sub in itertools.combinations(range(g.n_edges), r)
    if is_edge_cover(g, sub)
)
print("brute force minimum:", round(best, 2))

# the matching routine itself, on an even-order graph
h = random_graph(8, 0.6, rng)
m = min_weight_perfect_matching(h, np.ones(h.n_edges))
print("perfect matching of", h.n_vertices, "vertices:", [h.edge_label(k) for k in m.sorted_edges()])
