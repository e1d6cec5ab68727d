"""
Optimal probability mass functions
==================================

Normalized multipliers of the active constraints form an optimal pmf on
the family. For p = 2 and unit weights the expected overlap of two
independent draws equals 1/Mod, and the expected usage of each edge is
rho*(e)/Mod.
"""

import numpy as np

from modkit.families import edge_cover_family, star_family
from modkit.graph import make_standard
from modkit.probability import (
    expected_edge_usage,
    expected_overlap,
    pmf_from_result,
    uniform_star_lower_bound,
)
from modkit.solver import basic_algorithm

g = make_standard("wheel", 7)
res = basic_algorithm(edge_cover_family(g))
pmf = pmf_from_result(res)

print(f"Mod_2 of edge covers on W_7: {res.modulus:.6f}")
print("support of the pmf:")
for row, mass in zip(pmf.rows, pmf.mass):
    if mass > 1e-9:
        edges = ", ".join(g.edge_label(k) for k in row.label)
        print(f"  {mass:.4f}  {{{edges}}}")

print("expected overlap:", round(expected_overlap(pmf, res.active_rows), 6), " 1/Mod:", round(1 / res.modulus, 6))
usage = expected_edge_usage(pmf, res.active_rows)
print("max |usage - rho*/Mod|:", float(np.max(np.abs(usage - res.rho_star / res.modulus))))

# the uniform pmf on stars gives a lower bound; it is tight on regular graphs
for kind, n in (("cycle", 8), ("complete", 6), ("wheel", 7)):
    h = make_standard(kind, n)
    m = basic_algorithm(star_family(h)).modulus
    print(f"{kind}:{n} star modulus {m:.6f} >= uniform bound {uniform_star_lower_bound(h):.6f}")
