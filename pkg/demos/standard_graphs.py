"""
Moduli of standard graphs
=========================

Solve the star, edge cover and fractional edge cover problems on a few
small graphs and set the numbers next to their exact closed forms.
"""

from modkit.duality import fec_modulus_via_stars
from modkit.families import edge_cover_family, star_family
from modkit.graph import make_standard
from modkit.oracles import closed_form_modulus
from modkit.solver import basic_algorithm

# the active-set solver only needs a shortest-object oracle per family
solvers = {
    "star": lambda g: basic_algorithm(star_family(g)).modulus,
    "ec": lambda g: basic_algorithm(edge_cover_family(g)).modulus,
    # fractional covers go through stars at the conjugate exponent
    "fec": lambda g: fec_modulus_via_stars(g).primal_modulus,
}

print(f"{'graph':<12}{'family':<8}{'computed':>12}{'exact':>10}")
for kind in ("cycle", "complete"):
    for n in (5, 6):
        g = make_standard(kind, n)
        for family, solve in solvers.items():
            exact = closed_form_modulus(kind, n, family)
            print(f"{kind + ':' + str(n):<12}{family:<8}{solve(g):12.6f}{str(exact):>10}")

# paths and wheels only have a star formula
for kind, n in (("path", 7), ("path", 8), ("wheel", 5), ("wheel", 9)):
    g = make_standard(kind, n)
    exact = closed_form_modulus(kind, n, "star")
    print(f"{kind + ':' + str(n):<12}{'star':<8}{solvers['star'](g):12.6f}{str(exact):>10}")
