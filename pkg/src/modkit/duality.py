"""Conjugate-exponent duality between families.

For a family and its blocker, with ``q = p/(p-1)`` and dual weights
``sigma_hat = sigma**(-q/p)``, the moduli satisfy

    Mod_{p,sigma}(family)**(1/p) * Mod_{q,sigma_hat}(blocker)**(1/q) = 1.

Stars and fractional edge covers form such a pair, which is how the
fractional edge cover modulus is computed here: solve the star problem at
the conjugate exponent and invert.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ModkitError
from .families import FamilyOracle, star_family
from .graph import Graph
from .solver import DEFAULT_TOL, ModulusResult, basic_algorithm

__all__ = [
    "conjugate_exponent",
    "dual_weights",
    "DualResult",
    "fec_modulus_via_stars",
    "ReciprocalReport",
    "verify_reciprocal",
    "extreme_exponent_product",
]


def conjugate_exponent(p: float) -> float:
    p = float(p)
    if not (1.0 < p < math.inf):
        raise DomainError(f"exponent p must lie in (1, inf), got {p}")
    return p / (p - 1.0)


def dual_weights(sigma, p: float) -> np.ndarray:
    """``sigma**(-q/p)`` with ``q`` the conjugate exponent of ``p``."""
    q = conjugate_exponent(p)
    sigma = np.asarray(sigma, dtype=float)
    if not np.all(sigma > 0):
        raise DomainError("sigma must be positive")
    return sigma ** (-q / p)


@dataclass(frozen=True)
class DualResult:
    """Fractional edge cover modulus obtained from the conjugate star problem.

    ``primal_modulus`` is the fractional edge cover modulus at ``(p, sigma)``;
    ``dual_modulus`` the star modulus at ``(q, sigma_hat)``. ``eta_star`` is
    the extremal fractional-edge-cover density recovered from the star
    optimum.
    """

    primal_modulus: float
    dual_modulus: float
    p: float
    q: float
    sigma: np.ndarray
    sigma_hat: np.ndarray
    eta_star: np.ndarray
    star_result: ModulusResult = field(repr=False)

    @property
    def product(self) -> float:
        return self.primal_modulus ** (1 / self.p) * self.dual_modulus ** (1 / self.q)

    @property
    def product_deviation(self) -> float:
        return abs(self.product - 1.0)

    def expected_usage(self) -> np.ndarray:
        """Optimal expected edge usage for fractional edge covers, ``sigma eta**(p-1) / Mod``."""
        return self.sigma * self.eta_star ** (self.p - 1) / self.primal_modulus

    def to_dict(self) -> dict:
        star = self.star_result.to_dict()
        g = self.star_result.graph
        names = [g.edge_label(k) for k in range(len(self.eta_star))]
        eta = {name: float(v) for name, v in zip(names, self.eta_star)}
        return {
            "modulus": float(self.primal_modulus),
            "p": float(self.p),
            "rho": eta,
            "active": star["active"],
            "lambda": star["lambda"],
            "iterations": star["iterations"],
            "q": float(self.q),
            "dual_modulus": float(self.dual_modulus),
            "sigma_hat": {name: float(v) for name, v in zip(names, self.sigma_hat)},
            "eta_star": eta,
            "product_deviation": float(self.product_deviation),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def fec_modulus_via_stars(g: Graph, p: float = 2.0, sigma=None, tol: float = DEFAULT_TOL) -> DualResult:
    """Fractional edge cover modulus through the star problem at the conjugate exponent.

    Examples
    --------
    >>> from modkit.graph import make_standard
    >>> round(fec_modulus_via_stars(make_standard("complete", 5)).primal_modulus, 6)
    1.6
    """
    q = conjugate_exponent(p)
    sigma = np.asarray(g.sigma if sigma is None else sigma, dtype=float)
    tau = dual_weights(sigma, p)
    star = basic_algorithm(star_family(g), q, tau, tol)
    mod_fec = star.modulus ** (-p / q)
    eta = tau * star.rho_star ** (q - 1) / star.modulus
    for arr in (eta, tau):
        arr.setflags(write=False)
    return DualResult(
        primal_modulus=mod_fec,
        dual_modulus=star.modulus,
        p=float(p),
        q=q,
        sigma=sigma.copy(),
        sigma_hat=tau,
        eta_star=eta,
        star_result=star,
    )


@dataclass(frozen=True)
class ReciprocalReport:
    p: float
    q: float
    primal_modulus: float | None
    dual_modulus: float | None
    product: float | None
    deviation: float | None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def passes(self, tol: float) -> bool:
        return self.ok and self.deviation is not None and self.deviation <= tol


def verify_reciprocal(
    g: Graph,
    family: FamilyOracle,
    dual_family: FamilyOracle,
    p: float = 2.0,
    sigma=None,
    tol: float = DEFAULT_TOL,
) -> ReciprocalReport:
    """Solve a family at ``(p, sigma)`` and its dual at ``(q, sigma_hat)``.

    Never raises for solver trouble: failures are recorded in ``error``.
    """
    try:
        q = conjugate_exponent(p)
        sigma = np.asarray(g.sigma if sigma is None else sigma, dtype=float)
        primal = basic_algorithm(family, p, sigma, tol).modulus
        dual = basic_algorithm(dual_family, q, dual_weights(sigma, p), tol).modulus
    except (ModkitError, ValueError) as exc:
        return ReciprocalReport(float(p), math.nan, None, None, None, None, f"{type(exc).__name__}: {exc}")
    product = primal ** (1 / p) * dual ** (1 / q)
    return ReciprocalReport(float(p), q, primal, dual, product, abs(product - 1.0))


def extreme_exponent_product(mod_1: float, mod_inf_dual: float) -> float:
    """Product ``Mod_{1,sigma} * Mod_{inf,1/sigma}`` of a family and its blocker.

    The endpoint form of the reciprocal identity states this equals 1. No
    solver exists for these exponents here; the helper only evaluates the
    product of values obtained elsewhere.
    """
    return float(mod_1) * float(mod_inf_dual)
