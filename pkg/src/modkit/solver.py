"""p-energy, rho-lengths and the active-set modulus solver.

The modulus of a family is the optimal value of

    minimize    sum_e sigma(e) rho(e)^p
    subject to  N rho >= 1,  rho >= 0.

``basic_algorithm`` keeps a growing set of active rows: it solves the
program restricted to those rows, asks the family for a rho-shortest member
and adds it when it is too short. Restricted programs are solved by a
primal-dual interior-point method (Mehrotra predictor-corrector) that
returns the constraint multipliers alongside rho.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, lu_factor, lu_solve

from .errors import DomainError, SolverError
from .families import FamilyOracle, UsageRow
from .graph import Graph

__all__ = [
    "energy",
    "rho_length",
    "solve_subproblem",
    "basic_algorithm",
    "ModulusResult",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-8
MAX_OUTER_ITERATIONS = 10_000
MAX_IPM_ITERATIONS = 200


def _check_p_open(p: float) -> float:
    p = float(p)
    if not (1.0 < p < math.inf):
        raise DomainError(f"exponent p must lie in (1, inf), got {p}")
    return p


def _check_sigma(sigma, m: int) -> np.ndarray:
    sigma = np.asarray(sigma, dtype=float).reshape(-1)
    if sigma.shape != (m,):
        raise DomainError(f"sigma has {sigma.shape[0]} entries, expected {m}")
    if not np.all(sigma > 0) or not np.all(np.isfinite(sigma)):
        raise DomainError("sigma must be positive and finite")
    return sigma


def energy(rho, p: float, sigma) -> float:
    """p-energy ``sum sigma rho^p``; for ``p = inf`` the max of ``sigma rho``."""
    p = float(p)
    if not p >= 1:
        raise DomainError(f"exponent p must be at least 1, got {p}")
    rho = np.asarray(rho, dtype=float).reshape(-1)
    sigma = _check_sigma(sigma, rho.shape[0])
    if np.any(rho < 0):
        raise DomainError("density must be nonnegative")
    if rho.size == 0:
        return 0.0
    if math.isinf(p):
        return float(np.max(sigma * rho))
    return math.fsum(sigma * rho**p)


def rho_length(rho, row) -> float:
    """Inner product of a usage row with a density."""
    usage = row.usage if isinstance(row, UsageRow) else np.asarray(row, dtype=float)
    rho = np.asarray(rho, dtype=float).reshape(-1)
    if usage.shape != rho.shape:
        raise DomainError(f"row has {usage.shape[0]} entries, density has {rho.shape[0]}")
    return math.fsum(usage * rho)


def _max_step(x: np.ndarray, dx: np.ndarray) -> float:
    neg = dx < 0
    if not np.any(neg):
        return 1.0
    return float(min(1.0, np.min(-x[neg] / dx[neg])))


def _ipm(N: np.ndarray, p: float, sigma: np.ndarray, tol: float):
    """Primal-dual interior point on ``min sum sigma rho^p, N rho >= 1, rho >= 0``.

    All columns of ``N`` are assumed used by some row. Returns ``(rho, lam)``.
    """
    k, m = N.shape
    ones_k = np.ones(k)
    rho = np.full(m, 2.0 / N.sum(axis=1).min())
    s = N @ rho - 1.0
    lam = np.ones(k)
    nu = np.ones(m)

    def residuals(rho, s, lam, nu):
        grad = p * sigma * rho ** (p - 1)
        r_d = grad - N.T @ lam - nu
        r_p = N @ rho - s - 1.0
        return grad, r_d, r_p

    for _ in range(MAX_IPM_ITERATIONS):
        grad, r_d, r_p = residuals(rho, s, lam, nu)
        gap = lam @ s + nu @ rho
        mu = gap / (k + m)
        obj = float(sigma @ rho**p)
        scale = 1.0 + np.max(np.abs(grad))
        if (
            np.max(np.abs(r_d)) <= tol * scale
            and np.max(np.abs(r_p)) <= tol
            and gap <= tol * (1.0 + obj)
        ):
            cand = _polish(N, p, sigma, rho, lam, nu, s)
            if cand is not None and _kkt_residual(N, p, sigma, *cand) <= _kkt_residual(N, p, sigma, rho, lam):
                return cand
            return rho, lam

        # Augmented Newton system in (d_rho, d_lam). Keeping s/lam rather
        # than lam/s on the constraint block avoids the 1/s blow-up of the
        # normal equations as active rows become tight.
        dvec = p * (p - 1) * sigma * rho ** (p - 2) + nu / rho
        K = np.zeros((m + k, m + k))
        K[:m, :m][np.diag_indices(m)] = dvec
        K[:m, m:] = -N.T
        K[m:, :m] = -N
        K[m:, m:][np.diag_indices(k)] = -s / lam
        try:
            lu = lu_factor(K, check_finite=False)
        except (LinAlgError, ValueError) as exc:
            raise SolverError(f"singular Newton system: {exc}") from exc

        def direction(r_lam, r_nu):
            # r_lam, r_nu are the targets for the lam*s and nu*rho updates
            rhs = np.concatenate([-r_d + r_nu / rho, r_p - r_lam / lam])
            sol = lu_solve(lu, rhs, check_finite=False)
            sol += lu_solve(lu, rhs - K @ sol, check_finite=False)
            d_rho, d_lam = sol[:m], sol[m:]
            d_s = N @ d_rho + r_p
            d_nu = (r_nu - nu * d_rho) / rho
            return d_rho, d_s, d_lam, d_nu

        # predictor
        a_rho, a_s, a_lam, a_nu = direction(-lam * s, -nu * rho)
        a_p = min(_max_step(rho, a_rho), _max_step(s, a_s))
        a_d = min(_max_step(lam, a_lam), _max_step(nu, a_nu))
        mu_aff = ((s + a_p * a_s) @ (lam + a_d * a_lam) + (rho + a_p * a_rho) @ (nu + a_d * a_nu)) / (k + m)
        centering = (mu_aff / mu) ** 3 if mu > 0 else 0.0

        # corrector
        d_rho, d_s, d_lam, d_nu = direction(
            -lam * s - a_lam * a_s + centering * mu * ones_k,
            -nu * rho - a_nu * a_rho + centering * mu,
        )
        step_p = min(1.0, 0.99 * min(_max_step(rho, d_rho), _max_step(s, d_s)) / 1.0)
        step_d = min(1.0, 0.99 * min(_max_step(lam, d_lam), _max_step(nu, d_nu)))
        # the objective is nonlinear, so primal and dual steps stay coupled
        step = min(step_p, step_d)
        rho = rho + step * d_rho
        s = s + step * d_s
        lam = lam + step * d_lam
        nu = nu + step * d_nu
        if not (np.all(rho > 0) and np.all(s > 0) and np.all(lam > 0) and np.all(nu > 0)):
            raise SolverError("interior point iterate left the positive orthant")
    raise SolverError(f"interior point did not converge in {MAX_IPM_ITERATIONS} iterations")


def _ipm_dual(N: np.ndarray, p: float, sigma: np.ndarray, tol: float):
    """Interior point on the dual of the restricted program, for ``1 < p < 2``.

    Minimising ``sigma rho^p - c rho`` edge by edge gives
    ``rho(c) = (c / (p sigma))**(1/(p-1))`` with ``c = N^T lam``, and the
    dual ``max_{lam >= 0} 1^T lam - sum (p-1) sigma rho(c)^p``. Its gradient
    is ``1 - N rho(c)``. For p < 2 the map ``c -> rho(c)`` is C^1 at zero,
    whereas the primal curvature ``rho^(p-2)`` blows up there, so this side
    converges cleanly. Returns ``(rho, lam, z)`` with ``z`` the row slacks.
    """
    k = N.shape[0]
    a = 1.0 / (p - 1.0)

    def rho_of(lam):
        c = np.maximum(N.T @ lam, 0.0)
        base = c / (p * sigma)
        return base**a, a * base ** (a - 1.0) / (p * sigma)

    lam = np.ones(k)
    z = np.ones(k)
    for _ in range(MAX_IPM_ITERATIONS):
        rho, drho = rho_of(lam)
        F = N @ rho - 1.0 - z
        gap = lam @ z
        mu = gap / k
        obj = float(sigma @ rho**p)
        if np.max(np.abs(F)) <= tol and gap <= tol * (1.0 + obj):
            return rho, lam, z
        H = N @ (drho[:, None] * N.T)
        M = H.copy()
        M[np.diag_indices(k)] += z / lam
        try:
            lu = lu_factor(M, check_finite=False)
        except (LinAlgError, ValueError) as exc:
            raise SolverError(f"singular Newton system: {exc}") from exc

        def direction(r_c):
            rhs = -F + r_c / lam
            d_lam = lu_solve(lu, rhs, check_finite=False)
            d_lam += lu_solve(lu, rhs - M @ d_lam, check_finite=False)
            d_z = (r_c - z * d_lam) / lam
            return d_lam, d_z

        a_lam, a_z = direction(-lam * z)
        a_step = min(_max_step(lam, a_lam), _max_step(z, a_z))
        mu_aff = (lam + a_step * a_lam) @ (z + a_step * a_z) / k
        centering = (mu_aff / mu) ** 3 if mu > 0 else 0.0
        d_lam, d_z = direction(-lam * z - a_lam * a_z + centering * mu)
        step = min(1.0, 0.99 * min(_max_step(lam, d_lam), _max_step(z, d_z)))
        lam = lam + step * d_lam
        z = z + step * d_z
        if not (np.all(lam > 0) and np.all(z > 0)):
            raise SolverError("interior point iterate left the positive orthant")
    raise SolverError(f"interior point did not converge in {MAX_IPM_ITERATIONS} iterations")


def _kkt_residual(N, p, sigma, rho, lam) -> float:
    """Largest violation of the KKT conditions, with nu eliminated."""
    nu = p * sigma * rho ** (p - 1) - N.T @ lam
    slack = N @ rho - 1.0
    scale = 1.0 + np.max(np.abs(p * sigma * rho ** (p - 1)))
    return float(
        max(
            np.max(-np.minimum(rho, 0)),
            np.max(-np.minimum(lam, 0)),
            np.max(-np.minimum(slack, 0)),
            np.max(-np.minimum(nu, 0)) / scale,
            np.max(np.abs(rho * nu)) / scale,
            np.max(np.abs(lam * slack)),
        )
    )


def _newton_equalities(NA, p, sg, x, y):
    nj, na = len(x), len(y)
    for _ in range(30):
        f1 = p * sg * np.maximum(x, 0) ** (p - 1) - NA.T @ y
        f2 = NA @ x - 1.0
        if max(np.max(np.abs(f1)), np.max(np.abs(f2))) < 1e-15:
            break
        hx = np.maximum(x, 1e-300)
        K = np.zeros((nj + na, nj + na))
        K[:nj, :nj][np.diag_indices(nj)] = p * (p - 1) * sg * hx ** (p - 2)
        K[:nj, nj:] = -NA.T
        K[nj:, :nj] = NA
        step = np.linalg.lstsq(K, -np.concatenate([f1, f2]), rcond=None)[0]
        x = x + step[:nj]
        y = y + step[nj:]
        if p == 2.0:
            break
    return x, y


def _polish(N, p, sigma, rho, lam, nu, s, rounds: int = 10):
    """Newton on the equality KKT system for the support the IPM settled on.

    Edges with ``rho >= nu`` start in the support and rows with ``lam >= s``
    start tight; everything else is fixed at zero. Interior points only
    reach degenerate vertices (density and multiplier both vanishing) at a
    square-root rate, which this step removes. When the guess is slightly
    off, negative coordinates are dropped and violated rows or edges are
    added, for a few rounds. Returns ``None`` if no consistent KKT point
    is found.
    """
    J = rho >= nu
    A = lam >= s
    for _ in range(rounds):
        if not np.any(J) or not np.any(A):
            return None
        x, y = _newton_equalities(N[np.ix_(A, J)], p, sigma[J], rho[J].copy(), lam[A].copy())
        out_rho = np.zeros_like(rho)
        out_rho[J] = np.maximum(x, 0)
        out_lam = np.zeros_like(lam)
        out_lam[A] = np.maximum(y, 0)
        drop_j = np.flatnonzero(J)[x < -1e-12]
        drop_a = np.flatnonzero(A)[y < -1e-12]
        add_a = ~A & (N @ out_rho < 1.0 - 1e-12)
        add_j = ~J & (N.T @ out_lam > 1e-12)
        if not (len(drop_j) or len(drop_a) or add_a.any() or add_j.any()):
            return out_rho, out_lam
        J[drop_j] = False
        A[drop_a] = False
        A |= add_a
        J |= add_j
        rho = np.where(J, np.maximum(rho, 1e-12), rho)
    return None


def solve_subproblem(active, p: float, sigma, tol: float = DEFAULT_TOL / 10):
    """Minimise the p-energy subject only to the given rows.

    Parameters
    ----------
    active : sequence of UsageRow or array-like
        Constraint rows, each with a positive entry.
    p : float
        Exponent in (1, inf).
    sigma : array-like
        Positive edge weights.
    tol : float
        KKT tolerance (stationarity relative to the gradient scale,
        primal feasibility, and duality gap).

    Returns
    -------
    rho : ndarray
        Minimiser; zero on edges no active row uses.
    lam : ndarray
        Nonnegative multiplier per active row.
    """
    p = _check_p_open(p)
    if len(active) == 0:
        raise DomainError("active set is empty")
    N = np.vstack([r.usage if isinstance(r, UsageRow) else np.asarray(r, dtype=float) for r in active])
    sigma = _check_sigma(sigma, N.shape[1])
    if np.any(N < 0) or np.any(N.sum(axis=1) <= 0):
        raise DomainError("active rows must be nonnegative and nontrivial")
    used = np.any(N > 0, axis=0)
    if p < 2:
        Nu, su = N[:, used], sigma[used]
        rho_u, lam, z = _ipm_dual(Nu, p, su, tol)
        nu = np.maximum(p * su * rho_u ** (p - 1) - Nu.T @ lam, 0.0)
        cand = _polish(Nu, p, su, rho_u, lam, nu, z)
        if cand is not None and _kkt_residual(Nu, p, su, *cand) <= _kkt_residual(Nu, p, su, rho_u, lam):
            rho_u, lam = cand
    else:
        rho_u, lam = _ipm(N[:, used], p, sigma[used], tol)
    rho = np.zeros(N.shape[1])
    rho[used] = rho_u
    return rho, lam


def _json_label(label):
    if isinstance(label, tuple):
        return [_json_label(x) for x in label]
    if isinstance(label, (np.integer,)):
        return int(label)
    if isinstance(label, (np.floating,)):
        return float(label)
    return label


@dataclass(frozen=True)
class ModulusResult:
    """Outcome of :func:`basic_algorithm`."""

    modulus: float
    rho_star: np.ndarray
    active_rows: tuple[UsageRow, ...]
    lam: np.ndarray
    p: float
    sigma: np.ndarray
    iterations: int
    tolerance_used: float
    graph: Graph | None = field(default=None, compare=False)
    family_name: str = ""

    def to_dict(self) -> dict:
        if self.graph is not None:
            names = [self.graph.edge_label(k) for k in range(len(self.rho_star))]
        else:
            names = [str(k) for k in range(len(self.rho_star))]
        return {
            "modulus": float(self.modulus),
            "p": float(self.p),
            "rho": {name: float(v) for name, v in zip(names, self.rho_star)},
            "active": [
                {"label": _json_label(r.label), "usage": [float(x) for x in r.usage]}
                for r in self.active_rows
            ],
            "lambda": [float(x) for x in self.lam],
            "iterations": int(self.iterations),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def basic_algorithm(
    family: FamilyOracle,
    p: float = 2.0,
    sigma=None,
    tol: float = DEFAULT_TOL,
    max_iterations: int = MAX_OUTER_ITERATIONS,
) -> ModulusResult:
    """Modulus of a family by active-set constraint generation.

    Starts from the member shortest under ``rho = 0``. Each round solves the
    restricted program, queries the family and stops once the shortest
    member has rho-length at least ``1 - tol``.

    Raises
    ------
    SolverError
        The oracle returns an active row that is still short (stalled) or
        the iteration budget runs out.
    """
    p = _check_p_open(p)
    if not tol > 0:
        raise DomainError("tol must be positive")
    g = family.graph
    sigma = _check_sigma(g.sigma if sigma is None else sigma, g.n_edges)
    row, _ = family.shortest(np.zeros(g.n_edges))
    active = [row]
    keys = {row.key()}
    for it in range(1, max_iterations + 1):
        rho, lam = solve_subproblem(active, p, sigma, tol / 10)
        row, length = family.shortest(rho)
        if length >= 1 - tol:
            sig = sigma.copy()
            for arr in (rho, lam, sig):
                arr.setflags(write=False)
            return ModulusResult(
                modulus=energy(rho, p, sigma),
                rho_star=rho,
                active_rows=tuple(active),
                lam=lam,
                p=p,
                sigma=sig,
                iterations=it,
                tolerance_used=tol,
                graph=g,
                family_name=family.name,
            )
        if row.key() in keys:
            raise SolverError(f"stalled: active row {row.label!r} has length {length:.3e} < 1 - tol")
        active.append(row)
        keys.add(row.key())
    raise SolverError(f"no convergence within {max_iterations} iterations")
