"""Command line interface.

Subcommands::

    modkit compute    --std complete:6 --family ec --p 2 [--out result.json]
    modkit experiment barbell --n-min 4 --n-max 12 [--out barbell.csv]
    modkit verify     --scope quick|full
    modkit enumerate  min-covers|bfec --std wheel:5 [--out list.json]
    modkit oracle dump [--out table.csv]

Exit codes: 0 ok, 1 verification or solver failure, 2 I/O or parse error,
3 size guard or infeasible input. ``MODKIT_TOL`` overrides the default
tolerance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from .duality import fec_modulus_via_stars
from .errors import DomainError, Infeasible, ParseError, SolverError
from .experiments import BARBELL_TOL, barbell_csv, barbell_experiment, verify_suite
from .families import (
    cover_indicator,
    edge_cover_family,
    enumerate_basic_fecs,
    enumerate_minimal_edge_covers,
    star_family,
)
from .graph import Graph, parse_graph, standard_from_string
from .oracles import oracle_table_csv
from .probability import optimal_expected_usage, pmf_from_result
from .solver import DEFAULT_TOL, basic_algorithm

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_IO = 2
EXIT_GUARD = 3

FAMILIES = ("stars", "ec", "fec")


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _env_tol(default: float) -> float:
    raw = os.environ.get("MODKIT_TOL")
    if raw is None:
        return default
    try:
        tol = float(raw)
    except ValueError:
        raise _Exit(EXIT_IO, f"MODKIT_TOL is not a number: {raw!r}") from None
    if not tol > 0:
        raise _Exit(EXIT_IO, "MODKIT_TOL must be positive")
    return tol


def _exponent(text: str) -> float:
    p = float(text)
    if not (1 < p < math.inf):
        raise argparse.ArgumentTypeError("p must lie in (1, inf)")
    return p


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _load_graph(args) -> Graph:
    if args.std:
        try:
            return standard_from_string(args.std)
        except DomainError as exc:
            raise _Exit(EXIT_IO, f"bad --std: {exc}") from None
    try:
        with open(args.graph, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _Exit(EXIT_IO, f"cannot read graph file: {exc}") from None
    try:
        if args.graph.endswith(".json"):
            from .graph import graph_from_json

            return graph_from_json(text)
        return parse_graph(text)
    except (ParseError, DomainError, ValueError, KeyError) as exc:
        raise _Exit(EXIT_IO, f"cannot parse {args.graph}: {exc}") from None


def _write(path: str | None, text: str) -> None:
    if path is None:
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise _Exit(EXIT_IO, f"cannot write {path}: {exc}") from None


def _add_graph_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--std", metavar="KIND:N", help="standard graph, e.g. complete:6 or barbell:5")
    src.add_argument("--graph", metavar="FILE", help="edge list ('u v [w]' per line) or JSON graph")


def cmd_compute(args) -> int:
    g = _load_graph(args)
    tol = args.tol if args.tol is not None else _env_tol(DEFAULT_TOL)
    sigma = g.sigma
    if args.family == "fec":
        res = fec_modulus_via_stars(g, args.p, sigma, tol)
        modulus = res.primal_modulus
        payload = res.to_dict()
        usage = res.expected_usage()
        payload["pmf"] = None
        payload["expected_usage"] = {g.edge_label(k): float(u) for k, u in enumerate(usage)}
        rho = res.eta_star
    else:
        fam = star_family(g) if args.family == "stars" else edge_cover_family(g)
        res = basic_algorithm(fam, args.p, sigma, tol)
        modulus = res.modulus
        payload = res.to_dict()
        payload["pmf"] = pmf_from_result(res).to_dict(g)
        usage = optimal_expected_usage(res)
        payload["expected_usage"] = {g.edge_label(k): float(u) for k, u in enumerate(usage)}
        rho = res.rho_star
    payload["family"] = args.family
    payload["tolerance"] = tol
    print(f"{modulus:.6f}")
    if args.format == "json":
        _write(args.out, json.dumps(payload, indent=2) + "\n")
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["edge", "sigma", "rho", "expected_usage"])
        for k in range(g.n_edges):
            w.writerow([g.edge_label(k), repr(float(sigma[k])), repr(float(rho[k])), repr(float(usage[k]))])
        _write(args.out, buf.getvalue())
    return EXIT_OK


def cmd_experiment(args) -> int:
    tol = args.tol if args.tol is not None else _env_tol(BARBELL_TOL)
    try:
        rows = barbell_experiment(args.n_min, args.n_max, tol, args.workers)
    except DomainError as exc:
        raise _Exit(EXIT_GUARD, str(exc)) from None
    text = barbell_csv(rows)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    for r in rows:
        if r.failed:
            print(f"n={r.n} failed: {r.error}", file=sys.stderr)
        elif args.out:
            print(
                f"n={r.n:2d} ec={r.mod_ec:.6f} fec={r.mod_fec:.6f} ratio={r.ratio:.6f} "
                f"bridge_ec={r.bridge_usage_ec:.6f} bridge_fec={r.bridge_usage_fec:.6f}"
            )
    return EXIT_FAIL if any(r.failed for r in rows) else EXIT_OK


def cmd_verify(args) -> int:
    checks = verify_suite(args.scope)
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_enumerate(args) -> int:
    g = _load_graph(args)
    try:
        if args.what == "min-covers":
            covers = enumerate_minimal_edge_covers(g)
            items = [
                {
                    "edges": [g.edge_label(k) for k in sorted(c)],
                    "usage": cover_indicator(g, c).tolist(),
                }
                for c in covers
            ]
        else:
            items = []
            for b in enumerate_basic_fecs(g):
                comps = []
                for comp in b.components:
                    if comp[0] == "star":
                        comps.append({"star": g.vertices[comp[1]], "leaves": [g.vertices[x] for x in comp[2]]})
                    else:
                        comps.append({"cycle": [g.vertices[x] for x in comp[1]]})
                items.append({"components": comps, "usage": b.usage.tolist()})
    except DomainError as exc:
        raise _Exit(EXIT_GUARD, str(exc)) from None
    text = json.dumps(items, indent=2) + "\n"
    if args.out:
        _write(args.out, text)
        print(len(items))
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_oracle(args) -> int:
    text = oracle_table_csv(range(args.n_min, args.n_max + 1))
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modkit", description="p-modulus of stars and edge covers on graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="modulus of one family on one graph")
    _add_graph_source(p)
    p.add_argument("--family", choices=FAMILIES, default="stars")
    p.add_argument("--p", type=_exponent, default=2.0)
    p.add_argument("--tol", type=_positive, default=None, help=f"default {DEFAULT_TOL:g} or MODKIT_TOL")
    p.add_argument("--out", help="result file")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("experiment", help="reproducible experiment sweeps")
    p.add_argument("name", choices=("barbell",))
    p.add_argument("--n-min", type=int, default=4)
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--tol", type=_positive, default=None, help=f"default {BARBELL_TOL:g} or MODKIT_TOL")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="CSV file (stdout if omitted)")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("verify", help="run the cross-check suite")
    p.add_argument("--scope", choices=("quick", "full"), default="quick")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", help="list minimal edge covers or basic fractional covers")
    p.add_argument("what", choices=("min-covers", "bfec"))
    _add_graph_source(p)
    p.add_argument("--out", help="JSON file (stdout if omitted)")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("oracle", help="closed-form modulus table")
    p.add_argument("action", choices=("dump",))
    p.add_argument("--n-min", type=int, default=3)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--out", help="CSV file (stdout if omitted)")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _Exit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (Infeasible, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
