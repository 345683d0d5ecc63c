"""File formats: JSONL subspace streams, DOT and CSV graph dumps, JSON reports."""

from __future__ import annotations

import csv
import json
from typing import IO, Iterable

from .grassmann import GrassmannGraph, clique_number, valency_formula
from .subspace import Subspace


def write_subspaces_jsonl(subspaces: Iterable[Subspace], out: IO[str]) -> int:
    count = 0
    for X in subspaces:
        out.write(json.dumps(X.to_json(), separators=(",", ":")) + "\n")
        count += 1
    return count


def read_subspaces_jsonl(lines: Iterable[str]) -> list[Subspace]:
    return [Subspace.from_json(json.loads(line)) for line in lines if line.strip()]


def vertex_label(X: Subspace) -> str:
    return ";".join(",".join(map(str, r)) for r in X.rows)


def write_dot(G: GrassmannGraph, out: IO[str]) -> None:
    p, s, n, m = G.params
    out.write(f"graph G_{p}_{s}_{n}_{m} {{\n")
    for i, X in enumerate(G.vertices):
        out.write(f'  {i} [label="{vertex_label(X)}"];\n')
    for i, j in G.edges():
        out.write(f"  {i} -- {j};\n")
    out.write("}\n")


def write_edge_csv(G: GrassmannGraph, out: IO[str]) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["source", "target"])
    for i, j in G.edges():
        w.writerow([i, j])


def read_edge_csv(inp: IO[str]) -> list[tuple[int, int]]:
    r = csv.reader(inp)
    next(r)
    return [(int(a), int(b)) for a, b in r]


def graph_report(G: GrassmannGraph, omega_measured: int | None = None,
                 checks: list[dict] | None = None) -> dict:
    """Formula-versus-measured summary of a built graph."""
    p, s, n, m = G.params
    degrees = G.degrees()
    vf = valency_formula(p, s, n, m)
    diameter = G.diameter()
    omega = clique_number(p, s, n, m)
    checks = list(checks or [])
    checks.append({"name": "regular", "pass": len(set(degrees)) == 1})
    checks.append({"name": "valency_matches_formula", "pass": set(degrees) == {vf}})
    checks.append({"name": "diameter_is_min_m_n_minus_m", "pass": diameter == min(m, n - m)})
    checks.append({"name": "handshake", "pass": sum(degrees) % 2 == 0})
    if omega_measured is not None:
        checks.append({"name": "clique_number_matches_formula", "pass": omega_measured == omega})
    report = {
        "params": {"p": p, "s": s, "n": n, "m": m},
        "|V|": G.num_vertices,
        "valency_formula": vf,
        "valency_measured": degrees[0] if len(set(degrees)) == 1 else sorted(set(degrees)),
        "omega_formula": omega,
        "diameter_measured": diameter,
        "checks": checks,
    }
    if omega_measured is not None:
        report["omega_measured"] = omega_measured
    return report


def dump_report(report: dict, out: IO[str]) -> None:
    json.dump(report, out, indent=2, sort_keys=True)
    out.write("\n")


def load_report(inp: IO[str]) -> dict:
    return json.load(inp)
