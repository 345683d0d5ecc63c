"""Self-check suites run by ``zgrass verify``.

Each suite returns a list of ``{"name", "pass", "detail"}`` records.  A
suite that would exceed the work budget is reported as skipped instead of
failing.
"""

from __future__ import annotations

import itertools
import random
from typing import Callable

from .bilinear import BilinearGraph
from .budget import budget_limit, check_budget
from .cliques import cliques_of_size, find_clique, max_independent_set
from .errors import BudgetExceeded, ParameterRange
from .grassmann import (
    GrassmannGraph,
    automorphism_dual,
    automorphism_linear,
    classify_maximum_clique,
    clique_number,
    independence_bounds,
    is_scalar,
    lifted_independent_set,
    linear_map_is_identity,
    random_invertible,
    valency_formula,
    verify_automorphism,
)
from .matrix import (
    Matrix,
    canonical_diagonalize,
    determinant,
    inner_rank,
    invert,
    is_invertible,
    mccoy_rank,
    project_matrix,
)
from .ring import (
    RingContext,
    digit_expand,
    is_unit,
    project_to_field,
    valuation_decompose,
)
from .subspace import (
    arithmetic_distance,
    count_containing,
    count_subspaces,
    count_within,
    dual_subspace,
    enumerate_containing,
    enumerate_subspaces,
    enumerate_within,
    intersection_module,
    join_dimension,
    random_subspace,
)

SUITES = ("ring", "matrix", "subspace", "bilinear", "grassmann", "automorphism")


def _check(name: str, ok: bool, detail: str = "") -> dict:
    out = {"name": name, "pass": bool(ok)}
    if detail and not ok:
        out["detail"] = detail
    return out


def _first_failure(items, pred) -> str:
    for it in items:
        if not pred(it):
            return repr(it)
    return ""


def ring_suite(p: int, s: int, **_) -> list[dict]:
    ctx = RingContext(p, s)
    q = ctx.modulus
    check_budget(q * q, "ring suite")
    els = list(ctx.elements())
    bad = _first_failure((x for x in els if x.value), lambda x: (lambda t, u: u * p**t == x and is_unit(u))(*valuation_decompose(x)))
    digits = {digit_expand(x) for x in els}
    hom = all(project_to_field(x + y).value == (project_to_field(x).value + project_to_field(y).value) % p
              and project_to_field(x * y).value == project_to_field(x).value * project_to_field(y).value % p
              for x in els for y in els)
    units = [x for x in els if is_unit(x)]
    ideal = [x for x in els if not is_unit(x)]
    return [
        _check("valuation_roundtrip", not bad, bad),
        _check("digit_expansion_bijective", len(digits) == q and all(len(d) == s for d in digits)),
        _check("projection_is_homomorphism", hom),
        _check("unit_count", len(units) == ctx.unit_count() == (p - 1) * p ** (s - 1)),
        _check("ideal_size", len(ideal) == p ** (s - 1)),
        _check("unit_plus_ideal_is_unit", all(is_unit(a + b) and is_unit(a - b) for a in units for b in ideal)),
    ]


def _all_matrices(ctx: RingContext, r: int, c: int):
    q = ctx.modulus
    for flat in itertools.product(range(q), repeat=r * c):
        yield Matrix.from_rows(ctx, [flat[i * c:(i + 1) * c] for i in range(r)], c)


def matrix_suite(p: int, s: int, seed: int = 0, trials: int = 300, **_) -> list[dict]:
    ctx = RingContext(p, s)
    q = ctx.modulus
    rng = random.Random(seed)
    check_budget(q**8, "2x2 pair sweep")
    mats = list(_all_matrices(ctx, 2, 2))
    rho = {M: inner_rank(M) for M in mats}
    rk = {M: mccoy_rank(M) for M in mats}
    units = [M for M in mats if is_invertible(M)]
    radical = [M for M in mats if all(v % p == 0 for r in M.data for v in r)]
    out = []

    def nf_ok(M):
        nf = canonical_diagonalize(M)
        return nf.reconstruct() == M and nf.inner_rank == rho[M] and nf.r == rk[M]

    out.append(_check("normal_form_reconstructs", all(nf_ok(M) for M in mats)))
    pq = [(rng.choice(units), rng.choice(units)) for _ in range(trials)]
    out.append(_check("rank_invariant_under_equivalence",
                      all(inner_rank(P @ M @ Q) == rho[M] and mccoy_rank(P @ M @ Q) == rk[M]
                          for P, Q in pq for M in rng.sample(mats, 4))))
    pairs = [(A, B) for A in mats for B in mats]
    out.append(_check("product_rank_bound", all(rho[A @ B] <= min(rho[A], rho[B]) for A, B in pairs)))
    out.append(_check("sum_rank_bound", all(rho[A + B] <= rho[A] + rho[B] for A, B in pairs)))
    out.append(_check("block_rank_bounds", all(
        max(rho[A], rho[B]) <= inner_rank(A.hstack(B)) and inner_rank(A.hstack(B)) <= rho[A] + rho[B]
        for A, B in rng.sample(pairs, min(len(pairs), 2000)))))
    out.append(_check("diagonal_block_rank_additive", all(
        inner_rank(A.hstack(Matrix.zeros(ctx, 2, 2)).vstack(Matrix.zeros(ctx, 2, 2).hstack(B))) == rho[A] + rho[B]
        for A, B in rng.sample(pairs, min(len(pairs), 2000)))))
    out.append(_check("mccoy_rank_stable_under_radical", all(rk[A + B] == rk[A] and rk[A - B] == rk[A]
                                                             for A in mats for B in radical)))
    out.append(_check("mccoy_at_most_inner", all(rk[M] <= rho[M] for M in mats)))
    out.append(_check("projection_multiplicative", all(
        project_matrix(A @ B) == project_matrix(A) @ project_matrix(B) for A, B in rng.sample(pairs, min(len(pairs), 2000)))))
    out.append(_check("inverse_commutes_with_projection", all(
        invert(project_matrix(U)) == project_matrix(invert(U)) for U in units)))
    out.append(_check("invertible_iff_unit_determinant", all(is_invertible(M) == is_unit(determinant(M)) for M in mats)))
    if s >= 2:
        lower = RingContext(p, s - 1)
        lows = list(_all_matrices(lower, 2, 2))
        out.append(_check("invertibility_lifts", all(is_invertible(M.reinterpret(ctx)) for M in lows if is_invertible(M))))
        out.append(_check("scaling_by_p_preserves_inner_rank", all(
            inner_rank(M) == inner_rank(M.reinterpret(ctx).scale(p)) for M in lows)))
    return out


def subspace_suite(p: int, s: int, n: int = 4, m: int = 2, seed: int = 0, trials: int = 300, **_) -> list[dict]:
    ctx = RingContext(p, s)
    rng = random.Random(seed)
    V = list(enumerate_subspaces(ctx, n, m))
    out = [
        _check("count_matches_formula", len(V) == len(set(V)) == count_subspaces(ctx, n, m)),
    ]
    if m >= 1:
        K = V[0]
        out.append(_check("count_within_matches_formula",
                          all(len(list(enumerate_within(K, k))) == count_within(ctx, m, k) for k in range(m + 1))))
        out.append(_check("count_containing_matches_formula",
                          all(len(list(enumerate_containing(K, d))) == count_containing(ctx, n, m, d) for d in range(m, n + 1))))
    pairs = [(rng.choice(V), rng.choice(V)) for _ in range(trials)]
    out.append(_check("dimension_formula", all(
        join_dimension(A, B) == A.m + B.m - intersection_module(A, B).dim for A, B in pairs)))
    out.append(_check("dual_is_involution", all(dual_subspace(dual_subspace(X)) == X for X in V)))
    out.append(_check("dual_dimension", all(dual_subspace(X).m == n - m for X in V)))
    out.append(_check("distance_preserved_by_dual", all(
        arithmetic_distance(A, B) == arithmetic_distance(dual_subspace(A), dual_subspace(B)) for A, B in pairs)))
    out.append(_check("dual_commutes_with_projection", all(
        dual_subspace(X).project() == dual_subspace(X.project()) for X in V)))
    triples = [(A, B, random_subspace(ctx, n, m, rng)) for A, B in pairs[:100]]
    out.append(_check("triangle_inequality", all(
        arithmetic_distance(A, B) <= arithmetic_distance(A, C) + arithmetic_distance(C, B) for A, B, C in triples)))
    return out


def bilinear_suite(p: int, s: int, rows: int = 2, cols: int = 2, **_) -> list[dict]:
    ctx = RingContext(p, s)
    G = BilinearGraph(ctx, rows, cols)
    check_budget(G.num_vertices**2, "bilinear suite")
    adj = G.adjacency()
    omega = G.clique_number()
    alpha = G.independence_number()
    found = find_clique(adj, omega)
    out = [
        _check("clique_of_formula_size_exists", found is not None),
        _check("no_larger_clique", find_clique(adj, omega + 1) is None),
        _check("independence_number", len(max_independent_set(adj)) == alpha),
    ]
    maxima = cliques_of_size(adj, omega)
    if rows == cols:
        out.append(_check("maximum_cliques_have_a_type", all(G.clique_type(c) for c in maxima)))
    return out


def grassmann_suite(p: int, s: int, n: int = 4, m: int = 2, **_) -> list[dict]:
    G = GrassmannGraph(RingContext(p, s), n, m)
    N = G.num_vertices
    check_budget(N * N, "grassmann suite")
    degrees = G.degrees()
    vf = valency_formula(p, s, n, m)
    dist = G.all_distances()
    bad = ""
    for i in range(N):
        for j in range(i + 1, N):
            if dist[i][j] != arithmetic_distance(G.vertices[i], G.vertices[j]):
                bad = f"{G.vertices[i]} {G.vertices[j]}"
                break
        if bad:
            break
    omega = clique_number(p, s, n, m)
    adj = G.adjacency()
    found = find_clique(adj, omega)
    out = [
        _check("regular", len(set(degrees)) == 1, f"degrees {sorted(set(degrees))}"),
        _check("valency_matches_formula", set(degrees) == {vf}, f"measured {sorted(set(degrees))} formula {vf}"),
        _check("distance_equals_arithmetic_distance", not bad, bad),
        _check("diameter", max(max(r) for r in dist) == min(m, n - m)),
        _check("clique_of_formula_size_exists", found is not None),
        _check("no_larger_clique", find_clique(adj, omega + 1) is None),
    ]
    if found is not None and n >= 2 * m:
        v = classify_maximum_clique(G, found, omega).verdict
        out.append(_check("maximum_clique_is_star_or_top", v in ("star", "top"), v))
    if n >= 2 * m:
        lo, hi = independence_bounds(p, s, n, m)
        L = lifted_independent_set(G.context, n, m)
        out.append(_check("lifted_independent_set", len(L) == lo and G.is_independent(G.index[X] for X in L)))
        out.append(_check("independence_bounds_ordered", lo <= hi))
    return out


def automorphism_suite(p: int, s: int, n: int = 4, m: int = 2, seed: int = 0, trials: int = 20, **_) -> list[dict]:
    ctx = RingContext(p, s)
    G = GrassmannGraph(ctx, n, m)
    check_budget(G.num_vertices**2, "automorphism suite")
    rng = random.Random(seed)
    Us = [random_invertible(ctx, n, rng) for _ in range(trials)]
    out = [_check("linear_maps_are_automorphisms", all(verify_automorphism(G, automorphism_linear(G, U)) for U in Us))]
    if n == 2 * m:
        out.append(_check("dual_maps_are_automorphisms",
                          all(verify_automorphism(G, automorphism_dual(G, U)) for U in Us[:5])))
    scalars = [Matrix.identity(ctx, n).scale(c) for c in range(1, ctx.modulus) if c % p]
    out.append(_check("scalars_act_trivially", all(linear_map_is_identity(G, U) for U in scalars)))
    out.append(_check("non_scalars_act_nontrivially",
                      all(not linear_map_is_identity(G, U) for U in Us if not is_scalar(U))))
    return out


RUNNERS: dict[str, Callable[..., list[dict]]] = {
    "ring": ring_suite,
    "matrix": matrix_suite,
    "subspace": subspace_suite,
    "bilinear": bilinear_suite,
    "grassmann": grassmann_suite,
    "automorphism": automorphism_suite,
}


def run_suite(name: str, budget: int | None = None, **params) -> dict:
    """Run one suite; returns {"suite", "status", "checks"}."""
    runner = RUNNERS[name]
    try:
        if budget is not None:
            with budget_limit(budget):
                checks = runner(**params)
        else:
            checks = runner(**params)
    except BudgetExceeded as exc:
        return {"suite": name, "status": "skipped", "reason": str(exc), "checks": []}
    except ParameterRange as exc:
        return {"suite": name, "status": "skipped", "reason": str(exc), "checks": []}
    status = "pass" if all(c["pass"] for c in checks) else "fail"
    return {"suite": name, "status": status, "checks": checks}

