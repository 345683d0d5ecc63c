from __future__ import annotations

import itertools
import random

import pytest

from oracles import bfs, generator_count, sumset
from zgrass.cliques import bits, cliques_of_size
from zgrass.errors import (
    BudgetExceeded,
    DualRequiresHalfDimension,
    NotInvertible,
    NotMcAdjacent,
    ParameterRange,
)
from zgrass.grassmann import (
    GrassmannGraph,
    automorphism_dual,
    automorphism_linear,
    classify_maximum_clique,
    clique_number,
    clique_number_formula,
    dual_graph_isomorphism,
    explicit_map,
    greedy_maximal_clique,
    independence_bounds,
    induced_star_map,
    invert_map,
    is_scalar,
    lifted_independent_set,
    linear_map_is_identity,
    mc_path,
    random_invertible,
    rank_adjacency_agrees,
    star_size,
    top_size,
    valency_formula,
    verify_automorphism,
    verify_isomorphism,
    vertex_count,
    vertex_from_mc_pair,
)
from zgrass.matrix import Matrix, invert, is_invertible
from zgrass.ring import RingContext
from zgrass.subspace import (
    Subspace,
    arithmetic_distance,
    dual_subspace,
    enumerate_containing,
    enumerate_joins,
    enumerate_subspaces,
    enumerate_within,
    stack_ranks,
)

Z4 = RingContext(2, 2)


def S(ctx, rows):
    return Subspace.from_rows(ctx, rows)


A0 = S(Z4, [[0, 0, 1, 0], [0, 0, 0, 1]])


@pytest.fixture(scope="module")
def g2242():
    G = GrassmannGraph.build(2, 2, 4, 2)
    G.adjacency()
    return G


@pytest.fixture(scope="module")
def g2142():
    return GrassmannGraph.build(2, 1, 4, 2)


def oracle_neighbours(G: GrassmannGraph, i: int) -> set[int]:
    """Neighbours by minimal generator count of A + B, from explicit vector sets."""
    p, q, m = G.context.p, G.context.modulus, G.m
    sets = [frozenset(X.vectors()) for X in G.vertices]
    return {j for j, B in enumerate(sets) if j != i and generator_count(sumset(sets[i], B, q), p, q) == m + 1}


# --- construction and adjacency -------------------------------------------------

def test_complete_line_graph():
    G = GrassmannGraph.build(2, 2, 3, 1)
    assert G.num_vertices == 28 == vertex_count(2, 2, 3, 1)
    assert G.degrees() == [27] * 28
    assert G.diameter() == 1


def test_field_instance_regular(g2142):
    assert g2142.num_vertices == 35
    assert set(g2142.degrees()) == {18} == {valency_formula(2, 1, 4, 2)}


def test_adjacency_matches_generator_count_oracle(g2142):
    for i in range(g2142.num_vertices):
        assert set(g2142.neighbors(i)) == oracle_neighbours(g2142, i)


def test_ring_adjacency_matches_oracle_sample(g2242):
    for i in range(0, 560, 61):
        assert set(g2242.neighbors(i)) == oracle_neighbours(g2242, i)


def test_bucket_adjacency_matches_inner_rank(g2242):
    assert rank_adjacency_agrees(g2242)


def test_measured_degree_at_z4(g2242):
    degrees = g2242.degrees()
    assert set(degrees) == {153}
    assert len(oracle_neighbours(g2242, 0)) == 153
    assert 2 * g2242.edge_count() == sum(degrees) == 560 * 153
    assert g2242.edge_count() == 42840


@pytest.mark.parametrize("p,s,n,m,value", [(2, 2, 4, 2, 162), (2, 1, 4, 2, 18), (3, 2, 4, 2, 1392)])
def test_valency_formula_values(p, s, n, m, value):
    assert valency_formula(p, s, n, m) == value


@pytest.mark.parametrize("p,n,m", [(2, 4, 2), (2, 5, 2), (3, 4, 2), (2, 5, 1), (3, 3, 1)])
def test_valency_formula_holds_over_fields(p, n, m):
    G = GrassmannGraph.build(p, 1, n, m)
    assert set(G.degrees()) == {valency_formula(p, 1, n, m)}
    assert G.num_vertices * valency_formula(p, 1, n, m) == 2 * G.edge_count()


def test_single_vertex_degree_at_z9():
    # Two enumerations: shared lines through enumerate_containing, and the stacked rank.
    ctx = RingContext(3, 2)
    A = S(ctx, [[1, 0, 0, 0], [0, 1, 0, 0]])
    via_lines = set()
    for L in enumerate_within(A, 1):
        via_lines.update(B for B in enumerate_containing(L, 2) if B != A)
    via_rank = {B for B in enumerate_subspaces(ctx, 4, 2) if stack_ranks(A, B)[0] == 3}
    assert via_lines == via_rank
    assert len(via_rank) == 1328


def test_mc_adjacency_examples(g2242):
    B_e11 = S(Z4, [[1, 0, 1, 0], [0, 0, 0, 1]])
    B_d20 = S(Z4, [[2, 0, 1, 0], [0, 0, 0, 1]])
    assert g2242.mc_adjacent(A0, B_e11) and g2242.adjacent(A0, B_e11)
    assert g2242.adjacent(A0, B_d20) and not g2242.mc_adjacent(A0, B_d20)
    assert not g2242.adjacent(A0, A0) and not g2242.mc_adjacent(A0, A0)


# --- distance -----------------------------------------------------------------------

def test_distance_examples(g2242):
    B = S(Z4, [[2, 0, 1, 0], [0, 2, 0, 1]])
    assert g2242.distance(A0, B) == 2 == arithmetic_distance(A0, B)
    assert g2242.distance(A0, A0) == 0


@pytest.mark.parametrize("params", [(2, 2, 3, 1), (2, 1, 4, 2), (2, 1, 5, 2)])
def test_distance_is_arithmetic_distance(params):
    G = GrassmannGraph.build(*params)
    adj = {i: list(G.neighbors(i)) for i in range(G.num_vertices)}
    for i in range(G.num_vertices):
        dist = bfs(adj, i)
        for j in range(G.num_vertices):
            assert dist[j] == arithmetic_distance(G.vertices[i], G.vertices[j])
    assert G.diameter() == min(G.m, G.n - G.m)


def test_shortest_path(g2242):
    rng = random.Random(3)
    adj = g2242.adjacency()
    for _ in range(30):
        a, b = rng.sample(range(560), 2)
        path = g2242.shortest_path(a, b)
        assert path[0] == a and path[-1] == b
        assert len(path) - 1 == g2242.bfs_distances(a)[b]
        assert all(adj[x] >> y & 1 for x, y in zip(path, path[1:]))


# --- stars, tops, cliques -----------------------------------------------------------------

def test_star_and_top_sizes(g2242):
    assert star_size(2, 2, 4, 2) == 28 == top_size(2, 2, 4, 2)
    P = S(Z4, [[0, 0, 0, 1]])
    Q = S(Z4, [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert len(g2242.star(P)) == 28 and len(g2242.top(Q)) == 28
    P5 = S(Z4, [[0, 0, 0, 0, 1]])
    Q5 = S(Z4, [[0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]])
    assert len(list(enumerate_containing(P5, 2))) == 120 == star_size(2, 2, 5, 2)
    assert len(list(enumerate_within(Q5, 2))) == 28 == top_size(2, 2, 5, 2)


def test_star_dual_is_top(g2242):
    for P in enumerate_subspaces(Z4, 4, 1):
        star_duals = {g2242.index[dual_subspace(g2242.vertices[i])] for i in g2242.star(P)}
        assert star_duals == g2242.top(dual_subspace(P))


def test_star_projects_to_star(g2242, g2142):
    for P in itertools.islice(enumerate_subspaces(Z4, 4, 1), 0, None, 5):
        image = {g2142.index[g2242.vertices[i].project()] for i in g2242.star(P)}
        assert image == g2142.star(P.project())
        assert len(image) == clique_number(2, 1, 4, 2)


def test_clique_number_values():
    assert clique_number_formula(2, 2, 4, 2) == 28
    assert clique_number_formula(2, 1, 4, 2) == 7
    assert clique_number_formula(2, 1, 5, 2) == 15
    with pytest.raises(ParameterRange):
        clique_number_formula(2, 2, 4, 3)
    assert clique_number(2, 2, 4, 3) == clique_number(2, 2, 4, 1) == vertex_count(2, 2, 4, 1) == 120


def test_field_clique_number_exact():
    G = GrassmannGraph.build(2, 1, 5, 2)
    assert G.find_clique(15) is not None and G.find_clique(16) is None
    P = S(RingContext(2, 1), [[0, 0, 0, 0, 1]])
    assert G.is_clique(G.star(P)) and len(G.star(P)) == 15


def test_field_maximum_cliques_are_stars_and_tops(g2142):
    cliques = cliques_of_size(g2142.adjacency(), 7)
    verdicts = [classify_maximum_clique(g2142, C).verdict for C in cliques]
    assert len(cliques) == 30
    assert verdicts.count("star") == 15 and verdicts.count("top") == 15


def test_classification(g2242):
    P = S(Z4, [[0, 1, 2, 0]])
    Q = S(Z4, [[1, 0, 0, 3], [0, 1, 0, 0], [0, 0, 1, 2]])
    assert classify_maximum_clique(g2242, g2242.star(P)).verdict == "star"
    assert classify_maximum_clique(g2242, g2242.star(P)).center == P
    assert classify_maximum_clique(g2242, g2242.top(Q)).center == Q
    assert classify_maximum_clique(g2242, g2242.top(Q)).verdict == "top"
    assert classify_maximum_clique(g2242, list(g2242.star(P))[:27]).verdict == "not_maximum"


def test_greedy_clique_from_mc_seed_is_not_maximum(g2242):
    V = g2242.vertices
    for b in g2242.neighbors(0):
        if g2242.mc_adjacent(V[0], V[b]):
            C = greedy_maximal_clique(g2242, [0, b])
            if len(C) < 28:
                break
    else:
        pytest.fail("no short maximal clique found")
    assert g2242.is_maximal_clique(C)
    assert classify_maximum_clique(g2242, C).verdict == "not_maximum"


def test_no_29_clique(g2242):
    assert g2242.find_clique(29) is None
    C = g2242.find_clique(28)
    assert classify_maximum_clique(g2242, C).verdict in ("star", "top")


def test_star_intersections(g2242):
    L = lambda rows: S(Z4, rows)
    P1 = L([[0, 0, 1, 0]])
    P2 = L([[0, 0, 0, 1]])        # mc-adjacent lines
    P3 = L([[0, 0, 1, 2]])        # adjacent to P1, not mc
    P4 = L([[1, 0, 0, 0]])
    assert stack_ranks(P1, P2) == (2, 2) and stack_ranks(P1, P3) == (2, 1)
    assert len(g2242.star_intersection(P1, P2)) == 1
    joins = {g2242.index[W] for W in enumerate_joins(P1, P3)}
    assert g2242.star_intersection(P1, P3) == joins and len(joins) == 4
    assert g2242.star_intersection(P1, P4) == {g2242.index[L([[1, 0, 0, 0], [0, 0, 1, 0]])]}
    with pytest.raises(ValueError):
        g2242.star_intersection(P1, P1)
    Q = L([[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert len(g2242.star_top_intersection(P1, Q)) == 6
    assert g2242.star_top_intersection(P4, Q) == frozenset()


# --- independence ------------------------------------------------------------------------

def test_independence(g2142):
    I = g2142.max_independent_set()
    assert len(I) == 5 and g2142.is_independent(I)
    assert independence_bounds(2, 2, 4, 2, field_alpha=5) == (20, 20)
    assert independence_bounds(2, 1, 4, 2) == (5, 5)
    with pytest.raises(ParameterRange):
        independence_bounds(2, 2, 4, 3)


def test_lifted_independent_set(g2242):
    lifted = lifted_independent_set(Z4, 4, 2)
    assert len(lifted) == len(set(lifted)) == 20
    assert g2242.is_independent([g2242.index[X] for X in lifted])
    assert all(stack_ranks(A, B)[0] == 4 for A, B in itertools.combinations(lifted, 2))


# --- automorphisms ----------------------------------------------------------------------

def test_identity_and_swap(g2242):
    I4 = Matrix.identity(Z4, 4)
    f = automorphism_linear(g2242, I4)
    assert f.is_identity() and verify_automorphism(g2242, f)
    swap = Matrix.from_rows(Z4, [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    g = automorphism_linear(g2242, swap)
    assert not g.is_identity() and verify_automorphism(g2242, g)
    d = automorphism_dual(g2242, I4)
    assert verify_automorphism(g2242, d)
    assert all(g2242.vertices[d(i)] == dual_subspace(X) for i, X in enumerate(g2242.vertices))


def test_bad_maps(g2242):
    with pytest.raises(NotInvertible):
        automorphism_linear(g2242, Matrix.diag(Z4, [1, 1, 1, 2]))
    with pytest.raises(DualRequiresHalfDimension):
        automorphism_dual(GrassmannGraph.build(2, 2, 3, 1), Matrix.identity(Z4, 3))
    a = 0
    b = next(j for j in range(560) if j not in g2242.neighbors(a) and j != a)
    c = g2242.neighbors(a)[0]
    perm = list(range(560))
    perm[b], perm[c] = perm[c], perm[b]
    assert not verify_automorphism(g2242, explicit_map(perm))
    assert not verify_automorphism(g2242, [0] * 560)


def test_random_linear_maps(g2242):
    rng = random.Random(4)
    for _ in range(8):
        U = random_invertible(Z4, 4, rng)
        f = automorphism_linear(g2242, U)
        assert verify_automorphism(g2242, f)
        assert verify_automorphism(g2242, automorphism_dual(g2242, U))
        back = automorphism_linear(g2242, invert(U))
        assert invert_map(f).perm == back.perm


def test_kernel_is_scalars(g2242):
    for c in (1, 3):
        U = Matrix.diag(Z4, [c] * 4)
        assert is_scalar(U) and linear_map_is_identity(g2242, U)
    rng = random.Random(5)
    for _ in range(60):
        U = random_invertible(Z4, 4, rng)
        assert linear_map_is_identity(g2242, U) == is_scalar(U)
    near = Matrix.from_rows(Z4, [[1, 0, 0, 2], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert not linear_map_is_identity(g2242, near)


def test_mc_adjacency_preserved(g2242):
    rng = random.Random(6)
    V = g2242.vertices
    maps = [automorphism_linear(g2242, random_invertible(Z4, 4, rng)) for _ in range(2)]
    maps.append(automorphism_dual(g2242, random_invertible(Z4, 4, rng)))
    for f in maps:
        for _ in range(200):
            i = rng.randrange(560)
            j = rng.choice(g2242.neighbors(i))
            assert g2242.mc_adjacent(V[i], V[j]) == g2242.mc_adjacent(V[f(i)], V[f(j)])


def test_induced_star_map(g2242):
    lower = GrassmannGraph.build(2, 2, 4, 1)
    U = random_invertible(Z4, 4, random.Random(7))
    f = automorphism_linear(g2242, U)
    h = induced_star_map(g2242, f, lower)
    assert h is not None and verify_automorphism(lower, h)
    assert h.perm == automorphism_linear(lower, U).perm
    perm = list(range(560))
    a, b = 0, g2242.neighbors(0)[0]
    perm[a], perm[b] = b, a
    assert induced_star_map(g2242, explicit_map(perm), lower) is None


def test_induced_star_map_field():
    G = GrassmannGraph.build(2, 1, 5, 2)
    lower = GrassmannGraph.build(2, 1, 5, 1)
    F2 = RingContext(2, 1)
    U = random_invertible(F2, 5, random.Random(8))
    h = induced_star_map(G, automorphism_linear(G, U), lower)
    assert h is not None and h.perm == automorphism_linear(lower, U).perm


# --- McCoy paths ------------------------------------------------------------------------

def _check_mc_walk(G, walk, A, B):
    assert walk[0] == A and walk[-1] == B
    assert len(walk) == 2 * G.distance(A, B) + 1
    assert all(G.mc_adjacent(X, Y) for X, Y in zip(walk, walk[1:]))


def test_mc_paths(g2242):
    B_d20 = S(Z4, [[2, 0, 1, 0], [0, 0, 0, 1]])
    B_e11 = S(Z4, [[1, 0, 1, 0], [0, 0, 0, 1]])
    B_far = S(Z4, [[2, 0, 1, 0], [0, 2, 0, 1]])
    for B in (B_d20, B_e11, B_far):
        _check_mc_walk(g2242, mc_path(g2242, A0, B), A0, B)
    rng = random.Random(9)
    for _ in range(30):
        a, b = rng.sample(range(560), 2)
        A, B = g2242.vertices[a], g2242.vertices[b]
        _check_mc_walk(g2242, mc_path(g2242, A, B), A, B)
    with pytest.raises(ValueError):
        mc_path(g2242, A0, A0)


def test_vertex_from_mc_pair(g2242):
    P1 = S(Z4, [[0, 0, 0, 1]])
    P2 = S(Z4, [[0, 0, 1, 0]])
    assert vertex_from_mc_pair(P1, P2) == A0
    Z8 = RingContext(2, 3)
    with pytest.raises(NotMcAdjacent):
        vertex_from_mc_pair(S(Z8, [[1, 2, 0]]), S(Z8, [[1, 4, 0]]))
    lines = list(enumerate_subspaces(Z4, 4, 1))
    rng = random.Random(10)
    done = 0
    while done < 40:
        X, Y = rng.sample(lines, 2)
        if stack_ranks(X, Y) == (2, 2):
            W = vertex_from_mc_pair(X, Y)
            assert W.contains(X) and W.contains(Y)
            assert g2242.star_intersection(X, Y) == {g2242.index[W]}
            done += 1


# --- dual graphs ---------------------------------------------------------------------------

@pytest.mark.parametrize("p,s,n,m", [(2, 2, 4, 1), (2, 2, 3, 1), (2, 1, 4, 2)])
def test_dual_graph_isomorphism(p, s, n, m):
    G = GrassmannGraph.build(p, s, n, m)
    H, f = dual_graph_isomorphism(G)
    assert H.num_vertices == G.num_vertices
    assert sorted(f.perm) == list(range(G.num_vertices))
    assert verify_isomorphism(G, H, f.perm)
    if n == 2 * m:
        assert verify_automorphism(G, f)


def test_dual_graph_isomorphism_z4(g2242):
    H, f = dual_graph_isomorphism(g2242, g2242)
    assert verify_automorphism(g2242, f)


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        GrassmannGraph.build(2, 2, 4, 2, budget=100)
    with pytest.raises(ParameterRange):
        GrassmannGraph.build(2, 2, 4, 4)


def test_degrees_are_invariant_under_random_maps(g2242):
    U = random_invertible(Z4, 4, random.Random(11))
    assert is_invertible(U)
    f = automorphism_linear(g2242, U)
    adj = g2242.adjacency()
    for i in range(0, 560, 13):
        assert {f(j) for j in bits(adj[i])} == set(bits(adj[f(i)]))
