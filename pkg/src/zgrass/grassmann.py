"""The Grassmann graph on m-subspaces of (Z/p^s)^n.

Two m-subspaces are adjacent when their join has dimension m + 1, which
happens exactly when they share an (m-1)-subspace.  The second description
is what the materialized adjacency uses: every vertex is dropped into the
bucket of each of its (m-1)-subspaces and each bucket becomes a clique.
"""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

from .bilinear import BilinearGraph
from .budget import check_budget
from .cliques import bits, find_clique, is_clique, mask_of, max_independent_set
from .errors import (
    DualRequiresHalfDimension,
    NotInvertible,
    NotMcAdjacent,
    ParameterRange,
    ShapeError,
)
from .matrix import Matrix, is_invertible, rank_profile
from .ring import RingContext
from .subspace import (
    Subspace,
    arithmetic_distance,
    canonical_pair,
    count_subspaces,
    dual_subspace,
    enumerate_containing,
    enumerate_subspaces,
    enumerate_within,
    gaussian_binomial,
    intersection_of,
    span_if_free,
    stack_ranks,
    unit_echelon,
)

MATERIALIZE_LIMIT = 20000


def _check_params(n: int, m: int) -> None:
    if not 1 <= m < n:
        raise ParameterRange(f"need 1 <= m < n, got n={n}, m={m}")


def _mul_rows(rows: Sequence[Sequence[int]], U: Sequence[Sequence[int]], q: int) -> list[list[int]]:
    n = len(U[0])
    out = []
    for r in rows:
        acc = [0] * n
        for c, urow in zip(r, U):
            if c:
                for j, u in enumerate(urow):
                    acc[j] += c * u
        out.append([a % q for a in acc])
    return out


def _canon(ctx: RingContext, rows: Sequence[Sequence[int]], n: int) -> Subspace:
    pivots, done, residual = unit_echelon(rows, n, ctx.p, ctx.modulus)
    if residual:
        raise ShapeError("rows are not unimodular")
    return Subspace._trusted(ctx, [tuple(r) for r in done], n, pivots)


# ---------------------------------------------------------------------------
# formulas


def vertex_count(p: int, s: int, n: int, m: int) -> int:
    return count_subspaces(RingContext(p, s), n, m)


def valency_formula(p: int, s: int, n: int, m: int) -> int:
    _check_params(n, m)
    g = gaussian_binomial
    return (p ** ((s - 1) * (m - 1)) * g(m, 1, p)
            * (p ** ((s - 1) * (n - m)) * g(n - m, 1, p) + p ** (s * (n - m)) - 1))


def star_size(p: int, s: int, n: int, m: int) -> int:
    return p ** ((s - 1) * (n - m)) * gaussian_binomial(n - m + 1, 1, p)


def top_size(p: int, s: int, n: int, m: int) -> int:
    return p ** ((s - 1) * m) * gaussian_binomial(m + 1, 1, p)


def clique_number_formula(p: int, s: int, n: int, m: int) -> int:
    _check_params(n, m)
    if n < 2 * m:
        raise ParameterRange(f"formula needs n >= 2m; use the dual G({n},{n - m})")
    return star_size(p, s, n, m)


def clique_number(p: int, s: int, n: int, m: int) -> int:
    """Clique number for any 1 <= m < n, passing to the dual graph when n < 2m."""
    _check_params(n, m)
    return clique_number_formula(p, s, n, min(m, n - m))


def independence_bounds(p: int, s: int, n: int, m: int, field_alpha: int | None = None,
                        budget: int | None = None) -> tuple[int, int]:
    """Lower and upper bounds for the independence number.

    ``field_alpha`` is the independence number of the graph over GF(p);
    when omitted it is computed by exact search.  The upper bound is the
    clique-coclique bound, rounded down.
    """
    _check_params(n, m)
    if n < 2 * m:
        raise ParameterRange(f"bounds need n >= 2m, got n={n}, m={m}")
    mult = p ** ((s - 1) * (m - 1) * (n - m))
    if field_alpha is None:
        field_alpha = len(GrassmannGraph(RingContext(p, 1), n, m, budget=budget).max_independent_set())
    upper = mult * gaussian_binomial(n, m, p) // gaussian_binomial(n - m + 1, 1, p)
    return mult * field_alpha, upper


# ---------------------------------------------------------------------------
# the graph


class GrassmannGraph:
    """Vertices are canonical m-subspaces, numbered in enumeration order."""

    def __init__(self, ctx: RingContext, n: int, m: int, budget: int | None = None):
        _check_params(n, m)
        self.context = ctx
        self.n = n
        self.m = m
        self.budget = budget
        self.vertices: list[Subspace] = list(enumerate_subspaces(ctx, n, m, budget))
        self.index: dict[Subspace, int] = {X: i for i, X in enumerate(self.vertices)}
        self._adj: list[int] | None = None

    @classmethod
    def build(cls, p: int, s: int, n: int, m: int, budget: int | None = None) -> GrassmannGraph:
        return cls(RingContext(p, s), n, m, budget)

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def params(self) -> tuple[int, int, int, int]:
        return self.context.p, self.context.s, self.n, self.m

    @property
    def materialized(self) -> bool:
        return self.num_vertices <= MATERIALIZE_LIMIT

    def id_of(self, X: Subspace | Matrix | Sequence[Sequence[int]]) -> int:
        if isinstance(X, Subspace):
            return self.index[X]
        rows = X.data if isinstance(X, Matrix) else X
        return self.index[_canon(self.context, rows, self.n)]

    # adjacency

    def adjacent(self, A: Subspace, B: Subspace) -> bool:
        return stack_ranks(A, B)[0] == self.m + 1

    def mc_adjacent(self, A: Subspace, B: Subspace) -> bool:
        return stack_ranks(A, B) == (self.m + 1, self.m + 1)

    def adjacency(self) -> list[int]:
        """Bitset rows, built from the (m-1)-subspace buckets."""
        if self._adj is None:
            N = self.num_vertices
            if N > MATERIALIZE_LIMIT:
                raise ParameterRange(f"{N} vertices is above the materialization limit {MATERIALIZE_LIMIT}")
            ctx, n, m = self.context, self.n, self.m
            q = ctx.modulus
            coeffs = [Y.rows for Y in enumerate_subspaces(ctx, m, m - 1)]
            check_budget(N * len(coeffs) * m * n + N * N // 64, "Grassmann adjacency", self.budget)
            buckets: dict[Subspace, int] = {}
            for i, X in enumerate(self.vertices):
                for c in coeffs:
                    key = _canon(ctx, _mul_rows(c, X.rows, q), n) if c else Subspace.zero(ctx, n)
                    buckets[key] = buckets.get(key, 0) | (1 << i)
            adj = [0] * N
            for mask in buckets.values():
                for i in bits(mask):
                    adj[i] |= mask
            self._adj = [a & ~(1 << i) for i, a in enumerate(adj)]
        return self._adj

    def neighbors_mask(self, i: int) -> int:
        if self.materialized:
            return self.adjacency()[i]
        X = self.vertices[i]
        return mask_of(j for j, Y in enumerate(self.vertices) if j != i and self.adjacent(X, Y))

    def neighbors(self, i: int) -> list[int]:
        return list(bits(self.neighbors_mask(i)))

    def degree(self, i: int) -> int:
        return self.neighbors_mask(i).bit_count()

    def degrees(self) -> list[int]:
        return [a.bit_count() for a in self.adjacency()]

    def edge_count(self) -> int:
        return sum(self.degrees()) // 2

    def edges(self) -> Iterable[tuple[int, int]]:
        for i, a in enumerate(self.adjacency()):
            for j in bits(a >> (i + 1)):
                yield i, i + 1 + j

    # distances

    def bfs_distances(self, source: int) -> list[int]:
        """Distances from ``source``; -1 marks unreachable vertices."""
        dist = [-1] * self.num_vertices
        dist[source] = 0
        seen = 1 << source
        frontier = seen
        d = 0
        while frontier:
            d += 1
            nxt = 0
            for v in bits(frontier):
                nxt |= self.neighbors_mask(v)
            nxt &= ~seen
            for v in bits(nxt):
                dist[v] = d
            seen |= nxt
            frontier = nxt
        return dist

    def distance(self, A: Subspace, B: Subspace) -> int:
        return self.bfs_distances(self.index[A])[self.index[B]]

    def all_distances(self) -> list[list[int]]:
        check_budget(self.num_vertices**2, "all-pairs BFS", self.budget)
        return [self.bfs_distances(i) for i in range(self.num_vertices)]

    def diameter(self) -> int:
        return max(max(row) for row in self.all_distances())

    def shortest_path(self, a: int, b: int) -> list[int]:
        parent = {a: a}
        frontier = [a]
        while frontier and b not in parent:
            nxt = []
            for v in frontier:
                for w in bits(self.neighbors_mask(v)):
                    if w not in parent:
                        parent[w] = v
                        nxt.append(w)
            frontier = nxt
        path = [b]
        while path[-1] != a:
            path.append(parent[path[-1]])
        return path[::-1]

    # stars and tops

    def star(self, P: Subspace) -> frozenset[int]:
        """All vertices containing the (m-1)-subspace ``P``."""
        if P.m != self.m - 1 or P.n != self.n:
            raise ShapeError(f"star centre must be an {self.m - 1}-subspace of dimension-{self.n} space")
        return frozenset(self.index[X] for X in enumerate_containing(P, self.m, self.budget))

    def top(self, Q: Subspace) -> frozenset[int]:
        """All vertices inside the (m+1)-subspace ``Q``."""
        if Q.m != self.m + 1 or Q.n != self.n:
            raise ShapeError(f"top must be an {self.m + 1}-subspace of dimension-{self.n} space")
        return frozenset(self.index[X] for X in enumerate_within(Q, self.m, self.budget))

    def star_intersection(self, P1: Subspace, P2: Subspace) -> frozenset[int]:
        if P1 == P2:
            raise ValueError("the two stars must be distinct")
        return self.star(P1) & self.star(P2)

    def star_top_intersection(self, P: Subspace, Q: Subspace) -> frozenset[int]:
        return self.star(P) & self.top(Q)

    # cliques and independent sets

    def clique_number_formula(self) -> int:
        return clique_number(*self.params)

    def find_clique(self, size: int, candidates: int | None = None) -> list[int] | None:
        return find_clique(self.adjacency(), size, candidates)

    def max_independent_set(self) -> list[int]:
        return max_independent_set(self.adjacency())

    def is_clique(self, ids: Iterable[int]) -> bool:
        return is_clique(self.adjacency(), list(ids))

    def is_maximal_clique(self, ids: Iterable[int]) -> bool:
        ids = list(ids)
        if not self.is_clique(ids):
            return False
        common = (1 << self.num_vertices) - 1
        for v in ids:
            common &= self.neighbors_mask(v)
        return common == 0

    def is_independent(self, ids: Iterable[int]) -> bool:
        ids = list(ids)
        mask = mask_of(ids)
        return all(not (self.neighbors_mask(v) & mask) for v in ids)


# ---------------------------------------------------------------------------
# maximum cliques


@dataclass(frozen=True)
class MaxCliqueClassification:
    verdict: Literal["star", "top", "not_maximum"]
    center: Subspace | None = None


def classify_maximum_clique(G: GrassmannGraph, clique: Iterable[int], omega: int | None = None) -> MaxCliqueClassification:
    """Decide whether ``clique`` is a maximum clique of star or top shape."""
    ids = frozenset(clique)
    omega = G.clique_number_formula() if omega is None else omega
    if len(ids) != omega or not G.is_clique(ids):
        return MaxCliqueClassification("not_maximum")
    members = [G.vertices[i] for i in sorted(ids)]
    P = intersection_of(members, G.budget).as_subspace()
    if P is not None and P.m == G.m - 1 and G.star(P) == ids:
        return MaxCliqueClassification("star", P)
    stacked = [r for X in members for r in X.rows]
    Q = span_if_free(G.context, stacked, G.n)
    if Q is not None and Q.m == G.m + 1 and G.top(Q) == ids:
        return MaxCliqueClassification("top", Q)
    return MaxCliqueClassification("not_maximum")


def greedy_maximal_clique(G: GrassmannGraph, seed: Sequence[int]) -> list[int]:
    """Extend a clique by always adding the smallest-id common neighbour."""
    clique = list(seed)
    common = (1 << G.num_vertices) - 1
    for v in clique:
        common &= G.neighbors_mask(v)
    while common:
        v = (common & -common).bit_length() - 1
        clique.append(v)
        common &= G.neighbors_mask(v)
    return clique


# ---------------------------------------------------------------------------
# independent sets


def lifted_independent_set(ctx: RingContext, n: int, m: int,
                           field_set: Sequence[Subspace] | None = None,
                           bilinear_set: Sequence[Matrix] | None = None,
                           budget: int | None = None) -> list[Subspace]:
    """An independent set of size ``p^((s-1)(m-1)(n-m)) * len(field_set)``.

    Each field subspace B = (0, I_m) Q over GF(p) is lifted to the family
    (p P_i, I_m) Q, with P_i running over an independent set of the bilinear
    forms graph on m x (n-m) matrices over Z/p^(s-1).
    """
    _check_params(n, m)
    p, s, q = ctx.p, ctx.s, ctx.modulus
    if field_set is None:
        F = GrassmannGraph(RingContext(p, 1), n, m, budget)
        field_set = [F.vertices[i] for i in F.max_independent_set()]
    if s == 1:
        return [Subspace.from_rows(ctx, B.rows, n) for B in field_set]
    if bilinear_set is None:
        small = RingContext(p, s - 1)
        BG = BilinearGraph(small, m, n - m)
        bilinear_set = [BG.vertex(i) for i in max_independent_set(BG.adjacency(budget))]
    out = []
    for B in field_set:
        Qt = [list(r) for r in B.completion().data]
        for P in bilinear_set:
            rows = [[p * x % q for x in prow] + [1 if j == i else 0 for j in range(m)]
                    for i, prow in enumerate(P.data)]
            out.append(_canon(ctx, _mul_rows(rows, Qt, q), n))
    return out


# ---------------------------------------------------------------------------
# vertex maps and automorphisms


@dataclass(frozen=True)
class VertexMap:
    kind: Literal["linear", "dual_linear", "explicit"]
    perm: tuple[int, ...]
    U: Matrix | None = None

    def __call__(self, i: int) -> int:
        return self.perm[i]

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.perm))

    def digest(self) -> str:
        return permutation_digest(self.perm)


def permutation_digest(perm: Sequence[int]) -> str:
    return hashlib.sha256(",".join(map(str, perm)).encode()).hexdigest()


def _check_unit(G: GrassmannGraph, U: Matrix) -> None:
    if U.shape != (G.n, G.n) or U.context != G.context:
        raise ShapeError(f"U must be {G.n}x{G.n} over {G.context}")
    if not is_invertible(U):
        raise NotInvertible("U is not invertible")


def image_linear(X: Subspace, U: Matrix) -> Subspace:
    return _canon(X.context, _mul_rows(X.rows, U.data, X.context.modulus), X.n)


def automorphism_linear(G: GrassmannGraph, U: Matrix) -> VertexMap:
    """X -> XU."""
    _check_unit(G, U)
    return VertexMap("linear", tuple(G.index[image_linear(X, U)] for X in G.vertices), U)


def automorphism_dual(G: GrassmannGraph, U: Matrix) -> VertexMap:
    """X -> (XU)^perp, defined on the graph to itself only when n == 2m."""
    if G.n != 2 * G.m:
        raise DualRequiresHalfDimension(f"n={G.n} is not 2m={2 * G.m}")
    _check_unit(G, U)
    return VertexMap("dual_linear", tuple(G.index[dual_subspace(image_linear(X, U))] for X in G.vertices), U)


def explicit_map(perm: Sequence[int]) -> VertexMap:
    return VertexMap("explicit", tuple(perm))


def linear_map_is_identity(G: GrassmannGraph, U: Matrix) -> bool:
    """Whether X -> XU fixes every vertex (stops at the first moved one)."""
    _check_unit(G, U)
    return all(image_linear(X, U) == X for X in G.vertices)


def is_scalar(U: Matrix) -> bool:
    c = U.data[0][0]
    return c % U.context.p != 0 and all(
        U.data[i][j] == (c if i == j else 0) for i in range(U.rows) for j in range(U.cols))


def _remap(mask: int, perm: Sequence[int]) -> int:
    out = 0
    for v in bits(mask):
        out |= 1 << perm[v]
    return out


def verify_isomorphism(G: GrassmannGraph, H: GrassmannGraph, perm: Sequence[int]) -> bool:
    """Bijection V(G) -> V(H) sending edges to edges and non-edges to non-edges."""
    N = G.num_vertices
    if len(perm) != N or H.num_vertices != N or sorted(perm) != list(range(N)):
        return False
    # Comparing full neighbourhoods checks edges and non-edges at once.
    return all(_remap(G.neighbors_mask(i), perm) == H.neighbors_mask(perm[i]) for i in range(N))


def verify_automorphism(G: GrassmannGraph, f: VertexMap | Sequence[int]) -> bool:
    perm = f.perm if isinstance(f, VertexMap) else tuple(f)
    return verify_isomorphism(G, G, perm)


def dual_graph_isomorphism(G: GrassmannGraph, H: GrassmannGraph | None = None) -> tuple[GrassmannGraph, VertexMap]:
    """X -> X^perp from G(n, m) onto G(n, n - m)."""
    if H is None:
        H = GrassmannGraph(G.context, G.n, G.n - G.m, G.budget)
    if H.context != G.context or H.n != G.n or H.m != G.n - G.m:
        raise ShapeError("target must be the graph on complementary dimension")
    return H, explicit_map([H.index[dual_subspace(X)] for X in G.vertices])


def random_invertible(ctx: RingContext, n: int, rng: random.Random) -> Matrix:
    q = ctx.modulus
    while True:
        U = Matrix.from_rows(ctx, [[rng.randrange(q) for _ in range(n)] for _ in range(n)], n)
        if is_invertible(U):
            return U


def all_invertible(ctx: RingContext, n: int, budget: int | None = None) -> Iterable[Matrix]:
    q = ctx.modulus
    check_budget(q ** (n * n), f"all {n}x{n} matrices over {ctx}", budget)
    for flat in itertools.product(range(q), repeat=n * n):
        U = Matrix.from_rows(ctx, [flat[i * n:(i + 1) * n] for i in range(n)], n)
        if is_invertible(U):
            yield U


def induced_star_map(G: GrassmannGraph, f: VertexMap, lower: GrassmannGraph) -> VertexMap | None:
    """The map on (m-1)-subspaces induced by a vertex map sending stars to stars.

    ``lower`` is G(n, m-1).  Returns None when some star is not sent onto
    a star.
    """
    if lower.context != G.context or lower.n != G.n or lower.m != G.m - 1:
        raise ShapeError("lower graph must be G(n, m-1) over the same ring")
    perm = []
    for P in lower.vertices:
        image = frozenset(f.perm[i] for i in G.star(P))
        target = intersection_of([G.vertices[i] for i in sorted(image)], G.budget).as_subspace()
        if target is None or target.m != G.m - 1 or G.star(target) != image:
            return None
        perm.append(lower.index[target])
    return explicit_map(perm)


# ---------------------------------------------------------------------------
# McCoy adjacency paths


def _interpolant(A: Subspace, B: Subspace) -> Subspace | None:
    ctx = A.context
    n, m = A.n, A.m
    pair = canonical_pair(A, B)
    if pair.r != 1:
        return None
    i = pair.exponents[0]
    if n - m >= 2:
        extra = (0, 1)
    elif m >= 2:
        extra = (1, 0)
    else:
        return None
    D = [[0] * (n - m) for _ in range(m)]
    D[0][0] = ctx.p**i % ctx.modulus
    D[extra[0]][extra[1]] = (D[extra[0]][extra[1]] + 1) % ctx.modulus
    rows = [D[r] + [1 if c == r else 0 for c in range(m)] for r in range(m)]
    return _canon(ctx, _mul_rows(rows, pair.U.data, ctx.modulus), n)


def mc_interpolant(G: GrassmannGraph, A: Subspace, B: Subspace) -> Subspace:
    """A vertex McCoy-adjacent to both of the adjacent vertices A and B."""
    C = _interpolant(A, B)
    if C is not None and G.mc_adjacent(A, C) and G.mc_adjacent(C, B):
        return C
    for C in G.vertices:
        if G.mc_adjacent(A, C) and G.mc_adjacent(C, B):
            return C
    raise ValueError("no McCoy-adjacent interpolant exists")


def mc_path(G: GrassmannGraph, A: Subspace, B: Subspace) -> list[Subspace]:
    """A, A_1, ..., A_{2k-1}, B with consecutive terms McCoy adjacent, k = d(A, B)."""
    if A == B:
        raise ValueError("endpoints must be distinct")
    walk = [G.vertices[i] for i in G.shortest_path(G.index[A], G.index[B])]
    out = [walk[0]]
    for X, Y in zip(walk, walk[1:]):
        out.append(mc_interpolant(G, X, Y))
        out.append(Y)
    return out


def vertex_from_mc_pair(P1: Subspace, P2: Subspace) -> Subspace:
    """The unique subspace of one more dimension containing two McCoy-adjacent subspaces."""
    if P1.m != P2.m:
        raise ShapeError("inputs must have equal dimension")
    k = P1.m
    if stack_ranks(P1, P2) != (k + 1, k + 1):
        raise NotMcAdjacent("inputs are not McCoy adjacent")
    W = span_if_free(P1.context, P1.rows + P2.rows, P1.n)
    assert W is not None and W.m == k + 1
    return W


def distance_matches_arithmetic(G: GrassmannGraph, i: int, j: int, dist: Sequence[int] | None = None) -> bool:
    d = (dist if dist is not None else G.bfs_distances(i))[j]
    return d == arithmetic_distance(G.vertices[i], G.vertices[j])


def invert_map(f: VertexMap) -> VertexMap:
    inv = [0] * len(f.perm)
    for i, j in enumerate(f.perm):
        inv[j] = i
    return explicit_map(inv)


def rank_adjacency_agrees(G: GrassmannGraph, pairs: Iterable[tuple[int, int]] | None = None) -> bool:
    """Cross-check the bucket adjacency against the stacked inner rank."""
    ctx, m = G.context, G.m
    adj = G.adjacency()
    V = G.vertices
    it = pairs if pairs is not None else itertools.combinations(range(len(V)), 2)
    for i, j in it:
        rho = rank_profile(V[i].rows + V[j].rows, ctx.p, ctx.s)[0]
        if (rho == m + 1) != bool(adj[i] >> j & 1):
            return False
    return True
