"""The bilinear forms graph on m x n matrices over Z/p^s.

Two matrices are adjacent when their difference has inner rank one.  The
graph is a Cayley graph of the additive group, so adjacency is
materialized by translating the set of rank-one matrices.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Literal

from .budget import check_budget
from .cliques import bits, mask_of
from .errors import NotInvertible, ShapeError
from .matrix import Matrix, is_invertible, rank_profile
from .ring import RingContext


def bf_adjacent(A: Matrix, B: Matrix) -> bool:
    if A.shape != B.shape:
        raise ShapeError(f"{A.shape} vs {B.shape}")
    ctx = A.context
    return rank_profile((A - B).data, ctx.p, ctx.s)[0] == 1


def bf_clique_number(ctx: RingContext, m: int, n: int) -> int:
    return ctx.p ** (ctx.s * max(m, n))


def bf_independence_number(ctx: RingContext, m: int, n: int) -> int:
    # Transposition is an isomorphism, so only the smaller side matters.
    m, n = min(m, n), max(m, n)
    return ctx.p ** (ctx.s * n * (m - 1))


class BilinearGraph:
    """Vertices are all m x n matrices, indexed in mixed radix (row-major, first entry least significant)."""

    def __init__(self, ctx: RingContext, m: int, n: int):
        if m < 1 or n < 1:
            raise ShapeError("m and n must be positive")
        self.context = ctx
        self.m = m
        self.n = n
        self._adj: list[int] | None = None

    @property
    def num_vertices(self) -> int:
        return self.context.modulus ** (self.m * self.n)

    def vertex(self, idx: int) -> Matrix:
        q = self.context.modulus
        flat = []
        for _ in range(self.m * self.n):
            idx, d = divmod(idx, q)
            flat.append(d)
        return Matrix.from_rows(self.context, [flat[i * self.n:(i + 1) * self.n] for i in range(self.m)], self.n)

    def index(self, A: Matrix) -> int:
        q = self.context.modulus
        idx = 0
        for v in reversed([v for r in A.data for v in r]):
            idx = idx * q + v
        return idx

    def adjacent(self, A: Matrix, B: Matrix) -> bool:
        return bf_adjacent(A, B)

    def rank_one_indices(self) -> list[int]:
        ctx = self.context
        return [i for i in range(self.num_vertices)
                if rank_profile(self.vertex(i).data, ctx.p, ctx.s)[0] == 1]

    def adjacency(self, budget: int | None = None) -> list[int]:
        if self._adj is None:
            N = self.num_vertices
            check_budget(N * N // 8 + N * 16, "bilinear graph adjacency", budget)
            q = self.context.modulus
            ones = [self._digits(i) for i in self.rank_one_indices()]
            adj = []
            for i in range(N):
                a = self._digits(i)
                row = 0
                for d in ones:
                    row |= 1 << self._from_digits([(x + y) % q for x, y in zip(a, d)])
                adj.append(row)
            self._adj = adj
        return self._adj

    def _digits(self, idx: int) -> list[int]:
        q = self.context.modulus
        out = []
        for _ in range(self.m * self.n):
            idx, d = divmod(idx, q)
            out.append(d)
        return out

    def _from_digits(self, digits: list[int]) -> int:
        q = self.context.modulus
        idx = 0
        for d in reversed(digits):
            idx = idx * q + d
        return idx

    def clique_number(self) -> int:
        return bf_clique_number(self.context, self.m, self.n)

    def independence_number(self) -> int:
        return bf_independence_number(self.context, self.m, self.n)

    # the two families of maximal cliques

    def maximal_clique(self, kind: Literal["one", "two"], T: Matrix, A: Matrix | None = None) -> frozenset[int]:
        """``T @ M1 + A`` (kind "one") or ``N1 @ T + A`` (kind "two") as vertex ids.

        M1 holds the matrices supported on the first row, N1 those
        supported on the first column.
        """
        ctx, m, n = self.context, self.m, self.n
        if not is_invertible(T):
            raise NotInvertible("clique generator must be invertible")
        A = A if A is not None else Matrix.zeros(ctx, m, n)
        q = ctx.modulus
        out = set()
        if kind == "one":
            for xs in itertools.product(range(q), repeat=n):
                M = Matrix.from_rows(ctx, [list(xs)] + [[0] * n for _ in range(m - 1)], n)
                out.add(self.index(T @ M + A))
        elif kind == "two":
            for xs in itertools.product(range(q), repeat=m):
                N = Matrix.from_rows(ctx, [[x] + [0] * (n - 1) for x in xs], n)
                out.add(self.index(N @ T + A))
        else:
            raise ValueError(f"unknown clique kind {kind!r}")
        return frozenset(out)

    def clique_type(self, clique: Iterable[int]) -> str | None:
        """'one' or 'two' when ``clique`` is a translate of a row/column family, else None.

        A type-one clique through 0 is ``{u x : x in R^n}`` for a
        unimodular column u; type two is ``{y v}`` for a unimodular row v.
        """
        ids = frozenset(clique)
        if not ids:
            return None
        ctx, m, n = self.context, self.m, self.n
        q, p = ctx.modulus, ctx.p
        base = self.vertex(min(ids))
        shifted = frozenset(self.index(self.vertex(i) - base) for i in ids)
        for u in itertools.product(range(q), repeat=m):
            if not any(x % p for x in u):
                continue
            fam = frozenset(
                self.index(Matrix.from_rows(ctx, [[ui * x % q for x in xs] for ui in u], n))
                for xs in itertools.product(range(q), repeat=n))
            if fam == shifted:
                return "one"
        for v in itertools.product(range(q), repeat=n):
            if not any(x % p for x in v):
                continue
            fam = frozenset(
                self.index(Matrix.from_rows(ctx, [[y * vj % q for vj in v] for y in ys], n))
                for ys in itertools.product(range(q), repeat=m))
            if fam == shifted:
                return "two"
        return None

    def radical_mask(self) -> int:
        """Vertices whose entries all lie in the maximal ideal."""
        p = self.context.p
        return mask_of(i for i in range(self.num_vertices) if all(d % p == 0 for d in self._digits(i)))


def translate(mask: int, shift: int, graph: BilinearGraph) -> int:
    q = graph.context.modulus
    s = graph._digits(shift)
    return mask_of(graph._from_digits([(a + b) % q for a, b in zip(graph._digits(i), s)]) for i in bits(mask))
