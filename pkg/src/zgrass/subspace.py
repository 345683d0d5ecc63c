"""Free submodules ("subspaces") of (Z/p^s)^n.

A k-subspace is the row space of a k x n matrix with a right inverse.  It
is held in a unique echelon form: pivot columns are found left to right as
the columns where some not-yet-used row carries a unit, each pivot is
scaled to 1 and every other entry of a pivot column is cleared.  The pivot
set is the pivot set of the mod-p reduction, so two bases span the same
subspace exactly when their echelon forms coincide.

Everything downstream of two subspaces A, B is read off the stacked matrix
(A over B): its inner rank is the dimension of any minimal subspace
containing both, and its McCoy rank tells whether that join and the
intersection are uniquely determined.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .budget import check_budget
from .errors import (
    ContainmentDegenerate,
    DimensionOverflow,
    NotUnimodular,
    ShapeError,
)
from .matrix import Matrix, canonical_diagonalize, field_rank, invert, rank_profile
from .ring import RingContext, inverse_mod

Vector = tuple[int, ...]


# ---------------------------------------------------------------------------
# raw echelon machinery on integer rows


def unit_echelon(rows: Iterable[Sequence[int]], n: int, p: int, q: int) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Greedy left-to-right elimination using unit pivots only.

    Returns ``(pivot_columns, pivot_rows, residual_rows)``.  Pivot rows are
    normalized (1 at their pivot, zeros elsewhere in pivot columns); the
    residual rows have no unit entry left and are dropped when zero.
    """
    pending = [list(r) for r in rows]
    pivots: list[int] = []
    done: list[list[int]] = []
    for j in range(n):
        hit = next((i for i, r in enumerate(pending) if r[j] % p), None)
        if hit is None:
            continue
        row = pending.pop(hit)
        inv = inverse_mod(row[j], q)
        row = [v * inv % q for v in row]
        for group in (done, pending):
            for i, r in enumerate(group):
                c = r[j]
                if c:
                    group[i] = [(x - c * y) % q for x, y in zip(r, row)]
        pivots.append(j)
        done.append(row)
    residual = [r for r in pending if any(r)]
    return pivots, done, residual


def echelon_rows(rows: Sequence[Sequence[int]], n: int, p: int, q: int) -> tuple[Vector, ...]:
    """Canonical rows of a right-invertible matrix; raises NotUnimodular otherwise."""
    pivots, done, residual = unit_echelon(rows, n, p, q)
    if len(pivots) != len(rows):
        raise NotUnimodular(f"{len(rows)} rows but McCoy rank {len(pivots)}")
    return tuple(tuple(r) for r in done)


# ---------------------------------------------------------------------------
# the Subspace value type


@dataclass(frozen=True)
class Subspace:
    """A subspace in canonical echelon form; equality is structural."""

    basis: Matrix
    pivots: tuple[int, ...] = field(compare=False)

    @property
    def context(self) -> RingContext:
        return self.basis.context

    @property
    def n(self) -> int:
        return self.basis.cols

    @property
    def m(self) -> int:
        return self.basis.rows

    dim = m

    @property
    def rows(self) -> tuple[Vector, ...]:
        return self.basis.data

    @classmethod
    def zero(cls, ctx: RingContext, n: int) -> Subspace:
        return cls(Matrix(ctx, 0, n, ()), ())

    @classmethod
    def full(cls, ctx: RingContext, n: int) -> Subspace:
        return cls(Matrix.identity(ctx, n), tuple(range(n)))

    @classmethod
    def from_rows(cls, ctx: RingContext, rows: Sequence[Sequence[int]], n: int | None = None) -> Subspace:
        if n is None:
            n = len(rows[0])
        return canonicalize_subspace(Matrix.from_rows(ctx, rows, n))

    @classmethod
    def _trusted(cls, ctx: RingContext, rows: Sequence[Vector], n: int, pivots: Sequence[int]) -> Subspace:
        return cls(Matrix(ctx, len(rows), n, tuple(rows)), tuple(pivots))

    def contains_vector(self, v: Sequence[int]) -> bool:
        q = self.context.modulus
        acc = [0] * self.n
        for row, j in zip(self.rows, self.pivots):
            c = v[j] % q
            if c:
                for k, x in enumerate(row):
                    acc[k] += c * x
        return all((a - b) % q == 0 for a, b in zip(acc, v))

    def contains(self, other: Subspace) -> bool:
        return all(self.contains_vector(r) for r in other.rows)

    def __le__(self, other: Subspace) -> bool:
        return other.contains(self)

    def vectors(self) -> Iterator[Vector]:
        """Every element of the subspace (p^(s*m) of them)."""
        q = self.context.modulus
        n = self.n
        for coeffs in itertools.product(range(q), repeat=self.m):
            v = [0] * n
            for c, row in zip(coeffs, self.rows):
                if c:
                    for k, x in enumerate(row):
                        v[k] += c * x
            yield tuple(x % q for x in v)

    def complement_rows(self) -> list[Vector]:
        """Unit vectors at the non-pivot columns; together with the basis they form an invertible matrix."""
        piv = set(self.pivots)
        return [tuple(1 if k == j else 0 for k in range(self.n)) for j in range(self.n) if j not in piv]

    def completion(self) -> Matrix:
        """Invertible U with ``self == (0, I_m) @ U``."""
        return Matrix.from_rows(self.context, self.complement_rows() + list(self.rows), self.n)

    def project(self) -> Subspace:
        f = self.context.residue_field()
        return Subspace.from_rows(f, self.rows, self.n) if self.m else Subspace.zero(f, self.n)

    def __repr__(self) -> str:
        return f"Subspace({self.context}, n={self.n}, rows={[list(r) for r in self.rows]})"

    def to_json(self) -> dict:
        ctx = self.context
        return {"p": ctx.p, "s": ctx.s, "n": self.n, "m": self.m, "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, obj: dict) -> Subspace:
        ctx = RingContext(int(obj["p"]), int(obj["s"]))
        n = int(obj["n"])
        if not obj["rows"]:
            return cls.zero(ctx, n)
        sub = cls.from_rows(ctx, obj["rows"], n)
        if sub.m != int(obj["m"]):
            raise ShapeError(f"record claims m={obj['m']} but basis has {sub.m} rows")
        return sub


def canonicalize_subspace(X: Matrix) -> Subspace:
    """Unique echelon representative of the row space of ``X``."""
    ctx = X.context
    if X.rows == 0:
        return Subspace.zero(ctx, X.cols)
    pivots, done, _ = unit_echelon(X.data, X.cols, ctx.p, ctx.modulus)
    if len(pivots) != X.rows:
        raise NotUnimodular(f"{X.rows} rows but McCoy rank {len(pivots)}")
    return Subspace._trusted(ctx, [tuple(r) for r in done], X.cols, pivots)


def span_if_free(ctx: RingContext, rows: Sequence[Sequence[int]], n: int) -> Subspace | None:
    """The row space of an arbitrary matrix if it is a subspace, else None."""
    pivots, done, residual = unit_echelon(rows, n, ctx.p, ctx.modulus)
    if residual:
        return None
    return Subspace._trusted(ctx, [tuple(r) for r in done], n, pivots)


# ---------------------------------------------------------------------------
# counting


def gaussian_binomial(n: int, m: int, q: int) -> int:
    """Number of m-dimensional subspaces of an n-dimensional space over GF(q)."""
    if n < 0 or m < 0:
        raise ValueError("n and m must be non-negative")
    if m > n:
        return 0
    num = den = 1
    for i in range(1, m + 1):
        num *= q ** (n + 1 - i) - 1
        den *= q**i - 1
    return num // den


def count_subspaces(ctx: RingContext, n: int, m: int) -> int:
    p, s = ctx.p, ctx.s
    return p ** ((s - 1) * m * (n - m)) * gaussian_binomial(n, m, p) if 0 <= m <= n else 0


def count_within(ctx: RingContext, m: int, k: int) -> int:
    """k-subspaces inside a fixed m-subspace."""
    return count_subspaces(ctx, m, k)


def count_containing(ctx: RingContext, n: int, k: int, m: int) -> int:
    """m-subspaces of an n-space containing a fixed k-subspace."""
    p, s = ctx.p, ctx.s
    if not 0 <= k <= m <= n:
        return 0
    return p ** ((s - 1) * (m - k) * (n - m)) * gaussian_binomial(n - k, m - k, p)


# ---------------------------------------------------------------------------
# enumeration


def _field_echelon_forms(p: int, n: int, m: int) -> Iterator[tuple[tuple[int, ...], list[list[int]]]]:
    """Reduced row echelon forms of rank m over GF(p), with their pivot sets."""
    for pivots in itertools.combinations(range(n), m):
        free = [(i, j) for i, c in enumerate(pivots) for j in range(c + 1, n) if j not in pivots]
        for vals in itertools.product(range(p), repeat=len(free)):
            rows = [[0] * n for _ in range(m)]
            for i, c in enumerate(pivots):
                rows[i][c] = 1
            for (i, j), v in zip(free, vals):
                rows[i][j] = v
            yield pivots, rows


def enumerate_subspaces(ctx: RingContext, n: int, m: int, budget: int | None = None) -> Iterator[Subspace]:
    """Every m-subspace of (Z/p^s)^n exactly once, in canonical form.

    Each subspace over the residue field is lifted by adding every
    multiple-of-p perturbation to its non-pivot block; the lifts are the
    full preimage of that field subspace.
    """
    if not 0 <= m <= n:
        raise ShapeError(f"need 0 <= m <= n, got n={n}, m={m}")
    check_budget(count_subspaces(ctx, n, m) * max(1, m * n), f"enumerate {m}-subspaces of Z_{ctx.modulus}^{n}", budget)
    if m == 0:
        yield Subspace.zero(ctx, n)
        return
    p, q = ctx.p, ctx.modulus
    lifts = range(0, q, p)
    for pivots, base in _field_echelon_forms(p, n, m):
        nonpiv = [j for j in range(n) if j not in pivots]
        slots = [(i, j) for i in range(m) for j in nonpiv]
        for pert in itertools.product(lifts, repeat=len(slots)):
            rows = [list(r) for r in base]
            for (i, j), d in zip(slots, pert):
                rows[i][j] = (rows[i][j] + d) % q
            yield Subspace._trusted(ctx, [tuple(r) for r in rows], n, pivots)


def enumerate_containing(K: Subspace, d: int, budget: int | None = None) -> Iterator[Subspace]:
    """All d-subspaces containing ``K``.

    With ``K == (0, I_k) U`` these are ``((X, 0), (0, I_k)) U`` for X
    ranging over the (d-k)-subspaces of the complementary coordinates.
    """
    ctx, n, k = K.context, K.n, K.m
    if not k <= d <= n:
        return
    comp = K.complement_rows()
    q = ctx.modulus
    for X in enumerate_subspaces(ctx, n - k, d - k, budget):
        top = [tuple(sum(x * c[j] for x, c in zip(xr, comp)) % q for j in range(n)) for xr in X.rows]
        yield Subspace.from_rows(ctx, top + list(K.rows), n)


def enumerate_within(Q: Subspace, k: int, budget: int | None = None) -> Iterator[Subspace]:
    """All k-subspaces of ``Q``."""
    ctx, n = Q.context, Q.n
    q = ctx.modulus
    for Y in enumerate_subspaces(ctx, Q.m, k, budget):
        rows = [tuple(sum(y * r[j] for y, r in zip(yr, Q.rows)) % q for j in range(n)) for yr in Y.rows]
        yield Subspace.from_rows(ctx, rows, n) if rows else Subspace.zero(ctx, n)


# ---------------------------------------------------------------------------
# pairs of subspaces


def _same_space(A: Subspace, B: Subspace) -> None:
    if A.context != B.context or A.n != B.n:
        raise ShapeError("subspaces live in different ambient spaces")


def stack_ranks(A: Subspace, B: Subspace) -> tuple[int, int]:
    """(inner rank, McCoy rank) of A stacked over B."""
    _same_space(A, B)
    ctx = A.context
    return rank_profile(A.rows + B.rows, ctx.p, ctx.s)


def join_dimension(A: Subspace, B: Subspace) -> int:
    return stack_ranks(A, B)[0]


def arithmetic_distance(A: Subspace, B: Subspace) -> int:
    return join_dimension(A, B) - max(A.m, B.m)


@dataclass(frozen=True)
class LinearSubset:
    """An explicit finite submodule of (Z/p^s)^n."""

    context: RingContext
    n: int
    vectors: frozenset[Vector]

    @property
    def dim(self) -> int:
        """Size of a largest unimodular subset: the rank of the mod-p image."""
        return field_rank(list(self.vectors), self.context.p) if self.vectors else 0

    @property
    def is_free(self) -> bool:
        ctx = self.context
        return len(self.vectors) == ctx.modulus**self.dim

    def is_closed(self) -> bool:
        q = self.context.modulus
        vs = self.vectors
        if tuple([0] * self.n) not in vs:
            return False
        for v in vs:
            for c in range(q):
                if tuple(c * x % q for x in v) not in vs:
                    return False
        for v, w in itertools.combinations(vs, 2):
            if tuple((a + b) % q for a, b in zip(v, w)) not in vs:
                return False
        return True

    def as_subspace(self) -> Subspace | None:
        if not self.is_free:
            return None
        if self.dim == 0:
            return Subspace.zero(self.context, self.n)
        return span_if_free(self.context, sorted(self.vectors), self.n)

    def __len__(self) -> int:
        return len(self.vectors)


def intersection_module(A: Subspace, B: Subspace, budget: int | None = None) -> LinearSubset:
    """All vectors lying in both row spaces, found by sweeping the smaller one."""
    _same_space(A, B)
    small, big = (A, B) if A.m <= B.m else (B, A)
    ctx = A.context
    check_budget(ctx.modulus**small.m * A.n, "intersection sweep", budget)
    vecs = frozenset(v for v in small.vectors() if big.contains_vector(v))
    return LinearSubset(ctx, A.n, vecs)


def intersection_of(subspaces: Sequence[Subspace], budget: int | None = None) -> LinearSubset:
    first = min(subspaces, key=lambda S: S.m)
    ctx = first.context
    check_budget(ctx.modulus**first.m * len(subspaces), "intersection sweep", budget)
    vecs = frozenset(v for v in first.vectors() if all(S.contains_vector(v) for S in subspaces))
    return LinearSubset(ctx, first.n, vecs)


def meets_trivially(A: Subspace, B: Subspace) -> tuple[bool, bool]:
    """(dim(A ∩ B) == 0, A ∩ B == {0}) from the stack's two ranks."""
    if A.m + B.m > A.n:
        raise DimensionOverflow(f"dim A + dim B = {A.m + B.m} > n = {A.n}")
    rho, rk = stack_ranks(A, B)
    return rho == A.m + B.m, rk == A.m + B.m


def intersection_is_fixed(A: Subspace, B: Subspace) -> bool:
    rho, rk = stack_ranks(A, B)
    return rho == rk


def join_is_fixed(A: Subspace, B: Subspace) -> bool:
    rho, rk = stack_ranks(A, B)
    return rho == rk or rho == A.n


def enumerate_joins(A: Subspace, B: Subspace, budget: int | None = None) -> list[Subspace]:
    """Every subspace of minimum dimension containing both ``A`` and ``B``."""
    _same_space(A, B)
    d = join_dimension(A, B)
    big, other = (A, B) if A.m >= B.m else (B, A)
    ctx = A.context
    check_budget(count_containing(ctx, A.n, big.m, d) * A.n, "join enumeration", budget)
    return [W for W in enumerate_containing(big, d, budget) if W.contains(other)]


@dataclass(frozen=True)
class CanonicalPair:
    """``A == (0, I_k) U`` and ``B == (D, 0, I_m) U`` with D diagonal of p-powers."""

    U: Matrix
    r: int
    exponents: tuple[int, ...]
    k: int
    m: int

    def D(self) -> Matrix:
        ctx = self.U.context
        n = self.U.rows
        return Matrix.diag(ctx, [ctx.p**e for e in self.exponents], self.m, n - self.k)

    def A_form(self) -> Matrix:
        ctx = self.U.context
        n = self.U.rows
        return Matrix.zeros(ctx, self.k, n - self.k).hstack(Matrix.identity(ctx, self.k))

    def B_form(self) -> Matrix:
        ctx = self.U.context
        return self.D().hstack(Matrix.zeros(ctx, self.m, self.k - self.m)).hstack(Matrix.identity(ctx, self.m))


def canonical_pair(A: Subspace, B: Subspace) -> CanonicalPair:
    """Simultaneous normal form of a k-subspace ``A`` and an m-subspace ``B``.

    Requires ``k >= m >= 1``, ``n > k`` and ``B`` not inside ``A``.  The
    result is checked by rebuilding both subspaces from it.
    """
    _same_space(A, B)
    ctx = A.context
    p, q = ctx.p, ctx.modulus
    n, k, m = A.n, A.m, B.m
    if not (n > k >= m >= 1):
        raise ShapeError(f"need n > dim A >= dim B >= 1, got n={n}, k={k}, m={m}")
    if A.contains(B):
        raise ContainmentDegenerate("B is contained in A")

    U1 = A.completion()  # A == (0, I_k) U1
    Bp = Matrix(ctx, m, n, B.rows) @ invert(U1)
    B1 = Bp.submatrix(range(m), range(n - k))
    Y = Bp.submatrix(range(m), range(n - k, n))

    nf = canonical_diagonalize(B1)  # B1 == P N Q
    r = nf.inner_rank
    exps = (0,) * nf.r + nf.exponents
    Y = invert(nf.P) @ Y  # B ~ (N Q, Y)

    # Replace the unit rows of Y so that the whole block Y becomes right-invertible.
    t = nf.r
    ylist = Y.tolist()
    kept = ylist[t:]
    fpiv, _, _ = unit_echelon([[v % p for v in row] for row in kept], k, p, p)
    spare = [j for j in range(k) if j not in fpiv]
    Z = [[0] * k for _ in range(n - k)]
    for i in range(t):
        target = [1 if c == spare[i] else 0 for c in range(k)]
        Z[i] = [(a - b) % q for a, b in zip(target, ylist[i])]
        ylist[i] = target
    Yt = Matrix.from_rows(ctx, ylist, k)
    K = Matrix.from_rows(ctx, Subspace.from_rows(ctx, Yt.data, k).complement_rows() + list(Yt.data), k)
    # Rebuild exactly from the pieces: Yt == (0, I_m) K requires K's last rows to be Yt.

    E_inv = Matrix.identity(ctx, n - k).hstack(-Matrix.from_rows(ctx, Z, k)).vstack(
        Matrix.zeros(ctx, k, n - k).hstack(Matrix.identity(ctx, k)))
    diagK = Matrix.identity(ctx, n - k).hstack(Matrix.zeros(ctx, n - k, k)).vstack(
        Matrix.zeros(ctx, k, n - k).hstack(K))
    diagQ = nf.Q.hstack(Matrix.zeros(ctx, n - k, k)).vstack(
        Matrix.zeros(ctx, k, n - k).hstack(Matrix.identity(ctx, k)))
    U = diagK @ E_inv @ diagQ @ U1

    pair = CanonicalPair(U, r, exps, k, m)
    if canonicalize_subspace(pair.A_form() @ U) != A or canonicalize_subspace(pair.B_form() @ U) != B:
        raise AssertionError("canonical pair failed to reproduce its inputs")
    return pair


# ---------------------------------------------------------------------------
# duality


def dual_subspace(P: Subspace) -> Subspace:
    """All vectors orthogonal to ``P``: with ``P == (0, I_m) U`` this is
    ``(I_{n-m}, 0)`` times the inverse transpose of ``U``."""
    ctx, n, m = P.context, P.n, P.m
    if m == 0:
        return Subspace.full(ctx, n)
    if m == n:
        return Subspace.zero(ctx, n)
    Uinv_t = invert(P.completion()).transpose()
    return canonicalize_subspace(Uinv_t.submatrix(range(n - m), range(n)))


def is_orthogonal(v: Sequence[int], w: Sequence[int], q: int) -> bool:
    return sum(a * b for a, b in zip(v, w)) % q == 0


def random_subspace(ctx: RingContext, n: int, m: int, rng) -> Subspace:
    """A random m-subspace (rejection sampling on random m x n matrices)."""
    if m == 0:
        return Subspace.zero(ctx, n)
    q = ctx.modulus
    while True:
        rows = [[rng.randrange(q) for _ in range(n)] for _ in range(m)]
        sub = span_if_free(ctx, rows, n)
        if sub is not None and sub.m == m:
            return sub
