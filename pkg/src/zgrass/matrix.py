"""Dense matrices over Z/p^s.

The central routine is :func:`canonical_diagonalize`, which writes any
matrix as ``P @ diag(I_r, p^k1, ..., p^kt, 0) @ Q`` with ``P`` and ``Q``
invertible.  Inner rank is ``r + t`` and McCoy rank is ``r``; the McCoy
rank is also the rank of the mod-p image, which is how :func:`mccoy_rank`
computes it.

Hot loops (graph construction, all-pairs scans) call :func:`rank_profile`
directly on tuples of integer rows to skip object overhead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ContextMismatch, NotInvertible, ShapeError
from .ring import RingContext, RingElement, inverse_mod, valuation

Rows = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Matrix:
    """Immutable ``rows x cols`` matrix of canonical residues."""

    context: RingContext
    rows: int
    cols: int
    data: Rows

    def __post_init__(self) -> None:
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ShapeError(f"entries do not match shape {self.rows}x{self.cols}")

    # construction

    @classmethod
    def from_rows(cls, ctx: RingContext, rows: Iterable[Iterable[int]], cols: int | None = None) -> Matrix:
        q = ctx.modulus
        data = tuple(tuple(int(v) % q for v in row) for row in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(ctx, len(data), cols, data)

    @classmethod
    def zeros(cls, ctx: RingContext, rows: int, cols: int) -> Matrix:
        return cls(ctx, rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, ctx: RingContext, n: int) -> Matrix:
        return cls(ctx, n, n, _identity(n))

    @classmethod
    def unit(cls, ctx: RingContext, rows: int, cols: int, i: int, j: int) -> Matrix:
        """The matrix E_ij with a single 1 at (i, j), zero-based."""
        data = [[0] * cols for _ in range(rows)]
        data[i][j] = 1
        return cls.from_rows(ctx, data, cols)

    @classmethod
    def diag(cls, ctx: RingContext, values: Sequence[int], rows: int | None = None, cols: int | None = None) -> Matrix:
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        data = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            data[i][i] = v
        return cls.from_rows(ctx, data, cols)

    # access

    def __getitem__(self, idx: tuple[int, int]) -> RingElement:
        i, j = idx
        return RingElement(self.data[i][j], self.context)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    def is_zero(self) -> bool:
        return all(v == 0 for r in self.data for v in r)

    # arithmetic

    def _check(self, other: Matrix) -> None:
        if other.context != self.context:
            raise ContextMismatch(f"{other.context} vs {self.context}")

    def __add__(self, other: Matrix) -> Matrix:
        self._check(other)
        if other.shape != self.shape:
            raise ShapeError(f"{self.shape} + {other.shape}")
        q = self.context.modulus
        data = tuple(tuple((a + b) % q for a, b in zip(r1, r2)) for r1, r2 in zip(self.data, other.data))
        return Matrix(self.context, self.rows, self.cols, data)

    def __neg__(self) -> Matrix:
        q = self.context.modulus
        return Matrix(self.context, self.rows, self.cols, tuple(tuple(-v % q for v in r) for r in self.data))

    def __sub__(self, other: Matrix) -> Matrix:
        return self + (-other)

    def __matmul__(self, other: Matrix) -> Matrix:
        self._check(other)
        if self.cols != other.rows:
            raise ShapeError(f"{self.shape} @ {other.shape}")
        return Matrix(self.context, self.rows, other.cols,
                      _matmul(self.data, other.data, other.cols, self.context.modulus))

    def scale(self, c: int) -> Matrix:
        q = self.context.modulus
        return Matrix(self.context, self.rows, self.cols, tuple(tuple(c * v % q for v in r) for r in self.data))

    def transpose(self) -> Matrix:
        if self.rows == 0:
            return Matrix(self.context, self.cols, 0, tuple(() for _ in range(self.cols)))
        return Matrix(self.context, self.cols, self.rows, tuple(tuple(c) for c in zip(*self.data)))

    def hstack(self, other: Matrix) -> Matrix:
        self._check(other)
        if self.rows != other.rows:
            raise ShapeError(f"hstack {self.shape} | {other.shape}")
        return Matrix(self.context, self.rows, self.cols + other.cols,
                      tuple(a + b for a, b in zip(self.data, other.data)))

    def vstack(self, other: Matrix) -> Matrix:
        self._check(other)
        if self.cols != other.cols:
            raise ShapeError(f"vstack {self.shape} / {other.shape}")
        return Matrix(self.context, self.rows + other.rows, self.cols, self.data + other.data)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        return Matrix(self.context, len(rows), len(cols),
                      tuple(tuple(self.data[i][j] for j in cols) for i in rows))

    def reinterpret(self, ctx: RingContext) -> Matrix:
        """Read the integer entries as residues of another ring."""
        return Matrix.from_rows(ctx, self.data, self.cols)

    # serialization

    def to_json(self) -> dict:
        return {"p": self.context.p, "s": self.context.s, "rows": self.rows, "cols": self.cols,
                "entries": [v for r in self.data for v in r]}

    @classmethod
    def from_json(cls, obj: dict | str) -> Matrix:
        if isinstance(obj, str):
            obj = json.loads(obj)
        ctx = RingContext(int(obj["p"]), int(obj["s"]))
        rows, cols = int(obj["rows"]), int(obj["cols"])
        entries = [int(v) for v in obj["entries"]]
        if len(entries) != rows * cols:
            raise ShapeError(f"{len(entries)} entries for shape {rows}x{cols}")
        for v in entries:
            if not 0 <= v < ctx.modulus:
                raise ValueError(f"entry {v} outside [0, {ctx.modulus})")
        return cls(ctx, rows, cols, tuple(tuple(entries[i * cols:(i + 1) * cols]) for i in range(rows)))

    def __repr__(self) -> str:
        return f"Matrix({self.context}, {self.tolist()})"


def _identity(n: int) -> Rows:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _matmul(a: Rows, b: Rows, bcols: int, q: int) -> Rows:
    bt = list(zip(*b)) if b else [()] * bcols
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) % q for col in bt) for row in a)


@dataclass(frozen=True)
class NormalForm:
    """``A == P @ diag(I_r, p^k1, ..., p^kt, 0) @ Q`` with P, Q invertible."""

    P: Matrix
    Q: Matrix
    r: int
    exponents: tuple[int, ...]
    rows: int
    cols: int

    @property
    def t(self) -> int:
        return len(self.exponents)

    @property
    def inner_rank(self) -> int:
        return self.r + self.t

    def diagonal(self) -> Matrix:
        ctx = self.P.context
        vals = [1] * self.r + [ctx.p**k for k in self.exponents]
        return Matrix.diag(ctx, vals, self.rows, self.cols)

    def reconstruct(self) -> Matrix:
        return self.P @ self.diagonal() @ self.Q


def canonical_diagonalize(A: Matrix) -> NormalForm:
    """Diagonal normal form by minimum-valuation pivoting.

    Each step picks the entry of least p-adic valuation in the remaining
    block (first in row-major order), normalizes it to a power of p and
    clears its row and column.  The exponents come out nondecreasing.
    """
    ctx = A.context
    p, s, q = ctx.p, ctx.s, ctx.modulus
    m, n = A.rows, A.cols
    a = [list(r) for r in A.data]
    # Track Pm = L^{-1} and Qm = R^{-1} where L @ A @ R is diagonal.
    Pm = [list(r) for r in _identity(m)]
    Qm = [list(r) for r in _identity(n)]
    exps: list[int] = []
    for k in range(min(m, n)):
        best = None
        for i in range(k, m):
            row = a[i]
            for j in range(k, n):
                v = row[j]
                if v:
                    e = valuation(v, p, s)
                    if best is None or e < best[0]:
                        best = (e, i, j)
                        if e == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        e, i, j = best
        if i != k:
            a[i], a[k] = a[k], a[i]
            for row in Pm:
                row[i], row[k] = row[k], row[i]
        if j != k:
            for row in a:
                row[j], row[k] = row[k], row[j]
            Qm[j], Qm[k] = Qm[k], Qm[j]
        pe = p**e
        u = (a[k][k] // pe) % q
        uinv = inverse_mod(u, q)
        a[k] = [v * uinv % q for v in a[k]]
        for row in Pm:
            row[k] = row[k] * u % q
        for i2 in range(k + 1, m):
            c = a[i2][k] // pe
            if c:
                a[i2] = [(x - c * y) % q for x, y in zip(a[i2], a[k])]
                # Pm <- Pm @ (I + c E_{i2,k}): column k += c * column i2
                for row in Pm:
                    row[k] = (row[k] + c * row[i2]) % q
        for j2 in range(k + 1, n):
            d = a[k][j2] // pe
            if d:
                a[k][j2] = 0
                # Qm <- (I + d E_{k,j2}) @ Qm: row k += d * row j2
                Qm[k] = [(x + d * y) % q for x, y in zip(Qm[k], Qm[j2])]
        exps.append(e)
    r = sum(1 for e in exps if e == 0)
    return NormalForm(
        P=Matrix.from_rows(ctx, Pm, m),
        Q=Matrix.from_rows(ctx, Qm, n),
        r=r,
        exponents=tuple(e for e in exps if e > 0),
        rows=m,
        cols=n,
    )


def rank_profile(rows: Sequence[Sequence[int]], p: int, s: int) -> tuple[int, int]:
    """(inner rank, McCoy rank) of an integer row list over Z/p^s."""
    q = p**s
    a = [list(r) for r in rows if any(r)]
    rho = rk = 0
    while a:
        best_e = s
        bi = bj = -1
        for i, row in enumerate(a):
            for j, v in enumerate(row):
                if v:
                    e = 0
                    while v % p == 0:
                        v //= p
                        e += 1
                    if e < best_e:
                        best_e, bi, bj = e, i, j
                        if e == 0:
                            break
            if best_e == 0:
                break
        if bi < 0:
            break
        rho += 1
        if best_e == 0:
            rk += 1
        piv = a.pop(bi)
        pe = p**best_e
        uinv = inverse_mod(piv[bj] // pe, q)
        piv = [v * uinv % q for v in piv]
        nxt = []
        for row in a:
            c = row[bj] // pe
            if c:
                row = [(x - c * y) % q for x, y in zip(row, piv)]
            del row[bj]
            if any(row):
                nxt.append(row)
        a = nxt
    return rho, rk


def inner_rank(A: Matrix) -> int:
    return rank_profile(A.data, A.context.p, A.context.s)[0]


def field_rank(rows: Sequence[Sequence[int]], p: int) -> int:
    return rank_profile([[v % p for v in r] for r in rows], p, 1)[0]


def mccoy_rank(A: Matrix) -> int:
    """McCoy rank as the rank of the mod-p image over the residue field."""
    return field_rank(A.data, A.context.p)


def project_matrix(X: Matrix) -> Matrix:
    f = X.context.residue_field()
    return Matrix.from_rows(f, X.data, X.cols)


def has_right_inverse(A: Matrix) -> bool:
    return mccoy_rank(A) == A.rows


def has_left_inverse(A: Matrix) -> bool:
    return mccoy_rank(A) == A.cols


def right_inverse(A: Matrix) -> Matrix:
    """A witness ``B`` with ``A @ B == I``, assembled from the normal form."""
    if not has_right_inverse(A):
        raise NotInvertible(f"{A.rows}x{A.cols} matrix has no right inverse")
    nf = canonical_diagonalize(A)
    ctx = A.context
    lift = Matrix.identity(ctx, A.rows).vstack(Matrix.zeros(ctx, A.cols - A.rows, A.rows))
    return invert(nf.Q) @ lift @ invert(nf.P)


def left_inverse(A: Matrix) -> Matrix:
    return right_inverse(A.transpose()).transpose()


def determinant(A: Matrix) -> RingElement:
    """Determinant by elimination with determinant-one row operations.

    Pivots are chosen with minimum valuation inside each column so the
    pivot divides every entry below it.
    """
    if A.rows != A.cols:
        raise ShapeError(f"determinant of non-square {A.shape}")
    ctx = A.context
    p, s, q = ctx.p, ctx.s, ctx.modulus
    n = A.rows
    a = [list(r) for r in A.data]
    det = 1
    for k in range(n):
        best = None
        for i in range(k, n):
            if a[i][k]:
                e = valuation(a[i][k], p, s)
                if best is None or e < best[0]:
                    best = (e, i)
        if best is None:
            return ctx(0)
        e, i = best
        if i != k:
            a[i], a[k] = a[k], a[i]
            det = -det
        pe = p**e
        uinv = inverse_mod(a[k][k] // pe, q)
        for i2 in range(k + 1, n):
            if a[i2][k]:
                c = (a[i2][k] // pe) * uinv % q
                a[i2] = [(x - c * y) % q for x, y in zip(a[i2], a[k])]
        det = det * a[k][k] % q
    return ctx(det)


def invert(A: Matrix) -> Matrix:
    """Gauss-Jordan inverse with unit pivots."""
    if A.rows != A.cols:
        raise ShapeError(f"inverse of non-square {A.shape}")
    ctx = A.context
    p, q, n = ctx.p, ctx.modulus, A.rows
    a = [list(r) + list(e) for r, e in zip(A.data, _identity(n))]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] % p), None)
        if piv is None:
            raise NotInvertible(f"determinant {determinant(A).value} is not a unit")
        a[k], a[piv] = a[piv], a[k]
        uinv = inverse_mod(a[k][k], q)
        a[k] = [v * uinv % q for v in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                c = a[i][k]
                a[i] = [(x - c * y) % q for x, y in zip(a[i], a[k])]
    return Matrix.from_rows(ctx, [r[n:] for r in a], n)


def is_invertible(A: Matrix) -> bool:
    return A.rows == A.cols and mccoy_rank(A) == A.rows
