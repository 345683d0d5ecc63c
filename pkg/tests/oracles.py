"""Brute-force references.  Nothing here calls the code under test except
for trivial constructors, so agreement is a real cross-check."""

from __future__ import annotations

import itertools
from functools import lru_cache


def all_matrices(q: int, r: int, c: int):
    for flat in itertools.product(range(q), repeat=r * c):
        yield tuple(tuple(flat[i * c:(i + 1) * c]) for i in range(r))


def matmul(a, b, q):
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) % q for col in zip(*b)) for row in a)


@lru_cache(maxsize=None)
def rank_at_most_one(q: int, r: int, c: int) -> frozenset:
    """Every r x c matrix of the form (column)(row) over Z/q."""
    out = set()
    for u in itertools.product(range(q), repeat=r):
        for v in itertools.product(range(q), repeat=c):
            out.add(tuple(tuple(a * b % q for b in v) for a in u))
    return frozenset(out)


@lru_cache(maxsize=None)
def rank_at_most_two(q: int, r: int, c: int) -> frozenset:
    ones = rank_at_most_one(q, r, c)
    return frozenset(tuple(tuple((x + y) % q for x, y in zip(ra, rb)) for ra, rb in zip(a, b))
                     for a in ones for b in ones)


def brute_inner_rank(M, q: int) -> int:
    """Least r with M = B C, B of width r: by direct search over factorizations."""
    r, c = len(M), len(M[0])
    M = tuple(tuple(x % q for x in row) for row in M)
    if not any(any(row) for row in M):
        return 0
    if M in rank_at_most_one(q, r, c):
        return 1
    if min(r, c) == 2 or M in rank_at_most_two(q, r, c):
        return 2
    return min(r, c)


def cofactor_det(M, q: int) -> int:
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0] % q
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        total += (-1) ** j * M[0][j] * cofactor_det(minor, q)
    return total % q


def minors(M, k: int, q: int) -> list[int]:
    r, c = len(M), len(M[0])
    out = []
    for rows in itertools.combinations(range(r), k):
        for cols in itertools.combinations(range(c), k):
            out.append(cofactor_det([[M[i][j] for j in cols] for i in rows], q))
    return out


def annihilator_mccoy_rank(M, q: int) -> int:
    """max k with Ann(I_k(M)) = 0, straight from the definition."""
    best = 0
    for k in range(1, min(len(M), len(M[0])) + 1):
        ms = minors(M, k, q)
        ann = [x for x in range(q) if all(x * d % q == 0 for d in ms)]
        if ann == [0]:
            best = k
    return best


def brute_right_inverses(M, q: int) -> list:
    r, c = len(M), len(M[0])
    ident = tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))
    return [B for B in all_matrices(q, c, r) if matmul(M, B, q) == ident]


def span(rows, q: int) -> frozenset:
    n = len(rows[0])
    out = set()
    for coeffs in itertools.product(range(q), repeat=len(rows)):
        out.add(tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) % q for j in range(n)))
    return frozenset(out)


def field_rank(rows, p: int) -> int:
    a = [[x % p for x in r] for r in rows]
    rank = 0
    cols = len(a[0]) if a else 0
    for j in range(cols):
        piv = next((i for i in range(rank, len(a)) if a[i][j]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][j], -1, p)
        a[rank] = [x * inv % p for x in a[rank]]
        for i in range(len(a)):
            if i != rank and a[i][j]:
                c = a[i][j]
                a[i] = [(x - c * y) % p for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def brute_subspaces(p: int, s: int, n: int, m: int) -> set[frozenset]:
    """Every m-subspace as a set of vectors, from all unimodular m-tuples."""
    q = p**s
    vecs = [v for v in itertools.product(range(q), repeat=n) if any(x % p for x in v)]
    return {span(tup, q) for tup in itertools.combinations(vecs, m) if field_rank(tup, p) == m}


def generator_count(vectors, p: int, q: int) -> int:
    """Minimal number of generators of a finite module, as log_p |M / pM|."""
    M = set(vectors)
    pM = {tuple(p * x % q for x in v) for v in M}
    ratio = len(M) // len(pM)
    k = 0
    while ratio > 1:
        ratio //= p
        k += 1
    return k


def sumset(A, B, q: int) -> frozenset:
    return frozenset(tuple((x + y) % q for x, y in zip(a, b)) for a in A for b in B)


def brute_dual(vectors: frozenset, n: int, q: int) -> frozenset:
    return frozenset(y for y in itertools.product(range(q), repeat=n)
                     if all(sum(a * b for a, b in zip(x, y)) % q == 0 for x in vectors))


def free_dim(vectors, p: int) -> int:
    return field_rank(list(vectors), p) if vectors else 0


def bfs(adj: dict, src) -> dict:
    dist = {src: 0}
    frontier = [src]
    while frontier:
        nxt = []
        for v in frontier:
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        frontier = nxt
    return dist
