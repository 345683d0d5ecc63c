"""Exact clique and independent-set search on bitset adjacency.

Graphs are lists of Python ints: bit ``j`` of ``adj[i]`` is set when i and
j are adjacent.  The searches are branch and bound with greedy colouring
bounds (Tomita style), which makes "find a clique of size w" and "prove no
clique of size w + 1 exists" both cheap on the desk-scale instances.
"""

from __future__ import annotations

from typing import Iterator, Sequence


def bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def mask_of(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def complement(adj: Sequence[int]) -> list[int]:
    full = (1 << len(adj)) - 1
    return [full & ~a & ~(1 << i) for i, a in enumerate(adj)]


def is_clique(adj: Sequence[int], vertices) -> bool:
    vs = list(vertices)
    for i, v in enumerate(vs):
        for w in vs[i + 1:]:
            if not adj[v] >> w & 1:
                return False
    return True


def is_independent(adj: Sequence[int], vertices) -> bool:
    vs = list(vertices)
    mask = mask_of(vs)
    return all(not (adj[v] & mask) for v in vs)


def is_maximal_clique(adj: Sequence[int], vertices, universe: int | None = None) -> bool:
    if not is_clique(adj, vertices):
        return False
    common = (1 << len(adj)) - 1 if universe is None else universe
    for v in vertices:
        common &= adj[v]
    return common == 0


def _colour_order(P: int, adj: Sequence[int]) -> tuple[list[int], list[int]]:
    order: list[int] = []
    bounds: list[int] = []
    colour = 0
    uncoloured = P
    while uncoloured:
        colour += 1
        avail = uncoloured
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            avail &= ~adj[v] & ~low
            uncoloured &= ~low
            order.append(v)
            bounds.append(colour)
    return order, bounds


class SearchStats:
    def __init__(self) -> None:
        self.nodes = 0


def find_clique(adj: Sequence[int], size: int, candidates: int | None = None,
                stats: SearchStats | None = None) -> list[int] | None:
    """A clique of exactly ``size`` vertices inside ``candidates``, or None.

    A None answer is a proof: every branch was cut by a colouring bound.
    """
    if size <= 0:
        return []
    P0 = (1 << len(adj)) - 1 if candidates is None else candidates
    stats = stats or SearchStats()

    def expand(R: list[int], P: int) -> list[int] | None:
        stats.nodes += 1
        order, bounds = _colour_order(P, adj)
        for i in range(len(order) - 1, -1, -1):
            if len(R) + bounds[i] < size:
                return None
            v = order[i]
            if len(R) + 1 >= size:
                return R + [v]
            newP = P & adj[v]
            if newP:
                found = expand(R + [v], newP)
                if found is not None:
                    return found
            P &= ~(1 << v)
        return None

    return expand([], P0)


def max_clique(adj: Sequence[int], candidates: int | None = None, lower: int = 0) -> list[int]:
    """A maximum clique, found by raising the target until the search fails."""
    best: list[int] = []
    target = max(lower, 1)
    while True:
        found = find_clique(adj, target, candidates)
        if found is None:
            return best
        best = found
        target = len(found) + 1


def cliques_of_size(adj: Sequence[int], size: int, candidates: int | None = None) -> list[frozenset[int]]:
    """Every clique of exactly ``size`` vertices (intended for size == omega)."""
    out: list[frozenset[int]] = []
    P0 = (1 << len(adj)) - 1 if candidates is None else candidates

    def expand(R: list[int], P: int) -> None:
        order, bounds = _colour_order(P, adj)
        for i in range(len(order) - 1, -1, -1):
            if len(R) + bounds[i] < size:
                return
            v = order[i]
            if len(R) + 1 == size:
                out.append(frozenset(R + [v]))
            else:
                newP = P & adj[v]
                if newP:
                    expand(R + [v], newP)
            P &= ~(1 << v)

    expand([], P0)
    return out


def maximal_cliques(adj: Sequence[int], candidates: int | None = None) -> Iterator[frozenset[int]]:
    """Bron-Kerbosch with pivoting, restricted to the subgraph on ``candidates``."""
    P0 = (1 << len(adj)) - 1 if candidates is None else candidates

    def bk(R: list[int], P: int, X: int) -> Iterator[frozenset[int]]:
        if not P and not X:
            yield frozenset(R)
            return
        pivot = max(bits(P | X), key=lambda u: (adj[u] & P).bit_count())
        for v in bits(P & ~adj[pivot]):
            yield from bk(R + [v], P & adj[v], X & adj[v])
            P &= ~(1 << v)
            X |= 1 << v

    yield from bk([], P0, 0)


def find_independent_set(adj: Sequence[int], size: int, candidates: int | None = None) -> list[int] | None:
    return find_clique(complement(adj), size, candidates)


def max_independent_set(adj: Sequence[int], candidates: int | None = None) -> list[int]:
    return max_clique(complement(adj), candidates)
