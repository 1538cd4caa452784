"""Exact minimum monochromatic path coverings for small graphs.

Two steps, both over vertex bitmasks:

1. for each colour ``k``, ``reach[mask]`` is the set of vertices ``v`` such
   that some colour-``k`` path has vertex set ``mask`` and ends at ``v``;
2. a set-cover DP over the still-uncovered vertices, branching on the lowest
   uncovered vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .graph import ColouredGraph, Covering, MonoPiece

MAX_N = 16


class OracleBudgetExceeded(RuntimeError):
    pass


def _check_n(g: ColouredGraph) -> None:
    if g.n > MAX_N:
        raise ValueError(f"the exact oracle handles n <= {MAX_N}, got n={g.n}")


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def path_endpoints(g: ColouredGraph, k: int) -> list[int]:
    """``reach[mask]``: bitset of possible end vertices of a colour-``k`` path on ``mask``."""
    _check_n(g)
    n = g.n
    adj = g.colour_bits(k)
    reach = [0] * (1 << n)
    for mask in range(1, 1 << n):
        if mask & (mask - 1) == 0:
            reach[mask] = mask
            continue
        ends = 0
        m = mask
        while m:
            low = m & -m
            m ^= low
            if reach[mask ^ low] & adj[low.bit_length() - 1]:
                ends |= low
        reach[mask] = ends
    return reach


@dataclass
class PathCatalogue:
    """Vertex sets of monochromatic paths in colours ``T``, plus all singletons.

    ``masks`` maps each bitmask to a colour realising it (``None`` for a
    singleton).
    """

    n: int
    colours: tuple[int, ...]
    masks: dict[int, int | None]

    def vertex_sets(self) -> set[frozenset[int]]:
        return {frozenset(_bits(m)) for m in self.masks}

    def maximal(self) -> dict[int, int | None]:
        """Only the masks not strictly contained in another mask."""
        n = self.n
        present = np.zeros(1 << n, dtype=bool)
        present[list(self.masks)] = True
        # superset closure: sup[m] = any present mask containing m
        sup = present.copy()
        for u in range(n):
            view = sup.reshape(-1, 2, 1 << u)
            view[:, 0, :] |= view[:, 1, :]
        strict = np.zeros_like(sup)
        for u in range(n):
            strict.reshape(-1, 2, 1 << u)[:, 0, :] |= sup.reshape(-1, 2, 1 << u)[:, 1, :]
        return {m: c for m, c in self.masks.items() if not strict[m]}


def enumerate_mono_paths(g: ColouredGraph, colours, _reach: dict[int, list[int]] | None = None) -> PathCatalogue:
    _check_n(g)
    colours = tuple(sorted(colours))
    masks: dict[int, int | None] = {1 << v: None for v in range(g.n)}
    for k in colours:
        reach = _reach[k] if _reach is not None else path_endpoints(g, k)
        for m in range(1, 1 << g.n):
            if reach[m] and m & (m - 1) and m not in masks:
                masks[m] = k
    return PathCatalogue(g.n, colours, masks)


def _set_cover(n: int, pieces: list[int], budget: int) -> list[int]:
    """Minimum number of ``pieces`` whose union is all ``n`` vertices."""
    by_vertex: list[list[int]] = [[] for _ in range(n)]
    for p in sorted(pieces, key=lambda m: -bin(m).count("1")):
        for v in _bits(p):
            by_vertex[v].append(p)
    best: dict[int, tuple[int, int]] = {0: (0, 0)}
    calls = 0

    def solve(left: int) -> int:
        nonlocal calls
        hit = best.get(left)
        if hit is not None:
            return hit[0]
        calls += 1
        if calls > budget:
            raise OracleBudgetExceeded(f"set cover needed more than {budget} states")
        low = (left & -left).bit_length() - 1
        value, choice = n + 1, 0
        for p in by_vertex[low]:
            sub = solve(left & ~p)
            if sub + 1 < value:
                value, choice = sub + 1, p
        best[left] = (value, choice)
        return value

    full = (1 << n) - 1
    solve(full)
    chosen, left = [], full
    while left:
        p = best[left][1]
        chosen.append(p)
        left &= ~p
    return chosen


def _path_from_mask(reach: list[int], adj: list[int], mask: int) -> list[int]:
    ends = reach[mask]
    v = (ends & -ends).bit_length() - 1
    seq = [v]
    cur = mask
    while cur & (cur - 1):
        prev = cur ^ (1 << v)
        nxt = reach[prev] & adj[v]
        v = (nxt & -nxt).bit_length() - 1
        seq.append(v)
        cur = prev
    return seq


def min_cover_exact(g: ColouredGraph, s: int, budget: int = 2_000_000) -> tuple[int, Covering]:
    """Smallest covering of ``g`` by monochromatic paths using at most ``s``
    colours, with a witness."""
    _check_n(g)
    if g.n == 0:
        return 0, []
    reach = {k: path_endpoints(g, k) for k in range(1, g.r + 1)}
    bits = {k: g.colour_bits(k) for k in range(1, g.r + 1)}
    best: tuple[int, Covering] | None = None
    # a larger colour set never hurts, so only |T| = min(s, r) is scanned
    for T in combinations(range(1, g.r + 1), min(s, g.r)):
        catalogue = enumerate_mono_paths(g, T, reach)
        keep = catalogue.maximal()
        chosen = _set_cover(g.n, list(keep), budget)
        if best is not None and len(chosen) >= best[0]:
            continue
        witness = []
        for m in chosen:
            k = keep[m]
            if k is None:
                witness.append(MonoPiece.single(_bits(m)[0]))
            else:
                witness.append(MonoPiece(tuple(_path_from_mask(reach[k], bits[k], m)), k))
        best = (len(chosen), witness)
    assert best is not None
    return best
