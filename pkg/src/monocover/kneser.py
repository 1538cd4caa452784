"""Kneser hypergraphs KG^(alpha+1)(r, r-s) and their chromatic numbers."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

ColourSet = tuple[int, ...]


def colex_subsets(a: int, b: int) -> list[ColourSet]:
    """All ``b``-subsets of ``{1..a}`` in colex order."""
    return sorted(combinations(range(1, a + 1), b), key=lambda x: x[::-1])


def _check_params(r: int, s: int, alpha: int) -> None:
    if not 1 <= s < r:
        raise ValueError(f"need 1 <= s < r, got r={r}, s={s}")
    if alpha < 1:
        raise ValueError(f"need alpha >= 1, got {alpha}")


@dataclass(frozen=True)
class KneserHypergraph:
    """Vertices are the ``(r-s)``-subsets of ``[r]``; a hyperedge is any
    ``alpha+1`` of them that are pairwise disjoint.  Hyperedges are stored as
    ascending tuples of vertex indices."""

    r: int
    s: int
    alpha: int
    vertices: tuple[ColourSet, ...]
    hyperedges: tuple[tuple[int, ...], ...]

    @property
    def uniformity(self) -> int:
        return self.alpha + 1

    def index(self, x: ColourSet) -> int:
        return self.vertices.index(tuple(sorted(x)))


def build_kneser(r: int, s: int, alpha: int) -> KneserHypergraph:
    _check_params(r, s, alpha)
    verts = colex_subsets(r, r - s)
    masks = [sum(1 << c for c in x) for x in verts]
    edges: list[tuple[int, ...]] = []

    def extend(chosen: list[int], used: int, start: int) -> None:
        if len(chosen) == alpha + 1:
            edges.append(tuple(chosen))
            return
        for i in range(start, len(verts)):
            if not masks[i] & used:
                chosen.append(i)
                extend(chosen, used | masks[i], i + 1)
                chosen.pop()

    extend([], 0, 0)
    return KneserHypergraph(r, s, alpha, tuple(verts), tuple(edges))


def chi_formula(r: int, s: int, alpha: int) -> int:
    """Chromatic number of KG^(alpha+1)(r, r-s) by the Alon-Frankl-Lovasz formula."""
    _check_params(r, s, alpha)
    if s * (alpha + 1) < alpha * r:
        return 1
    return 1 + s - r + -(-(s + 1) // alpha)


class _BudgetExceeded(Exception):
    pass


def _search(kh: KneserHypergraph, c: int, budget: list[int] | None) -> list[int] | None:
    """Backtracking c-colouring with no monochromatic hyperedge.

    Colours are introduced in order (a vertex may take at most one more than
    the largest colour used so far), which fixes vertex 0 to colour 1 and
    removes colour-class permutations.
    """
    nv = len(kh.vertices)
    if nv == 0:
        return []
    # each hyperedge is checked when its last member (in index order) is coloured
    closing: list[list[tuple[int, ...]]] = [[] for _ in range(nv)]
    for e in kh.hyperedges:
        closing[e[-1]].append(e[:-1])
    colouring = [0] * nv

    def place(v: int, top: int) -> bool:
        if v == nv:
            return True
        if budget is not None:
            budget[0] -= 1
            if budget[0] < 0:
                raise _BudgetExceeded
        for col in range(1, min(top + 1, c) + 1):
            if any(all(colouring[u] == col for u in rest) for rest in closing[v]):
                continue
            colouring[v] = col
            if place(v + 1, max(top, col)):
                return True
        colouring[v] = 0
        return False

    return colouring if place(0, 0) else None


def proper_colouring(kh: KneserHypergraph, c: int, budget: int | None = None) -> dict[ColourSet, int] | None:
    """A colouring with colours ``1..c`` and no monochromatic hyperedge, or
    ``None`` if none exists.  Deterministic for given ``(kh, c)``."""
    if c < 1:
        return None if kh.vertices else {}
    left = None if budget is None else [budget]
    found = _search(kh, c, left)
    if found is None:
        return None
    return dict(zip(kh.vertices, found))


def chi_exact(kh: KneserHypergraph, budget: int = 5_000_000) -> tuple[int, dict[ColourSet, int]] | None:
    """Exact chromatic number with a witness colouring, by exhaustive search.

    Returns ``None`` when more than ``budget`` search nodes are needed.
    """
    left = [budget]
    c = 1
    while True:
        try:
            found = _search(kh, c, left)
        except _BudgetExceeded:
            return None
        if found is not None:
            return c, dict(zip(kh.vertices, found))
        c += 1


def num_vertices(r: int, s: int) -> int:
    return comb(r, r - s)


def is_proper(kh: KneserHypergraph, colouring: dict[ColourSet, int]) -> bool:
    cols = [colouring[x] for x in kh.vertices]
    return all(len({cols[i] for i in e}) > 1 for e in kh.hyperedges)
