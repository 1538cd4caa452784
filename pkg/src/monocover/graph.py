"""Edge-coloured graphs, monochromatic pieces and the covering validator.

Vertices are ``0..n-1`` and colours are ``1..r``.  The colouring is stored as
a symmetric ``n x n`` matrix of small unsigned ints where ``0`` means "no
edge".  Graphs are immutable once built.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np


class GraphError(ValueError):
    """Malformed graph or covering input."""


@dataclass(frozen=True)
class MonoPiece:
    """One monochromatic path, or a colourless single vertex."""

    vertices: tuple[int, ...]
    colour: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(int(v) for v in self.vertices))
        if not self.vertices:
            raise GraphError("a piece needs at least one vertex")
        if len(self.vertices) == 1 and self.colour is not None:
            raise GraphError("single-vertex pieces are colourless")
        if len(self.vertices) > 1 and self.colour is None:
            raise GraphError("a path with edges needs a colour")

    def __len__(self) -> int:
        return len(self.vertices)

    @classmethod
    def single(cls, v: int) -> "MonoPiece":
        return cls((v,), None)


Covering = list[MonoPiece]


def colours_of(pieces: Iterable[MonoPiece]) -> set[int]:
    """The colours used by the pieces (colourless singletons contribute none)."""
    return {p.colour for p in pieces if p.colour is not None}


class ColouredGraph:
    """A simple graph with a total edge-colouring in ``[r]``."""

    __slots__ = ("n", "r", "colours", "_adj_bits")

    def __init__(self, n: int, r: int, colours: np.ndarray):
        colours = np.asarray(colours)
        if colours.shape != (n, n):
            raise GraphError(f"colour matrix has shape {colours.shape}, expected ({n}, {n})")
        if r < 1 or r > 255:
            raise GraphError(f"r must lie in 1..255, got {r}")
        if n and np.any(np.diagonal(colours) != 0):
            raise GraphError("self-loops are not allowed")
        if not np.array_equal(colours, colours.T):
            raise GraphError("colour matrix is not symmetric")
        if colours.size and (colours.min() < 0 or colours.max() > r):
            raise GraphError(f"colours must lie in 1..{r}")
        colours = np.array(colours, dtype=np.uint8)
        colours.flags.writeable = False
        self.n = int(n)
        self.r = int(r)
        self.colours = colours
        self._adj_bits: list[int] | None = None

    def __repr__(self) -> str:
        return f"ColouredGraph(n={self.n}, r={self.r}, edges={self.num_edges()})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ColouredGraph):
            return NotImplemented
        return self.n == other.n and self.r == other.r and np.array_equal(self.colours, other.colours)

    def __hash__(self) -> int:
        return hash((self.n, self.r, self.colours.tobytes()))

    def colour(self, u: int, v: int) -> int | None:
        c = int(self.colours[u, v])
        return c or None

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.colours[u, v])

    def num_edges(self) -> int:
        return int(np.count_nonzero(self.colours)) // 2

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Yield ``(u, v, colour)`` with ``u < v``."""
        us, vs = np.nonzero(np.triu(self.colours))
        for u, v in zip(us.tolist(), vs.tolist()):
            yield u, v, int(self.colours[u, v])

    @property
    def adjacency(self) -> np.ndarray:
        return self.colours != 0

    def adjacency_bits(self) -> list[int]:
        """Neighbourhoods as Python int bitsets (bit ``v`` set iff adjacent)."""
        if self._adj_bits is None:
            bits = []
            weights = [1 << v for v in range(self.n)]
            for row in self.adjacency:
                bits.append(sum(w for w, a in zip(weights, row.tolist()) if a))
            self._adj_bits = bits
        return self._adj_bits

    def colour_bits(self, k: int) -> list[int]:
        """Colour-``k`` neighbourhoods as int bitsets."""
        out = []
        for row in (self.colours == k):
            out.append(sum(1 << v for v in np.flatnonzero(row).tolist()))
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "r": self.r, "edges": [list(e) for e in self.edges()]}

    @classmethod
    def from_json(cls, data: dict) -> "ColouredGraph":
        try:
            n, r, edges = data["n"], data["r"], data["edges"]
        except (KeyError, TypeError) as exc:
            raise GraphError(f"graph JSON needs keys n, r, edges: {exc}") from None
        return build_graph(n, r, edges)


def build_graph(n: int, r: int, edges: Iterable[Sequence[int]]) -> ColouredGraph:
    """Build a graph from ``(u, v, colour)`` triples.

    Duplicate entries for the same pair must agree on the colour.
    """
    if not isinstance(n, int) or n < 0:
        raise GraphError(f"n must be a non-negative int, got {n!r}")
    if not isinstance(r, int) or r < 1:
        raise GraphError(f"r must be a positive int, got {r!r}")
    colours = np.zeros((n, n), dtype=np.uint8)
    for edge in edges:
        if len(edge) != 3:
            raise GraphError(f"edge {edge!r} is not a (u, v, colour) triple")
        u, v, c = (int(x) for x in edge)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) has a vertex outside 0..{n - 1}")
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        old = colours[u, v]
        if old and old != c:
            raise GraphError(f"edge ({u}, {v}) given conflicting colours {old} and {c}")
        if not 1 <= c <= r:
            raise GraphError(f"edge ({u}, {v}) has colour {c} outside 1..{r}")
        colours[u, v] = colours[v, u] = c
    return ColouredGraph(n, r, colours)


def load_graph(path) -> ColouredGraph:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphError(f"malformed JSON in {path}: {exc}") from None
    return ColouredGraph.from_json(data)


def save_graph(g: ColouredGraph, path) -> None:
    with open(path, "w") as fh:
        json.dump(g.to_json(), fh)


def independence_number(g: ColouredGraph, budget: int = 10_000_000) -> int | None:
    """Exact independence number, or ``None`` if more than ``budget`` search
    nodes would be needed.

    Max-clique branch and bound on the complement, pruned with greedy
    colouring bounds (each colour class of the complement is a clique of
    ``g``, so it contributes at most one vertex).
    """
    n = g.n
    if n == 0:
        return 0
    full = (1 << n) - 1
    adj = g.adjacency_bits()
    non_adj = [full & ~adj[v] & ~(1 << v) for v in range(n)]
    best = 0
    nodes = 0

    def colour_sort(cand: int) -> tuple[list[int], list[int]]:
        order, bounds = [], []
        uncoloured = cand
        k = 0
        while uncoloured:
            k += 1
            q = uncoloured
            while q:
                low = q & -q
                v = low.bit_length() - 1
                q &= ~low & ~non_adj[v]
                uncoloured &= ~low
                order.append(v)
                bounds.append(k)
        return order, bounds

    def expand(size: int, cand: int) -> bool:
        nonlocal best, nodes
        nodes += 1
        if nodes > budget:
            return False
        order, bounds = colour_sort(cand)
        for v, bound in zip(reversed(order), reversed(bounds)):
            if size + bound <= best:
                return True
            nxt = cand & non_adj[v]
            if nxt:
                if not expand(size + 1, nxt):
                    return False
            elif size + 1 > best:
                best = size + 1
            cand &= ~(1 << v)
        return True

    if not expand(0, full):
        return None
    return best


def colour_profile(g: ColouredGraph, a: Iterable[int], b: Iterable[int]) -> dict[int, int]:
    """Count the ``a``-``b`` edges of each colour.  Colours with no edges are omitted."""
    a = np.fromiter(a, dtype=np.intp)
    b = np.fromiter(b, dtype=np.intp)
    if np.intersect1d(a, b).size:
        raise GraphError("colour_profile needs disjoint vertex sets")
    if not a.size or not b.size:
        return {}
    counts = np.bincount(g.colours[np.ix_(a, b)].ravel(), minlength=g.r + 1)
    return {k: int(counts[k]) for k in range(1, g.r + 1) if counts[k]}


@dataclass
class CoverReport:
    valid: bool
    failures: list[tuple[int, str]] = field(default_factory=list)
    colours_used: set[int] = field(default_factory=set)
    uncovered: frozenset[int] = frozenset()

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "failures": [[i, why] for i, why in self.failures],
            "colours_used": sorted(self.colours_used),
            "uncovered": sorted(self.uncovered),
        }


def validate_covering(g: ColouredGraph, pieces: Sequence[MonoPiece], s: int) -> CoverReport:
    """Check that ``pieces`` are monochromatic paths of ``g`` covering every
    vertex with at most ``s`` colours in total."""
    failures: list[tuple[int, str]] = []
    covered = np.zeros(g.n, dtype=bool)
    for idx, piece in enumerate(pieces):
        vs = piece.vertices
        bad = [v for v in vs if not 0 <= v < g.n]
        if bad:
            failures.append((idx, f"vertex {bad[0]} outside 0..{g.n - 1}"))
            continue
        if len(set(vs)) != len(vs):
            failures.append((idx, "repeated vertex"))
        for u, v in zip(vs, vs[1:]):
            c = g.colour(u, v)
            if c is None:
                failures.append((idx, f"({u}, {v}) is not an edge"))
                break
            if c != piece.colour:
                failures.append((idx, f"edge ({u}, {v}) has colour {c}, piece declares {piece.colour}"))
                break
        covered[list(vs)] = True
    used = colours_of(pieces)
    if len(used) > s:
        failures.append((-1, f"{len(used)} colours used, budget is {s}"))
    uncovered = frozenset(np.flatnonzero(~covered).tolist())
    return CoverReport(
        valid=not failures and not uncovered,
        failures=failures,
        colours_used=used,
        uncovered=uncovered,
    )


def covering_to_json(pieces: Sequence[MonoPiece]) -> dict:
    return {"pieces": [{"vertices": list(p.vertices), "colour": p.colour} for p in pieces]}


def covering_from_json(data: dict) -> Covering:
    try:
        raw = data["pieces"]
        pieces = []
        for item in raw:
            vs = item["vertices"]
            colour = item.get("colour")
            # a lone vertex is colourless regardless of what the file says
            pieces.append(MonoPiece(tuple(vs), None if len(vs) == 1 else colour))
    except (KeyError, TypeError) as exc:
        raise GraphError(f"covering JSON needs pieces with vertices and colour: {exc}") from None
    return pieces
