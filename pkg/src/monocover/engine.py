"""Covering an r-coloured graph by few monochromatic paths in at most s colours.

The engine starts from any monochromatic path covering and keeps adding
paths until, for some colour set X of size r-s, only few vertices are
covered exclusively by paths with colours in X.  Those few get singleton
pieces, after which every path coloured in X is redundant and is dropped.

Progress is measured by the potential sum_X log|V_X|, where V_X is the set
of vertices covered only by pieces coloured in X.  Each round picks a
hyperedge of pairwise disjoint colour sets whose V_X have similar sizes,
samples equal-size subsets of them, and embeds long paths in the majority
colour between the densest pair.  Since the sets in a hyperedge are
disjoint, the path colour misses at least one of the two colour sets, so the
path shrinks the corresponding V_X.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .graph import ColouredGraph, Covering, MonoPiece, colours_of
from .kneser import ColourSet, KneserHypergraph, build_kneser, chi_formula

log = logging.getLogger(__name__)


class EngineError(RuntimeError):
    """An internal invariant broke, or the input violated its promise."""

    def __init__(self, message: str, trace: "EngineTrace | None" = None):
        super().__init__(message)
        self.trace = trace


@dataclass
class EngineConfig:
    target_fraction: float = 0.1
    min_piece: int = 2
    rng_seed: int = 0
    max_stall: int = 10
    restarts: int = 3
    rotations: int = 50

    def __post_init__(self) -> None:
        if not 0 < self.target_fraction <= 1:
            raise ValueError(f"target_fraction must lie in (0, 1], got {self.target_fraction}")
        if self.min_piece < 2:
            raise ValueError(f"min_piece must be at least 2, got {self.min_piece}")
        if self.max_stall < 1:
            raise ValueError(f"max_stall must be at least 1, got {self.max_stall}")


@dataclass
class IterationRecord:
    hyperedge: tuple[ColourSet, ...]
    sizes: dict[ColourSet, int]
    delta_before: float
    delta_after: float
    batch_size: int

    def to_json(self) -> dict:
        return {
            "hyperedge": [list(x) for x in self.hyperedge],
            "sizes": {",".join(map(str, x)): v for x, v in self.sizes.items()},
            "delta_before": _json_float(self.delta_before),
            "delta_after": _json_float(self.delta_after),
            "batch_size": self.batch_size,
        }


@dataclass
class EngineTrace:
    chi: int
    threshold: float
    baseline_size: int = 0
    iterations: list[IterationRecord] = field(default_factory=list)
    final_set: ColourSet | None = None
    singletons_added: int = 0
    fallback: bool = False

    def to_json(self) -> dict:
        return {
            "chi": self.chi,
            "threshold": self.threshold,
            "baseline_size": self.baseline_size,
            "final_set": list(self.final_set) if self.final_set is not None else None,
            "singletons_added": self.singletons_added,
            "fallback": self.fallback,
            "iterations": [it.to_json() for it in self.iterations],
        }


def _json_float(x: float):
    return None if x == -math.inf else x


# -- exclusive cover sets ----------------------------------------------------


def cover_bits(n: int, pieces: Sequence[MonoPiece]) -> np.ndarray:
    """Per vertex, the OR of ``1 << colour`` over the pieces covering it
    (bit 0 stands for colourless singletons)."""
    bits = np.zeros(n, dtype=np.int64)
    for p in pieces:
        bits[list(p.vertices)] |= 1 if p.colour is None else 1 << p.colour
    return bits


def _set_bits(x: ColourSet) -> int:
    return sum(1 << c for c in x)


def _exclusive(bits: np.ndarray, x: ColourSet) -> np.ndarray:
    return (bits != 0) & (bits & ~_set_bits(x) == 0)


def exclusive_cover_set(g: ColouredGraph, pieces: Sequence[MonoPiece], x: ColourSet) -> frozenset[int]:
    """Vertices covered, and covered only by pieces whose colour lies in ``x``."""
    return frozenset(np.flatnonzero(_exclusive(cover_bits(g.n, pieces), x)).tolist())


def _delta(sizes) -> float:
    sizes = list(sizes)
    if any(v == 0 for v in sizes):
        return -math.inf
    return float(sum(math.log(v) for v in sizes))


def potential(g: ColouredGraph, pieces: Sequence[MonoPiece], kh: KneserHypergraph) -> float:
    """Sum of ``log |V_X|`` over all colour sets X; ``-inf`` if one is empty."""
    bits = cover_bits(g.n, pieces)
    return _delta(int(np.count_nonzero(_exclusive(bits, x))) for x in kh.vertices)


# -- hyperedge choice ----------------------------------------------------------


def balanced_hyperedge(sizes: dict[ColourSet, int], kh: KneserHypergraph, n: int | None = None, chi: int | None = None) -> tuple[ColourSet, ...]:
    """The hyperedge whose exclusive sets have the smallest max/min size ratio,
    ordered by decreasing size.  Ties go to the earlier hyperedge."""
    if not kh.hyperedges:
        raise ValueError("the Kneser hypergraph has no hyperedges")
    best, best_spread = None, None
    for e in kh.hyperedges:
        vals = [sizes[kh.vertices[i]] for i in e]
        lo = min(vals)
        spread = Fraction(max(vals), lo) if lo else None
        if spread is None:
            continue
        if best_spread is None or spread < best_spread:
            best, best_spread = e, spread
    if best is None:
        best = kh.hyperedges[0]
    members = [kh.vertices[i] for i in best]
    return tuple(sorted(members, key=lambda x: -sizes[x]))


def spread(sizes: dict[ColourSet, int], edge: Sequence[ColourSet]) -> float:
    vals = [sizes[x] for x in edge]
    return max(vals) / min(vals) if min(vals) else math.inf


# -- path growth ---------------------------------------------------------------


def _extend(path: list, used: list[np.ndarray], adj: list[np.ndarray], rng, rotations: int) -> None:
    """Greedily extend the tail of a bipartite path, with Posa rotations when stuck.

    Path entries are ``(side, index)``; ``adj[side][index]`` is the boolean
    neighbourhood row on the other side.
    """
    left = rotations
    while True:
        side, idx = path[-1]
        cand = np.flatnonzero(adj[side][idx] & ~used[1 - side])
        if cand.size:
            nxt = int(cand[rng.integers(cand.size)])
            used[1 - side][nxt] = True
            path.append((1 - side, nxt))
            continue
        if left <= 0 or len(path) < 4:
            return
        # rotate: if the end is adjacent to path[p], reverse path[p+1:]
        # so path[p+1] becomes the new end
        nbr = adj[side][idx]
        rotated = False
        for p in range(len(path) - 3, -1, -1):
            ps, pi = path[p]
            if ps != side and nbr[pi]:
                ns, ni = path[p + 1]
                if np.any(adj[ns][ni] & ~used[1 - ns]):
                    path[p + 1:] = path[p + 1:][::-1]
                    rotated = True
                    break
        left -= 1
        if not rotated:
            return


def bipartite_path(m: np.ndarray, rng, restarts: int = 3, rotations: int = 50, favour: int = 0) -> list[tuple[int, int]]:
    """A long path in the bipartite graph with biadjacency ``m``.

    Returns ``(side, index)`` pairs.  Among the restarts the path with most
    vertices on side ``favour`` wins.
    """
    adj = [m, np.ascontiguousarray(m.T)]
    degs = [m.sum(axis=1), m.sum(axis=0)]
    if not degs[0].any():
        return []
    best: list = []
    best_score = (-1, -1)
    for attempt in range(max(1, restarts)):
        if attempt == 0:
            side = favour
            start = int(np.argmax(degs[side]))
            if degs[side][start] == 0:
                side, start = 1 - side, int(np.argmax(degs[1 - side]))
        else:
            side = int(rng.integers(2))
            live = np.flatnonzero(degs[side])
            start = int(live[rng.integers(live.size)])
        used = [np.zeros(m.shape[0], dtype=bool), np.zeros(m.shape[1], dtype=bool)]
        used[side][start] = True
        path = [(side, start)]
        _extend(path, used, adj, rng, rotations)
        path.reverse()
        _extend(path, used, adj, rng, rotations)
        score = (sum(1 for sd, _ in path if sd == favour), len(path))
        if score > best_score:
            best, best_score = path, score
    return best


def _grow_mono_path(g: ColouredGraph, k: int, start: int, covered: np.ndarray) -> list[int]:
    """Two-ended greedy colour-``k`` path from ``start``, preferring uncovered
    vertices and stepping through covered ones only to reach uncovered ones."""
    in_path = np.zeros(g.n, dtype=bool)
    in_path[start] = True
    path = [start]

    for _ in range(2):
        while True:
            u = path[-1]
            nbrs = (g.colours[u] == k) & ~in_path
            fresh = np.flatnonzero(nbrs & ~covered)
            if fresh.size:
                v = int(fresh[0])
            else:
                bridges = np.flatnonzero(nbrs)
                target = ~covered & ~in_path
                if not bridges.size or not target.any():
                    break
                reach = (g.colours[np.ix_(bridges, np.flatnonzero(target))] == k).any(axis=1)
                if not reach.any():
                    break
                v = int(bridges[np.argmax(reach)])
            in_path[v] = True
            path.append(v)
        path.reverse()
    return path


def baseline_cover(g: ColouredGraph) -> Covering:
    """Any monochromatic path covering, built greedily.

    Repeatedly take the lowest uncovered vertex and grow the colour path from
    it that picks up most uncovered vertices.  Vertices without edges become
    colourless singletons.
    """
    covered = np.zeros(g.n, dtype=bool)
    pieces: Covering = []
    for v in range(g.n):
        if covered[v]:
            continue
        best, best_colour, best_gain = [v], None, 1
        for k in range(1, g.r + 1):
            path = _grow_mono_path(g, k, v, covered)
            gain = int(np.count_nonzero(~covered[path]))
            if len(path) > 1 and gain > best_gain:
                best, best_colour, best_gain = path, k, gain
        pieces.append(MonoPiece(tuple(best), best_colour))
        covered[best] = True
    return pieces


# -- the batch step -----------------------------------------------------------


def removable_batch(
    g: ColouredGraph,
    pieces: Sequence[MonoPiece],
    edge: Sequence[ColourSet],
    cfg: EngineConfig | None = None,
    rng: np.random.Generator | None = None,
    chi: int | None = None,
) -> list[MonoPiece]:
    """New paths that shrink one exclusive set of the hyperedge ``edge`` to at
    most half the size of the smallest.

    Each round samples ``eta`` vertices from what is left of every exclusive
    set, takes the densest sampled pair, and grows a path in its majority
    colour.  The path colour avoids at least one of the two colour sets; the
    path's vertices on that side stop being exclusive.  Stops once some
    residual drops to ``eta`` or after ``cfg.max_stall`` rounds in a row whose
    path removed fewer than ``cfg.target_fraction * eta`` vertices.
    """
    cfg = cfg or EngineConfig()
    rng = rng if rng is not None else np.random.default_rng(cfg.rng_seed)
    bits = cover_bits(g.n, pieces)
    edge = sorted(edge, key=lambda x: -int(np.count_nonzero(_exclusive(bits, x))))
    resid = [_exclusive(bits, x) for x in edge]
    sizes = [int(np.count_nonzero(m)) for m in resid]
    if min(sizes) == 0:
        raise ValueError(f"every exclusive set of the hyperedge must be nonempty, sizes are {sizes}")
    if chi is not None and min(sizes) ** chi <= g.n:
        raise ValueError(f"exclusive sets {sizes} do not all exceed n^(1/{chi}) for n={g.n}")
    eta = -(-sizes[-1] // 2)
    counts = list(sizes)
    out: list[MonoPiece] = []
    stall = 0
    while all(c > eta for c in counts):
        samples = [rng.choice(np.flatnonzero(m), eta, replace=False) for m in resid]
        best_pair, best_edges = None, -1
        for i, j in combinations(range(len(edge)), 2):
            e = int(np.count_nonzero(g.colours[np.ix_(samples[i], samples[j])]))
            if e > best_edges:
                best_pair, best_edges = (i, j), e
        if best_edges == 0:
            raise EngineError(
                f"no edges between {len(edge)} disjoint samples of size {eta}: "
                "the graph has more independent vertices than promised"
            )
        i, j = best_pair
        block = g.colours[np.ix_(samples[i], samples[j])]
        counts_by_colour = np.bincount(block.ravel(), minlength=g.r + 1)
        counts_by_colour[0] = 0
        k = int(np.argmax(counts_by_colour))
        side = 0 if k not in edge[i] else 1
        path = bipartite_path(block == k, rng, cfg.restarts, cfg.rotations, favour=side)
        if len(path) >= cfg.min_piece:
            ends = (samples[i], samples[j])
            vertices = tuple(int(ends[sd][ix]) for sd, ix in path)
            out.append(MonoPiece(vertices, k))
            removed = 0
            for t, x in enumerate(edge):
                if k not in x:
                    before = counts[t]
                    resid[t][list(vertices)] = False
                    counts[t] = int(np.count_nonzero(resid[t]))
                    if t == (i, j)[side]:
                        removed = before - counts[t]
            stall = stall + 1 if removed < cfg.target_fraction * eta else 0
        else:
            stall += 1
        if stall >= cfg.max_stall:
            log.debug("batch stalled after %d pieces", len(out))
            break
    return out


def filter_colours(pieces: Sequence[MonoPiece], x: ColourSet) -> Covering:
    """Drop the pieces coloured in ``x``; the rest must still cover the same vertices."""
    drop = set(x)
    kept = [p for p in pieces if p.colour not in drop]
    before = {v for p in pieces for v in p.vertices}
    after = {v for p in kept for v in p.vertices}
    if before != after:
        lost = sorted(before - after)
        raise ValueError(f"dropping colours {sorted(drop)} uncovers vertices {lost[:10]}")
    return kept


# -- main loop ---------------------------------------------------------------


def iteration_cap(r: int, s: int, n: int, chi: int) -> int:
    return math.ceil(4 * math.comb(r, r - s) * n ** (1 / chi))


def cover_few_colours(
    g: ColouredGraph, s: int, alpha: int, cfg: EngineConfig | None = None
) -> tuple[Covering, EngineTrace]:
    """Cover ``g`` by monochromatic paths using at most ``s`` colours.

    ``alpha`` must bound the independence number of ``g``; it fixes the
    Kneser hypergraph that drives the choice of colour sets.
    """
    cfg = cfg or EngineConfig()
    r, n = g.r, g.n
    if not 1 <= s < r:
        raise ValueError(f"need r > s >= 1, got r={r}, s={s}")
    chi = chi_formula(r, s, alpha)
    trace = EngineTrace(chi=chi, threshold=n ** (1 / chi) if n else 0.0)
    if chi == 1:
        trace.singletons_added = n
        return [MonoPiece.single(v) for v in range(n)], trace

    kh = build_kneser(r, s, alpha)
    rng = np.random.default_rng(cfg.rng_seed)
    pieces = baseline_cover(g)
    trace.baseline_size = len(pieces)
    bits = cover_bits(n, pieces)
    cap = iteration_cap(r, s, n, chi)

    def current_sizes() -> dict[ColourSet, int]:
        return {x: int(np.count_nonzero(_exclusive(bits, x))) for x in kh.vertices}

    sizes = current_sizes()
    while all(v ** chi > n for v in sizes.values()):
        if len(trace.iterations) >= cap:
            log.warning("iteration cap %d reached", cap)
            trace.fallback = True
            break
        edge = balanced_hyperedge(sizes, kh, n, chi)
        before = _delta(sizes.values())
        batch = removable_batch(g, pieces, edge, cfg, rng)
        if not batch:
            trace.fallback = True
            break
        pieces.extend(batch)
        for p in batch:
            bits[list(p.vertices)] |= 1 << p.colour
        new_sizes = current_sizes()
        after = _delta(new_sizes.values())
        trace.iterations.append(IterationRecord(edge, sizes, before, after, len(batch)))
        if not after < before:
            raise EngineError(f"potential did not drop: {before} -> {after}", trace)
        sizes = new_sizes

    x = min(kh.vertices, key=lambda y: sizes[y])
    trace.final_set = x
    lonely = np.flatnonzero(_exclusive(bits, x)).tolist()
    trace.singletons_added = len(lonely)
    pieces.extend(MonoPiece.single(v) for v in lonely)
    try:
        result = filter_colours(pieces, x)
    except ValueError as exc:
        raise EngineError(str(exc), trace) from None
    if len(colours_of(result)) > s:
        raise EngineError(f"{len(colours_of(result))} colours survive the filter, budget {s}", trace)
    return result, trace


def singleton_count(pieces: Sequence[MonoPiece]) -> int:
    return sum(1 for p in pieces if p.colour is None)
