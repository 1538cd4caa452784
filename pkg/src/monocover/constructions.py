"""Extremal coloured graphs that force large coverings.

Three regimes, chosen from ``(r, s, alpha)``:

* case 1 (chi = 1): a blow-up of the Johnson graph J(r, r-s), each edge
  coloured by a colour shared by the two colour sets;
* case 2: chi nested layers of sizes about n^(i/chi), each split into at most
  alpha cliques, every clique owning one colour;
* case 3: like case 2, except the first layer is a Johnson blow-up on
  ``t = r - alpha*(chi-1)`` colours.

Every output carries its part structure so the colouring rule can be
re-checked edge by edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .graph import ColouredGraph
from .kneser import ColourSet, chi_formula, colex_subsets


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class SimpleGraph:
    """An uncoloured simple graph with labelled vertices."""

    labels: tuple
    adjacency: np.ndarray

    @property
    def n(self) -> int:
        return len(self.labels)

    def as_coloured(self) -> ColouredGraph:
        return ColouredGraph(self.n, 1, self.adjacency.astype(np.uint8))


def johnson(a: int, b: int) -> SimpleGraph:
    """J(a, b): the ``b``-subsets of ``[a]``, adjacent iff they intersect."""
    if not 1 <= b <= a:
        raise ConstructionError(f"johnson needs 1 <= b <= a, got a={a}, b={b}")
    labels = colex_subsets(a, b)
    sets = [set(x) for x in labels]
    m = len(labels)
    adj = np.zeros((m, m), dtype=bool)
    for i in range(m):
        for j in range(i + 1, m):
            if sets[i] & sets[j]:
                adj[i, j] = adj[j, i] = True
    return SimpleGraph(tuple(labels), adj)


@dataclass
class ConstructionOutput:
    graph: ColouredGraph
    case_id: int
    r: int
    s: int
    alpha: int
    chi: int
    # Johnson-blow-up parts: V_X (case 1) or V_{1,X} (case 3)
    johnson_parts: dict[ColourSet, np.ndarray] = field(default_factory=dict)
    # clique parts V_{i,j} of the layers i (cases 2 and 3)
    layer_parts: dict[tuple[int, int], np.ndarray] = field(default_factory=dict)
    layers: list[np.ndarray] = field(default_factory=list)
    t: int | None = None
    k: list[int] | None = None
    phi: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.graph.n

    def parts(self) -> dict[str, list[int]]:
        """Named parts, as written to the metadata sidecar."""
        out = {}
        for x, vs in self.johnson_parts.items():
            out["X{" + ",".join(map(str, x)) + "}"] = vs.tolist()
        for (i, j), vs in self.layer_parts.items():
            out[f"V{{{i},{j}}}"] = vs.tolist()
        return out

    def metadata(self) -> dict:
        return {
            "case": self.case_id,
            "r": self.r,
            "s": self.s,
            "alpha": self.alpha,
            "chi": self.chi,
            "t": self.t,
            "k": self.k,
            "phi": {f"({i},{j})": c for (i, j), c in self.phi.items()},
            "parts": self.parts(),
        }


def iroot(x: int, k: int) -> int:
    """Largest integer ``m`` with ``m**k <= x``."""
    if x < 0 or k < 1:
        raise ValueError("iroot needs x >= 0 and k >= 1")
    m = int(round(x ** (1.0 / k)))
    while m ** k > x:
        m -= 1
    while (m + 1) ** k <= x:
        m += 1
    return m


def equitable_split(total: int, parts: int) -> list[int]:
    """Sizes of ``parts`` near-equal pieces summing to ``total``, larger first."""
    q, rem = divmod(total, parts)
    return [q + 1] * rem + [q] * (parts - rem)


def layer_sizes(n: int, chi: int) -> list[int]:
    """``floor(n^(i/chi))`` for ``i < chi``; the last layer takes the rest."""
    sizes = [iroot(n ** i, chi) for i in range(1, chi)]
    sizes.append(n - sum(sizes))
    return sizes


def case_of(r: int, s: int, alpha: int) -> int:
    chi = chi_formula(r, s, alpha)
    if s * (alpha + 1) < alpha * r:
        return 1
    return 2 if s < chi * alpha else 3


def case2_k(r: int, s: int, alpha: int) -> list[int]:
    """Clique counts per layer: greedy, each in ``[1, alpha]``, summing to ``s+1``."""
    chi = chi_formula(r, s, alpha)
    remaining = s + 1
    ks = []
    for i in range(1, chi + 1):
        ki = min(alpha, remaining - (chi - i))
        ks.append(ki)
        remaining -= ki
    return ks


def min_n(r: int, s: int, alpha: int) -> int:
    """Smallest ``n`` accepted by the constructor for this regime."""
    n = 1
    while True:
        try:
            _check_size(r, s, alpha, n)
            return n
        except ConstructionError:
            n += 1


def _check_size(r: int, s: int, alpha: int, n: int) -> None:
    case = case_of(r, s, alpha)
    chi = chi_formula(r, s, alpha)
    if case == 1:
        m = comb(r, r - s)
        if n < m:
            raise ConstructionError(f"case 1 needs n >= C({r},{r - s}) = {m}, got n={n}")
        return
    sizes = layer_sizes(n, chi)
    if case == 2:
        ks = case2_k(r, s, alpha)
        if sizes[0] < r:
            raise ConstructionError(f"case 2 needs floor(n^(1/{chi})) >= r = {r}, got {sizes[0]} at n={n}")
        if any(sz < ki for sz, ki in zip(sizes, ks)):
            raise ConstructionError(f"case 2 layers {sizes} too small for clique counts {ks} at n={n}")
        return
    t = r - alpha * (chi - 1)
    m = comb(t, r - s)
    if sizes[0] < m:
        raise ConstructionError(f"case 3 needs floor(n^(1/{chi})) >= C({t},{r - s}) = {m}, got {sizes[0]} at n={n}")
    if any(sz < alpha for sz in sizes):
        raise ConstructionError(f"case 3 needs every layer to have >= alpha = {alpha} vertices, got {sizes} at n={n}")


def _blocks(sizes: list[int], start: int = 0) -> list[np.ndarray]:
    out = []
    for sz in sizes:
        out.append(np.arange(start, start + sz))
        start += sz
    return out


def _johnson_blowup(colours: np.ndarray, labels: list[ColourSet], parts: list[np.ndarray]) -> None:
    """Fill in the Johnson blow-up edges among ``parts``, coloured min(X & Y)."""
    for (x, px), (y, py) in combinations(list(zip(labels, parts)), 2):
        common = set(x) & set(y)
        if common:
            colours[np.ix_(px, py)] = min(common)
            colours[np.ix_(py, px)] = min(common)
    for x, px in zip(labels, parts):
        colours[np.ix_(px, px)] = min(x)


def _finish(colours: np.ndarray, r: int) -> ColouredGraph:
    np.fill_diagonal(colours, 0)
    return ColouredGraph(colours.shape[0], r, colours)


def construct_case1(r: int, s: int, alpha: int, n: int) -> ConstructionOutput:
    if case_of(r, s, alpha) != 1:
        raise ConstructionError(f"(r={r}, s={s}, alpha={alpha}) is not in the chi = 1 regime: need s < alpha*r/(alpha+1)")
    _check_size(r, s, alpha, n)
    labels = colex_subsets(r, r - s)
    parts = _blocks(equitable_split(n, len(labels)))
    colours = np.zeros((n, n), dtype=np.uint8)
    _johnson_blowup(colours, labels, parts)
    return ConstructionOutput(
        graph=_finish(colours, r),
        case_id=1,
        r=r,
        s=s,
        alpha=alpha,
        chi=1,
        johnson_parts=dict(zip(labels, parts)),
    )


def _layered(n: int, chi: int, ks: list[int]) -> tuple[list[np.ndarray], dict[tuple[int, int], np.ndarray]]:
    layers = _blocks(layer_sizes(n, chi))
    cliques = {}
    for i, (layer, ki) in enumerate(zip(layers, ks), start=1):
        for j, part in enumerate(_blocks(equitable_split(len(layer), ki), int(layer[0])), start=1):
            cliques[(i, j)] = part
    return layers, cliques


def _colour_cliques(colours: np.ndarray, cliques: dict[tuple[int, int], np.ndarray], phi: dict, layers: list[np.ndarray]) -> None:
    """Clique V_{i,j} and all its edges to higher layers get colour phi(i,j)."""
    for (i, j), part in cliques.items():
        c = phi[(i, j)]
        colours[np.ix_(part, part)] = c
        higher = np.concatenate(layers[i:]) if i < len(layers) else np.empty(0, dtype=int)
        colours[np.ix_(part, higher)] = c
        colours[np.ix_(higher, part)] = c


def construct_case2(r: int, s: int, alpha: int, n: int) -> ConstructionOutput:
    if case_of(r, s, alpha) != 2:
        raise ConstructionError(f"(r={r}, s={s}, alpha={alpha}) is not case 2: need alpha*r/(alpha+1) <= s < chi*alpha")
    _check_size(r, s, alpha, n)
    chi = chi_formula(r, s, alpha)
    ks = case2_k(r, s, alpha)
    layers, cliques = _layered(n, chi, ks)
    phi = {key: c for c, key in enumerate(sorted(cliques), start=1)}
    colours = np.zeros((n, n), dtype=np.uint8)
    _colour_cliques(colours, cliques, phi, layers)
    return ConstructionOutput(
        graph=_finish(colours, r),
        case_id=2,
        r=r,
        s=s,
        alpha=alpha,
        chi=chi,
        layer_parts=cliques,
        layers=layers,
        k=ks,
        phi=phi,
    )


def construct_case3(r: int, s: int, alpha: int, n: int) -> ConstructionOutput:
    if case_of(r, s, alpha) != 3:
        raise ConstructionError(f"(r={r}, s={s}, alpha={alpha}) is not case 3: need s >= alpha*r/(alpha+1) and s >= chi*alpha")
    _check_size(r, s, alpha, n)
    chi = chi_formula(r, s, alpha)
    t = r - alpha * (chi - 1)
    layers, cliques = _layered(n, chi, [1] + [alpha] * (chi - 1))
    del cliques[(1, 1)]
    labels = colex_subsets(t, r - s)
    jparts = _blocks(equitable_split(len(layers[0]), len(labels)))
    phi = {key: c for c, key in enumerate(sorted(cliques), start=t + 1)}
    colours = np.zeros((n, n), dtype=np.uint8)
    _johnson_blowup(colours, labels, jparts)
    upper = np.arange(len(layers[0]), n)
    for x, part in zip(labels, jparts):
        colours[np.ix_(part, upper)] = min(x)
        colours[np.ix_(upper, part)] = min(x)
    _colour_cliques(colours, cliques, phi, layers)
    return ConstructionOutput(
        graph=_finish(colours, r),
        case_id=3,
        r=r,
        s=s,
        alpha=alpha,
        chi=chi,
        johnson_parts=dict(zip(labels, jparts)),
        layer_parts=cliques,
        layers=layers,
        t=t,
        phi=phi,
    )


def construct_lower_bound(r: int, s: int, alpha: int, n: int) -> ConstructionOutput:
    if not 1 <= s < r or alpha < 1:
        raise ConstructionError(f"need r > s >= 1 and alpha >= 1, got r={r}, s={s}, alpha={alpha}")
    builder = {1: construct_case1, 2: construct_case2, 3: construct_case3}[case_of(r, s, alpha)]
    return builder(r, s, alpha, n)


# -- certificates ----------------------------------------------------------


def _locate(out: ConstructionOutput) -> tuple[list, list]:
    """Per vertex: (layer index, part key) with part key an X or an (i, j)."""
    layer = [0] * out.n
    part: list = [None] * out.n
    for i, vs in enumerate(out.layers, start=1):
        for v in vs.tolist():
            layer[v] = i
    for x, vs in out.johnson_parts.items():
        for v in vs.tolist():
            part[v] = x
            layer[v] = 1
    for key, vs in out.layer_parts.items():
        for v in vs.tolist():
            part[v] = key
    return layer, part


def expected_colour(out: ConstructionOutput, u: int, v: int, where=None) -> int | None:
    """The colour the case rule assigns to the pair ``uv`` (None: no edge).

    Recomputed from the part labels only, independently of how the colour
    matrix was filled.
    """
    layer, part = where or _locate(out)
    if layer[u] > layer[v]:
        u, v = v, u
    pu, pv = part[u], part[v]
    if out.case_id == 1 or (out.case_id == 3 and layer[u] == 1 and layer[v] == 1):
        common = set(pu) & set(pv)
        return min(common) if common else None
    if out.case_id == 3 and layer[u] == 1:
        return min(pu)
    if layer[u] == layer[v] and pu != pv:
        return None
    return out.phi[pu]


def colouring_mismatches(out: ConstructionOutput) -> list[tuple[int, int]]:
    """Pairs whose stored colour differs from the case rule."""
    where = _locate(out)
    bad = []
    for u in range(out.n):
        for v in range(u + 1, out.n):
            if out.graph.colour(u, v) != expected_colour(out, u, v, where):
                bad.append((u, v))
    return bad


def _parts_partition(out: ConstructionOutput) -> bool:
    allv = [v for vs in out.johnson_parts.values() for v in vs.tolist()]
    allv += [v for vs in out.layer_parts.values() for v in vs.tolist()]
    return sorted(allv) == list(range(out.n))


def phi_is_bijection(out: ConstructionOutput) -> bool:
    values = sorted(out.phi.values())
    if out.case_id == 2:
        return values == list(range(1, sum(out.k) + 1)) and set(out.phi) == set(out.layer_parts)
    if out.case_id == 3:
        return values == list(range(out.t + 1, out.r + 1)) and set(out.phi) == set(out.layer_parts)
    return not out.phi


def johnson_starved(out: ConstructionOutput, x: ColourSet) -> bool:
    """Every edge touching the Johnson part of ``x`` has a colour in ``x``."""
    vs = out.johnson_parts[x]
    seen = out.graph.colours[vs]
    cols = set(np.unique(seen[seen > 0]).tolist())
    return cols <= set(x)


def starvation_case1(out: ConstructionOutput) -> bool:
    """For every colour set T with |T| <= s some part V_X with X disjoint from T
    only sees colours of X."""
    r, s = out.r, out.s
    for size in range(0, s + 1):
        for T in combinations(range(1, r + 1), size):
            if not any(not set(x) & set(T) and johnson_starved(out, x) for x in out.johnson_parts):
                return False
    return True


def starvation_layers(out: ConstructionOutput) -> bool:
    """Every edge at V_{i,j} has colour phi(i,j) or reaches a lower layer."""
    layer, _ = _locate(out)
    layer = np.asarray(layer)
    for (i, j), vs in out.layer_parts.items():
        rows = out.graph.colours[vs]
        other = (rows > 0) & (rows != out.phi[(i, j)])
        if np.any(layer[np.nonzero(other)[1]] >= i):
            return False
    if out.case_id == 3:
        return all(johnson_starved(out, x) for x in out.johnson_parts)
    return True


def structure_ok(out: ConstructionOutput) -> bool:
    return _parts_partition(out) and phi_is_bijection(out)
