from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monocover.constructions import construct_case1
from monocover.engine import EngineConfig, cover_few_colours
from monocover.graph import build_graph, validate_covering
from monocover.oracle import (
    MAX_N,
    OracleBudgetExceeded,
    enumerate_mono_paths,
    min_cover_exact,
    path_endpoints,
)

from .helpers import random_graph, seeds

CYCLE4 = [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]


def dfs_path_sets(g, k):
    """Vertex sets of all colour-k paths, by explicit depth-first search."""
    found = set()

    def walk(path):
        found.add(frozenset(path))
        for u in np.flatnonzero(g.colours[path[-1]] == k).tolist():
            if u not in path:
                walk(path + [u])

    for v in range(g.n):
        walk([v])
    return found


def brute_min_cover(g, s):
    """Try every colour set and every family of path sets, smallest first."""
    best = g.n
    for T in combinations(range(1, g.r + 1), min(s, g.r)):
        sets = set().union(*(dfs_path_sets(g, k) for k in T)) if T else set()
        sets |= {frozenset([v]) for v in range(g.n)}
        sets = list(sets)
        full = frozenset(range(g.n))
        for size in range(1, best):
            if any(frozenset().union(*c) == full for c in combinations(sets, size)):
                best = size
                break
    return best


def test_triangle_monochromatic():
    g = build_graph(3, 1, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    size, witness = min_cover_exact(g, 1)
    assert size == 1
    assert validate_covering(g, witness, 1).valid


def test_four_cycle():
    g = build_graph(4, 1, CYCLE4)
    assert min_cover_exact(g, 1)[0] == 1
    assert frozenset(range(4)) in enumerate_mono_paths(g, [1]).vertex_sets()


def test_masks_example():
    g = build_graph(3, 2, [(0, 1, 1), (1, 2, 2)])
    sets = enumerate_mono_paths(g, [1]).vertex_sets()
    assert sets == {frozenset([0]), frozenset([1]), frozenset([2]), frozenset([0, 1])}
    assert frozenset([0, 1, 2]) not in enumerate_mono_paths(g, [1, 2]).vertex_sets()


def test_edgeless_graph_needs_singletons():
    g = build_graph(5, 2, [])
    size, witness = min_cover_exact(g, 1)
    assert size == 5 and all(p.colour is None for p in witness)


def test_path_endpoints_on_path_graph():
    g = build_graph(3, 1, [(0, 1, 1), (1, 2, 1)])
    reach = path_endpoints(g, 1)
    assert reach[0b111] == 0b101
    assert reach[0b101] == 0


def test_size_limit():
    with pytest.raises(ValueError):
        min_cover_exact(build_graph(MAX_N + 1, 1, []), 1)


def test_budget():
    g = random_graph(np.random.default_rng(0), 14, 3, 0.3)
    with pytest.raises(OracleBudgetExceeded):
        min_cover_exact(g, 1, budget=2)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 7), st.integers(1, 3), st.floats(0.2, 1.0))
def test_mask_catalogue_matches_dfs(seed, n, r, density):
    g = random_graph(np.random.default_rng(seed), n, r, density)
    for k in range(1, r + 1):
        cat = enumerate_mono_paths(g, [k]).vertex_sets()
        assert cat == dfs_path_sets(g, k)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 7), st.integers(2, 3), st.floats(0.2, 1.0))
def test_min_cover_matches_brute_force(seed, n, r, density):
    g = random_graph(np.random.default_rng(seed), n, r, density)
    s = int(np.random.default_rng(seed).integers(1, r))
    size, witness = min_cover_exact(g, s)
    assert size == brute_min_cover(g, s)
    assert len(witness) == size
    assert validate_covering(g, witness, s).valid


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 10), st.integers(2, 4), st.floats(0.2, 1.0))
def test_more_colours_never_hurts(seed, n, r, density):
    g = random_graph(np.random.default_rng(seed), n, r, density)
    sizes = [min_cover_exact(g, s)[0] for s in range(1, r + 1)]
    assert all(a >= b for a, b in zip(sizes, sizes[1:]))


@pytest.mark.parametrize("n, expected", [(6, 3), (9, 4), (12, 5)])
def test_case1_blowup(n, expected):
    g = construct_case1(3, 1, 1, n).graph
    size, witness = min_cover_exact(g, 1)
    assert size == expected
    assert validate_covering(g, witness, 1).valid


@pytest.mark.parametrize("seed", range(10))
def test_oracle_beats_engine(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, 10, 2, 1.0)
    pieces, _ = cover_few_colours(g, 1, 1, EngineConfig(rng_seed=seed))
    assert validate_covering(g, pieces, 1).valid
    assert min_cover_exact(g, 1)[0] <= len(pieces)
