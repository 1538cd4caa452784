from itertools import combinations
from math import comb

import numpy as np
import pytest

from monocover.constructions import (
    ConstructionError,
    case2_k,
    case_of,
    colouring_mismatches,
    construct_case1,
    construct_case2,
    construct_case3,
    construct_lower_bound,
    equitable_split,
    iroot,
    johnson,
    layer_sizes,
    min_n,
    phi_is_bijection,
    starvation_case1,
    starvation_layers,
    structure_ok,
)
from monocover.graph import ColouredGraph, independence_number
from monocover.kneser import chi_formula

SMALL = [
    (r, s, a)
    for r in range(2, 6)
    for s in range(1, r)
    for a in (1, 2)
    if min_n(r, s, a) <= 40
]


def naive_root(x, k):
    m = 0
    while (m + 1) ** k <= x:
        m += 1
    return m


def test_johnson_examples():
    j = johnson(4, 2)
    assert j.n == 6
    assert j.adjacency.sum() // 2 == 12
    # disjoint pairs {1,2}-{3,4} etc. are the only non-edges
    assert independence_number(j.as_coloured()) == 2
    assert johnson(3, 1).adjacency.sum() == 0
    with pytest.raises(ConstructionError):
        johnson(2, 3)


@pytest.mark.parametrize("a, b", [(4, 2), (5, 2), (5, 3), (6, 2)])
def test_johnson_adjacency_is_intersection(a, b):
    j = johnson(a, b)
    for (i, x), (k, y) in combinations(enumerate(j.labels), 2):
        assert j.adjacency[i, k] == bool(set(x) & set(y))
    assert independence_number(j.as_coloured()) == a // b


@pytest.mark.parametrize("x, k", [(0, 3), (1, 2), (63, 3), (64, 3), (65, 3), (10**6, 2), (3**20, 5), (2**60 - 1, 2)])
def test_iroot(x, k):
    if x < 10**7:
        assert iroot(x, k) == naive_root(x, k)
    m = iroot(x, k)
    assert m**k <= x < (m + 1) ** k


def test_equitable_split():
    assert equitable_split(10, 3) == [4, 3, 3]
    assert equitable_split(2, 2) == [1, 1]


def test_layer_sizes_example():
    assert layer_sizes(64, 3) == [4, 16, 44]
    assert layer_sizes(100, 2) == [10, 90]


def test_case_selection():
    assert case_of(3, 1, 1) == 1
    assert case_of(2, 1, 1) == 2
    assert case_of(4, 3, 2) == 2
    assert case_of(4, 2, 1) == 3
    assert case2_k(4, 3, 2) == [2, 2]
    assert case2_k(3, 2, 1) == [1, 1, 1]


@pytest.mark.parametrize("r, s, a", [(r, s, a) for r in range(2, 8) for s in range(1, r) for a in range(1, 4)])
def test_case2_k_contract(r, s, a):
    if case_of(r, s, a) != 2:
        return
    ks = case2_k(r, s, a)
    assert len(ks) == chi_formula(r, s, a)
    assert sum(ks) == s + 1
    assert all(1 <= k <= a for k in ks)


def test_case1_example():
    out = construct_case1(3, 1, 1, 6)
    assert out.chi == 1
    assert {x: len(v) for x, v in out.johnson_parts.items()} == {(1, 2): 2, (1, 3): 2, (2, 3): 2}
    g = out.graph
    a, b = out.johnson_parts[(1, 2)].tolist(), out.johnson_parts[(1, 3)].tolist()
    assert g.colour(a[0], b[0]) == 1
    assert g.colour(a[0], a[1]) == 1
    c = out.johnson_parts[(2, 3)].tolist()
    assert g.colour(a[0], c[0]) == 2 and g.colour(b[0], c[0]) == 3


def test_case2_example():
    out = construct_case2(4, 3, 2, 125)
    assert out.k == [2, 2]
    assert [len(x) for x in out.layers] == [11, 114]
    assert out.phi == {(1, 1): 1, (1, 2): 2, (2, 1): 3, (2, 2): 4}
    assert independence_number(out.graph) <= 2


def test_case3_example():
    out = construct_case3(4, 2, 1, 100)
    assert out.t == 3
    assert out.phi == {(2, 1): 4}
    assert sorted(len(v) for v in out.johnson_parts.values()) == [3, 3, 4]
    assert len(out.layer_parts[(2, 1)]) == 90


@pytest.mark.parametrize(
    "args",
    [(3, 1, 1, 2), (2, 1, 1, 3), (4, 2, 1, 8), (2, 1, 1, 0)],
)
def test_too_small(args):
    with pytest.raises(ConstructionError):
        construct_lower_bound(*args)


def test_wrong_case_rejected():
    with pytest.raises(ConstructionError):
        construct_case1(2, 1, 1, 10)
    with pytest.raises(ConstructionError):
        construct_case2(3, 1, 1, 10)
    with pytest.raises(ConstructionError):
        construct_case3(2, 1, 1, 10)
    with pytest.raises(ConstructionError):
        construct_lower_bound(3, 3, 1, 10)


def test_min_n_is_tight():
    for r, s, a in SMALL:
        m = min_n(r, s, a)
        construct_lower_bound(r, s, a, m)
        if m > 1:
            with pytest.raises(ConstructionError):
                construct_lower_bound(r, s, a, m - 1)


def rule_colour(out, u, v):
    """The colour rule written out directly from the layer arithmetic."""
    vertex_part = {}
    for key, vs in list(out.johnson_parts.items()) + list(out.layer_parts.items()):
        for x in vs.tolist():
            vertex_part[x] = key
    bounds = np.cumsum([len(x) for x in out.layers]) if out.layers else np.array([out.n])
    lu, lv = int(np.searchsorted(bounds, u, "right")), int(np.searchsorted(bounds, v, "right"))
    if lu > lv:
        u, v, lu, lv = v, u, lv, lu
    pu, pv = vertex_part[u], vertex_part[v]
    if out.case_id == 1 or (out.case_id == 3 and lu == 0):
        if out.case_id == 1 or lv == 0:
            common = set(pu) & set(pv)
            return min(common) if common else None
        return min(pu)
    if lu == lv:
        return out.phi[pu] if pu == pv else None
    return out.phi[pu]


@pytest.mark.parametrize("r, s, a", SMALL)
def test_colour_rule_and_structure(r, s, a):
    n = max(min_n(r, s, a), 12)
    out = construct_lower_bound(r, s, a, n)
    assert out.n == n
    assert structure_ok(out) and phi_is_bijection(out)
    assert colouring_mismatches(out) == []
    for u in range(n):
        for v in range(u + 1, n):
            assert out.graph.colour(u, v) == rule_colour(out, u, v)
    assert len({c for _, _, c in out.graph.edges()}) <= r
    found = independence_number(out.graph)
    assert found is not None and found <= a


@pytest.mark.parametrize("r, s, a", SMALL)
def test_starvation(r, s, a):
    out = construct_lower_bound(r, s, a, max(min_n(r, s, a), 12))
    if out.case_id == 1:
        assert starvation_case1(out)
    else:
        assert starvation_layers(out)


def test_case1_starvation_direct():
    # no colour set of size s can touch every part of the blow-up
    out = construct_case1(4, 1, 1, 12)
    for T in combinations(range(1, 5), 1):
        free = [x for x in out.johnson_parts if not set(x) & set(T)]
        assert free
        for x in free:
            vs = out.johnson_parts[x]
            seen = set(out.graph.colours[vs].ravel().tolist()) - {0}
            assert seen <= set(x)


def test_mismatch_detector_catches_tampering():
    out = construct_case2(2, 1, 1, 16)
    c = out.graph.colours.copy()
    u, v = int(out.layers[1][0]), int(out.layers[1][1])
    c[u, v] = c[v, u] = 1
    out.graph = ColouredGraph(out.n, out.r, c)
    assert colouring_mismatches(out) == [(u, v)]
    assert not starvation_layers(out)


def test_metadata():
    out = construct_lower_bound(4, 2, 1, 100)
    meta = out.metadata()
    assert meta["case"] == 3 and meta["t"] == 3 and meta["chi"] == 2
    assert meta["phi"] == {"(2,1)": 4}
    parts = meta["parts"]
    assert set(parts) == {"X{1,2}", "X{1,3}", "X{2,3}", "V{2,1}"}
    assert sorted(v for vs in parts.values() for v in vs) == list(range(100))


def test_johnson_part_count():
    for r, s, a in SMALL:
        out = construct_lower_bound(r, s, a, max(min_n(r, s, a), 12))
        if out.case_id == 1:
            assert len(out.johnson_parts) == comb(r, r - s)
        elif out.case_id == 3:
            assert len(out.johnson_parts) == comb(out.t, r - s)
