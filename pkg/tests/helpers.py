"""Shared fixtures-by-function for the test suite."""

import contextlib

import numpy as np
from hypothesis import strategies as st

from monocover.graph import ColouredGraph, MonoPiece

ACCEPTANCE = []


@contextlib.contextmanager
def criterion(number, title):
    """Record one acceptance criterion as PASS/FAIL for the session summary."""
    detail = {}
    try:
        yield detail
    except BaseException:
        ACCEPTANCE.append((number, title, False, detail.get("msg", "")))
        raise
    ACCEPTANCE.append((number, title, True, detail.get("msg", "")))


def random_graph(rng, n, r, density=1.0):
    upper = np.triu(rng.integers(1, r + 1, size=(n, n)), 1)
    upper *= np.triu(rng.random((n, n)) < density, 1)
    return ColouredGraph(n, r, (upper + upper.T).astype(np.uint8))


def random_path(rng, g, length):
    """A random monochromatic walk-without-repeats of at most ``length`` vertices."""
    v = int(rng.integers(g.n))
    k = int(rng.integers(1, g.r + 1))
    path = [v]
    while len(path) < length:
        cand = [u for u in np.flatnonzero(g.colours[path[-1]] == k).tolist() if u not in path]
        if not cand:
            break
        path.append(cand[int(rng.integers(len(cand)))])
    if len(path) == 1:
        return MonoPiece.single(v)
    return MonoPiece(tuple(path), k)


def planted(rng, n, r):
    """A complete r-coloured graph with a planted partition into monochromatic
    paths, each of >= 2 vertices, jointly using every colour.  Needs n >= 2r."""
    m = int(rng.integers(r, n // 2 + 1))
    sizes = 2 + rng.multinomial(n - 2 * m, np.full(m, 1 / m))
    perm = rng.permutation(n).tolist()
    upper = np.triu(rng.integers(1, r + 1, size=(n, n)), 1)
    colours = (upper + upper.T).astype(np.uint8)
    pieces, start = [], 0
    for idx, size in enumerate(sizes.tolist()):
        chunk = perm[start:start + size]
        start += size
        k = idx % r + 1
        for u, v in zip(chunk, chunk[1:]):
            colours[u, v] = colours[v, u] = k
        pieces.append(MonoPiece(tuple(chunk), k))
    return ColouredGraph(n, r, colours), pieces


seeds = st.integers(min_value=0, max_value=2**32 - 1)
