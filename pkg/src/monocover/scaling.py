"""Engine runs over (n, seed) grids and the log-log slope of the covering size."""

from __future__ import annotations

import csv
import os
import time
from dataclasses import asdict, dataclass, fields
from statistics import median
from typing import Iterable, Sequence

import numpy as np

from .constructions import construct_lower_bound
from .engine import EngineConfig, cover_few_colours, singleton_count
from .graph import ColouredGraph, colours_of

FAMILIES = ("lower-bound", "random")


@dataclass
class ScalingRow:
    r: int
    s: int
    alpha: int
    n: int
    seed: int
    engine_size: int
    singleton_count: int
    colours_used: int
    runtime_ms: int


CSV_HEADER = [f.name for f in fields(ScalingRow)]


def random_complete_colouring(n: int, r: int, seed: int) -> ColouredGraph:
    """K_n with every edge coloured uniformly from ``[r]``."""
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.integers(1, r + 1, size=(n, n), dtype=np.uint8), 1)
    return ColouredGraph(n, r, upper + upper.T)


def instance(family: str, r: int, s: int, alpha: int, n: int, seed: int) -> ColouredGraph:
    if family == "lower-bound":
        return construct_lower_bound(r, s, alpha, n).graph
    if family == "random":
        if alpha != 1:
            raise ValueError("random instances are complete graphs, so alpha must be 1")
        return random_complete_colouring(n, r, seed)
    raise ValueError(f"unknown family {family!r}, expected one of {FAMILIES}")


def run_one(g: ColouredGraph, r: int, s: int, alpha: int, seed: int, cfg: EngineConfig | None = None, timing: bool = True):
    cfg = cfg or EngineConfig()
    cfg = EngineConfig(**{**asdict(cfg), "rng_seed": seed})
    t0 = time.perf_counter()
    pieces, trace = cover_few_colours(g, s, alpha, cfg)
    ms = int(round((time.perf_counter() - t0) * 1000)) if timing else 0
    row = ScalingRow(r, s, alpha, g.n, seed, len(pieces), singleton_count(pieces), len(colours_of(pieces)), ms)
    return row, pieces, trace


def run_scaling(
    r: int,
    s: int,
    alpha: int,
    ns: Sequence[int],
    seeds: Iterable[int],
    family: str = "lower-bound",
    cfg: EngineConfig | None = None,
    timing: bool = True,
) -> list[ScalingRow]:
    rows = []
    seeds = list(seeds)
    for n in ns:
        for seed in seeds:
            g = instance(family, r, s, alpha, n, seed)
            rows.append(run_one(g, r, s, alpha, seed, cfg, timing)[0])
    return rows


def medians(rows: Sequence[ScalingRow]) -> dict[int, float]:
    by_n: dict[int, list[int]] = {}
    for row in rows:
        by_n.setdefault(row.n, []).append(row.engine_size)
    return {n: float(median(v)) for n, v in sorted(by_n.items())}


def fit_slope(rows: Sequence[ScalingRow]) -> float:
    """Least-squares slope of log(median size) against log(n)."""
    meds = medians(rows)
    if len(meds) < 2:
        raise ValueError("need at least two values of n to fit a slope")
    x = np.log(list(meds))
    y = np.log(list(meds.values()))
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def write_rows(rows: Sequence[ScalingRow], path, append: bool = True) -> None:
    fresh = not append or not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a" if append else "w", newline="") as fh:
        writer = csv.writer(fh)
        if fresh:
            writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow([getattr(row, name) for name in CSV_HEADER])
