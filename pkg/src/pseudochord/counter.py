"""Exact counting of simple pseudochord arrangements of a matching.

Chords are inserted one at a time in an insertion order.  Every partial
embedding of the first ``k-1`` chords is materialized; the last chord is only
counted (memoized path counting over faces), never inserted.
"""
from __future__ import annotations

import logging
import os
import random
from concurrent.futures import ProcessPoolExecutor
from typing import Iterator, Sequence

from .matching import Matching
from .subdivision import Embedding, _apply, boundary_embedding, count_insertions, route_edges

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 200_000_000
WEIGHT_SAMPLES = 64
WEIGHT_SEED = 0


class BudgetExceeded(RuntimeError):
    """More embeddings would be materialized than the configured budget allows."""


class Budget:
    __slots__ = ("limit", "used")

    def __init__(self, limit: int | None = DEFAULT_BUDGET):
        self.limit = limit
        self.used = 0

    def charge(self, n: int = 1) -> None:
        self.used += n
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceeded(f"embedding budget of {self.limit} exceeded")


def _check_order(m: Matching, order: Sequence[int]) -> list[int]:
    order = list(order)
    if sorted(order) != list(range(m.k)):
        raise ValueError(f"insertion order {order} is not a permutation of 0..{m.k - 1}")
    return order


def count_completions(e: Embedding, order: Sequence[int], budget: Budget | None = None) -> int:
    """Number of ways to insert the chords ``order`` (in that order) into ``e``."""
    if not order:
        return 1
    budget = budget or Budget(None)
    last = len(order) - 1

    def dfs(emb: Embedding, level: int) -> int:
        c = order[level]
        if level == last:
            return count_insertions(emb, c)
        total = 0
        for r in route_edges(emb, c):
            budget.charge()
            total += dfs(_apply(emb, c, r), level + 1)
        return total

    return dfs(e, 0)


def _count_chunk(args) -> tuple[int, int]:
    chunk, order, limit = args
    budget = Budget(limit)
    total = 0
    for e in chunk:
        total += count_completions(e, order, budget)
    return total, budget.used


def _expand_level(frontier: list[Embedding], c: int, budget: Budget) -> list[Embedding]:
    out = []
    for e in frontier:
        for r in route_edges(e, c):
            budget.charge()
            out.append(_apply(e, c, r))
    return out


def count_arrangements(
    m: Matching,
    order: Sequence[int] | None = None,
    *,
    workers: int = 1,
    budget: int | None = DEFAULT_BUDGET,
    split: int = 256,
) -> int:
    """Exact ``|arr(m)|``.

    Levels are expanded breadth-first until the frontier holds at least
    ``split`` embeddings (``split * workers`` when parallel); the frontier is
    then divided into contiguous chunks that are counted depth-first, in
    worker processes when ``workers > 1``.  Sums are exact, so the result does
    not depend on ``workers``.
    """
    if m.k == 0:
        return 1
    if order is None:
        order = default_order(m, estimate_weights(m, WEIGHT_SAMPLES, WEIGHT_SEED))
    order = _check_order(m, order)
    tracker = Budget(budget)
    frontier = [boundary_embedding(m)]
    level = 0
    target = split * max(1, workers)
    while level < m.k - 1 and len(frontier) < target:
        frontier = _expand_level(frontier, order[level], tracker)
        level += 1
    rest = order[level:]
    if workers <= 1 or len(frontier) < 2:
        return sum(count_completions(e, rest, tracker) for e in frontier)
    n_chunks = min(len(frontier), 4 * workers)
    size = -(-len(frontier) // n_chunks)
    remaining = None if budget is None else budget - tracker.used
    chunks = [(frontier[i:i + size], rest, remaining) for i in range(0, len(frontier), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_count_chunk, chunks))
    tracker.charge(sum(used for _, used in results))
    return sum(total for total, _ in results)


def enumerate_completions(
    e: Embedding, order: Sequence[int], budget: Budget | None = None
) -> Iterator[Embedding]:
    """Yield every embedding obtained by inserting ``order`` into ``e``."""
    budget = budget or Budget(None)
    if not order:
        yield e
        return
    c = order[0]
    for r in route_edges(e, c):
        budget.charge()
        yield from enumerate_completions(_apply(e, c, r), order[1:], budget)


def enumerate_arrangements(
    m: Matching, order: Sequence[int] | None = None, *, budget: int | None = DEFAULT_BUDGET
) -> Iterator[Embedding]:
    """One embedding per arrangement of ``m`` (pairwise distinct chirotopes)."""
    order = _check_order(m, range(m.k) if order is None else order)
    yield from enumerate_completions(boundary_embedding(m), order, Budget(budget))


class DeadEnd(RuntimeError):
    pass


def sample_arrangement(
    m: Matching,
    seed=0,
    chords: Sequence[int] | None = None,
    *,
    rng: random.Random | None = None,
    attempts: int = 1000,
) -> Embedding:
    """Insert ``chords`` (default: all, by index) choosing a uniform route per step.

    This is not uniform over ``arr(m)``.  A partial embedding without any
    valid route for the next chord is discarded and sampling restarts.
    """
    rng = rng or random.Random(seed)
    chords = list(range(m.k)) if chords is None else list(chords)
    for _ in range(attempts):
        e = boundary_embedding(m)
        for c in chords:
            routes = route_edges(e, c)
            if not routes:
                break
            e = _apply(e, c, routes[rng.randrange(len(routes))])
        else:
            return e
    raise DeadEnd(f"no complete sample after {attempts} attempts")


def estimate_weights(m: Matching, samples: int = WEIGHT_SAMPLES, seed=WEIGHT_SEED) -> dict[int, float]:
    """Mean number of insertions of each chord into sampled arrangements of the others."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = random.Random(seed)
    weights = {}
    for c in range(m.k):
        others = [d for d in range(m.k) if d != c]
        total = 0
        for _ in range(samples):
            e = sample_arrangement(m, chords=others, rng=rng)
            total += count_insertions(e, c)
        weights[c] = total / samples
    return weights


def default_order(m: Matching, weights: dict[int, float] | None = None) -> list[int]:
    """Chords by ascending weight (ties by index): the heaviest chord goes last."""
    if weights is None:
        weights = {c: 1 for c in range(m.k)}
    return sorted(range(m.k), key=lambda c: (weights[c], c))


def default_workers() -> int:
    return int(os.environ.get("THREADS", 0)) or os.cpu_count() or 1
