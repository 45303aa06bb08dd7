"""Counting through independent chords.

Chords are split into ``R``, ``G`` and ``B`` with every ``R``/``B`` pair
independent.  For each arrangement of ``G`` the completions by ``R`` and by
``B`` are counted separately and multiplied; the products are summed over
the arrangements of ``G``.  Sub-counts recurse on the same scheme.
"""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .counter import (
    DEFAULT_BUDGET, WEIGHT_SAMPLES, WEIGHT_SEED, Budget, count_completions,
    enumerate_completions, estimate_weights,
)
from .matching import Matching
from .subdivision import Embedding, boundary_embedding

DEFAULT_TRIALS = 200
DEFAULT_DEPTH = 4


def _on_arc(pair: tuple[int, int], label: int) -> bool:
    a, b = pair
    return a < label < b


def independent(m: Matching, c: int, d: int) -> bool:
    if c == d:
        raise ValueError(f"a chord is not compared with itself (chord {c})")
    pairs = m.pairs
    masks = m.crossing_masks
    others = ((1 << m.k) - 1) & ~(1 << c) & ~(1 << d)
    both = masks[c] & masks[d] & others
    # (3) nothing else crosses both
    if not both:
        return True
    # (2) disjoint chords whose common crossers are pairwise non-crossing
    if not masks[c] >> d & 1:
        crossers = [g for g in range(m.k) if both >> g & 1]
        if all(not masks[g] & both for g in crossers):
            return True
    # (1) a chord crossing neither separates them
    free = others & ~masks[c] & ~masks[d]
    for g in range(m.k):
        if free >> g & 1:
            if _on_arc(pairs[g], pairs[c][0]) != _on_arc(pairs[g], pairs[d][0]):
                return True
    return False


@lru_cache(maxsize=64)
def independence_masks(m: Matching) -> tuple[int, ...]:
    """Per chord, the bitmask of chords independent from it."""
    out = [0] * m.k
    for c in range(m.k):
        for d in range(c + 1, m.k):
            if independent(m, c, d):
                out[c] |= 1 << d
                out[d] |= 1 << c
    return tuple(out)


@dataclass(frozen=True)
class RgbPartition:
    red: frozenset[int]
    green: frozenset[int]
    blue: frozenset[int]
    weight_red: float
    weight_blue: float

    @property
    def score(self) -> float:
        if not self.red or not self.blue:
            return 0.0
        return min(self.weight_red, self.weight_blue)

    @property
    def degenerate(self) -> bool:
        return not self.red or not self.blue


def _product(weights: dict[int, float], chords: Iterable[int]) -> float:
    p = 1.0
    for c in chords:
        p *= weights[c]
    return p


def partition_rgb(
    m: Matching,
    weights: dict[int, float] | None = None,
    trials: int = DEFAULT_TRIALS,
    seed=0,
    chords: Iterable[int] | None = None,
) -> RgbPartition:
    """Best random-greedy partition, maximizing ``min(weight(R), weight(B))``.

    Each trial shuffles the chords and puts each one on the lighter of R/B
    when it is independent of the whole opposite side, else on the other
    side when possible, else into G.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    chords = sorted(range(m.k) if chords is None else chords)
    weights = weights or {c: 1.0 for c in range(m.k)}
    ind = independence_masks(m)
    rng = random.Random(f"{seed}:{chords}")
    best = RgbPartition(frozenset(), frozenset(chords), frozenset(), 1.0, 1.0)
    for _ in range(trials):
        order = chords[:]
        rng.shuffle(order)
        red = blue = 0
        wr = wb = 1.0
        nr = nb = 0
        green = []
        for c in order:
            bit = 1 << c
            fits_red = ind[c] & blue == blue
            fits_blue = ind[c] & red == red
            if fits_red and ((wr, nr) <= (wb, nb) or not fits_blue):
                red |= bit
                wr *= weights[c]
                nr += 1
            elif fits_blue:
                blue |= bit
                wb *= weights[c]
                nb += 1
            else:
                green.append(c)
        cand = RgbPartition(_bits(red), frozenset(green), _bits(blue), wr, wb)
        if cand.score > best.score:
            best = cand
    return best


def _bits(mask: int) -> frozenset[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def verify_partition(m: Matching, p: RgbPartition) -> bool:
    return all(independent(m, r, b) for r in p.red for b in p.blue)


class _Solver:
    def __init__(self, m: Matching, weights, trials, depth_limit, seed, budget):
        self.m = m
        self.weights = weights
        self.trials = trials
        self.depth_limit = depth_limit
        self.seed = seed
        self.budget = budget
        self._parts: dict[frozenset[int], RgbPartition] = {}

    def order(self, chords: Iterable[int]) -> list[int]:
        return sorted(chords, key=lambda c: (self.weights[c], c))

    def partition(self, chords: frozenset[int]) -> RgbPartition:
        if chords not in self._parts:
            self._parts[chords] = partition_rgb(self.m, self.weights, self.trials, self.seed, chords)
        return self._parts[chords]

    def count(self, e: Embedding, chords: frozenset[int], depth: int) -> int:
        if len(chords) <= 1 or depth >= self.depth_limit:
            return count_completions(e, self.order(chords), self.budget)
        p = self.partition(chords)
        if p.degenerate:
            return count_completions(e, self.order(chords), self.budget)
        total = 0
        for g in enumerate_completions(e, self.order(p.green), self.budget):
            red = self.count(g, p.red, depth + 1)
            if red:
                total += red * self.count(g, p.blue, depth + 1)
        return total


def _branch(args) -> tuple[int, int]:
    solver, g, red, blue = args
    r = solver.count(g, red, 1)
    return (r * solver.count(g, blue, 1) if r else 0), solver.budget.used


def count_with_independence(
    m: Matching,
    depth_limit: int = DEFAULT_DEPTH,
    seed=0,
    *,
    trials: int = DEFAULT_TRIALS,
    weights: dict[int, float] | None = None,
    budget: int | None = DEFAULT_BUDGET,
    workers: int = 1,
) -> int:
    """Exact ``|arr(m)|`` using the R/G/B decomposition recursively."""
    if m.k == 0:
        return 1
    if weights is None:
        weights = estimate_weights(m, WEIGHT_SAMPLES, WEIGHT_SEED)
    solver = _Solver(m, weights, trials, depth_limit, seed, Budget(budget))
    root = boundary_embedding(m)
    everything = frozenset(range(m.k))
    if workers <= 1 or depth_limit < 1:
        return solver.count(root, everything, 0)
    p = solver.partition(everything)
    if p.degenerate:
        return solver.count(root, everything, depth_limit)
    greens = list(enumerate_completions(root, solver.order(p.green), solver.budget))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_branch, [(solver, g, p.red, p.blue) for g in greens]))
    solver.budget.charge(sum(used for _, used in results))
    return sum(total for total, _ in results)
