"""Self-check suite in three tiers: fast, slow and optional (long running)."""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import bound, construction, counter, independence, lgv
from .matching import Matching, family_matching, matching_from_pairs
from .subdivision import chirotope

TIERS = ("fast", "slow", "optional")

# Published numbers of pseudoline arrangements B_1..B_9.
B_VALUES = (1, 1, 2, 8, 62, 908, 24698, 1232944, 112018190)
LGV_DISPLAYED = [[2, 1, 0], [1, 6, 1], [0, 1, 2]]


@dataclass
class Check:
    name: str
    tier: str
    run: Callable[[], tuple[bool, str]]


@dataclass
class Outcome:
    name: str
    tier: str
    ok: bool
    detail: str
    seconds: float


def _bn(lo: int, hi: int, workers: int = 1) -> tuple[bool, str]:
    bad = []
    for n in range(lo, hi + 1):
        got = counter.count_arrangements(family_matching([1] * n), workers=workers)
        if got != B_VALUES[n - 1]:
            bad.append(f"B_{n}={got} (want {B_VALUES[n - 1]})")
    return not bad, "; ".join(bad) or f"B_{lo}..B_{hi} match"


def _lgv_parity() -> tuple[bool, str]:
    # path counts vanish unless the lattice distance has the right parity;
    # a consistent matrix is symmetric, positive on the diagonal, and zero
    # exactly where no monotone path exists
    for s in range(1, 9):
        mat = lgv.lgv_matrix(s)
        d = 2 * s - 1
        for i, j in itertools.product(range(d), repeat=2):
            n = 2 * s - abs(s - 1 - i) - abs(s - 1 - j)
            if (n + 3 * abs(i - j)) % 2:
                return False, f"odd step count at s={s} ({i + 1},{j + 1})"
            reachable = 3 * abs(i - j) <= n
            if (mat[i][j] > 0) != reachable or mat[i][j] != mat[j][i]:
                return False, f"entry ({i + 1},{j + 1}) of s={s} is {mat[i][j]}"
    if lgv.lgv_matrix(2) != LGV_DISPLAYED:
        return False, f"s=2 matrix is {lgv.lgv_matrix(2)}"
    return True, "s=1..8 matrices consistent; s=2 matches the displayed matrix"


def _lgv_vs_direct(sizes) -> tuple[bool, str]:
    out = []
    for s in sizes:
        a = lgv.lgv_count(s)
        b = counter.count_arrangements(lgv.grid_window_matching(s))
        if a != b:
            return False, f"s={s}: determinant {a} != direct {b}"
        out.append(f"s={s}:{a}")
    return True, " ".join(out)


def _warmup_tile() -> tuple[bool, str]:
    n = counter.count_arrangements(family_matching([1, 1, 1]))
    return n == 2, f"(1)_3 tile has {n} arrangements"


def _regions() -> tuple[bool, str]:
    areas = sorted(construction.region_areas().values())
    want = sorted(construction.REGION_AREAS.values())
    return areas == want, f"{len(areas)} regions"


def _bound_pipeline() -> tuple[bool, str]:
    t3 = bound.bound_report(bound.builtin_table("rect12"), 12)
    mt = bound.bound_report(bound.builtin_table("matousek"), 3)
    wu = bound.bound_report(bound.builtin_table("warmup"), 3)
    ok = (
        t3.total >= Fraction("34.374") and t3.final >= Fraction("0.2604")
        and mt.total == Fraction(3, 4) and mt.final == Fraction(1, 8)
        and wu.final > Fraction("0.135")
    )
    return ok, f"c >= {float(t3.total):.4f}, final >= {float(t3.final):.5f}"


def all_matchings(k: int) -> list[Matching]:
    """Every perfect matching on ``2k`` labels."""
    def rec(free):
        if not free:
            yield ()
            return
        a = free[0]
        for i in range(1, len(free)):
            rest = free[1:i] + free[i + 1:]
            for tail in rec(rest):
                yield ((a, free[i]),) + tail
    if k == 0:
        return [Matching(())]
    return [matching_from_pairs(p) for p in rec(tuple(range(2 * k)))]


def matchings_up_to_rotation(k: int) -> list[Matching]:
    seen = set()
    out = []
    for m in all_matchings(k):
        key = min(tuple(sorted(m.cyclic_shift(t).pairs)) for t in range(2 * k)) if k else ()
        if key not in seen:
            seen.add(key)
            out.append(m)
    return out


def random_matching(k: int, rng: random.Random) -> Matching:
    labels = list(range(2 * k))
    rng.shuffle(labels)
    return matching_from_pairs(zip(labels[::2], labels[1::2]))


def oracle_equivalence(m: Matching) -> str | None:
    """Compare both counting schemes and the enumeration; ``None`` when consistent."""
    plain = counter.count_arrangements(m)
    indep = independence.count_with_independence(m)
    if plain != indep:
        return f"{m}: plain {plain} != independence {indep}"
    embs = list(counter.enumerate_arrangements(m))
    if len(embs) != plain:
        return f"{m}: enumerated {len(embs)} != {plain}"
    if m.k and len({chirotope(e) for e in embs}) != len(embs):
        return f"{m}: repeated chirotope"
    return None


def _oracle(max_k: int, n_random: int, random_k: int) -> tuple[bool, str]:
    corpus = [m for k in range(max_k + 1) for m in matchings_up_to_rotation(k)]
    rng = random.Random(0)
    corpus += [random_matching(rng.randint(1, random_k), rng) for _ in range(n_random)]
    for m in corpus:
        err = oracle_equivalence(m)
        if err:
            return False, err
    return True, f"{len(corpus)} matchings consistent"


def _lgv_large(s: int, min_log2: int | None = None) -> tuple[bool, str]:
    n = lgv.lgv_count(s)
    lg = lgv.log2_lower(n)
    if min_log2 is not None and lg < min_log2:
        return False, f"log2 lower {lg} < {min_log2}"
    return n > 0, f"s={s}: log2 >= {lg}"


def checks() -> list[Check]:
    return [
        Check("bn-small", "fast", lambda: _bn(1, 7)),
        Check("warmup-tile", "fast", _warmup_tile),
        Check("lgv-parity", "fast", _lgv_parity),
        Check("lgv-direct-small", "fast", lambda: _lgv_vs_direct([1, 2])),
        Check("regions", "fast", _regions),
        Check("bound-pipeline", "fast", _bound_pipeline),
        Check("oracle-small", "fast", lambda: _oracle(4, 10, 6)),
        Check("bn-8", "slow", lambda: _bn(8, 8)),
        Check("lgv-direct-3", "slow", lambda: _lgv_vs_direct([3])),
        Check("lgv-50", "slow", lambda: _lgv_large(50)),
        Check("oracle-full", "slow", lambda: _oracle(5, 50, 8)),
        Check("bn-9", "optional", lambda: _bn(9, 9, counter.default_workers())),
        Check("lgv-500", "optional", lambda: _lgv_large(500, 349033)),
    ]


def run_checks(tiers, on_result: Callable[[Outcome], None] | None = None) -> list[Outcome]:
    out = []
    for chk in checks():
        if chk.tier not in tiers:
            continue
        t0 = time.perf_counter()
        try:
            ok, detail = chk.run()
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        res = Outcome(chk.name, chk.tier, ok, detail, time.perf_counter() - t0)
        if on_result:
            on_result(res)
        out.append(res)
    return out
