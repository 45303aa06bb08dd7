"""Perfect matchings on cyclically ordered boundary labels.

A matching on ``2k`` labels ``0..2k-1`` describes which endpoints of a
pseudochord arrangement are joined.  Chords are identified by their position
in the pair list; each pair is stored as ``(a, b)`` with ``a < b`` so that the
chord is oriented from ``a`` to ``b``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence


class MatchingError(ValueError):
    """Raised for malformed matchings or matching text."""


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[int, int], ...]

    @property
    def k(self) -> int:
        return len(self.pairs)

    @cached_property
    def partner(self) -> tuple[int, ...]:
        out = [0] * (2 * self.k)
        for a, b in self.pairs:
            out[a] = b
            out[b] = a
        return tuple(out)

    @cached_property
    def chord_at(self) -> tuple[int, ...]:
        """Chord index owning each boundary label."""
        out = [0] * (2 * self.k)
        for c, (a, b) in enumerate(self.pairs):
            out[a] = c
            out[b] = c
        return tuple(out)

    @cached_property
    def crossing_masks(self) -> tuple[int, ...]:
        """Bitmask of crossing chords, per chord."""
        masks = [0] * self.k
        for i in range(self.k):
            for j in range(i + 1, self.k):
                if _interleave(self.pairs[i], self.pairs[j]):
                    masks[i] |= 1 << j
                    masks[j] |= 1 << i
        return tuple(masks)

    def crosses(self, c1: int, c2: int) -> bool:
        self._check(c1)
        self._check(c2)
        if c1 == c2:
            raise MatchingError(f"a chord does not cross itself (chord {c1})")
        return bool(self.crossing_masks[c1] >> c2 & 1)

    def crossing_set(self, c: int) -> frozenset[int]:
        self._check(c)
        m = self.crossing_masks[c]
        return frozenset(j for j in range(self.k) if m >> j & 1)

    def crossing_count(self) -> int:
        return sum(bin(m).count("1") for m in self.crossing_masks) // 2

    def cyclic_shift(self, t: int) -> "Matching":
        n = 2 * self.k
        return Matching(tuple(_ordered((a + t) % n, (b + t) % n) for a, b in self.pairs))

    def reflect(self) -> "Matching":
        """Reverse the circular order of the labels (``a -> 2k-1-a``)."""
        n = 2 * self.k
        return Matching(tuple(_ordered(n - 1 - a, n - 1 - b) for a, b in self.pairs))

    def pair_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.pairs)

    def _check(self, c: int) -> None:
        if not 0 <= c < self.k:
            raise MatchingError(f"chord {c} out of range for k={self.k}")

    def __str__(self) -> str:
        return "{" + ",".join(f"({a},{b})" for a, b in self.pairs) + "}"


def _ordered(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def _interleave(p: tuple[int, int], q: tuple[int, int]) -> bool:
    a, b = p
    c, d = q
    return a < c < b < d or c < a < d < b


def matching_from_pairs(pairs: Iterable[Sequence[int]]) -> Matching:
    """Validate ``pairs`` and build a :class:`Matching`."""
    pairs = [tuple(p) for p in pairs]
    if not pairs:
        raise MatchingError("a matching needs at least one pair")
    n = 2 * len(pairs)
    seen: set[int] = set()
    out = []
    for p in pairs:
        if len(p) != 2:
            raise MatchingError(f"pair {p!r} does not have two endpoints")
        for x in p:
            if not isinstance(x, int) or isinstance(x, bool):
                raise MatchingError(f"label {x!r} is not an integer")
            if not 0 <= x < n:
                raise MatchingError(f"label {x} out of range 0..{n - 1}")
            if x in seen:
                raise MatchingError(f"duplicate label {x}")
            seen.add(x)
        out.append(_ordered(*p))
    return Matching(tuple(out))


def empty_matching() -> Matching:
    """The k=0 matching (a window crossed by no line); it has one arrangement."""
    return Matching(())


def family_matching(group_sizes: Sequence[int]) -> Matching:
    """The ``(k1, ..., kr)``-matching: chords cross iff in different groups.

    Blocks ``A1..Ar`` are laid out first, then ``A'1..A'r``; the t-th label of
    ``Ai`` is paired with the (ki+1-t)-th label of ``A'i``.
    """
    sizes = list(group_sizes)
    if not sizes or any(int(s) != s or s < 1 for s in sizes):
        raise MatchingError(f"group sizes must be positive integers, got {sizes}")
    k = sum(sizes)
    pairs = []
    start = 0
    for s in sizes:
        for t in range(s):
            pairs.append((start + t, k + start + s - 1 - t))
        start += s
    return Matching(tuple(pairs))


def group_of(sizes: Sequence[int]) -> list[int]:
    """Group index of each chord of ``family_matching(sizes)``."""
    return [g for g, s in enumerate(sizes) for _ in range(s)]


_FAMILY_RE = re.compile(r"^\(\s*(\d+(?:\s*,\s*\d+)*)\s*\)(?:\s*[x*]\s*(\d+))?$")


def parse_family(text: str) -> Matching:
    """Parse CLI family shorthand such as ``(3,2,4)`` or ``(1)x12``."""
    m = _FAMILY_RE.match(text.strip())
    if not m:
        raise MatchingError(f"not a family shorthand: {text!r}")
    sizes = [int(x) for x in m.group(1).split(",")]
    if m.group(2) is not None:
        if len(sizes) != 1:
            raise MatchingError(f"repetition needs a single group size: {text!r}")
        sizes = sizes * int(m.group(2))
    return family_matching(sizes)


def parse_matching(text: str) -> Matching:
    """Parse the ``.match`` format: ``k`` then ``k`` lines ``a b``."""
    lines = [(i + 1, ln.split()) for i, ln in enumerate(text.splitlines())]
    lines = [(no, toks) for no, toks in lines if toks]
    if not lines:
        raise MatchingError("line 1: empty matching text")
    no, toks = lines[0]
    if len(toks) != 1 or not toks[0].isdigit():
        raise MatchingError(f"line {no}: expected chord count, got {' '.join(toks)!r}")
    k = int(toks[0])
    if len(lines) - 1 != k:
        raise MatchingError(f"line {no}: header says {k} chords, found {len(lines) - 1}")
    if k == 0:
        return empty_matching()
    seen: set[int] = set()
    pairs = []
    for no, toks in lines[1:]:
        if len(toks) != 2 or not all(t.isdigit() for t in toks):
            raise MatchingError(f"line {no}: expected two labels, got {' '.join(toks)!r}")
        a, b = int(toks[0]), int(toks[1])
        for x in (a, b):
            if x >= 2 * k:
                raise MatchingError(f"line {no}: label {x} out of range 0..{2 * k - 1}")
            if x in seen:
                raise MatchingError(f"line {no}: duplicate label {x}")
            seen.add(x)
        pairs.append(_ordered(a, b))
    return Matching(tuple(pairs))


def serialize_matching(m: Matching) -> str:
    return f"{m.k}\n" + "".join(f"{a} {b}\n" for a, b in m.pairs)


def load_matching(source: str) -> Matching:
    """Read a matching from a family shorthand or a ``.match`` file path."""
    if source.lstrip().startswith("("):
        return parse_family(source)
    with open(source) as fh:
        return parse_matching(fh.read())
