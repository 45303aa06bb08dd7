"""The 12-slope rectangular line construction, its regions, and windows.

All geometry is exact (``fractions.Fraction``).  Extremal lines use the unit
normalization ``(m-1)/2 -> 1/2`` so every area is the coefficient of ``m^2``.
Slopes are labelled by strings; ``"inf"`` is the vertical bundle.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .matching import Matching, empty_matching

SLOPE_LABELS = ("0", "inf", "1/3", "-1/3", "1/2", "-1/2", "1", "-1", "2", "-2", "3", "-3")
_INDEX = {s: i for i, s in enumerate(SLOPE_LABELS)}
# bundles with offsets j (integer spacing in y) vs offsets s*j
_STEEP = {"0", "1", "-1", "2", "-2", "3", "-3"}

Point = tuple[Fraction, Fraction]


class GeometryError(ValueError):
    """Degenerate geometric input (point on a slab boundary, bad window)."""


def slope_value(label: str) -> Fraction | None:
    return None if label == "inf" else Fraction(label)


def slope_label(value: Fraction | None) -> str:
    return "inf" if value is None else str(Fraction(value))


@dataclass(frozen=True)
class Line:
    """``x = offset`` (vertical) or ``y = slope * x + offset``."""

    kind: str
    slope: Fraction | None
    offset: Fraction

    @classmethod
    def vertical(cls, x) -> "Line":
        return cls("vertical", None, Fraction(x))

    @classmethod
    def sloped(cls, slope, offset) -> "Line":
        return cls("sloped", Fraction(slope), Fraction(offset))

    @classmethod
    def from_implicit(cls, a: Fraction, b: Fraction, c: Fraction) -> "Line":
        """The line ``a*x + b*y = c``."""
        if b == 0:
            if a == 0:
                raise GeometryError("degenerate line equation")
            return cls.vertical(Fraction(c) / a)
        return cls.sloped(-Fraction(a) / b, Fraction(c) / b)

    def implicit(self) -> tuple[Fraction, Fraction, Fraction]:
        if self.kind == "vertical":
            return Fraction(1), Fraction(0), self.offset
        return -self.slope, Fraction(1), self.offset

    def side(self, p: Point) -> Fraction:
        a, b, c = self.implicit()
        return a * p[0] + b * p[1] - c

    def y_at(self, x: Fraction) -> Fraction:
        return self.slope * x + self.offset

    def transformed(self, matrix: Sequence[int]) -> "Line":
        """Image under the linear map ``(x, y) -> (a x + b y, c x + d y)``."""
        a, b, c, d = (Fraction(v) for v in matrix)
        det = a * d - b * c
        if det == 0:
            raise GeometryError("singular transformation")
        p, q, r = self.implicit()
        # normal n' = A^{-T} n
        return Line.from_implicit((d * p - c * q) / det, (-b * p + a * q) / det, r)

    def __str__(self) -> str:
        if self.kind == "vertical":
            return f"x = {self.offset}"
        return f"y = {self.slope}*x + {self.offset}"


def _bundle_offset_scale(label: str) -> Fraction:
    return Fraction(1) if label in _STEEP else abs(Fraction(label))


def normalized_extremal_lines() -> list[Line]:
    """The 24 extremal lines, two per slope, with half-width ``1/2`` (scaled)."""
    out = []
    for label in SLOPE_LABELS:
        if label == "inf":
            out += [Line.vertical(Fraction(-1, 2)), Line.vertical(Fraction(1, 2))]
        else:
            h = _bundle_offset_scale(label) / 2
            out += [Line.sloped(Fraction(label), -h), Line.sloped(Fraction(label), h)]
    return out


def bundle_lines(m: int) -> list[Line]:
    """All ``12 m`` lines of the construction with ``m`` lines per bundle."""
    if m < 1 or m % 2 == 0:
        raise GeometryError(f"bundle size must be odd and positive, got {m}")
    half = (m - 1) // 2
    out = []
    for label in SLOPE_LABELS:
        for j in range(-half, half + 1):
            if label == "inf":
                out.append(Line.vertical(j))
            else:
                out.append(Line.sloped(Fraction(label), _bundle_offset_scale(label) * j))
    return out


def slab_membership(p: Sequence) -> frozenset[str]:
    """Slopes whose (normalized) slab strictly contains ``p``."""
    x, y = Fraction(p[0]), Fraction(p[1])
    out = []
    for label in SLOPE_LABELS:
        if label == "inf":
            dist, h = abs(x), Fraction(1, 2)
        else:
            s = Fraction(label)
            dist, h = abs(y - s * x), _bundle_offset_scale(label) / 2
        if dist == h:
            raise GeometryError(f"point {p} lies on an extremal line of slope {label}")
        if dist < h:
            out.append(label)
    return frozenset(out)


def _neg(label: str) -> str:
    if label in ("0", "inf"):
        return label
    return label[1:] if label.startswith("-") else "-" + label


def _inv(label: str) -> str:
    if label == "0":
        return "inf"
    if label == "inf":
        return "0"
    return str(1 / Fraction(label))


def signature_orbit(sig: Iterable[str]) -> set[frozenset[str]]:
    """Orbit under reflections in the axes and the diagonals, and rotations."""
    start = frozenset(sig)
    orbit = {start}
    todo = [start]
    while todo:
        s = todo.pop()
        for f in (_neg, _inv):
            t = frozenset(f(x) for x in s)
            if t not in orbit:
                orbit.add(t)
                todo.append(t)
    return orbit


def signature_key(sig: Iterable[str]) -> tuple[int, ...]:
    return tuple(sorted(_INDEX[s] for s in sig))


def canonical_signature(sig: Iterable[str]) -> frozenset[str]:
    return min(signature_orbit(sig), key=signature_key)


def format_signature(sig: Iterable[str]) -> str:
    return "{" + ",".join(SLOPE_LABELS[i] for i in signature_key(sig)) + "}"


def _intersection_x(l1: Line, l2: Line) -> Fraction | None:
    if l1.kind == "vertical" and l2.kind == "vertical":
        return None
    if l1.kind == "vertical":
        return l1.offset
    if l2.kind == "vertical":
        return l2.offset
    if l1.slope == l2.slope:
        return None
    return (l2.offset - l1.offset) / (l1.slope - l2.slope)


def cell_areas(lines: Sequence[Line]) -> dict[frozenset[str], Fraction]:
    """Exact area per slab signature of the bounded trapezoids of ``lines``.

    The plane is cut into vertical strips at every vertex and vertical line;
    within a strip consecutive sloped lines bound a trapezoid lying in a
    single cell, classified by its midpoint.  Unbounded pieces (outermost
    strips, above the top or below the bottom line) are skipped.
    """
    xs = {x for l1, l2 in combinations(lines, 2) if (x := _intersection_x(l1, l2)) is not None}
    xs = sorted(xs)
    sloped = [ln for ln in lines if ln.kind == "sloped"]
    areas: dict[frozenset[str], Fraction] = defaultdict(Fraction)
    for x0, x1 in zip(xs, xs[1:]):
        xm = (x0 + x1) / 2
        order = sorted(sloped, key=lambda ln: ln.y_at(xm))
        for lo, hi in zip(order, order[1:]):
            left = hi.y_at(x0) - lo.y_at(x0)
            right = hi.y_at(x1) - lo.y_at(x1)
            area = (left + right) * (x1 - x0) / 2
            if area == 0:
                continue
            mid = (xm, (lo.y_at(xm) + hi.y_at(xm)) / 2)
            areas[slab_membership(mid)] += area
    return dict(areas)


def region_areas(min_slabs: int = 3) -> dict[frozenset[str], Fraction]:
    """Area (coefficient of ``m^2``) per canonical signature with ``>= min_slabs`` slabs."""
    out: dict[frozenset[str], Fraction] = defaultdict(Fraction)
    for sig, area in cell_areas(normalized_extremal_lines()).items():
        if len(sig) >= min_slabs:
            out[canonical_signature(sig)] += area
    return dict(out)


# Region letters and areas as published with the construction's figures.
REGION_AREAS: dict[str, Fraction] = {
    "R_A": Fraction(1, 12), "R_B": Fraction(1, 30), "R_C": Fraction(1, 30),
    "R_D": Fraction(1, 60), "R_E": Fraction(1, 35), "R_F": Fraction(1, 105),
    "R_G": Fraction(1, 14), "R_H": Fraction(1, 35), "R_I": Fraction(1, 42),
    "R_J": Fraction(1, 35), "R_K": Fraction(8, 105), "R_L": Fraction(1, 15),
    "R_M": Fraction(1, 15), "R_N": Fraction(4, 15), "R_O": Fraction(1, 10),
    "R_P": Fraction(2, 3), "R_Q": Fraction(1, 15), "R_R": Fraction(1),
    "R_S": Fraction(1, 3),
}


@dataclass(frozen=True)
class Region:
    name: str | None
    signature: frozenset[str]
    area: Fraction
    tied: bool


def named_regions(areas: dict[frozenset[str], Fraction] | None = None) -> list[Region]:
    """Assign region letters by area.

    Regions sharing an area are matched in letter order to signatures in
    decreasing cardinality (then signature order); those are flagged ``tied``.
    """
    areas = region_areas() if areas is None else areas
    by_area: dict[Fraction, list[str]] = defaultdict(list)
    for name, a in REGION_AREAS.items():
        by_area[a].append(name)
    sigs_by_area: dict[Fraction, list[frozenset[str]]] = defaultdict(list)
    for sig, a in areas.items():
        sigs_by_area[a].append(sig)
    out = []
    for a, sigs in sigs_by_area.items():
        sigs.sort(key=lambda s: (-len(s), signature_key(s)))
        names = sorted(by_area.get(a, []))
        for i, sig in enumerate(sigs):
            out.append(Region(names[i] if i < len(names) else None, sig, a, len(sigs) > 1))
    out.sort(key=lambda r: (r.name is None, r.name or "", signature_key(r.signature)))
    return out


# -- windows -------------------------------------------------------------


@dataclass(frozen=True)
class Window:
    """Axis-parallel square window; ``shear`` is applied to the pattern first."""

    center: tuple
    side: Fraction
    shear: tuple[int, int, int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "center", (Fraction(self.center[0]), Fraction(self.center[1])))
        object.__setattr__(self, "side", Fraction(self.side))
        if self.side <= 0:
            raise GeometryError("window side must be positive")
        if self.shear is not None:
            a, b, c, d = self.shear
            if a * d - b * c not in (1, -1):
                raise GeometryError(f"shear {self.shear} is not unimodular")

    def corners(self) -> list[Point]:
        """Counter-clockwise, starting at the bottom-left corner."""
        cx, cy = self.center
        h = self.side / 2
        return [(cx - h, cy - h), (cx + h, cy - h), (cx + h, cy + h), (cx - h, cy + h)]


def extract_polygon_matching(
    lines: Sequence[Line], polygon: Sequence[Point]
) -> tuple[Matching, list[int]]:
    """Matching cut out of ``lines`` by a convex polygon (CCW vertices).

    Endpoint labels follow the boundary counter-clockwise from
    ``polygon[0]``.  Returns the matching and, per chord, the index of the
    line it comes from.
    """
    poly = [(Fraction(x), Fraction(y)) for x, y in polygon]
    n = len(poly)
    hits: list[tuple[tuple[int, Fraction], int]] = []
    used: list[int] = []
    for idx, ln in enumerate(lines):
        vals = [ln.side(p) for p in poly]
        if all(v > 0 for v in vals) or all(v < 0 for v in vals):
            continue
        if any(v == 0 for v in vals):
            raise GeometryError(f"line {idx} ({ln}) passes through a window corner")
        ends = []
        for i in range(n):
            v0, v1 = vals[i], vals[(i + 1) % n]
            if (v0 < 0) != (v1 < 0):
                ends.append((i, v0 / (v0 - v1)))
        assert len(ends) == 2
        for pos in ends:
            hits.append((pos, idx))
        used.append(idx)
    hits.sort()
    for (p1, l1), (p2, l2) in zip(hits, hits[1:]):
        if p1 == p2:
            raise GeometryError(f"lines {l1} and {l2} meet on the window boundary")
    if not used:
        return empty_matching(), []
    labels: dict[int, list[int]] = defaultdict(list)
    for label, (_, idx) in enumerate(hits):
        labels[idx].append(label)
    pairs = tuple((labels[i][0], labels[i][1]) for i in used)
    return Matching(pairs), used


def extract_window_matching(lines: Sequence[Line], window: Window) -> Matching:
    if window.shear is not None:
        lines = [ln.transformed(window.shear) for ln in lines]
    return extract_polygon_matching(lines, window.corners())[0]


def matousek_pattern(n: int) -> list[Line]:
    """Unit grid plus slope -1 lines through grid points, ``|offset| <= n`` (2n for diagonals)."""
    out = [Line.vertical(j) for j in range(-n, n + 1)]
    out += [Line.sloped(0, j) for j in range(-n, n + 1)]
    out += [Line.sloped(-1, c) for c in range(-2 * n, 2 * n + 1)]
    return out


BUILTIN_PATTERNS = {
    "matousek": lambda: matousek_pattern(16),
    "rect12": lambda: bundle_lines(33),
}


def parse_pattern(text: str) -> list[Line]:
    """Pattern file: ``V offset`` or ``S slope_num slope_den offset_num offset_den`` per line."""
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        try:
            if toks[0] == "V" and len(toks) == 2:
                out.append(Line.vertical(Fraction(toks[1])))
            elif toks[0] == "S" and len(toks) == 5:
                sn, sd, on, od = (int(t) for t in toks[1:])
                out.append(Line.sloped(Fraction(sn, sd), Fraction(on, od)))
            else:
                raise ValueError(raw)
        except (ValueError, ZeroDivisionError):
            raise GeometryError(f"line {no}: malformed pattern record {raw!r}") from None
    return out


def load_pattern(source: str) -> list[Line]:
    if source in BUILTIN_PATTERNS:
        return BUILTIN_PATTERNS[source]()
    with open(source) as fh:
        return parse_pattern(fh.read())
