"""Lower-bound assembly from per-region subembedding counts.

Every logarithm is rounded down, so each reported constant is a guaranteed
lower bound on the quantity it stands for.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Sequence

from .construction import REGION_AREAS

DEFAULT_LOG_BITS = 60
_GUARD_BITS = 64

PUBLISHED_MATCHING_CONSTANTS = ("34.374", "36.65")
PUBLISHED_PSEUDOLINE_CONSTANT = "0.2604"

# Areas of the chosen subembeddings where the construction states them.
SUBEMBEDDING_AREAS = {
    "R_A": 1, "R_B": 1, "R_C": 1, "R_D": 1, "R_E": 1, "R_F": 1, "R_G": 2,
    "R_R": 500 ** 2, "R_S": 500 ** 2,
}

# Region pairs whose patterns agree up to an area-preserving map, so they use
# one subembedding and must imply the same subembedding area.
SHARED_SUBEMBEDDINGS = (("R_N", "R_O"), ("R_P", "R_Q"))


class TableError(ValueError):
    pass


def log2_floor(n: int, bits: int = DEFAULT_LOG_BITS) -> Fraction:
    """Lower bound on ``log2(n)`` with ``bits`` fractional bits.

    With ``bits == 0`` this is ``n.bit_length() - 1``.  Fractional bits come
    from repeated squaring of the mantissa in fixed point; every truncation
    rounds down, so the result never exceeds the true logarithm.
    """
    if n < 1:
        raise ValueError("log2 of a count needs n >= 1")
    e = n.bit_length() - 1
    if bits == 0:
        return Fraction(e)
    prec = bits + _GUARD_BITS
    # mantissa n / 2^e in [1, 2), as an integer scaled by 2^prec
    y = (n << prec) >> e
    one, two = 1 << prec, 2 << prec
    frac = 0
    for _ in range(bits):
        y = (y * y) >> prec
        frac <<= 1
        if y >= two:
            frac |= 1
            y >>= 1
    assert one <= y < two
    return e + Fraction(frac, 1 << bits)


@dataclass(frozen=True)
class RegionEntry:
    name: str
    p_coeff: Fraction
    count: int | None = None
    log2_bound: int | None = None
    source: str = "published"

    def __post_init__(self):
        if (self.count is None) == (self.log2_bound is None):
            raise TableError(f"{self.name}: give exactly one of count / log2 bound")
        if self.count is not None and self.count < 1:
            raise TableError(f"{self.name}: count must be >= 1")
        if self.p_coeff <= 0:
            raise TableError(f"{self.name}: p coefficient must be positive")

    def log2_lower(self, bits: int = DEFAULT_LOG_BITS) -> Fraction:
        if self.count is not None:
            return log2_floor(self.count, bits)
        return Fraction(self.log2_bound)


def matching_bound(entries: Sequence[RegionEntry], bits: int = DEFAULT_LOG_BITS) -> Fraction:
    """``sum p * log2(n)``, each logarithm rounded down."""
    if not entries:
        raise ValueError("no region entries")
    return sum((e.p_coeff * e.log2_lower(bits) for e in entries), Fraction(0))


def pseudoline_bound(c, r: int) -> Fraction:
    """Constant for pseudoline arrangements from an ``(m)_r`` matching constant ``c``."""
    if r < 2:
        raise ValueError("r must be >= 2")
    c = Fraction(c)
    if c <= 0:
        raise ValueError("c must be positive")
    return c / (r * (r - 1))


_LOG_RE = re.compile(r"^log2>=(\d+)$")


def parse_region_table(text: str) -> list[RegionEntry]:
    """Rows ``name count p`` (whitespace separated); count may be ``log2>=N``."""
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 3:
            raise TableError(f"row {no}: expected 3 columns, got {len(toks)}")
        name, count, p = toks
        try:
            p_coeff = Fraction(p)
        except (ValueError, ZeroDivisionError):
            raise TableError(f"row {no}: bad p coefficient {p!r}") from None
        m = _LOG_RE.match(count)
        try:
            if m:
                out.append(RegionEntry(name, p_coeff, log2_bound=int(m.group(1))))
            elif count.isdigit():
                out.append(RegionEntry(name, p_coeff, count=int(count)))
            else:
                raise TableError(f"bad count {count!r}")
        except TableError as exc:
            raise TableError(f"row {no}: {exc}") from None
    return out


def load_region_table(path: str) -> list[RegionEntry]:
    with open(path) as fh:
        return parse_region_table(fh.read())


def builtin_table(name: str) -> list[RegionEntry]:
    """``rect12``, ``matousek`` or ``warmup``."""
    text = resources.files("pseudochord").joinpath("data", f"{name}.tsv").read_text()
    return parse_region_table(text)


@dataclass
class BoundReport:
    rows: list[tuple[str, Fraction, Fraction, Fraction]]
    total: Fraction
    r: int
    final: Fraction
    bits: int
    notes: list[str] = field(default_factory=list)

    def rounding(self) -> str:
        if self.bits == 0:
            return "log2 rounded down to an integer (bit length - 1)"
        return f"log2 rounded down to {self.bits} fractional bits"

    def text(self) -> str:
        w = max([len(r[0]) for r in self.rows] + [6])
        lines = [f"{'region':<{w}}  {'p':>10}  {'log2 n >=':>22}  {'p*log2 n >=':>22}"]
        for name, p, lg, contrib in self.rows:
            lines.append(f"{name:<{w}}  {str(p):>10}  {float(lg):>22.12f}  {_dec(contrib):>22}")
        lines.append(f"matching constant c >= {_dec(self.total)}  ({self.total})")
        lines.append(f"pseudoline constant c/(r(r-1)) with r={self.r} >= {_dec(self.final)}  ({self.final})")
        lines.append(f"rounding: {self.rounding()}; O(m) and O(n log n) terms omitted")
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines) + "\n"

    def tsv(self) -> str:
        lines = ["region\tp\tlog2_lower\tcontribution"]
        for name, p, lg, contrib in self.rows:
            lines.append(f"{name}\t{p}\t{_dec(lg)}\t{_dec(contrib)}")
        lines.append(f"TOTAL\t\t\t{_dec(self.total)}")
        lines.append(f"FINAL\tr={self.r}\t\t{_dec(self.final)}")
        return "\n".join(lines) + "\n"


def _dec(x: Fraction, digits: int = 12) -> str:
    """Decimal truncated toward zero (values here are non-negative)."""
    q = x.numerator * 10 ** digits // x.denominator
    s = str(q).rjust(digits + 1, "0")
    return f"{s[:-digits]}.{s[-digits:]}"


def consistency_notes(entries: Sequence[RegionEntry]) -> list[str]:
    """Compare region area with ``p * subembedding area`` where both are known."""
    notes = []
    implied = {}
    for e in entries:
        area = REGION_AREAS.get(e.name)
        if area is None:
            continue
        implied[e.name] = area / e.p_coeff
        known = SUBEMBEDDING_AREAS.get(e.name)
        if known is not None and implied[e.name] != known:
            notes.append(f"{e.name}: area {area} / p {e.p_coeff} = {implied[e.name]}, expected {known}")
    for a, b in SHARED_SUBEMBEDDINGS:
        if a in implied and b in implied and implied[a] != implied[b]:
            notes.append(
                f"{a} and {b} share a subembedding but imply areas {implied[a]} and {implied[b]}"
            )
    return notes


def bound_report(entries: Sequence[RegionEntry], r: int, bits: int = DEFAULT_LOG_BITS) -> BoundReport:
    rows = []
    for e in entries:
        lg = e.log2_lower(bits)
        rows.append((e.name, e.p_coeff, lg, e.p_coeff * lg))
    total = sum((row[3] for row in rows), Fraction(0))
    final = pseudoline_bound(total, r)
    notes = consistency_notes(entries)
    if any(e.name in REGION_AREAS for e in entries):
        for c in PUBLISHED_MATCHING_CONSTANTS:
            verdict = "clears" if total >= Fraction(c) else "is below"
            notes.append(f"matching constant {verdict} published {c}")
        verdict = "clears" if final >= Fraction(PUBLISHED_PSEUDOLINE_CONSTANT) else "is below"
        notes.append(f"pseudoline constant {verdict} published {PUBLISHED_PSEUDOLINE_CONSTANT}")
    return BoundReport(rows, total, r, final, bits, notes)
