import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from pseudochord.bound import (
    RegionEntry, TableError, bound_report, builtin_table, consistency_notes, load_region_table,
    log2_floor, matching_bound, parse_region_table, pseudoline_bound,
)

mpmath.mp.dps = 200


def exact_log2(n):
    return mpmath.log(mpmath.mpf(n), 2)


def as_mpf(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


@given(st.integers(1, 10 ** 80))
def test_log2_floor_is_a_tight_lower_bound(n):
    lo = log2_floor(n)
    assert as_mpf(lo) <= exact_log2(n)
    assert exact_log2(n) - as_mpf(lo) < mpmath.mpf(2) ** -59


@pytest.mark.parametrize("n", [1, 2, 3, 20, 2 ** 64 - 1, 2 ** 64, 2 ** 64 + 1])
def test_log2_floor_edges(n):
    assert as_mpf(log2_floor(n)) <= exact_log2(n)
    assert log2_floor(n, 0) == n.bit_length() - 1
    with pytest.raises(ValueError):
        log2_floor(0)


def test_powers_of_two_are_exact():
    for e in range(0, 200, 7):
        assert log2_floor(2 ** e) == e


def test_matousek_single_entry():
    entries = [RegionEntry("M", Fraction(3, 4), count=2)]
    assert matching_bound(entries) == Fraction(3, 4)
    assert pseudoline_bound(Fraction(3, 4), 3) == Fraction(1, 8)


def test_warmup_single_entry():
    entries = [RegionEntry("W", Fraction(3, 16), count=20)]
    assert matching_bound(entries, bits=0) == Fraction(3, 4)
    c = matching_bound(entries)
    assert as_mpf(c) <= 3 * exact_log2(20) / 16
    assert pseudoline_bound(c, 3) > Fraction("0.135")


def test_published_constants_are_consistent():
    assert Fraction("34.374") / 132 > Fraction("0.2604")


def test_rect12_bound():
    entries = builtin_table("rect12")
    assert len(entries) == 19
    c = matching_bound(entries)
    oracle = sum(
        (as_mpf(e.p_coeff) * (exact_log2(e.count) if e.count else e.log2_bound) for e in entries),
        mpmath.mpf(0),
    )
    assert as_mpf(c) <= oracle < as_mpf(c) + mpmath.mpf(2) ** -50
    assert c >= Fraction("34.374")
    assert pseudoline_bound(c, 12) >= Fraction("0.2604")


def test_rect12_products():
    # region counts are products of independent subembedding counts
    t = {e.name: e.count for e in builtin_table("rect12")}
    assert t["R_A"] == 2894710651370536 * 1181083068 * 5228739265944
    assert t["R_B"] == 5449192389984 * 4485362657994086
    assert t["R_C"] == 18410581880 * 6674057692


def test_additive_and_linear():
    rng = random.Random(0)
    for _ in range(30):
        es = [RegionEntry(f"X{i}", Fraction(rng.randint(1, 9), rng.randint(1, 50)), count=rng.randint(1, 10 ** 12))
              for i in range(rng.randint(2, 6))]
        cut = rng.randint(1, len(es) - 1)
        assert matching_bound(es) == matching_bound(es[:cut]) + matching_bound(es[cut:])
        t = Fraction(rng.randint(1, 20), rng.randint(1, 20))
        r = rng.randint(2, 15)
        c = matching_bound(es)
        assert pseudoline_bound(c * t, r) == t * pseudoline_bound(c, r)


def test_entry_validation():
    with pytest.raises(TableError):
        RegionEntry("X", Fraction(1), count=0)
    with pytest.raises(TableError):
        RegionEntry("X", Fraction(0), count=3)
    with pytest.raises(TableError):
        RegionEntry("X", Fraction(1))
    with pytest.raises(ValueError):
        matching_bound([])
    with pytest.raises(ValueError):
        pseudoline_bound(1, 1)
    with pytest.raises(ValueError):
        pseudoline_bound(0, 3)


def test_table_parsing(tmp_path):
    rows = parse_region_table(
        "R_A 17876503929228145018796772391568838912 1/12\n"
        "R_R log2>=349033 1/250000\n"
        "R_S log2>=349033 1/750000\n"
    )
    assert rows[0].p_coeff == Fraction(1, 12) and rows[0].count
    assert rows[1].log2_bound == 349033 and rows[1].count is None
    assert rows[2].p_coeff == Fraction(1, 3 * 500 ** 2)
    path = tmp_path / "t.tsv"
    path.write_text("X\t5\t1/2\n")
    assert load_region_table(str(path))[0].count == 5


@pytest.mark.parametrize("text,row", [
    ("A 1 1/2\nB 2\n", "row 2"),
    ("A x 1/2\n", "row 1"),
    ("A 1 1/0\n", "row 1"),
    ("# c\nA 0 1/2\n", "row 2"),
    ("A 3 -1\n", "row 1"),
])
def test_table_errors_carry_row(text, row):
    with pytest.raises(TableError, match=row):
        parse_region_table(text)


def test_reports():
    rep = bound_report(builtin_table("matousek"), 3)
    assert rep.total == Fraction(3, 4) and rep.final == Fraction(1, 8)
    assert "rounded down" in rep.text()
    assert rep.tsv().splitlines()[-1].endswith("0.125000000000")
    t3 = bound_report(builtin_table("rect12"), 12)
    assert t3.final >= Fraction("0.2604")
    assert any("clears published 34.374" in n for n in t3.notes)
    assert bound_report(builtin_table("warmup"), 3).final > Fraction("0.135")


def test_consistency_notes_flag_mismatch():
    notes = consistency_notes(builtin_table("rect12"))
    assert notes == ["R_N and R_O share a subembedding but imply areas 6 and 3/2"]
