import pytest
from hypothesis import given, strategies as st

from oracles import interleaved
from pseudochord.matching import (
    Matching, MatchingError, family_matching, group_of, load_matching, matching_from_pairs,
    parse_family, parse_matching, serialize_matching,
)


@st.composite
def matchings(draw, max_k=8):
    k = draw(st.integers(0, max_k))
    labels = draw(st.permutations(range(2 * k)))
    return matching_from_pairs(zip(labels[::2], labels[1::2])) if k else Matching(())


def test_family_crossings_follow_groups():
    sizes = [3, 2, 4]
    m = family_matching(sizes)
    g = group_of(sizes)
    assert m.k == 9
    for c in range(m.k):
        for d in range(m.k):
            if c != d:
                assert m.crosses(c, d) == (g[c] != g[d])


def test_family_layout():
    assert family_matching([1, 1, 1]).pairs == ((0, 3), (1, 4), (2, 5))
    assert family_matching([2]).pairs == ((0, 3), (1, 2))
    assert family_matching([1] * 4).crossing_count() == 6


@pytest.mark.parametrize("text,k", [("(1)x12", 12), ("(3,2,4)", 9), ("( 2 , 1 )", 3), ("(4)*2", 8)])
def test_parse_family(text, k):
    assert parse_family(text).k == k


@pytest.mark.parametrize("text", ["(0)", "()", "(1,2)x3", "1,2", "(a)"])
def test_parse_family_rejects(text):
    with pytest.raises(MatchingError):
        parse_family(text)


def test_match_format_roundtrip(tmp_path):
    m = family_matching([2, 3])
    path = tmp_path / "m.match"
    path.write_text(serialize_matching(m))
    assert load_matching(str(path)) == m
    assert load_matching("(2,3)") == m


@pytest.mark.parametrize("text,where", [
    ("", "line 1"),
    ("2\n0 1\n", "line 1"),
    ("2\n0 1\n1 2\n", "line 3"),
    ("2\n0 1\n2 4\n", "line 3"),
    ("1\n0 x\n", "line 2"),
    ("x\n", "line 1"),
])
def test_parse_errors_carry_line_numbers(text, where):
    with pytest.raises(MatchingError, match=where):
        parse_matching(text)


def test_pair_validation():
    with pytest.raises(MatchingError):
        matching_from_pairs([(0, 0)])
    with pytest.raises(MatchingError):
        matching_from_pairs([(0, 1), (1, 2)])
    with pytest.raises(MatchingError):
        family_matching([1]).crosses(0, 0)
    with pytest.raises(MatchingError):
        family_matching([1]).crossing_set(3)


@given(matchings())
def test_crossings_match_interleaving(m):
    for c in range(m.k):
        for d in range(m.k):
            if c != d:
                assert m.crosses(c, d) == interleaved(m.pairs[c], m.pairs[d])


@given(matchings(), st.integers(-20, 20))
def test_rotation_and_reflection_keep_crossing_count(m, t):
    assert m.cyclic_shift(t).crossing_count() == m.crossing_count()
    assert m.reflect().crossing_count() == m.crossing_count()
    assert m.reflect().reflect().pair_set() == m.pair_set()


@given(matchings())
def test_serialize_roundtrip(m):
    assert parse_matching(serialize_matching(m)).pair_set() == m.pair_set()


@given(matchings())
def test_crossing_sets_are_symmetric(m):
    assert sum(len(m.crossing_set(c)) for c in range(m.k)) % 2 == 0
    for c in range(m.k):
        for d in m.crossing_set(c):
            assert c in m.crossing_set(d)
    shifted = m.cyclic_shift(1)
    # chord identity is positional, so crossings survive the shift chord by chord
    for c in range(m.k):
        assert shifted.crossing_set(c) == m.crossing_set(c)


def test_family_crossing_extremes():
    assert family_matching([6]).crossing_count() == 0
    assert family_matching([1] * 6).crossing_count() == 15
