from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flagcremona.grading import Cocharacter, classify_short_gradings, equalized, grade, is_short
from flagcremona.rootsys import DynkinDiagram, MarkedVariety, build_root_system, parse_diagram, parse_variety, variety_dimension

import reference_tables


def test_cocharacter_basics():
    s = Cocharacter.basic(4, 1, 3)
    assert s.values == (1, 0, 1, 0)
    assert s.support == {1, 3} and s.zeros == {2, 4}
    assert str(s) == "s1+s3"
    assert str(Cocharacter.basic(3, 2, 2)) == "2*s2"
    assert (s + Cocharacter.basic(4, 2)).values == (1, 1, 1, 0)
    with pytest.raises(ValueError):
        Cocharacter.basic(3, 4)


@settings(max_examples=50)
@given(
    st.lists(st.integers(-3, 3), min_size=4, max_size=4),
    st.lists(st.integers(-5, 5), min_size=4, max_size=4),
    st.lists(st.integers(-5, 5), min_size=4, max_size=4),
)
def test_cocharacter_is_linear(vals, a, b):
    s = Cocharacter(tuple(vals))
    assert s([x + y for x, y in zip(a, b)]) == s(a) + s(b)


def test_grade_examples():
    A3 = build_root_system(parse_diagram("A3"))
    rep = grade(A3, Cocharacter.basic(3, 2))
    assert rep.pieces == {-1: 4, 0: 7, 1: 4}
    assert rep.short
    assert grade(A3, Cocharacter.zero(3)).pieces == {0: 15}
    C3 = build_root_system(parse_diagram("C3"))
    rep = grade(C3, Cocharacter.basic(3, 3))
    assert rep.pieces[1] == rep.pieces[-1] == 6 and is_short(rep)


def test_is_short_examples():
    B2 = build_root_system(parse_diagram("B2"))
    assert is_short(grade(B2, Cocharacter.basic(2, 1)))
    assert not is_short(grade(B2, Cocharacter.basic(2, 2)))
    assert not is_short(grade(B2, Cocharacter.zero(2)))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["A5", "B4", "C4", "D5", "E6", "F4", "G2", "A2+B2"]), st.data())
def test_grading_invariants(lit, data):
    rs = build_root_system(parse_diagram(lit))
    vals = data.draw(st.lists(st.integers(-2, 2), min_size=rs.rank, max_size=rs.rank))
    rep = grade(rs, Cocharacter(tuple(vals)))
    assert sum(rep.pieces.values()) == rs.rank + len(rs.roots)
    for m, d in rep.pieces.items():
        assert rep.pieces.get(-m) == d


def connected_types(max_rank):
    out = [("A", n) for n in range(1, max_rank + 1)]
    out += [(x, n) for n in range(2, max_rank + 1) for x in "BC"]
    out += [("D", n) for n in range(4, max_rank + 1)]
    return out + [("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)]


@pytest.mark.parametrize("letter,n", connected_types(10))
def test_classification_matches_published_list(letter, n):
    got = {i: sorted(d.components) for i, d in classify_short_gradings(DynkinDiagram.of((letter, n)))}
    expect = reference_tables.table1(letter, n)
    if letter == "B" and n == 2:
        # B2 = C2: both nodes give short gradings, each with an A1 left over
        expect = {1: [("A", 1)]}
    if letter == "C" and n == 2:
        expect = {2: [("A", 1)]}
    assert got == expect


def test_classification_examples():
    assert [i for i, _ in classify_short_gradings(parse_diagram("A4"))] == [1, 2, 3, 4]
    assert [i for i, _ in classify_short_gradings(parse_diagram("D6"))] == [1, 5, 6]
    for lit in ("F4", "G2", "E8"):
        assert classify_short_gradings(parse_diagram(lit)) == []
    with pytest.raises(ValueError):
        classify_short_gradings(parse_diagram("A2+A1"))


@pytest.mark.parametrize("letter,n", connected_types(8))
def test_short_grading_degree_one_piece_is_the_variety(letter, n):
    d = DynkinDiagram.of((letter, n))
    rs = build_root_system(d)
    for i, _ in classify_short_gradings(d):
        rep = grade(rs, Cocharacter.basic(n, i))
        assert rep.pieces[1] == variety_dimension(MarkedVariety(d, frozenset({i})))


def test_equalized_examples():
    assert equalized(parse_variety("A3(2)"), Cocharacter.basic(3, 2))
    assert equalized(parse_variety("E7(7)"), Cocharacter.basic(7, 7))
    assert not equalized(parse_variety("E7(1)"), Cocharacter.basic(7, 1))
    # products: a sum of short co-characters on separate components stays equalized
    assert equalized(parse_variety("A1(1)+B3(1)"), Cocharacter.basic(4, 1, 2))
