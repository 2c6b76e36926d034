import pytest

from divrank.assertions import (
    Assertion,
    AssertionSet,
    ParseError,
    parse_assertion,
    parse_assertions,
)


def test_parse_each_kind():
    assert parse_assertion("dep: a b -> c") == Assertion.dep(["a", "b"], ["c"])
    assert parse_assertion("const: a") == Assertion.const(["a"])
    assert parse_assertion("indep: a _||_ b c") == Assertion.indep(["a"], ["b", "c"])
    assert parse_assertion("dep: () -> a") == Assertion.dep([], ["a"])


def test_independence_is_symmetric_as_a_value():
    assert Assertion.indep("a", "b") == Assertion.indep("b", "a")
    assert len({Assertion.indep("a", "b"), Assertion.indep("b", "a")}) == 1
    assert Assertion.dep("a", "b") != Assertion.dep("b", "a")


def test_constancy_readings():
    c = Assertion.const("a,b")
    assert c.as_dep() == Assertion.dep([], "a,b")
    assert c.as_indep() == Assertion.indep("a,b", "a,b")


@pytest.mark.parametrize("line", ["dep a -> b", "dep: a b", "indep: a b", "fd: a -> b", "dep: () a -> b"])
def test_bad_lines(line):
    with pytest.raises(ValueError):
        parse_assertion(line)


def test_parse_error_carries_location():
    with pytest.raises(ParseError) as info:
        parse_assertions("dep: a -> b\n\nbogus line\n", source="sigma.txt")
    assert info.value.line == 3
    assert "sigma.txt:3" in str(info.value)


def test_universe_line_and_first_appearance():
    s = parse_assertions("universe: c b a d\ndep: a -> b\n")
    assert list(s.universe.attrs) == ["c", "b", "a", "d"]
    s = parse_assertions("# comment\ndep: b -> c\nindep: a _||_ b\n")
    assert list(s.universe.attrs) == ["b", "c", "a"]


def test_attribute_outside_declared_universe():
    with pytest.raises(ParseError):
        parse_assertions("universe: a\ndep: a -> b\n")


def test_text_round_trip():
    s = parse_assertions("universe: a b c\ndep: a b -> c\nconst: b\nindep: a _||_ c\nindep: c _||_ a\n")
    assert len(s) == 3
    again = parse_assertions(s.to_text())
    assert again == s
    assert hash(again) == hash(s)
