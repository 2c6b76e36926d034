from fractions import Fraction

import pytest

from divrank.ground import DomainError, GroundSet, SizeError, parse_subset
from divrank.values import LogCount, format_value, json_value, to_exact, values_equal


@pytest.mark.parametrize(
    "text, expected",
    [
        ("a,b", {"a", "b"}),
        ("a b", {"a", "b"}),
        ("", set()),
        ("()", set()),
        ("∅", set()),
        (["x", "y"], {"x", "y"}),
    ],
)
def test_parse_subset(text, expected):
    assert parse_subset(text) == frozenset(expected)


def test_ground_set_rejects_duplicates():
    with pytest.raises(DomainError):
        GroundSet(["a", "a"])


def test_subset_outside_ground_is_domain_error():
    g = GroundSet("abc")
    with pytest.raises(DomainError):
        g.subset("a,z")


def test_canonical_order_is_size_then_position():
    g = GroundSet(["b", "a", "c"])
    shown = [g.fmt(x) for x in g.subsets()]
    assert shown == ["∅", "b", "a", "c", "ba", "bc", "ac", "bac"]


def test_masks_round_trip():
    g = GroundSet("abcd")
    for x in g.subsets():
        assert g.from_mask(g.mask(x)) == x


def test_size_cap():
    with pytest.raises(SizeError):
        GroundSet([f"v{i}" for i in range(13)]).check_size(12)


def test_logcount_adds_by_multiplying():
    assert LogCount(2) + LogCount(3) == LogCount(6)
    assert LogCount(1) == 0
    assert str(LogCount(3)) == "log2(3)"
    assert str(LogCount(1)) == "0"
    assert str(LogCount(8)) == "3"
    assert LogCount(5) + LogCount(2) > LogCount(3) + LogCount(3)


def test_exact_values():
    assert to_exact("21/10") == Fraction(21, 10)
    assert to_exact("2.1") == Fraction(21, 10)
    assert format_value(Fraction(21, 10)) == "2.1"
    assert format_value(Fraction(1, 3)) == "1/3"
    assert format_value(3) == "3"
    assert json_value(LogCount(4)) == {"log2": 4}


def test_values_equal_tolerance():
    assert values_equal(1.0, 1.0 + 1e-12, 1e-9)
    assert not values_equal(1.0, 1.0 + 1e-6, 1e-9)
    assert not values_equal(Fraction(1, 3), Fraction(1, 3) + Fraction(1, 10**12), None)
