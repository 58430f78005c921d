"""Data model: parsing, normalization, validation, binarization."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pbprop import PBInstance, as_fraction, binarize, validate
from pbprop.model import GroupUtilityQuery, check_bundle, group_utility


def tiny():
    return PBInstance.build(
        voters=["b", "a"],
        projects=["p2", "p1"],
        cost={"p1": "1/2", "p2": 1},
        utilities={"a": {"p1": 1}, "b": {"p2": "3/4"}},
        budget="3/2",
    )


def test_as_fraction_parses_strings_exactly():
    assert as_fraction("7/10") == Fraction(7, 10)
    assert as_fraction("0.35") == Fraction(7, 20)
    assert as_fraction(3) == 3


def test_as_fraction_rejects_floats():
    with pytest.raises(TypeError):
        as_fraction(0.35)


def test_build_sorts_ids_and_fills_missing_utilities():
    inst = tiny()
    assert inst.voters == ("a", "b")
    assert inst.projects == ("p1", "p2")
    assert inst.utilities["a"]["p2"] == 0
    assert inst.utilities["b"]["p1"] == 0


def test_cost_and_utility_helpers():
    inst = tiny()
    assert inst.cost_of({"p1", "p2"}) == Fraction(3, 2)
    assert inst.voter_utility("b", {"p1", "p2"}) == Fraction(3, 4)
    assert inst.approvers("p1") == ["a"]
    assert inst.approval_set("a") == frozenset({"p1"})


def test_is_approval_and_mwv():
    inst = tiny()
    assert not inst.is_approval
    mwv = PBInstance.build(
        voters=["a", "b"],
        projects=["p", "q", "r"],
        cost={c: 1 for c in "pqr"},
        utilities={"a": {"p": 1}, "b": {"q": 1}},
        budget=2,
    )
    assert mwv.is_approval and mwv.is_mwv
    assert mwv.committee_size() == 2


def test_committee_size_requires_integer_ratio():
    inst = PBInstance.build(
        voters=["a"],
        projects=["p", "q"],
        cost={"p": 1, "q": 1},
        utilities={"a": {"p": 1}},
        budget="3/2",
    )
    assert inst.is_mwv
    with pytest.raises(ValueError):
        inst.committee_size()


def test_validate_flags_problems():
    inst = PBInstance(
        voters=("a", "a"),
        projects=("p",),
        cost={"p": Fraction(-1)},
        utilities={"a": {"p": Fraction(2)}},
        budget=Fraction(0),
    )
    report = validate(inst)
    assert not report.ok
    text = " ".join(report.problems)
    assert "duplicate voter" in text
    assert "nonpositive budget" in text
    assert "nonpositive cost" in text
    assert "out of [0,1]" in text


def test_validate_accepts_well_formed():
    assert validate(tiny()).ok


def test_binarize_thresholds_inclusively():
    inst = tiny()
    approval = binarize(inst, "3/4")
    assert approval.utilities["b"]["p2"] == 1
    assert approval.utilities["a"]["p1"] == 1
    stricter = binarize(inst, 1)
    assert stricter.utilities["b"]["p2"] == 0


def test_binarize_rejects_bad_threshold():
    with pytest.raises(ValueError):
        binarize(tiny(), 0)
    with pytest.raises(ValueError):
        binarize(tiny(), "3/2")


@given(st.fractions(min_value=0, max_value=1))
def test_binarize_always_approval(threshold):
    if threshold == 0:
        return
    assert binarize(tiny(), threshold).is_approval


def test_group_utility_sums_over_pairs():
    inst = tiny()
    q = GroupUtilityQuery(frozenset({"a", "b"}), frozenset({"p1", "p2"}))
    assert group_utility(inst, q) == 1 + Fraction(3, 4)
    with pytest.raises(KeyError):
        group_utility(inst, GroupUtilityQuery(frozenset({"z"}), frozenset()))


def test_check_bundle_rejects_unknown_projects():
    with pytest.raises(KeyError):
        check_bundle(tiny(), {"p1", "nope"})
    assert check_bundle(tiny(), ["p1"]) == frozenset({"p1"})
