"""Axiom checkers: fixture verdicts, witness validity, price systems."""

import random
from fractions import Fraction

import pytest

from pbprop import (
    GeneratorSpec,
    PBInstance,
    check_core,
    check_ejr,
    check_mwv_pjr,
    check_pjr,
    check_priceable,
    check_strong_bpjr,
    phragmen,
    price_system_from_phragmen,
    random_instance,
    validate_cohesiveness_witness,
    validate_core_witness,
    validate_price_system,
)
from pbprop.axioms import CohesivenessWitness, EnumerationCapError
from pbprop.fixtures import get_fixture
from pbprop.oracle import random_bundle


def test_core_detects_blocking_pair():
    inst = get_fixture("common_tail")
    verdict = check_core(inst, {"c1", "c2", "c3"})
    assert not verdict.satisfied
    assert validate_core_witness(inst, frozenset({"c1", "c2", "c3"}), verdict.witness)


def test_core_satisfied_on_unit_split():
    inst = get_fixture("unit_split")
    assert check_core(inst, {"c1", "c2", "c3", "c4"}).satisfied


def test_pjr_witness_on_quartet():
    inst = get_fixture("cardinal_quartet")
    verdict = check_pjr(inst, {"c2", "c3"})
    assert not verdict.satisfied
    w = verdict.witness
    assert w.group == frozenset({"v1", "v2"})
    assert w.target == frozenset({"c1"})
    assert w.alpha["c1"] == Fraction(7, 10)
    assert validate_cohesiveness_witness(inst, w)


def test_ejr_and_pjr_agree_on_satisfied_fixture():
    inst = get_fixture("unit_split")
    w = {"c1", "c2", "c3", "c4"}
    assert check_ejr(inst, w).satisfied
    assert check_pjr(inst, w).satisfied


def test_up_to_one_weakens_the_axiom():
    # The lone voter affords {p,r} (threshold total 7/4) but only gets 3/2
    # from {p,q}; adding r lifts every affordable deviation strictly, so
    # the up-to-one variant is satisfied while the plain one is not.
    inst = PBInstance.build(
        voters=["a"],
        projects=["p", "q", "r"],
        cost={"p": 1, "q": 1, "r": 1},
        utilities={"a": {"p": "3/4", "q": "3/4", "r": 1}},
        budget=2,
    )
    w = {"p", "q"}
    assert not check_ejr(inst, w).satisfied
    assert check_ejr(inst, w, up_to_one=True).satisfied


def test_witness_validation_rejects_garbage():
    inst = get_fixture("unit_split")
    too_big = CohesivenessWitness(
        frozenset({"v1"}),
        frozenset({"c1", "c2", "c3", "c4"}),
        {f"c{i}": Fraction(1) for i in range(1, 5)},
    )
    assert not validate_cohesiveness_witness(inst, too_big)
    wrong_alpha = CohesivenessWitness(
        frozenset({"v1"}), frozenset({"c3"}), {"c3": Fraction(1)}
    )
    assert not validate_cohesiveness_witness(inst, wrong_alpha)


def test_mwv_pjr_requires_mwv():
    with pytest.raises(ValueError):
        check_mwv_pjr(get_fixture("cardinal_quartet"), set())


def test_mwv_pjr_finds_starved_group():
    inst = get_fixture("unit_split")
    verdict = check_mwv_pjr(inst, {"c1", "c2", "c3", "c4"})
    assert verdict.satisfied
    starved = check_mwv_pjr(inst, {"c3", "c4", "c5"})
    # v1, v2 are owed two commonly approved seats but see only c5.
    assert not starved.satisfied


def test_strong_bpjr_requires_approval():
    with pytest.raises(ValueError):
        check_strong_bpjr(get_fixture("cardinal_quartet"), set())


def test_strong_bpjr_verdicts():
    inst = PBInstance.build(
        voters=["a", "b"],
        projects=["p", "q"],
        cost={"p": 1, "q": 1},
        utilities={"a": {"p": 1}, "b": {"q": 1}},
        budget=2,
    )
    assert check_strong_bpjr(inst, {"p", "q"}).satisfied
    verdict = check_strong_bpjr(inst, {"p"})
    assert not verdict.satisfied
    assert verdict.witness.group == frozenset({"b"})
    assert verdict.witness.level == 1
    # On split_ten every affordable bundle starves one camp of its share.
    split = get_fixture("split_ten")
    starved = check_strong_bpjr(split, {"c1", "c2", "c3", "c6"})
    assert not starved.satisfied
    assert starved.witness.group == frozenset({"v3"})


def test_priceable_fixture_verdicts():
    assert not check_priceable(
        get_fixture("unit_split"), {"c1", "c2", "c3", "c4"}
    ).satisfied
    verdict = check_priceable(get_fixture("two_camps"), {"t2", "c1", "c2", "c3"})
    assert verdict.satisfied
    report = validate_price_system(
        get_fixture("two_camps"), {"t2", "c1", "c2", "c3"}, verdict.certificate
    )
    assert report.ok


def test_priceable_b_min_one_mode():
    inst = PBInstance.build(
        voters=["a"],
        projects=["p"],
        cost={"p": 1},
        utilities={"a": {"p": 1}},
        budget=1,
    )
    # The empty bundle is supported by b = 0 but not by any b >= 1: the
    # lone supporter of p would hold slack b > cost(p) = 1... only at b > 1,
    # so b = 1 exactly still works.
    assert check_priceable(inst, set(), b_min_one=False).satisfied
    assert check_priceable(inst, set(), b_min_one=True).satisfied
    richer = PBInstance.build(
        voters=["a"],
        projects=["p"],
        cost={"p": "1/2"},
        utilities={"a": {"p": 1}},
        budget=1,
    )
    assert check_priceable(richer, set(), b_min_one=False).satisfied
    assert not check_priceable(richer, set(), b_min_one=True).satisfied


def test_price_system_validation_catches_violations():
    inst = get_fixture("two_camps")
    w = frozenset({"t2", "c1", "c2", "c3"})
    good = check_priceable(inst, w).certificate
    bad = type(good)(good.initial_budget, {**good.payments, "s1": {"t2": Fraction(2)}})
    report = validate_price_system(inst, w, bad)
    assert not report.ok


def test_phragmen_trace_to_price_system():
    inst = get_fixture("split_ten")
    winners, trace = phragmen(inst)
    ps = price_system_from_phragmen(inst, trace)
    assert validate_price_system(inst, winners, ps).ok


def test_enumeration_cap(monkeypatch):
    from pbprop import axioms

    monkeypatch.setattr(axioms, "ENUM_MAX_BITS", 2)
    with pytest.raises(EnumerationCapError):
        check_core(get_fixture("unit_split"), set())


def test_violation_witnesses_always_validate():
    rng = random.Random(99)
    for trial in range(80):
        spec = GeneratorSpec(approval=trial % 2 == 0)
        inst = random_instance(spec, rng)
        w = random_bundle(inst, rng)
        core = check_core(inst, w)
        if not core.satisfied:
            assert validate_core_witness(inst, w, core.witness)
        for checker in (check_ejr, check_pjr):
            verdict = checker(inst, w)
            if not verdict.satisfied:
                assert validate_cohesiveness_witness(inst, verdict.witness)
