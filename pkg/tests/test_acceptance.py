"""Acceptance gate: one test per documented criterion, each printing a
single PASS/FAIL line.

The report lines go to the real terminal through the capture manager (see
conftest.acceptance_report); a test both prints its line and asserts it."""

import random
from contextlib import contextmanager
from fractions import Fraction

from pbprop import (
    GeneratorSpec,
    binarize,
    check_core,
    check_core_u_afford,
    check_ejr,
    check_mwv_pjr,
    check_pjr,
    check_priceable,
    enumerate_affordable,
    generate_laminar,
    generate_laminar_mwv,
    is_laminar_proportional,
    laminar_bundles,
    laminar_price_system,
    oracle_axiom,
    pav,
    pav_score,
    phragmen,
    random_instance,
    recognize_laminar,
    rule_x,
    validate_cohesiveness_witness,
    validate_price_system,
)
from pbprop.axioms import CohesivenessWitness
from pbprop.cli import main
from pbprop.fixtures import get_fixture, tall_stack_bundle
from pbprop.laminar import Split, UnanimousProject
from pbprop.oracle import random_bundle
from pbprop.registry import MAIN_CHECKERS

SEEDS = 1000


@contextmanager
def criterion(report, number, name):
    try:
        yield
    except BaseException:
        report(f"ACCEPTANCE {number} {name}: FAIL")
        raise
    report(f"ACCEPTANCE {number} {name}: PASS")


def small_laminar(tag, seed, gen, **kw):
    """Deterministically redraw until the instance fits the n, m <= 7 caps."""
    for probe in range(50):
        inst = gen(f"{tag}:{seed}:{probe}", **kw)
        if len(inst.voters) <= 7 and len(inst.projects) <= 7:
            return inst
    raise RuntimeError(f"no small instance for seed {seed}")


MWV_SPEC = GeneratorSpec(
    max_voters=7,
    max_projects=7,
    cost_denominator=1,
    max_cost_numerator=1,
    budget_numerator_range=(1, 6),
    budget_denominator=1,
)
APPROVAL_SPEC = GeneratorSpec(max_voters=7, max_projects=7)
CARDINAL_SPEC = GeneratorSpec(max_voters=6, max_projects=6, approval=False)


def test_criterion_01_rules_walkthrough(acceptance_report):
    with criterion(acceptance_report,1, "rules-walkthrough"):
        inst = get_fixture("cardinal_quartet")
        approval = binarize(inst, "3/10")

        winners, trace = phragmen(approval)
        assert winners == frozenset({"c2", "c4"})
        assert [e.time for e in trace.events] == [Fraction(1, 10), Fraction(11, 40)]

        pav_winner, score = pav(approval)
        assert pav_winner == frozenset({"c2", "c3"})
        assert score == Fraction(9, 2)
        assert pav_score(approval, {"c1", "c4"}) == Fraction(7, 2)
        assert pav_score(approval, {"c1", "c2"}) == Fraction(4)
        assert pav_score(approval, {"c2", "c3"}) == Fraction(9, 2)
        assert pav_score(approval, {"c2", "c4"}) == Fraction(4)

        x_winner, x_trace = rule_x(inst)
        assert x_winner == frozenset({"c1", "c4"})
        assert [r.rho for r in x_trace.rounds] == [Fraction(7, 32), Fraction(2, 9)]
        spent = sum(
            (p for r in x_trace.rounds for p in r.payments.values()), Fraction(0)
        )
        assert inst.budget - spent == Fraction(1, 4)


def test_criterion_02_pjr_violation_witness(acceptance_report):
    with criterion(acceptance_report,2, "pjr-violation-witness"):
        inst = get_fixture("cardinal_quartet")
        verdict = check_pjr(inst, {"c2", "c3"})
        assert not verdict.satisfied
        w = verdict.witness
        assert w.group == frozenset({"v1", "v2"})
        assert w.target == frozenset({"c1"})
        assert w.alpha["c1"] == Fraction(7, 10)
        stated = CohesivenessWitness(
            frozenset({"v1", "v2"}), frozenset({"c1"}), {"c1": Fraction(7, 10)}
        )
        assert validate_cohesiveness_witness(inst, stated)
        covered = sum(
            max(inst.utilities[v][c] for v in stated.group) for c in ("c2", "c3")
        )
        assert covered == Fraction(3, 5) < Fraction(7, 10)


def test_criterion_03_laminar_recognition_split(acceptance_report):
    with criterion(acceptance_report,3, "laminar-recognition-split"):
        inst = get_fixture("split_ten")
        root = recognize_laminar(inst)
        assert isinstance(root, UnanimousProject) and root.project == "c6"
        child = root.child
        assert isinstance(child, Split)
        wings = sorted(
            [(len(child.left.voters), child.left.budget),
             (len(child.right.voters), child.right.budget)]
        )
        assert wings == [(1, Fraction(3)), (2, Fraction(6))]
        assert wings[0][0] * wings[1][1] == wings[1][0] * wings[0][1]
        assert is_laminar_proportional(inst, {"c1", "c2", "c4", "c6"}).satisfied


def test_criterion_04_rules_skip_unanimous_project(acceptance_report):
    with criterion(acceptance_report,4, "rules-skip-unanimous-project"):
        inst = get_fixture("cheap_fill")
        expected = frozenset({"c1", "c2", "c3", "c4", "c5"})
        assert phragmen(inst)[0] == expected
        assert rule_x(inst)[0] == expected
        assert not is_laminar_proportional(inst, expected).satisfied


def test_criterion_05_representative_but_unpriceable(acceptance_report):
    with criterion(acceptance_report,5, "representative-but-unpriceable"):
        inst = get_fixture("unit_split")
        w = frozenset({"c1", "c2", "c3", "c4"})
        assert check_pjr(inst, w).satisfied
        assert check_ejr(inst, w).satisfied
        assert check_core(inst, w).satisfied
        assert not check_priceable(inst, w).satisfied
        assert not is_laminar_proportional(inst, w).satisfied


def test_criterion_06_priceable_but_not_pjr(acceptance_report):
    with criterion(acceptance_report,6, "priceable-but-not-pjr"):
        inst = get_fixture("two_camps")
        w = frozenset({"t2", "c1", "c2", "c3"})
        verdict = check_priceable(inst, w)
        assert verdict.satisfied
        assert validate_price_system(inst, w, verdict.certificate).ok
        assert not check_pjr(inst, w).satisfied
        stated = CohesivenessWitness(
            frozenset({"s1", "s2"}),
            frozenset({"t1", "t2"}),
            {"t1": Fraction(2, 5), "t2": Fraction(2, 5)},
        )
        assert validate_cohesiveness_witness(inst, stated)
        covered = sum(max(inst.utilities[v][c] for v in stated.group) for c in w)
        assert covered == Fraction(3, 5) < stated.sum_alpha() == Fraction(4, 5)


def test_criterion_07_core_blocked_by_cheap_stack(acceptance_report):
    with criterion(acceptance_report,7, "core-blocked-by-cheap-stack"):
        inst = get_fixture("tall_stack")
        w = tall_stack_bundle()
        verdict = check_core(inst, w)
        assert not verdict.satisfied
        assert verdict.witness.group == frozenset({"v1", "v2", "v3"})
        assert verdict.witness.target == frozenset(f"t{i}" for i in range(1, 9))
        assert check_core_u_afford(inst, w).satisfied
        assert is_laminar_proportional(inst, w).satisfied


def test_criterion_08_priceable_but_not_ejr(acceptance_report):
    with criterion(acceptance_report,8, "priceable-but-not-ejr"):
        inst = get_fixture("common_tail")
        w = frozenset({"c1", "c2", "c3"})
        assert check_priceable(inst, w).satisfied
        assert not check_ejr(inst, w).satisfied
        assert not check_core(inst, w).satisfied


def test_criterion_09a_ejr_equals_ejr_up_to_one_on_committees(acceptance_report):
    with criterion(acceptance_report,"9a", "ejr-equals-ejr1-on-committees"):
        for seed in range(SEEDS):
            rng = random.Random(f"9a:{seed}")
            inst = random_instance(MWV_SPEC, rng)
            w = random_bundle(inst, rng)
            plain = check_ejr(inst, w).satisfied
            one = check_ejr(inst, w, up_to_one=True).satisfied
            assert plain == one, seed


def test_criterion_09b_pjr_equals_committee_pjr(acceptance_report):
    with criterion(acceptance_report,"9b", "pjr-equals-committee-pjr"):
        for seed in range(SEEDS):
            rng = random.Random(f"9b:{seed}")
            inst = random_instance(MWV_SPEC, rng)
            w = random_bundle(inst, rng)
            assert (
                check_pjr(inst, w).satisfied == check_mwv_pjr(inst, w).satisfied
            ), seed


def test_criterion_09c_ejr_implies_pjr(acceptance_report):
    with criterion(acceptance_report,"9c", "ejr-implies-pjr"):
        for seed in range(SEEDS):
            rng = random.Random(f"9c:{seed}")
            spec = APPROVAL_SPEC if seed % 2 else CARDINAL_SPEC
            inst = random_instance(spec, rng)
            w = random_bundle(inst, rng)
            if not check_pjr(inst, w).satisfied:
                assert not check_ejr(inst, w).satisfied, seed
            if not check_pjr(inst, w, up_to_one=True).satisfied:
                assert not check_ejr(inst, w, up_to_one=True).satisfied, seed


def test_criterion_09d_phragmen_pjr_and_priceable(acceptance_report):
    with criterion(acceptance_report,"9d", "phragmen-output-pjr-priceable"):
        for seed in range(SEEDS):
            rng = random.Random(f"9d:{seed}")
            inst = random_instance(APPROVAL_SPEC, rng)
            w, _ = phragmen(inst)
            assert check_pjr(inst, w).satisfied, seed
            assert check_priceable(inst, w).satisfied, seed


def test_criterion_09e_rule_x_up_to_one(acceptance_report):
    with criterion(acceptance_report,"9e", "rulex-output-ejr1-pjr1"):
        for seed in range(SEEDS):
            rng = random.Random(f"9e:{seed}")
            spec = APPROVAL_SPEC if seed % 2 else CARDINAL_SPEC
            inst = random_instance(spec, rng)
            w, _ = rule_x(inst)
            assert check_ejr(inst, w, up_to_one=True).satisfied, seed
            assert check_pjr(inst, w, up_to_one=True).satisfied, seed


def test_criterion_09f_laminar_bundles_priceable(acceptance_report):
    with criterion(acceptance_report,"9f", "laminar-bundles-priceable"):
        for seed in range(SEEDS):
            inst = small_laminar(
                "9f", seed, generate_laminar, max_leaf_voters=2, max_leaf_projects=2
            )
            for w in laminar_bundles(inst):
                assert check_priceable(inst, w).satisfied, seed
                ps = laminar_price_system(inst, w)
                assert ps.initial_budget == inst.cost_of(w), seed
                assert validate_price_system(inst, w, ps).ok, seed


def test_criterion_09g_laminar_committees_core_ejr(acceptance_report):
    with criterion(acceptance_report,"9g", "laminar-committees-core-ejr"):
        for seed in range(SEEDS):
            inst = small_laminar("9g", seed, generate_laminar_mwv, max_leaf_voters=2)
            bundles = set(laminar_bundles(inst))
            bundles.add(phragmen(inst)[0])
            for w in bundles:
                assert check_core(inst, w).satisfied, seed
                assert check_ejr(inst, w).satisfied, seed


def test_criterion_09h_laminar_restricted_core(acceptance_report):
    with criterion(acceptance_report,"9h", "laminar-restricted-core"):
        for seed in range(SEEDS):
            inst = small_laminar(
                "9h", seed, generate_laminar, max_leaf_voters=2, max_leaf_projects=2
            )
            for w in laminar_bundles(inst):
                assert check_core_u_afford(inst, w).satisfied, seed


def test_criterion_10_oracle_and_pav_agreement(acceptance_report):
    with criterion(acceptance_report,10, "oracle-differential-agreement"):
        small_approval = GeneratorSpec()
        small_cardinal = GeneratorSpec(approval=False, max_voters=4, max_projects=4)
        for seed in range(SEEDS):
            rng = random.Random(f"10:{seed}")
            spec = small_approval if seed % 2 else small_cardinal
            inst = random_instance(spec, rng)
            w = random_bundle(inst, rng)
            axioms = ["core", "ejr", "ejr1", "pjr", "pjr1", "priceable"]
            if inst.is_approval:
                axioms.append("bpjr")
                try:
                    inst.committee_size()
                    axioms.append("mwvpjr")
                except ValueError:
                    pass
            for axiom in axioms:
                assert (
                    MAIN_CHECKERS[axiom](inst, w).satisfied
                    == oracle_axiom(inst, w, axiom).satisfied
                ), (seed, axiom)
            if inst.is_approval:
                winner, score = pav(inst)
                best = max(pav_score(inst, b) for b in enumerate_affordable(inst))
                assert score == best == pav_score(inst, winner), seed


def test_criterion_11_cli_fixture_suite(acceptance_report, capsys):
    with criterion(acceptance_report, 11, "cli-fixture-suite"):
        assert main(["paper-verify"]) == 0
        out = capsys.readouterr().out
        assert "8/8 fixtures pass" in out
