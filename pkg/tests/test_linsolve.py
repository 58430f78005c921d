"""Exact LP feasibility, cross-checked against an independent
Fourier-Motzkin decision of the same systems."""

import random
from fractions import Fraction

import pytest

from pbprop import linsolve
from pbprop.linsolve import EQ, GEQ, LEQ, LinearSystem, ResourceLimitError, lp_feasible
from pbprop.oracle import fm_feasible


def system(variables, rows, nonneg=()):
    sys_ = LinearSystem()
    for v in variables:
        sys_.add_variable(v, nonneg=v in nonneg)
    for coeffs, rel, rhs in rows:
        sys_.add(coeffs, rel, rhs)
    return sys_


def test_empty_system_is_feasible():
    res = lp_feasible(system(["x"], []))
    assert res.feasible and res.assignment == {"x": 0}


def test_simple_feasible_with_witness():
    sys_ = system(
        ["x", "y"],
        [
            ({"x": 1, "y": 1}, EQ, 2),
            ({"x": 1, "y": -1}, LEQ, 0),
            ({"x": 1}, GEQ, Fraction(1, 2)),
        ],
    )
    res = lp_feasible(sys_)
    assert res.feasible
    assert sys_.satisfied_by(res.assignment)


def test_simple_infeasible():
    sys_ = system(
        ["x"],
        [({"x": 1}, GEQ, 3), ({"x": 1}, LEQ, 2)],
    )
    assert not lp_feasible(sys_).feasible


def test_nonneg_declaration_is_enforced():
    free = system(["x"], [({"x": 1}, LEQ, -1)])
    assert lp_feasible(free).feasible
    bounded = system(["x"], [({"x": 1}, LEQ, -1)], nonneg={"x"})
    assert not lp_feasible(bounded).feasible


def test_negative_rhs_rows():
    sys_ = system(
        ["x", "y"],
        [({"x": 1, "y": 2}, EQ, -3), ({"x": -1}, LEQ, -5)],
    )
    res = lp_feasible(sys_)
    assert res.feasible
    assert res.assignment["x"] >= 5


def test_duplicate_variable_rejected():
    sys_ = LinearSystem()
    sys_.add_variable("x")
    with pytest.raises(ValueError):
        sys_.add_variable("x")


def test_undeclared_variable_rejected():
    sys_ = LinearSystem()
    sys_.add_variable("x")
    with pytest.raises(ValueError):
        sys_.add({"y": 1}, LEQ, 0)


def test_bad_relation_rejected():
    sys_ = LinearSystem()
    sys_.add_variable("x")
    with pytest.raises(ValueError):
        sys_.add({"x": 1}, "<", 0)


def test_variable_cap(monkeypatch):
    monkeypatch.setattr(linsolve, "MAX_VARIABLES", 2)
    sys_ = system(["a", "b", "c"], [({"a": 1}, LEQ, 0)])
    with pytest.raises(ResourceLimitError):
        lp_feasible(sys_)


def _as_fm_rows(sys_):
    """Rewrite a LinearSystem as pure <= rows for the independent decider."""
    rows = []
    for con in sys_.constraints:
        if con.relation in (LEQ, EQ):
            rows.append((dict(con.coeffs), con.rhs))
        if con.relation in (GEQ, EQ):
            rows.append(({v: -c for v, c in con.coeffs.items()}, -con.rhs))
    for v in sys_.nonneg:
        rows.append(({v: Fraction(-1)}, Fraction(0)))
    return rows


def test_cross_check_against_fourier_motzkin():
    rng = random.Random(20240817)
    relations = [LEQ, EQ, GEQ]
    for trial in range(250):
        variables = [f"x{i}" for i in range(rng.randint(1, 3))]
        nonneg = {v for v in variables if rng.random() < 0.5}
        rows = []
        for _ in range(rng.randint(1, 5)):
            coeffs = {v: Fraction(rng.randint(-3, 3)) for v in variables}
            rows.append((coeffs, rng.choice(relations), Fraction(rng.randint(-4, 4))))
        sys_ = system(variables, rows, nonneg=nonneg)
        got = lp_feasible(sys_)
        want = fm_feasible(variables, _as_fm_rows(sys_))
        assert got.feasible == want, f"trial {trial}"
        if got.feasible:
            assert sys_.satisfied_by(got.assignment)
