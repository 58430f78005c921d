"""Axiom id registry shared by the CLI and the counterexample search."""

from __future__ import annotations

from .axioms import (
    check_core,
    check_ejr,
    check_mwv_pjr,
    check_pjr,
    check_priceable,
    check_strong_bpjr,
)
from .laminar import check_core_u_afford, is_laminar_proportional

MAIN_CHECKERS = {
    "core": check_core,
    "ejr": lambda inst, w: check_ejr(inst, w, up_to_one=False),
    "ejr1": lambda inst, w: check_ejr(inst, w, up_to_one=True),
    "pjr": lambda inst, w: check_pjr(inst, w, up_to_one=False),
    "pjr1": lambda inst, w: check_pjr(inst, w, up_to_one=True),
    "mwvpjr": check_mwv_pjr,
    "bpjr": check_strong_bpjr,
    "priceable": lambda inst, w: check_priceable(inst, w, b_min_one=False),
    "priceable1": lambda inst, w: check_priceable(inst, w, b_min_one=True),
    "laminarprop": is_laminar_proportional,
    "coreuafford": check_core_u_afford,
}

AXIOM_IDS = tuple(sorted(MAIN_CHECKERS))
