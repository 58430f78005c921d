"""Exact-arithmetic participatory budgeting rules and proportionality
axiom checkers."""

__version__ = "0.1.0"

from .axioms import (
    AxiomVerdict,
    CohesivenessWitness,
    CommitteeWitness,
    CoreWitness,
    PriceSystem,
    check_core,
    check_ejr,
    check_mwv_pjr,
    check_pjr,
    check_priceable,
    check_strong_bpjr,
    price_system_from_phragmen,
    validate_cohesiveness_witness,
    validate_core_witness,
    validate_price_system,
)
from .io import load_instance, parse_instance, parse_pabulib, serialize_instance
from .laminar import (
    NotLaminarError,
    check_core_u_afford,
    generate_laminar,
    generate_laminar_mwv,
    is_laminar_proportional,
    is_u_affordable,
    laminar_bundles,
    laminar_price_system,
    recognize_laminar,
)
from .model import Bundle, PBInstance, as_fraction, binarize, validate
from .oracle import (
    GeneratorSpec,
    enumerate_affordable,
    oracle_axiom,
    random_instance,
    search_counterexample,
)
from .rules import harmonic, pav, pav_score, phragmen, rule_x

__all__ = [
    "AxiomVerdict",
    "Bundle",
    "CohesivenessWitness",
    "CommitteeWitness",
    "CoreWitness",
    "GeneratorSpec",
    "NotLaminarError",
    "PBInstance",
    "PriceSystem",
    "as_fraction",
    "binarize",
    "check_core",
    "check_core_u_afford",
    "check_ejr",
    "check_mwv_pjr",
    "check_pjr",
    "check_priceable",
    "check_strong_bpjr",
    "enumerate_affordable",
    "generate_laminar",
    "generate_laminar_mwv",
    "harmonic",
    "is_laminar_proportional",
    "is_u_affordable",
    "laminar_bundles",
    "laminar_price_system",
    "load_instance",
    "oracle_axiom",
    "parse_instance",
    "parse_pabulib",
    "pav",
    "pav_score",
    "phragmen",
    "price_system_from_phragmen",
    "random_instance",
    "recognize_laminar",
    "rule_x",
    "search_counterexample",
    "serialize_instance",
    "validate",
    "validate_cohesiveness_witness",
    "validate_core_witness",
    "validate_price_system",
]
