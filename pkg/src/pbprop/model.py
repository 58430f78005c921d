"""Instance and bundle data model.

A budgeting instance holds ordered voter and project ids, exact rational
costs, per-voter utilities in [0, 1] and a total budget.  Ids are opaque
strings; their lexicographic order is the canonical tie-break used
everywhere in this package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable


def as_fraction(value) -> Fraction:
    """Parse a value to an exact Fraction ("7/10" and "0.35" both exact)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("refusing to convert a binary float; pass a string")
    return Fraction(str(value))


@dataclass(frozen=True)
class PBInstance:
    voters: tuple  # ordered voter ids
    projects: tuple  # ordered project ids
    cost: dict  # project id -> Fraction > 0
    utilities: dict  # voter id -> {project id -> Fraction in [0, 1]}
    budget: Fraction
    description: str = ""

    @staticmethod
    def build(voters, projects, cost, utilities, budget, description=""):
        """Normalise raw input (strings, ints) into canonical form.

        Omitted utility entries default to 0; ids are sorted canonically.
        """
        voters = tuple(sorted(voters))
        projects = tuple(sorted(projects))
        cost = {c: as_fraction(x) for c, x in cost.items()}
        norm = {}
        for v in voters:
            row = utilities.get(v, {})
            norm[v] = {c: as_fraction(row.get(c, 0)) for c in projects}
        return PBInstance(voters, projects, cost, norm, as_fraction(budget), description)

    def utility(self, voter, project) -> Fraction:
        return self.utilities[voter][project]

    def approvers(self, project):
        return [v for v in self.voters if self.utilities[v][project] > 0]

    def approval_set(self, voter) -> frozenset:
        return frozenset(c for c in self.projects if self.utilities[voter][c] == 1)

    @property
    def is_approval(self) -> bool:
        return all(
            u in (0, 1) for row in self.utilities.values() for u in row.values()
        )

    @property
    def is_mwv(self) -> bool:
        if not self.is_approval or not self.projects:
            return False
        costs = {self.cost[c] for c in self.projects}
        return len(costs) == 1

    def committee_size(self) -> int:
        """Budget expressed in unit costs; only meaningful on MWV instances."""
        if not self.is_mwv:
            raise ValueError("not an MWV instance")
        unit = self.cost[self.projects[0]]
        k = self.budget / unit
        if k.denominator != 1 or k <= 0:
            raise ValueError(f"budget / unit cost = {k} is not a positive integer")
        return int(k)

    def cost_of(self, bundle: Iterable) -> Fraction:
        return sum((self.cost[c] for c in bundle), Fraction(0))

    def voter_utility(self, voter, bundle) -> Fraction:
        return sum((self.utilities[voter][c] for c in bundle), Fraction(0))


Bundle = frozenset


@dataclass(frozen=True)
class GroupUtilityQuery:
    group: frozenset  # voter ids
    target: frozenset  # project ids


@dataclass
class ValidationReport:
    problems: list = field(default_factory=list)

    def add(self, message: str):
        self.problems.append(message)

    @property
    def ok(self) -> bool:
        return not self.problems


def validate(instance: PBInstance) -> ValidationReport:
    """List every violated instance invariant; empty report iff well-formed."""
    report = ValidationReport()
    if len(set(instance.voters)) != len(instance.voters):
        report.add("duplicate voter id")
    if len(set(instance.projects)) != len(instance.projects):
        report.add("duplicate project id")
    if set(instance.voters) & set(instance.projects):
        report.add("voter and project ids overlap")
    if instance.budget <= 0:
        report.add(f"nonpositive budget {instance.budget}")
    for c in instance.projects:
        if c not in instance.cost:
            report.add(f"missing cost for project {c}")
        elif instance.cost[c] <= 0:
            report.add(f"nonpositive cost for project {c}")
    for v in instance.voters:
        row = instance.utilities.get(v)
        if row is None:
            report.add(f"missing utilities for voter {v}")
            continue
        for c, u in row.items():
            if c not in instance.cost:
                report.add(f"utility for unknown project {c} (voter {v})")
            if not 0 <= u <= 1:
                report.add(f"utility out of [0,1]: u_{v}({c}) = {u}")
    return report


def binarize(instance: PBInstance, threshold) -> PBInstance:
    """Approval specialization: utility 1 iff input utility >= threshold."""
    threshold = as_fraction(threshold)
    if not 0 < threshold <= 1:
        raise ValueError(f"threshold {threshold} outside (0, 1]")
    utilities = {
        v: {c: Fraction(1 if u >= threshold else 0) for c, u in row.items()}
        for v, row in instance.utilities.items()
    }
    return PBInstance(
        instance.voters,
        instance.projects,
        instance.cost,
        utilities,
        instance.budget,
        instance.description,
    )


def group_utility(instance: PBInstance, query: GroupUtilityQuery) -> Fraction:
    for v in query.group:
        if v not in instance.utilities:
            raise KeyError(f"unknown voter {v}")
    for c in query.target:
        if c not in instance.cost:
            raise KeyError(f"unknown project {c}")
    return sum(
        (instance.utilities[v][c] for v in query.group for c in query.target),
        Fraction(0),
    )


def check_bundle(instance: PBInstance, bundle) -> frozenset:
    bundle = frozenset(bundle)
    unknown = bundle - set(instance.projects)
    if unknown:
        raise KeyError(f"bundle references unknown projects: {sorted(unknown)}")
    return bundle
