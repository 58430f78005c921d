"""Laminar instance recognition, laminar-proportional bundle certification
and enumeration, unanimity-affordability, the restricted core, and a
seeded generator of laminar instances.

A laminar instance is built from three node kinds: a unanimous block whose
agreed projects cover the budget; a unanimously approved project stacked on
a laminar remainder; or a disjoint split of two laminar instances whose
budgets are proportional to their voter counts.  Recognition searches these
cases with memoized backtracking; certification of a bundle is existential
over all such decompositions.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from fractions import Fraction

from .axioms import (
    SATISFIED,
    VIOLATED,
    AxiomVerdict,
    CoreWitness,
    PriceSystem,
    validate_core_witness,
)
from .model import PBInstance, check_bundle

LAMINAR_MAX_BITS = int(os.environ.get("PBPROP_LAMINAR_MAX_BITS", "16"))


class NotLaminarError(Exception):
    pass


@dataclass(frozen=True)
class UnanimousLeaf:
    voters: tuple
    projects: frozenset
    budget: Fraction


@dataclass(frozen=True)
class UnanimousProject:
    project: str
    child: object
    voters: tuple
    projects: frozenset
    budget: Fraction


@dataclass(frozen=True)
class Split:
    left: object
    right: object
    voters: tuple
    projects: frozenset
    budget: Fraction


def _slice_approvals(instance, voters, projects):
    return {v: instance.approval_set(v) & projects for v in voters}


def _components(voters, approvals):
    """Connected components of the voter-project approval graph, ordered by
    their canonically first voter."""
    remaining = list(voters)
    comps = []
    while remaining:
        seed = remaining[0]
        comp_voters = {seed}
        comp_projects = set(approvals[seed])
        grew = True
        while grew:
            grew = False
            for v in remaining:
                if v not in comp_voters and approvals[v] & comp_projects:
                    comp_voters.add(v)
                    comp_projects |= approvals[v]
                    grew = True
        comps.append((tuple(v for v in voters if v in comp_voters), frozenset(comp_projects)))
        remaining = [v for v in remaining if v not in comp_voters]
    return comps


def _is_unanimous(approvals):
    sets = list(approvals.values())
    return all(s == sets[0] for s in sets)


def recognize_laminar(instance: PBInstance):
    """Return a certification tree, or None when the instance is not laminar.

    Only approved projects take part in the structure; a project nobody
    approves can never appear in a laminar proportional bundle.
    """
    if not instance.is_approval:
        raise ValueError("laminar recognition requires an approval instance")
    if len(instance.voters) > LAMINAR_MAX_BITS or len(instance.projects) > LAMINAR_MAX_BITS:
        raise NotLaminarError("instance exceeds laminar-search caps")
    memo = {}

    def rec(voters, projects, budget):
        key = (voters, projects, budget)
        if key in memo:
            return memo[key]
        memo[key] = None  # cycle guard; budgets strictly shrink, so unused
        approvals = _slice_approvals(instance, voters, projects)
        result = None
        if any(not a for a in approvals.values()):
            # A voter approving nothing can never sit in a unanimous block
            # with positive budget, so no decomposition exists.
            memo[key] = None
            return None
        if _is_unanimous(approvals) and instance.cost_of(projects) >= budget:
            result = UnanimousLeaf(voters, projects, budget)
        if result is None:
            common = sorted(set.intersection(*(set(a) for a in approvals.values())))
            for c in common:
                rest = projects - {c}
                child_budget = budget - instance.cost[c]
                if child_budget <= 0:
                    continue
                child_approvals = {v: a - {c} for v, a in approvals.items()}
                if _is_unanimous(child_approvals):
                    continue
                child = rec(voters, frozenset(rest), child_budget)
                if child is not None:
                    result = UnanimousProject(c, child, voters, projects, budget)
                    break
        if result is None:
            comps = _components(voters, approvals)
            if len(comps) >= 2:
                n = len(voters)
                lv, lp = comps[0]
                rv = tuple(v for v in voters if v not in lv)
                rp = frozenset(projects - lp)
                left = rec(lv, lp, budget * len(lv) / n)
                if left is not None:
                    right = rec(rv, rp, budget * len(rv) / n)
                    if right is not None:
                        result = Split(left, right, voters, projects, budget)
        memo[key] = result
        return result

    voters = tuple(instance.voters)
    approved = frozenset(
        c for c in instance.projects if any(instance.utilities[v][c] == 1 for v in voters)
    )
    if not voters:
        return None
    return rec(voters, approved, instance.budget)


def is_laminar_proportional(instance: PBInstance, bundle) -> AxiomVerdict:
    """Satisfied iff some decomposition certifies the bundle: leaves take a
    maximal affordable part of the agreed projects (nothing else fits in the
    slice budget), unanimous projects must be taken, splits partition the
    bundle between the wings.

    Maximality at leaves mirrors the committee setting, where a unanimous
    block fills exactly its share of seats; without it, bundles that
    underspend one wing lose priceability and core guarantees."""
    bundle = check_bundle(instance, bundle)
    root = recognize_laminar(instance)
    if root is None:
        raise NotLaminarError("instance is not laminar")
    memo = {}

    def cert(voters, projects, budget, w):
        key = (voters, projects, budget, w)
        if key in memo:
            return memo[key]
        memo[key] = False
        if not w <= projects:
            return False
        approvals = _slice_approvals(instance, voters, projects)
        ok = False
        if any(not a for a in approvals.values()):
            memo[key] = False
            return False
        if (
            _is_unanimous(approvals)
            and instance.cost_of(projects) >= budget
            and instance.cost_of(w) <= budget
        ):
            room = budget - instance.cost_of(w)
            ok = not any(instance.cost[c] <= room for c in projects - w)
        if not ok:
            common = sorted(set.intersection(*(set(a) for a in approvals.values())))
            for c in common:
                child_budget = budget - instance.cost[c]
                if child_budget <= 0:
                    continue
                child_approvals = {v: a - {c} for v, a in approvals.items()}
                if _is_unanimous(child_approvals):
                    continue
                if c in w and cert(
                    voters, frozenset(projects - {c}), child_budget, w - {c}
                ):
                    ok = True
                    break
        if not ok:
            comps = _components(voters, approvals)
            if len(comps) >= 2:
                n = len(voters)
                lv, lp = comps[0]
                rv = tuple(v for v in voters if v not in lv)
                rp = frozenset(projects - lp)
                ok = cert(lv, lp, budget * len(lv) / n, w & lp) and cert(
                    rv, rp, budget * len(rv) / n, w & rp
                )
        memo[key] = ok
        return ok

    voters = tuple(instance.voters)
    if cert(root.voters, root.projects, root.budget, frozenset(bundle)):
        return AxiomVerdict(SATISFIED)
    return AxiomVerdict(VIOLATED, witness="no decomposition certifies the bundle")


def laminar_bundles(instance: PBInstance):
    """All bundles certified laminar proportional, in canonical order."""
    root = recognize_laminar(instance)
    if root is None:
        raise NotLaminarError("instance is not laminar")
    memo = {}

    def enum(voters, projects, budget):
        key = (voters, projects, budget)
        if key in memo:
            return memo[key]
        memo[key] = frozenset()
        approvals = _slice_approvals(instance, voters, projects)
        out = set()
        if any(not a for a in approvals.values()):
            memo[key] = frozenset()
            return frozenset()
        if _is_unanimous(approvals) and instance.cost_of(projects) >= budget:
            items = sorted(projects)
            for mask in range(1 << len(items)):
                w = frozenset(items[i] for i in range(len(items)) if mask >> i & 1)
                room = budget - instance.cost_of(w)
                if room >= 0 and not any(
                    instance.cost[c] <= room for c in projects - w
                ):
                    out.add(w)
        common = sorted(set.intersection(*(set(a) for a in approvals.values())))
        for c in common:
            child_budget = budget - instance.cost[c]
            if child_budget <= 0:
                continue
            child_approvals = {v: a - {c} for v, a in approvals.items()}
            if _is_unanimous(child_approvals):
                continue
            for w in enum(voters, frozenset(projects - {c}), child_budget):
                out.add(w | {c})
        comps = _components(voters, approvals)
        if len(comps) >= 2:
            n = len(voters)
            lv, lp = comps[0]
            rv = tuple(v for v in voters if v not in lv)
            rp = frozenset(projects - lp)
            lefts = enum(lv, lp, budget * len(lv) / n)
            rights = enum(rv, rp, budget * len(rv) / n)
            for a in lefts:
                for b in rights:
                    out.add(a | b)
        memo[key] = frozenset(out)
        return memo[key]

    bundles = enum(root.voters, root.projects, root.budget)
    yield from sorted(bundles, key=lambda w: tuple(sorted(w)))


def laminar_price_system(instance: PBInstance, bundle):
    """Constructive supporting price system with initial budget cost(W),
    assembled along the decomposition: leaf members split each selected
    project's cost evenly, a unanimous project is paid cost/n by its whole
    voter slice, and a split takes the disjoint union of its wings."""
    bundle = check_bundle(instance, bundle)
    root = recognize_laminar(instance)
    if root is None:
        raise NotLaminarError("instance is not laminar")

    def build(voters, projects, budget, w):
        if not w <= projects:
            return None
        approvals = _slice_approvals(instance, voters, projects)
        if any(not a for a in approvals.values()):
            return None
        nv = len(voters)
        if (
            _is_unanimous(approvals)
            and instance.cost_of(projects) >= budget
            and instance.cost_of(w) <= budget
        ):
            room = budget - instance.cost_of(w)
            if not any(instance.cost[c] <= room for c in projects - w):
                return {v: {c: instance.cost[c] / nv for c in w} for v in voters}
        common = sorted(set.intersection(*(set(a) for a in approvals.values())))
        for c in common:
            child_budget = budget - instance.cost[c]
            if child_budget <= 0:
                continue
            child_approvals = {v: a - {c} for v, a in approvals.items()}
            if _is_unanimous(child_approvals):
                continue
            if c not in w:
                continue
            child = build(voters, frozenset(projects - {c}), child_budget, w - {c})
            if child is not None:
                for v in voters:
                    child.setdefault(v, {})[c] = instance.cost[c] / nv
                return child
        comps = _components(voters, approvals)
        if len(comps) >= 2:
            lv, lp = comps[0]
            rv = tuple(v for v in voters if v not in lv)
            rp = frozenset(projects - lp)
            left = build(lv, lp, budget * len(lv) / nv, w & lp)
            if left is not None:
                right = build(rv, rp, budget * len(rv) / nv, w & rp)
                if right is not None:
                    left.update(right)
                    return left
        return None

    payments = build(root.voters, root.projects, root.budget, frozenset(bundle))
    if payments is None:
        raise NotLaminarError("bundle is not laminar proportional")
    for v in instance.voters:
        payments.setdefault(v, {})
    return PriceSystem(instance.cost_of(bundle), payments)


def is_u_affordable(instance: PBInstance, target, unanimous_pool) -> bool:
    """True iff for every pooled project there is a target member at least
    as expensive."""
    target = check_bundle(instance, target)
    for c in unanimous_pool:
        if not any(instance.cost[t] >= instance.cost[c] for t in target):
            return False
    return True


def unanimous_pool(root, group) -> frozenset:
    """Projects unanimously agreed along the decomposition branch whose
    voter slice covers the group."""
    pool = set()
    node = root
    while True:
        if isinstance(node, UnanimousProject):
            pool.add(node.project)
            node = node.child
        elif isinstance(node, Split):
            if group <= set(node.left.voters):
                node = node.left
            elif group <= set(node.right.voters):
                node = node.right
            else:
                break
        else:  # UnanimousLeaf
            pool |= node.projects
            break
    return frozenset(pool)


def check_core_u_afford(instance: PBInstance, bundle) -> AxiomVerdict:
    """Core restricted to deviations whose target is u-affordable w.r.t.
    the unanimous projects scoped to the deviating group's branch."""
    bundle = check_bundle(instance, bundle)
    root = recognize_laminar(instance)
    if root is None:
        raise NotLaminarError("instance is not laminar")
    n = len(instance.voters)
    uW = {v: instance.voter_utility(v, bundle) for v in instance.voters}
    projects = list(instance.projects)
    pools = {}

    def pool_for(group):
        if group not in pools:
            pools[group] = unanimous_pool(root, set(group))
        return pools[group]

    for tmask in range(1, 1 << len(projects)):
        target = frozenset(projects[i] for i in range(len(projects)) if tmask >> i & 1)
        tcost = instance.cost_of(target)
        better = [v for v in instance.voters if instance.voter_utility(v, target) > uW[v]]
        if not better or len(better) * instance.budget < tcost * n:
            continue
        # Only the full set of strict preferrers needs testing: shrinking
        # the group pushes it deeper into the decomposition, which only
        # grows its unanimity pool and so only tightens u-affordability,
        # while also shrinking the group's budget share.
        group = frozenset(better)
        if is_u_affordable(instance, target, pool_for(group)):
            witness = CoreWitness(group, target)
            assert validate_core_witness(instance, bundle, witness)
            return AxiomVerdict(VIOLATED, witness)
    return AxiomVerdict(SATISFIED)


def generate_laminar(
    seed,
    max_depth=2,
    max_leaf_voters=3,
    max_leaf_projects=3,
) -> PBInstance:
    """Draw a random laminar instance by building a certification tree
    bottom-up; the per-voter budget share is kept constant under every
    split so the proportional-split condition holds by construction.

    Within each leaf all projects share one cost that divides the leaf
    budget exactly, so every maximal affordable subset spends the budget
    to the last penny; costs still vary across leaves and unanimous
    projects."""
    if max_depth < 0 or max_leaf_voters < 1 or max_leaf_projects < 1:
        raise ValueError("unsatisfiable generator parameters")
    rng = random.Random(f"laminar:{seed}")
    counter = {"v": 0, "p": 0}

    def fresh(kind):
        counter[kind] += 1
        return f"{kind}{counter[kind]:03d}"

    def gen_leaf(share):
        nv = rng.randint(1, max_leaf_voters)
        np = rng.randint(1, max_leaf_projects)
        take = rng.randint(1, np)
        budget = share * nv
        voters = [fresh("v") for _ in range(nv)]
        projects = {fresh("p"): budget / take for _ in range(np)}
        approvals = {v: set(projects) for v in voters}
        return approvals, projects, budget

    def gen_split(share, depth):
        la, lp, lb = gen(share, depth)
        ra, rp, rb = gen(share, depth)
        approvals = {**la, **ra}
        projects = {**lp, **rp}
        return approvals, projects, lb + rb

    def gen(share, depth):
        if depth <= 0:
            return gen_leaf(share)
        kind = rng.choice(["leaf", "split", "unanimous"])
        if kind == "leaf":
            return gen_leaf(share)
        if kind == "split":
            return gen_split(share, depth - 1)
        # Unanimous project over a split (a split is never unanimous).
        inner_share = share * Fraction(rng.randint(1, 3), 4)
        approvals, projects, budget = gen_split(inner_share, depth - 1)
        nv = len(approvals)
        c = fresh("p")
        projects[c] = (share - inner_share) * nv
        for v in approvals:
            approvals[v].add(c)
        return approvals, projects, budget + projects[c]

    share = Fraction(rng.randint(1, 6), rng.randint(1, 4))
    approvals, projects, budget = gen(share, max_depth)
    utilities = {
        v: {c: 1 if c in a else 0 for c in projects} for v, a in approvals.items()
    }
    return PBInstance.build(
        voters=list(approvals),
        projects=list(projects),
        cost=projects,
        utilities=utilities,
        budget=budget,
        description=f"generated laminar instance (seed {seed})",
    )


def generate_laminar_mwv(seed, max_depth=2, max_leaf_voters=3) -> PBInstance:
    """Like generate_laminar but with unit costs and an integer committee
    size: each leaf seats exactly its voter count, splits add seats, and a
    few unanimously approved projects may sit on top."""
    if max_depth < 0 or max_leaf_voters < 1:
        raise ValueError("unsatisfiable generator parameters")
    rng = random.Random(f"mwv:{seed}")
    counter = {"v": 0, "p": 0}

    def fresh(kind):
        counter[kind] += 1
        return f"{kind}{counter[kind]:03d}"

    def gen_leaf():
        nv = rng.randint(1, max_leaf_voters)
        np = nv + rng.randint(0, 2)
        voters = [fresh("v") for _ in range(nv)]
        projects = [fresh("p") for _ in range(np)]
        approvals = {v: set(projects) for v in voters}
        return approvals, projects, nv

    def gen(depth):
        if depth <= 0 or rng.random() < 0.4:
            return gen_leaf()
        la, lp, lk = gen(depth - 1)
        ra, rp, rk = gen(depth - 1)
        return {**la, **ra}, lp + rp, lk + rk

    approvals, projects, k = gen(max_depth)
    for _ in range(rng.randint(0, 2)):
        c = fresh("p")
        projects.append(c)
        for v in approvals:
            approvals[v].add(c)
        k += 1
    utilities = {
        v: {c: 1 if c in a else 0 for c in projects} for v, a in approvals.items()
    }
    return PBInstance.build(
        voters=list(approvals),
        projects=projects,
        cost={c: Fraction(1) for c in projects},
        utilities=utilities,
        budget=Fraction(k),
        description=f"generated laminar committee instance (seed {seed})",
    )
