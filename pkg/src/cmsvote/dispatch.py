"""Component-wise solving: classify, route, solve, merge.

The objective is additive over the connected components of the global
dependency graph, so each component is solved independently (isolated issues
by counting approvals, the rest by whichever solver the classification
recommends or the caller forces) and the partial outcomes are concatenated.
The merged outcome's cost is recomputed from scratch and checked against the
per-component sum; any disagreement aborts.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

from . import _backend
from .analysis import (
    BRUTE,
    DEFAULT_BRUTE_BUDGET,
    DEFAULT_WIDTH_THRESHOLD,
    INTRACTABLE,
    MAJORITY,
    MINCUT,
    TREEWIDTH,
    AnalysisReport,
    classify,
)
from .brute import solve_brute
from .errors import InternalMismatch, Intractable
from .mincut import solve_mincut
from .model import (
    Profile,
    Solution,
    issue_ballot,
    make_profile,
    make_solution,
)
from .treewidth import solve_treewidth

METHODS = ("auto", "brute", "mincut", "treewidth")


@dataclass(frozen=True)
class SolveConfig:
    method: str = "auto"
    width_threshold: int = DEFAULT_WIDTH_THRESHOLD
    brute_budget: int = DEFAULT_BRUTE_BUDGET
    cross_validate: bool = False
    threads: Optional[int] = None  # None: use the CMS_THREADS cap

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.width_threshold < 0 or self.brute_budget < 1:
            raise ValueError("bounds must be positive")


def restrict_profile(profile: Profile, issues) -> Profile:
    """Sub-profile over a dependency-closed issue subset, issues reindexed.

    Every voter is kept (their ballots outside the subset contribute zero
    dissatisfaction there), so component costs add up to the full cost.
    """
    issues = list(issues)
    index = {j: t for t, j in enumerate(issues)}
    sub_issues = [
        (profile.issues[j].name, profile.issues[j].alternatives) for j in issues
    ]
    sub_voters = []
    for voter in profile.voters:
        ballots = []
        for j, ballot in voter.ballots.items():
            if j not in index:
                continue
            scope = tuple(index[k] for k in ballot.scope)
            ballots.append(issue_ballot(index[j], scope, ballot.statements))
        sub_voters.append((voter.name, ballots))
    return make_profile(sub_issues, sub_voters)


def majority_alternative(profile: Profile, issue: int) -> int:
    """Most-approved alternative of an isolated issue, ties to the lowest index.

    Isolated issues only ever carry unconditional ballots, so counting
    approvals minimizes the issue's dissatisfaction contribution exactly.
    """
    d = len(profile.issues[issue].alternatives)
    counts = [0] * d
    for voter in profile.voters:
        ballot = voter.ballots.get(issue)
        approved = ballot.statements[()] if ballot is not None else range(d)
        for a in approved:
            counts[a] += 1
    return max(range(d), key=lambda a: (counts[a], -a))


def _solver_for(route: str):
    return {
        BRUTE: solve_brute,
        MINCUT: solve_mincut,
        TREEWIDTH: solve_treewidth,
    }[route]


def _applicable_routes(comp, budget) -> list:
    routes = []
    if comp.all_binary and comp.group_dichotomous:
        routes.append(MINCUT)
    if comp.delta <= 1:
        routes.append(TREEWIDTH)
    if comp.outcome_space <= budget:
        routes.append(BRUTE)
    return routes


def _route_override(comp, method: str, budget: int, report: AnalysisReport) -> str:
    route = {"brute": BRUTE, "mincut": MINCUT, "treewidth": TREEWIDTH}[method]
    if route not in _applicable_routes(comp, budget):
        raise Intractable(report)
    return route


def solve_profile(profile: Profile, config: SolveConfig = SolveConfig()) -> Solution:
    """Solve component-wise and merge; raises Intractable with the analysis
    report when some component has no applicable route."""
    report = classify(profile, config.width_threshold, config.brute_budget)

    plan = []
    for comp in report.components:
        if config.method != "auto":
            route = _route_override(comp, config.method, config.brute_budget, report)
        else:
            route = comp.route
            if route == INTRACTABLE:
                raise Intractable(report)
        plan.append((comp, route))

    def run(item):
        comp, route = item
        if route == MAJORITY:
            (issue,) = comp.issues
            alt = majority_alternative(profile, issue)
            partial = {issue: alt}
            cost = sum(
                1
                for voter in profile.voters
                if voter.ballots.get(issue) is not None
                and alt not in voter.ballots[issue].statements[()]
            )
            checked = [cost]
        else:
            sub = restrict_profile(profile, comp.issues)
            if route == BRUTE:
                solution = solve_brute(sub, config.brute_budget)
            else:
                solution = _solver_for(route)(sub)
            partial = dict(zip(comp.issues, solution.outcome))
            cost = solution.cost
            checked = [cost]
        if config.cross_validate:
            for other in _applicable_routes(comp, config.brute_budget):
                if other == route:
                    continue
                sub = restrict_profile(profile, comp.issues)
                if other == BRUTE:
                    alt_cost = solve_brute(sub, config.brute_budget).cost
                else:
                    alt_cost = _solver_for(other)(sub).cost
                checked.append(alt_cost)
            if len(set(checked)) > 1:
                raise InternalMismatch(
                    f"solvers disagree on component {comp.issues}: {checked}"
                )
        return route, partial, cost

    threads = config.threads if config.threads is not None else _backend.thread_cap()
    if threads > 1 and len(plan) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, plan))
    else:
        results = [run(item) for item in plan]

    assignment = {}
    component_total = 0
    routes_used = []
    for route, partial, cost in results:
        assignment.update(partial)
        component_total += cost
        if route not in routes_used:
            routes_used.append(route)

    outcome = tuple(assignment[j] for j in range(profile.m))
    solution = make_solution(profile, outcome, "+".join(r.lower() for r in routes_used))
    if solution.cost != component_total:
        raise InternalMismatch(
            f"component costs sum to {component_total} but the merged outcome "
            f"re-evaluates to {solution.cost}"
        )
    return solution
