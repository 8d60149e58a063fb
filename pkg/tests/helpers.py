"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately avoid the code paths they are used to check:
``naive_optimum`` enumerates outcomes with itertools against the dict-based
ballot semantics (never touching the scan kernels), satisfiability checks
enumerate assignments of the source problems directly, and the vertex cover
oracle tries every subset.
"""

from __future__ import annotations

import itertools
import random

from cmsvote import (
    CnfFormula,
    ColoredGraph,
    CspInstance,
    total_dissatisfaction,
)
from cmsvote.analysis import TreeDecomposition, UndirectedGraph
from cmsvote.mincut import TwoMonotoneConstraint
from cmsvote.model import approve, issue_ballot, make_profile

P1_DOC = """\
cmsprofile 1
issues 2
issue A 0 1
issue B 0 1
voters 2
voter v1
approve A 1
cond B if A=0 then 0
cond B if A=1 then 1
end
voter v2
approve A 0
approve B 0
end
"""


def build_p1():
    """Two binary issues; v1 wants A=1 and B agreeing with A, v2 wants all-0."""
    return make_profile(
        [("A", ("0", "1")), ("B", ("0", "1"))],
        [
            (
                "v1",
                [
                    approve(0, {1}),
                    issue_ballot(1, (0,), {(0,): {0}, (1,): {1}}),
                ],
            ),
            ("v2", [approve(0, {0}), approve(1, {0})]),
        ],
    )


def naive_optimum(profile):
    """(cost, outcome) by plain enumeration over the core semantics.

    Iterates outcomes in lexicographic order, keeping the first minimum, so
    the result matches the brute solver's tie-break contract.
    """
    best_cost = None
    best_outcome = None
    for outcome in itertools.product(*(range(d) for d in profile.domain_sizes())):
        cost = total_dissatisfaction(profile, outcome)
        if best_cost is None or cost < best_cost:
            best_cost = cost
            best_outcome = outcome
    return best_cost, best_outcome


def random_cnf(rng: random.Random, num_vars: int, num_clauses: int, width: int = 3):
    clauses = []
    for _ in range(num_clauses):
        size = rng.randint(1, width)
        variables = rng.sample(range(1, num_vars + 1), min(size, num_vars))
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in variables))
    return CnfFormula(num_vars, tuple(clauses))


def cnf_satisfiable(cnf: CnfFormula) -> bool:
    for bits in itertools.product((0, 1), repeat=cnf.num_vars):
        if all(
            any(bits[abs(lit) - 1] == (1 if lit > 0 else 0) for lit in clause)
            for clause in cnf.clauses
        ):
            return True
    return False


def random_colored_graph(rng: random.Random, k: int, c: int, edge_prob: float = 0.5):
    classes = [
        (f"k{t}", tuple(f"k{t}v{i}" for i in range(c))) for t in range(k)
    ]
    edges = []
    for x in range(k):
        for y in range(x + 1, k):
            for u in classes[x][1]:
                for v in classes[y][1]:
                    if rng.random() < edge_prob:
                        edges.append((u, v))
    return ColoredGraph.build(classes, edges)


def has_multicolored_clique(graph: ColoredGraph) -> bool:
    edge_set = graph.edges
    for pick in itertools.product(*graph.classes):
        if all(
            (min(u, v), max(u, v)) in edge_set
            for u, v in itertools.combinations(pick, 2)
        ):
            return True
    return False


def random_csp(
    rng: random.Random, max_vars: int, sigma: int, max_constraints: int
) -> CspInstance:
    alphabet = tuple("abcdef"[:sigma])
    names = [f"x{i}" for i in range(rng.randint(2, max_vars))]
    constraints = []
    for _ in range(rng.randint(1, max_constraints)):
        u, v = rng.sample(names, 2)
        pairs = [
            (a, b)
            for a in range(sigma)
            for b in range(sigma)
            if rng.random() < 0.4
        ]
        constraints.append((u, v, tuple(pairs)))
    return CspInstance(alphabet, tuple(constraints))


def csp_satisfiable(csp: CspInstance) -> bool:
    variables = csp.variables()
    sigma = len(csp.alphabet)
    for values in itertools.product(range(sigma), repeat=len(variables)):
        assignment = dict(zip(variables, values))
        if all(
            (assignment[u], assignment[v]) in set(allowed)
            for u, v, allowed in csp.constraints
        ):
            return True
    return False


def random_undirected_graph(rng: random.Random, n: int, p: float) -> UndirectedGraph:
    edges = frozenset(
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < p
    )
    return UndirectedGraph(n, edges)


def exhaustive_vertex_cover(graph: UndirectedGraph) -> int:
    edges = list(graph.edges)
    if not edges:
        return 0
    for size in range(0, graph.n + 1):
        for subset in itertools.combinations(range(graph.n), size):
            chosen = set(subset)
            if all(u in chosen or v in chosen for u, v in edges):
                return size
    raise AssertionError("unreachable")


def coarsen_decomposition(
    rng: random.Random, decomposition: TreeDecomposition, steps: int
) -> TreeDecomposition:
    """Contract random tree edges, merging adjacent bags (stays valid)."""
    bags = [set(bag) for bag in decomposition.bags]
    edges = [tuple(e) for e in decomposition.edges]
    for _ in range(min(steps, len(edges))):
        if not edges:
            break
        a, b = edges.pop(rng.randrange(len(edges)))
        bags[a] |= bags[b]
        bags[b] = None
        edges = [
            (a if x == b else x, a if y == b else y) for x, y in edges
        ]
    alive = [i for i, bag in enumerate(bags) if bag is not None]
    renumber = {old: new for new, old in enumerate(alive)}
    new_bags = tuple(frozenset(bags[i]) for i in alive)
    new_edges = tuple(
        (renumber[x], renumber[y]) for x, y in edges if x != y
    )
    return TreeDecomposition(new_bags, new_edges)


def random_constraints(rng: random.Random, n_vars: int, count: int):
    """Random two-monotone constraint sets for gadget soundness checks."""
    out = []
    for _ in range(count):
        kind = rng.choice(("pos", "neg", "both"))
        pos = neg = None
        if kind in ("pos", "both"):
            pos = frozenset(rng.sample(range(n_vars), rng.randint(1, min(3, n_vars))))
        if kind in ("neg", "both"):
            neg = frozenset(rng.sample(range(n_vars), rng.randint(1, min(3, n_vars))))
        out.append(TwoMonotoneConstraint(pos, neg, rng.randint(1, 4)))
    return out


def exhaustive_min_violations(constraints, n_vars: int) -> int:
    best = None
    for bits in itertools.product((0, 1), repeat=n_vars):
        cost = sum(c.weight for c in constraints if c.violated(bits))
        if best is None or cost < best:
            best = cost
    return best
