"""Dissatisfaction formulas, MIN SAT reduction and approximation.

Per voter/issue pair a DNF formula is built that is true exactly when the
outcome dissatisfies the voter on that issue.  Variable ``x_j`` is true iff
issue ``j`` takes its positive value.  The formulas are converted to small
CNFs, pooled into one clause multiset, and an assignment minimizing the
number of satisfied clauses is searched: exactly by enumeration, or within
factor 2 through the clause conflict graph, whose minimum vertex cover
equals the MIN SAT optimum (any assignment satisfies one clause of every
conflicting pair; conversely clauses outside a cover can be falsified
simultaneously since no variable is forced both ways).
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .brute import SolveResult, outcome_to_code
from .errors import SizeCapError
from .model import ConditionalBallot, Outcome, Profile, total_cost

DEFAULT_INDEGREE_CAP = 10
DEFAULT_EXACT_VAR_LIMIT = 20


@dataclass(frozen=True, order=True)
class Literal:
    """``x_var`` when ``negated`` is False, its negation otherwise."""

    var: int
    negated: bool

    def holds(self, assignment: Mapping[int, bool]) -> bool:
        return assignment.get(self.var, False) != self.negated


@dataclass(frozen=True)
class Clause:
    """Disjunction of literals with (voter index, issue id) provenance."""

    literals: tuple[Literal, ...]
    provenance: tuple[int, int]

    def __post_init__(self):
        object.__setattr__(self, "literals", tuple(sorted(set(self.literals))))

    def is_tautology(self) -> bool:
        positive = {l.var for l in self.literals if not l.negated}
        return any(l.var in positive for l in self.literals if l.negated)

    def holds(self, assignment: Mapping[int, bool]) -> bool:
        return any(l.holds(assignment) for l in self.literals)


@dataclass(frozen=True)
class DnfFormula:
    """Disjunction of conjunctions; true = dissatisfied.  No terms = never."""

    terms: frozenset[frozenset[Literal]]
    provenance: tuple[int, int]

    def holds(self, assignment: Mapping[int, bool]) -> bool:
        return any(all(l.holds(assignment) for l in term) for term in self.terms)

    def variables(self) -> set[int]:
        return {l.var for term in self.terms for l in term}


@dataclass(frozen=True)
class CnfInstance:
    """Clause multiset (duplicates kept and counted) over issue variables."""

    clauses: tuple[Clause, ...]
    var_count: int


def build_cij(ballot: ConditionalBallot, issue_id: int, voter: int = -1) -> DnfFormula:
    """DNF over the issue and its in-neighbors that is true iff the voter is
    dissatisfied with the issue: one term per unapproved (condition, value)
    combination.  ``voter`` is only recorded as provenance."""
    entry = ballot.entry(issue_id)
    deps = entry.depends_on
    approved = entry.approved
    terms = []
    for combo in itertools.product((False, True), repeat=len(deps) + 1):
        cond = tuple(sorted(zip(deps, combo[:-1])))
        value = combo[-1]
        if (cond, value) not in approved:
            term = frozenset(
                {Literal(p, negated=not a) for p, a in zip(deps, combo[:-1])}
                | {Literal(issue_id, negated=not value)}
            )
            terms.append(term)
    return DnfFormula(terms=frozenset(terms), provenance=(voter, issue_id))


def dnf_to_cnf(formula: DnfFormula, k: int, cap: int = DEFAULT_INDEGREE_CAP) -> list[Clause]:
    """Equivalent CNF with at most max(1, 2^k) clauses of at most k+1 literals.

    The formula's truth is grouped by condition (joint value of the non-target
    variables): under each condition the formula reduces to a function of the
    target alone, giving one clause per condition that is not identically
    true.  A contradiction yields no clauses; a tautology yields the single
    always-satisfied clause (x_target or not x_target) so that it still counts
    toward the satisfied-clause total.
    """
    if k > cap:
        raise SizeCapError(
            f"refusing DNF to CNF conversion for in-degree {k} > cap {cap}"
        )
    target = formula.provenance[1]
    if not formula.terms:
        return []
    cond_vars = sorted(formula.variables() - {target})
    if len(cond_vars) > k:
        raise ValueError(f"formula has {len(cond_vars)} condition variables > k={k}")

    clauses: list[Clause] = []
    always_true = True
    for combo in itertools.product((False, True), repeat=len(cond_vars)):
        assignment = dict(zip(cond_vars, combo))
        dissatisfied = []
        for value in (False, True):
            assignment[target] = value
            if formula.holds(assignment):
                dissatisfied.append(value)
        if len(dissatisfied) == 2:
            continue  # condition -> true adds no constraint
        always_true = False
        # literals negating the condition
        lits = [Literal(v, negated=a) for v, a in zip(cond_vars, combo)]
        if len(dissatisfied) == 1:
            lits.append(Literal(target, negated=not dissatisfied[0]))
        clauses.append(Clause(tuple(lits), formula.provenance))
    if always_true:
        return [
            Clause(
                (Literal(target, False), Literal(target, True)), formula.provenance
            )
        ]
    return clauses


def reduce_profile(profile: Profile, indegree_cap: int = DEFAULT_INDEGREE_CAP) -> CnfInstance:
    """Pool the per-(voter, issue) CNFs into one MIN SAT clause multiset.

    A weight-w voter contributes w copies of each of its clauses; duplicate
    clauses are kept, they are harmless for minimization and preserve the
    cost correspondence.
    """
    clauses: list[Clause] = []
    for vi, voter in enumerate(profile.voters):
        d = voter.max_indegree()
        if d > indegree_cap:
            raise SizeCapError(
                f"voter {profile.voter_label(vi)} has in-degree {d} "
                f"> cap {indegree_cap}"
            )
        for issue in profile.issues:
            entry = voter.entry(issue.id)
            dnf = build_cij(voter, issue.id, voter=vi)
            cnf = dnf_to_cnf(dnf, k=len(entry.depends_on), cap=indegree_cap)
            for _ in range(voter.weight):
                clauses.extend(cnf)
    var_count = max(profile.issue_ids, default=-1) + 1
    return CnfInstance(clauses=tuple(clauses), var_count=var_count)


# ---------------------------------------------------------------------------
# Counting and solving


def _clause_masks(instance: CnfInstance) -> tuple[np.ndarray, np.ndarray]:
    """Positive/negative variable bitmasks per clause, in the code bit layout
    of :mod:`cminisum.brute` (variable 0 is the most significant bit)."""
    m = instance.var_count
    pos = np.zeros(len(instance.clauses), dtype=np.int64)
    neg = np.zeros(len(instance.clauses), dtype=np.int64)
    for ci, clause in enumerate(instance.clauses):
        for lit in clause.literals:
            bit = 1 << (m - 1 - lit.var)
            if lit.negated:
                neg[ci] |= bit
            else:
                pos[ci] |= bit
    return pos, neg


def satisfied_count(instance: CnfInstance, assignment: Mapping[int, bool]) -> int:
    """Number of clauses (with multiplicity) satisfied by the assignment."""
    return sum(1 for c in instance.clauses if c.holds(assignment))


def satisfied_counts_for_codes(instance: CnfInstance, codes: np.ndarray) -> np.ndarray:
    """Vectorized satisfied-clause count per outcome code."""
    pos, neg = _clause_masks(instance)
    counts = np.zeros(codes.shape, dtype=np.int64)
    for p, q in zip(pos, neg):
        falsified = ((codes & p) == 0) & ((codes & q) == q)
        counts += ~falsified
    return counts


def minsat_exact(
    instance: CnfInstance, limit: int = DEFAULT_EXACT_VAR_LIMIT
) -> tuple[dict[int, bool], int]:
    """Assignment minimizing the satisfied-clause count, by full enumeration.

    Ties break toward the lexicographically smallest assignment (False <
    True, variable order).  Refuses more than ``limit`` variables.
    """
    m = instance.var_count
    if m > limit:
        raise SizeCapError(
            f"exact MIN SAT refused: {m} variables exceeds the limit of {limit}"
        )
    if m == 0:
        return {}, len(instance.clauses)
    best_count = None
    best_code = 0
    chunk = 1 << 16
    for start in range(0, 1 << m, chunk):
        codes = np.arange(start, min(start + chunk, 1 << m), dtype=np.int64)
        counts = satisfied_counts_for_codes(instance, codes)
        i = int(np.argmin(counts))
        if best_count is None or counts[i] < best_count:
            best_count = int(counts[i])
            best_code = start + i
    assignment = {v: bool((best_code >> (m - 1 - v)) & 1) for v in range(m)}
    return assignment, best_count


def minsat_2approx(instance: CnfInstance) -> tuple[dict[int, bool], int]:
    """Factor-2 MIN SAT via a vertex cover of the clause conflict graph.

    Two clauses conflict when they contain complementary literals of the same
    variable; tautological clauses conflict with themselves and are forced
    into the cover.  A greedy maximal matching (edges scanned in clause-index
    order) yields a cover of size at most twice the minimum; all clauses
    outside the cover are falsified by setting each of their literals false,
    every other variable defaulting to false.
    """
    clauses = instance.clauses
    count = len(clauses)
    if count == 0:
        return {v: False for v in range(instance.var_count)}, 0
    pos, neg = _clause_masks(instance)
    covered = (pos & neg) != 0  # tautologies self-conflict
    indices = np.arange(count)
    for i in range(count):
        if covered[i]:
            continue
        conflicts = (((pos & neg[i]) | (neg & pos[i])) != 0) & ~covered & (indices > i)
        js = np.nonzero(conflicts)[0]
        if js.size:
            covered[i] = covered[js[0]] = True

    assignment = {v: False for v in range(instance.var_count)}
    for ci in np.nonzero(~covered)[0]:
        for lit in clauses[ci].literals:
            assignment[lit.var] = lit.negated  # makes the literal false
    return assignment, satisfied_count(instance, assignment)


def solve_via_minsat(
    profile: Profile, indegree_cap: int = DEFAULT_INDEGREE_CAP
) -> SolveResult:
    """Reduce to MIN SAT, run the 2-approximation, read the outcome back.

    The reported cost is recomputed on the profile, never taken from the
    clause count; it is at most the satisfied-clause count.
    """
    t0 = time.perf_counter()
    instance = reduce_profile(profile, indegree_cap=indegree_cap)
    assignment, satisfied = minsat_2approx(instance)
    outcome = Outcome({i: assignment.get(i, False) for i in profile.issue_ids})
    cost = total_cost(profile, outcome)
    return SolveResult(
        outcome,
        cost,
        "minsat",
        {
            "satisfied": satisfied,
            "clauses": len(instance.clauses),
            "elapsed_s": time.perf_counter() - t0,
        },
    )


# ---------------------------------------------------------------------------
# DIMACS interchange


def export_dimacs(instance: CnfInstance) -> str:
    """Standard DIMACS CNF with 1-based variables; each clause is preceded by
    a ``c prov <voter> <issue>`` comment and duplicates are emitted verbatim."""
    lines = [f"p cnf {instance.var_count} {len(instance.clauses)}"]
    for clause in instance.clauses:
        lines.append(f"c prov {clause.provenance[0]} {clause.provenance[1]}")
        lits = " ".join(
            str(-(l.var + 1)) if l.negated else str(l.var + 1) for l in clause.literals
        )
        lines.append(f"{lits} 0".lstrip())
    return "\n".join(lines) + "\n"


def parse_dimacs_assignment(text: str) -> dict[int, bool]:
    """Parse a solver-style assignment line ("v 1 -2 3 0") into variable
    values (0-based).  Later occurrences of a variable win; 0 terminators and
    status prefixes are ignored."""
    assignment: dict[int, bool] = {}
    for token in text.split():
        if token in ("v", "s", "c"):
            continue
        lit = int(token)
        if lit == 0:
            continue
        assignment[abs(lit) - 1] = lit > 0
    return assignment


def outcome_from_assignment(profile: Profile, assignment: Mapping[int, bool]) -> Outcome:
    """Outcome read off a truth assignment; unmentioned issues default False."""
    return Outcome({i: bool(assignment.get(i, False)) for i in profile.issue_ids})


def satisfied_count_for_outcome(instance: CnfInstance, outcome: Outcome) -> int:
    code = outcome_to_code(outcome, list(range(instance.var_count)))
    pos, neg = _clause_masks(instance)
    falsified = ((code & pos) == 0) & ((code & neg) == neg)
    return int(len(falsified) - falsified.sum())
