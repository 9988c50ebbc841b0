"""Exhaustive optimal solver; ground-truth oracle for the other solvers.

Outcomes are encoded as integers: with issues sorted by id, the first issue
occupies the most significant bit, so increasing codes enumerate outcomes in
lexicographic order with False < True.  The first minimum found is therefore
the lexicographically smallest optimum, which is the tie-breaking contract.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .errors import SizeCapError
from .model import Outcome, Profile, total_cost

DEFAULT_BRUTE_LIMIT = 24
_CHUNK = 1 << 16


@dataclass
class SolveResult:
    """Solver output: an outcome, its recomputed cost, and run statistics."""

    outcome: Outcome
    cost: int
    method: str
    stats: dict[str, Any] = field(default_factory=dict)


def outcome_to_code(outcome: Outcome, issue_ids: list[int]) -> int:
    code = 0
    for i in issue_ids:
        code = (code << 1) | int(outcome.values[i])
    return code


def code_to_outcome(code: int, issue_ids: list[int]) -> Outcome:
    m = len(issue_ids)
    return Outcome(
        {i: bool((code >> (m - 1 - t)) & 1) for t, i in enumerate(issue_ids)}
    )


def compile_cost_function(profile: Profile) -> Callable[[np.ndarray], np.ndarray]:
    """Compile the profile into a vectorized cost evaluator over outcome codes.

    Each ballot entry becomes a lookup table over the 2^(k+1) joint values of
    its in-neighbors and target; evaluating an outcome is then a sum of table
    gathers.  Weighted voters multiply their tables once at compile time.
    """
    ids = list(profile.issue_ids)
    m = len(ids)
    shift = {issue_id: m - 1 - t for t, issue_id in enumerate(ids)}
    compiled: list[tuple[tuple[int, ...], np.ndarray]] = []
    for voter in profile.voters:
        for entry in voter.entries:
            variables = (*entry.depends_on, entry.issue)
            k = len(entry.depends_on)
            table = np.zeros(1 << (k + 1), dtype=np.int64)
            approved = entry.approved
            for combo in itertools.product((False, True), repeat=k + 1):
                cond = tuple(sorted(zip(entry.depends_on, combo[:k])))
                if (cond, combo[k]) not in approved:
                    idx = 0
                    for b in combo:
                        idx = (idx << 1) | int(b)
                    table[idx] = voter.weight
            if table.any():
                compiled.append((tuple(shift[v] for v in variables), table))

    def cost_of(codes: np.ndarray) -> np.ndarray:
        costs = np.zeros(codes.shape, dtype=np.int64)
        for shifts, table in compiled:
            idx = np.zeros(codes.shape, dtype=np.int64)
            for s in shifts:
                idx = (idx << 1) | ((codes >> s) & 1)
            costs += table[idx]
        return costs

    return cost_of


def solve_exhaustive(profile: Profile, limit: int = DEFAULT_BRUTE_LIMIT) -> SolveResult:
    """Scan all 2^m outcomes and return the minimum-cost one.

    Ties break toward the lexicographically smallest outcome (False < True,
    issue id order).  Refuses profiles with more than ``limit`` issues.
    """
    t0 = time.perf_counter()
    ids = list(profile.issue_ids)
    m = len(ids)
    if m > limit:
        raise SizeCapError(
            f"brute force refused: {m} issues exceeds the limit of {limit}"
        )
    if m == 0:
        return SolveResult(Outcome({}), 0, "brute", {"explored": 1, "elapsed_s": 0.0})

    cost_of = compile_cost_function(profile)
    total = 1 << m
    best_cost = None
    best_code = 0
    for start in range(0, total, _CHUNK):
        codes = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        costs = cost_of(codes)
        i = int(np.argmin(costs))
        if best_cost is None or costs[i] < best_cost:
            best_cost = int(costs[i])
            best_code = start + i
    outcome = code_to_outcome(best_code, ids)
    cost = total_cost(profile, outcome)
    return SolveResult(
        outcome,
        cost,
        "brute",
        {"explored": total, "elapsed_s": time.perf_counter() - t0},
    )
