"""Shared fixtures: the three-co-authors golden instance and profile builders."""

from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import strategies as st

from cminisum.model import (
    ApprovalStatement,
    BallotEntry,
    ConditionalBallot,
    Issue,
    Outcome,
    Profile,
)
from cminisum.serialize import parse_profile

REPO = Path(__file__).resolve().parent.parent
COAUTHORS = REPO / "examples" / "coauthors.json"

# expected per-voter dissatisfaction for every outcome of the co-authors
# instance; key = (work, multiple, coauthor), value = (voter1, voter2, voter3)
DELTA_TABLE = {
    (True, True, True): (1, 2, 0),
    (True, True, False): (0, 1, 0),
    (True, False, True): (1, 1, 1),
    (True, False, False): (2, 2, 1),
    (False, True, True): (3, 1, 1),
    (False, True, False): (2, 0, 1),
    (False, False, True): (1, 1, 3),
    (False, False, False): (2, 0, 2),
}


@pytest.fixture(scope="session")
def coauthors() -> Profile:
    return parse_profile(COAUTHORS.read_text(encoding="utf-8"))


def outcome3(w: bool, m: bool, c: bool) -> Outcome:
    return Outcome({0: w, 1: m, 2: c})


def entry(issue: int, deps: tuple[int, ...], approved) -> BallotEntry:
    """Build an entry from (condition values..., issue value) tuples, the
    condition values aligned with ``deps``."""
    statements = []
    for combo in approved:
        *cond, value = combo
        statements.append(ApprovalStatement(tuple(zip(deps, cond)), value))
    return BallotEntry(issue, deps, tuple(statements))


def ballot(*entries: BallotEntry, weight: int = 1, name: str | None = None):
    return ConditionalBallot(tuple(entries), weight=weight, name=name)


def profile_of(m: int, *voters: ConditionalBallot) -> Profile:
    return Profile(tuple(Issue(i, f"i{i}") for i in range(m)), tuple(voters))


# ---------------------------------------------------------------------------
# Hypothesis strategies


@st.composite
def profiles(draw, max_m: int = 4, max_n: int = 3, max_k: int = 2, max_weight: int = 1):
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(1, max_n))
    issues = tuple(Issue(i, f"i{i}") for i in range(m))
    voters = []
    for _ in range(n):
        entries = []
        for j in range(m):
            others = [i for i in range(m) if i != j]
            k = draw(st.integers(0, min(max_k, len(others))))
            deps = tuple(sorted(draw(st.permutations(others))[:k]))
            combos = []
            for cond_idx in range(1 << k):
                cond = tuple(bool((cond_idx >> (k - 1 - t)) & 1) for t in range(k))
                for value in (False, True):
                    combos.append((*cond, value))
            approved = [c for c in combos if draw(st.booleans())]
            entries.append(entry(j, deps, approved))
        weight = draw(st.integers(1, max_weight))
        voters.append(ConditionalBallot(tuple(entries), weight=weight))
    return Profile(issues, tuple(voters))


@st.composite
def profile_and_outcome(draw, **kwargs):
    p = draw(profiles(**kwargs))
    values = {i: draw(st.booleans()) for i in p.issue_ids}
    return p, Outcome(values)
