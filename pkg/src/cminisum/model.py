"""Core data model for conditional approval voting.

An election has ``m`` binary issues and ``n`` weighted voters.  Each voter
submits a dependency graph over the issues together with, per issue, a set
of approval statements of the form ``{condition: value}``: the voter is
satisfied with the issue whenever the values of the issue's in-neighbors
match ``condition`` and the issue itself takes ``value``.  Issues with no
in-neighbors carry unconditional statements (empty condition).

Everything here is an immutable value object; solver transformations build
new profiles instead of mutating.  Boolean ``True`` stands for the positive
value of an issue, ``False`` for its negation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .errors import MalformedOutcomeError

# A condition binds in-neighbor issues to values; normalized as a tuple of
# (issue id, value) pairs sorted by issue id.  Empty = unconditional.
Condition = tuple[tuple[int, bool], ...]


def make_condition(bindings: Mapping[int, bool]) -> Condition:
    return tuple(sorted(bindings.items()))


@dataclass(frozen=True)
class Issue:
    """One binary issue: a dense integer id and a unique display name."""

    id: int
    name: str


@dataclass(frozen=True)
class ApprovalStatement:
    """One approved combination: given ``when``, the voter approves ``value``."""

    when: Condition
    value: bool

    def sort_key(self):
        return (self.when, self.value)


@dataclass(frozen=True)
class BallotEntry:
    """A voter's statements for a single issue.

    ``depends_on`` lists the issue's in-neighbors in the voter's dependency
    graph (declaration order is kept); every statement's condition must bind
    exactly that set.  Statements are stored in canonical sorted order but
    duplicates are preserved so that validation can report them.
    """

    issue: int
    depends_on: tuple[int, ...]
    statements: tuple[ApprovalStatement, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "statements", tuple(sorted(self.statements, key=ApprovalStatement.sort_key))
        )

    @cached_property
    def approved(self) -> frozenset[tuple[Condition, bool]]:
        """Set view of the statements, used for membership tests."""
        return frozenset((s.when, s.value) for s in self.statements)


def fully_approving_entry(issue_id: int) -> BallotEntry:
    """Entry that approves both values unconditionally (never dissatisfied)."""
    return BallotEntry(
        issue=issue_id,
        depends_on=(),
        statements=(ApprovalStatement((), False), ApprovalStatement((), True)),
    )


def single_predecessor_entry(
    issue_id: int, predecessor: int, approved: Iterable[tuple[bool, bool]]
) -> BallotEntry:
    """Entry on ``issue_id`` depending on ``predecessor`` approving the given
    (predecessor value, issue value) pairs."""
    return BallotEntry(
        issue=issue_id,
        depends_on=(predecessor,),
        statements=tuple(
            ApprovalStatement(((predecessor, a),), b) for a, b in approved
        ),
    )


@dataclass(frozen=True)
class ConditionalBallot:
    """A voter: one entry per issue plus a positive integer weight.

    The weight is a multiplicity: a weight-w ballot behaves exactly like w
    identical unit ballots.  Elimination uses this to add the cost-encoding
    voters in O(1) space.
    """

    entries: tuple[BallotEntry, ...]
    weight: int = 1
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(
            self, "entries", tuple(sorted(self.entries, key=lambda e: e.issue))
        )

    @cached_property
    def by_issue(self) -> dict[int, BallotEntry]:
        return {e.issue: e for e in self.entries}

    def entry(self, issue_id: int) -> BallotEntry:
        return self.by_issue[issue_id]

    def edges(self) -> frozenset[tuple[int, int]]:
        """The voter's dependency edges (predecessor, issue)."""
        return frozenset(
            (p, e.issue) for e in self.entries for p in e.depends_on
        )

    def max_indegree(self) -> int:
        return max((len(e.depends_on) for e in self.entries), default=0)


@dataclass(frozen=True)
class Profile:
    """A full election instance: issues plus voters."""

    issues: tuple[Issue, ...]
    voters: tuple[ConditionalBallot, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "issues", tuple(sorted(self.issues, key=lambda i: i.id))
        )

    @property
    def m(self) -> int:
        return len(self.issues)

    @property
    def n(self) -> int:
        return len(self.voters)

    @cached_property
    def issue_ids(self) -> tuple[int, ...]:
        return tuple(i.id for i in self.issues)

    @cached_property
    def names_by_id(self) -> dict[int, str]:
        return {i.id: i.name for i in self.issues}

    @cached_property
    def ids_by_name(self) -> dict[str, int]:
        return {i.name: i.id for i in self.issues}

    def voter_label(self, index: int) -> str:
        name = self.voters[index].name
        return name if name is not None else f"#{index}"


@dataclass(frozen=True)
class Outcome:
    """A total assignment of a boolean value to every issue."""

    values: Mapping[int, bool]

    def __getitem__(self, issue_id: int) -> bool:
        return self.values[issue_id]

    def as_tuple(self, issue_ids: Iterable[int]) -> tuple[bool, ...]:
        return tuple(self.values[i] for i in issue_ids)


@dataclass(frozen=True)
class GlobalGraph:
    """Union of all voters' dependency edges, plus the undirected version
    with parallel/anti-parallel edges merged."""

    directed: frozenset[tuple[int, int]]
    undirected: frozenset[tuple[int, int]]  # normalized (low, high)

    @cached_property
    def neighbors(self) -> dict[int, frozenset[int]]:
        adj: dict[int, set[int]] = {}
        for a, b in self.undirected:
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        return {v: frozenset(s) for v, s in adj.items()}

    def degree(self, issue_id: int) -> int:
        return len(self.neighbors.get(issue_id, ()))


# ---------------------------------------------------------------------------
# Evaluation


def _check_outcome_covers(outcome: Outcome, issue_ids: Iterable[int]) -> None:
    missing = [i for i in issue_ids if i not in outcome.values]
    if missing:
        raise MalformedOutcomeError(
            f"outcome is missing a value for issue id(s) {missing}"
        )


def _entry_dissatisfied(entry: BallotEntry, values: Mapping[int, bool]) -> bool:
    target = values[entry.issue]
    for s in entry.statements:
        if s.value != target:
            continue
        for p, a in s.when:
            if values[p] != a:
                break
        else:
            return False
    return True


def dissatisfied_on(ballot: ConditionalBallot, issue_id: int, outcome: Outcome) -> bool:
    """Whether the outcome dissatisfies the voter on one particular issue."""
    return _entry_dissatisfied(ballot.entry(issue_id), outcome.values)


def dissatisfaction(ballot: ConditionalBallot, outcome: Outcome) -> int:
    """Number of issues dissatisfying the voter (not weighted)."""
    needed = {p for e in ballot.entries for p in e.depends_on}
    needed.update(e.issue for e in ballot.entries)
    _check_outcome_covers(outcome, needed)
    values = outcome.values
    return sum(1 for e in ballot.entries if _entry_dissatisfied(e, values))


def total_cost(profile: Profile, outcome: Outcome) -> int:
    """Weighted total dissatisfaction of the outcome."""
    _check_outcome_covers(outcome, profile.issue_ids)
    values = outcome.values
    return sum(
        v.weight * sum(1 for e in v.entries if _entry_dissatisfied(e, values))
        for v in profile.voters
    )


def global_graph(profile: Profile) -> GlobalGraph:
    directed = frozenset(e for v in profile.voters for e in v.edges())
    undirected = frozenset(
        (a, b) if a < b else (b, a) for a, b in directed
    )
    return GlobalGraph(directed=directed, undirected=undirected)


def max_indegree(profile: Profile) -> tuple[list[int], int]:
    """Per-voter maximum dependency in-degree and the overall maximum."""
    per_voter = [v.max_indegree() for v in profile.voters]
    return per_voter, max(per_voter, default=0)


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Violation:
    """One invariant violation; ``level`` is "error" or "warning"."""

    level: str
    message: str
    voter: int | None = None
    issue: int | None = None

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "voter": self.voter,
            "issue": self.issue,
            "message": self.message,
        }


def validate(profile: Profile) -> list[Violation]:
    """Collect every invariant violation; an empty list means valid.

    Warnings (a voter approving nothing for some issue) do not make the
    profile invalid but are reported alongside errors.
    """
    out: list[Violation] = []
    err = lambda msg, voter=None, issue=None: out.append(
        Violation("error", msg, voter, issue)
    )

    ids = [i.id for i in profile.issues]
    if not ids:
        err("profile must have m >= 1 issues")
    if ids != list(range(len(ids))):
        err(f"issue ids must be dense 0..m-1, got {ids}")
    names = [i.name for i in profile.issues]
    if len(set(names)) != len(names):
        err("issue names must be unique")
    if any(not n for n in names):
        err("issue names must be nonempty")
    if not profile.voters:
        err("profile must have n >= 1 voters")

    id_set = set(ids)
    for vi, voter in enumerate(profile.voters):
        if not isinstance(voter.weight, int) or voter.weight < 1:
            err(f"weight must be a positive integer, got {voter.weight!r}", vi)
        entry_ids = [e.issue for e in voter.entries]
        if len(set(entry_ids)) != len(entry_ids):
            err("duplicate ballot entries for an issue", vi)
        if set(entry_ids) != id_set:
            err(
                f"ballot must cover every issue exactly once "
                f"(got {sorted(set(entry_ids))}, expected {sorted(id_set)})",
                vi,
            )
        for entry in voter.entries:
            j = entry.issue
            deps = entry.depends_on
            if len(set(deps)) != len(deps):
                err("depends_on contains duplicates", vi, j)
            if j in deps:
                err("self-loop: issue depends on itself", vi, j)
            unknown = [d for d in deps if d not in id_set]
            if unknown:
                err(f"depends_on references unknown issue id(s) {unknown}", vi, j)
            dep_set = set(deps)
            for s in entry.statements:
                keys = {p for p, _ in s.when}
                if keys != dep_set:
                    err(
                        f"statement condition keys {sorted(keys)} != "
                        f"depends_on {sorted(dep_set)}",
                        vi,
                        j,
                    )
                    break
            seen = set()
            for s in entry.statements:
                if (s.when, s.value) in seen:
                    err("duplicate approval statement", vi, j)
                    break
                seen.add((s.when, s.value))
            if not entry.statements:
                out.append(
                    Violation(
                        "warning",
                        "empty approval set: voter is always dissatisfied "
                        "with this issue",
                        vi,
                        j,
                    )
                )
    return out


def is_valid(profile: Profile) -> bool:
    return not any(v.level == "error" for v in validate(profile))


def all_outcomes(issue_ids: Iterable[int]) -> Iterable[Outcome]:
    """All outcomes over the given issues, lexicographic with False < True."""
    ids = list(issue_ids)
    for values in itertools.product((False, True), repeat=len(ids)):
        yield Outcome(dict(zip(ids, values)))
