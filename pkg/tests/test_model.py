"""Data model: dissatisfaction semantics, validation, global graph."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cminisum.errors import MalformedOutcomeError
from cminisum.model import (
    ApprovalStatement,
    BallotEntry,
    ConditionalBallot,
    Issue,
    Outcome,
    Profile,
    dissatisfaction,
    dissatisfied_on,
    fully_approving_entry,
    global_graph,
    max_indegree,
    total_cost,
    validate,
)

from conftest import DELTA_TABLE, ballot, entry, outcome3, profile_and_outcome, profiles


def all_approving_profile(m: int, n: int) -> Profile:
    issues = tuple(Issue(i, f"i{i}") for i in range(m))
    voters = tuple(
        ConditionalBallot(tuple(fully_approving_entry(i) for i in range(m)))
        for _ in range(n)
    )
    return Profile(issues, voters)


class TestCoauthorsGolden:
    def test_delta_table_all_cells(self, coauthors):
        for values, expected in DELTA_TABLE.items():
            outcome = outcome3(*values)
            got = tuple(dissatisfaction(v, outcome) for v in coauthors.voters)
            assert got == expected, f"outcome {values}"

    def test_total_cost_columns(self, coauthors):
        assert total_cost(coauthors, outcome3(True, True, False)) == 1
        assert total_cost(coauthors, outcome3(False, False, True)) == 5
        for values, expected in DELTA_TABLE.items():
            assert total_cost(coauthors, outcome3(*values)) == sum(expected)

    def test_single_voter_cells(self, coauthors):
        v1, v2, v3 = coauthors.voters
        assert dissatisfaction(v1, outcome3(True, True, False)) == 0
        assert dissatisfaction(v2, outcome3(True, True, True)) == 2
        assert dissatisfaction(v3, outcome3(False, False, True)) == 3

    def test_validates_clean(self, coauthors):
        assert validate(coauthors) == []

    def test_global_graph(self, coauthors):
        g = global_graph(coauthors)
        assert g.directed == frozenset({(0, 1), (1, 2), (0, 2)})
        assert g.undirected == frozenset({(0, 1), (1, 2), (0, 2)})

    def test_max_indegree(self, coauthors):
        per_voter, overall = max_indegree(coauthors)
        assert per_voter == [1, 2, 2]
        assert overall == 2


class TestDissatisfaction:
    def test_all_approving_is_never_dissatisfied(self):
        p = all_approving_profile(3, 2)
        for w in (False, True):
            for m in (False, True):
                for c in (False, True):
                    assert total_cost(p, outcome3(w, m, c)) == 0

    def test_missing_issue_raises(self, coauthors):
        with pytest.raises(MalformedOutcomeError):
            dissatisfaction(coauthors.voters[0], Outcome({0: True, 1: True}))
        with pytest.raises(MalformedOutcomeError):
            total_cost(coauthors, Outcome({0: True}))

    def test_empty_statement_set_always_dissatisfies(self):
        v = ballot(entry(0, (), []))
        p = Profile((Issue(0, "a"),), (v,))
        assert dissatisfaction(v, Outcome({0: True})) == 1
        assert dissatisfaction(v, Outcome({0: False})) == 1
        assert total_cost(p, Outcome({0: False})) == 1


class TestValidate:
    def test_condition_keys_mismatch(self):
        bad = BallotEntry(1, (0,), (ApprovalStatement(((0, True), (2, False)), True),))
        p = Profile(
            tuple(Issue(i, f"i{i}") for i in range(3)),
            (ballot(fully_approving_entry(0), bad, fully_approving_entry(2)),),
        )
        found = [v for v in validate(p) if "condition keys" in v.message]
        assert len(found) == 1
        assert found[0].voter == 0 and found[0].issue == 1

    def test_self_loop(self):
        bad = BallotEntry(0, (0,), (ApprovalStatement(((0, True),), True),))
        p = Profile((Issue(0, "a"),), (ballot(bad),))
        assert any("self-loop" in v.message for v in validate(p))

    def test_duplicate_statement(self):
        e = BallotEntry(
            0, (), (ApprovalStatement((), True), ApprovalStatement((), True))
        )
        p = Profile((Issue(0, "a"),), (ballot(e),))
        assert any("duplicate approval statement" in v.message for v in validate(p))

    def test_empty_approve_is_warning_only(self):
        p = Profile((Issue(0, "a"),), (ballot(entry(0, (), [])),))
        violations = validate(p)
        assert all(v.level == "warning" for v in violations)
        assert any("always dissatisfied" in v.message for v in violations)

    def test_nonpositive_weight(self):
        p = Profile(
            (Issue(0, "a"),), (ballot(fully_approving_entry(0), weight=0),)
        )
        assert any("positive integer" in v.message for v in validate(p))

    def test_missing_entry(self):
        p = Profile(
            tuple(Issue(i, f"i{i}") for i in range(2)),
            (ballot(fully_approving_entry(0)),),
        )
        assert any("cover every issue" in v.message for v in validate(p))

    def test_non_dense_ids(self):
        p = Profile(
            (Issue(0, "a"), Issue(2, "b")),
            (ballot(fully_approving_entry(0), fully_approving_entry(2)),),
        )
        assert any("dense" in v.message for v in validate(p))


class TestGlobalGraph:
    def test_unconditional_profile_has_no_edges(self):
        g = global_graph(all_approving_profile(4, 3))
        assert g.directed == frozenset()
        assert g.undirected == frozenset()

    def test_antiparallel_edges_merge(self):
        v1 = ballot(entry(0, (1,), [(True, True)]), fully_approving_entry(1))
        v2 = ballot(fully_approving_entry(0), entry(1, (0,), [(True, True)]))
        p = Profile((Issue(0, "a"), Issue(1, "b")), (v1, v2))
        g = global_graph(p)
        assert g.directed == frozenset({(1, 0), (0, 1)})
        assert g.undirected == frozenset({(0, 1)})
        assert g.degree(0) == 1 and g.degree(1) == 1

    def test_max_indegree_trivia(self):
        p = all_approving_profile(3, 2)
        assert max_indegree(p) == ([0, 0], 0)
        single = ballot(fully_approving_entry(0), entry(1, (0,), [(True, True)]))
        p2 = Profile((Issue(0, "a"), Issue(1, "b")), (single,))
        assert max_indegree(p2) == ([1], 1)


class TestProperties:
    @settings(max_examples=60, deadline=None)
    @given(profile_and_outcome())
    def test_dissatisfaction_bounds(self, po):
        p, outcome = po
        for voter in p.voters:
            assert 0 <= dissatisfaction(voter, outcome) <= p.m

    @settings(max_examples=60, deadline=None)
    @given(profile_and_outcome(), st.data())
    def test_removing_a_statement_never_helps(self, po, data):
        p, outcome = po
        voter = p.voters[data.draw(st.integers(0, p.n - 1))]
        candidates = [e for e in voter.entries if e.statements]
        if not candidates:
            return
        target = data.draw(st.sampled_from(candidates))
        drop = data.draw(st.integers(0, len(target.statements) - 1))
        smaller = BallotEntry(
            target.issue,
            target.depends_on,
            target.statements[:drop] + target.statements[drop + 1 :],
        )
        entries = tuple(
            smaller if e.issue == target.issue else e for e in voter.entries
        )
        shrunk = ConditionalBallot(entries, weight=voter.weight)
        assert dissatisfaction(shrunk, outcome) >= dissatisfaction(voter, outcome)

    @settings(max_examples=60, deadline=None)
    @given(profile_and_outcome())
    def test_unconditional_entry_depends_only_on_own_value(self, po):
        p, outcome = po
        for voter in p.voters:
            for e in voter.entries:
                if e.depends_on:
                    continue
                for flip in p.issue_ids:
                    if flip == e.issue:
                        continue
                    flipped = Outcome(
                        {**outcome.values, flip: not outcome.values[flip]}
                    )
                    assert dissatisfied_on(voter, e.issue, outcome) == dissatisfied_on(
                        voter, e.issue, flipped
                    )

    @settings(max_examples=60, deadline=None)
    @given(profile_and_outcome())
    def test_total_cost_is_weighted_sum(self, po):
        p, outcome = po
        assert total_cost(p, outcome) == sum(
            v.weight * dissatisfaction(v, outcome) for v in p.voters
        )

    @settings(max_examples=40, deadline=None)
    @given(profile_and_outcome(), st.data())
    def test_doubling_a_weight_adds_exactly_delta(self, po, data):
        p, outcome = po
        idx = data.draw(st.integers(0, p.n - 1))
        voter = p.voters[idx]
        doubled = ConditionalBallot(voter.entries, weight=voter.weight * 2)
        p2 = Profile(p.issues, p.voters[:idx] + (doubled,) + p.voters[idx + 1 :])
        delta = voter.weight * dissatisfaction(voter, outcome)
        assert total_cost(p2, outcome) == total_cost(p, outcome) + delta

    @settings(max_examples=60, deadline=None)
    @given(profiles())
    def test_single_voter_global_graph_is_voter_graph(self, p):
        single = Profile(p.issues, (p.voters[0],))
        assert global_graph(single).directed == p.voters[0].edges()

    @settings(max_examples=60, deadline=None)
    @given(profiles())
    def test_generated_strategy_profiles_are_valid(self, p):
        assert not [v for v in validate(p) if v.level == "error"]
