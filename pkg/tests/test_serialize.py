"""JSON round trips, canonical output, and schema errors with paths."""

from __future__ import annotations

import pytest
from hypothesis import given, settings

from cminisum.errors import ProfileFormatError
from cminisum.model import Outcome
from cminisum.serialize import (
    dumps_outcome,
    dumps_profile,
    parse_outcome,
    parse_profile,
)

from conftest import COAUTHORS, profiles


class TestRoundTrip:
    def test_coauthors_round_trip(self, coauthors):
        text = dumps_profile(coauthors)
        again = parse_profile(text)
        assert again == coauthors
        assert dumps_profile(again) == text

    def test_serialization_is_deterministic(self, coauthors):
        assert dumps_profile(coauthors) == dumps_profile(coauthors)
        assert dumps_profile(coauthors, indent=2) == dumps_profile(coauthors, indent=2)

    @settings(max_examples=50, deadline=None)
    @given(profiles())
    def test_random_profiles_round_trip(self, p):
        assert parse_profile(dumps_profile(p)) == p

    def test_value_list_shorthand_expands(self):
        text = """
        {"issues": ["a"],
         "voters": [{"ballots": [
            {"issue": "a", "depends_on": [], "approve": [{"when": {}, "value": [true, false]}]}
         ]}]}
        """
        p = parse_profile(text)
        statements = p.voters[0].entries[0].statements
        assert {(s.when, s.value) for s in statements} == {((), True), ((), False)}

    def test_weight_defaults_to_one_and_name_optional(self):
        p = parse_profile(
            '{"issues": ["a"], "voters": [{"ballots": '
            '[{"issue": "a", "depends_on": [], "approve": []}]}]}'
        )
        assert p.voters[0].weight == 1
        assert p.voters[0].name is None

    def test_outcome_round_trip(self, coauthors):
        outcome = Outcome({0: True, 1: True, 2: False})
        text = dumps_outcome(outcome, coauthors)
        assert parse_outcome(text, coauthors) == outcome
        assert text == '{"work":true,"multiple":true,"coauthor":false}\n'


class TestErrors:
    def test_syntax_error_reports_position(self):
        with pytest.raises(ProfileFormatError, match=r"line 2"):
            parse_profile('{\n "issues": [,]}')

    def test_unknown_depends_on_names_path(self):
        text = COAUTHORS.read_text().replace('"depends_on": ["work", "multiple"]',
                                             '"depends_on": ["work", "bogus"]', 1)
        with pytest.raises(ProfileFormatError, match=r"ballots\[2\].depends_on\[1\]"):
            parse_profile(text)

    def test_empty_voters(self):
        with pytest.raises(ProfileFormatError, match="n >= 1"):
            parse_profile('{"issues": ["a"], "voters": []}')

    def test_empty_issues(self):
        with pytest.raises(ProfileFormatError, match="m >= 1"):
            parse_profile('{"issues": [], "voters": []}')

    def test_duplicate_issue_name(self):
        with pytest.raises(ProfileFormatError, match="duplicate issue name"):
            parse_profile('{"issues": ["a", "a"], "voters": [{"ballots": []}]}')

    def test_unknown_key_rejected(self):
        with pytest.raises(ProfileFormatError, match="unknown key"):
            parse_profile('{"issues": ["a"], "voters": [], "extra": 1}')

    def test_unknown_when_issue(self):
        text = (
            '{"issues": ["a", "b"], "voters": [{"ballots": ['
            '{"issue": "a", "depends_on": ["b"],'
            ' "approve": [{"when": {"zzz": true}, "value": true}]},'
            '{"issue": "b", "depends_on": [], "approve": []}]}]}'
        )
        with pytest.raises(ProfileFormatError, match="zzz"):
            parse_profile(text)

    def test_non_boolean_value(self):
        text = (
            '{"issues": ["a"], "voters": [{"ballots": ['
            '{"issue": "a", "depends_on": [], "approve": [{"when": {}, "value": 1}]}]}]}'
        )
        with pytest.raises(ProfileFormatError, match="boolean"):
            parse_profile(text)

    def test_outcome_missing_issue(self, coauthors):
        with pytest.raises(ProfileFormatError, match="missing"):
            parse_outcome('{"work": true}', coauthors)

    def test_outcome_unknown_issue(self, coauthors):
        with pytest.raises(ProfileFormatError, match="bogus"):
            parse_outcome(
                '{"work": true, "multiple": true, "coauthor": true, "bogus": true}',
                coauthors,
            )
