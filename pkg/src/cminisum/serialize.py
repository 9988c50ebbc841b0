"""JSON parsing and serialization for profiles and outcomes.

Profile documents look like::

    { "issues": ["work", "multiple", "coauthor"],
      "voters": [
        { "name": "v1", "weight": 1,
          "ballots": [
            { "issue": "work", "depends_on": [],
              "approve": [ {"when": {}, "value": true} ] },
            ... ] } ] }

Issue ids are the positions in the ``issues`` array.  ``weight`` defaults
to 1 and ``name`` may be omitted.  A statement's ``value`` may be a list of
booleans as shorthand for one statement per value; it is expanded while
parsing.  Serialization is canonical: ballots sorted by issue id,
statements sorted lexicographically, condition keys sorted by issue id, so
equal profiles produce identical bytes.

Structural problems (wrong types, unknown issue names, duplicate issue
names, empty issue/voter arrays) raise :class:`ProfileFormatError` with a
JSON path; semantic problems that the data model can represent (self-loops,
condition/depends_on mismatches, duplicate statements) are left for
:func:`cminisum.model.validate` to report.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import ProfileFormatError
from .model import (
    ApprovalStatement,
    BallotEntry,
    ConditionalBallot,
    Issue,
    Outcome,
    Profile,
)


def _expect(value: Any, kind: type, what: str, path: str):
    if kind is bool and not isinstance(value, bool):
        raise ProfileFormatError(f"expected boolean {what}", path)
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise ProfileFormatError(f"expected integer {what}", path)
    if not isinstance(value, kind):
        raise ProfileFormatError(f"expected {kind.__name__} {what}", path)
    return value


def _loads(text: str, what: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ProfileFormatError(
            f"invalid JSON in {what}: {e.msg} at line {e.lineno} column {e.colno}"
        ) from e


def _reject_unknown_keys(obj: dict, allowed: set[str], path: str):
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ProfileFormatError(f"unknown key(s) {unknown}", path)


def parse_profile(text: str) -> Profile:
    doc = _loads(text, "profile")
    _expect(doc, dict, "document", "$")
    _reject_unknown_keys(doc, {"issues", "voters"}, "$")

    raw_issues = _expect(doc.get("issues"), list, "array", "issues")
    if not raw_issues:
        raise ProfileFormatError("profile needs m >= 1 issues", "issues")
    issues = []
    for idx, name in enumerate(raw_issues):
        _expect(name, str, "issue name", f"issues[{idx}]")
        if not name:
            raise ProfileFormatError("issue name must be nonempty", f"issues[{idx}]")
        issues.append(Issue(id=idx, name=name))
    ids_by_name = {i.name: i.id for i in issues}
    if len(ids_by_name) != len(issues):
        raise ProfileFormatError("duplicate issue name", "issues")

    raw_voters = _expect(doc.get("voters"), list, "array", "voters")
    if not raw_voters:
        raise ProfileFormatError("profile needs n >= 1 voters", "voters")
    voters = []
    for vi, raw_voter in enumerate(raw_voters):
        vpath = f"voters[{vi}]"
        _expect(raw_voter, dict, "object", vpath)
        _reject_unknown_keys(raw_voter, {"name", "weight", "ballots"}, vpath)
        name = raw_voter.get("name")
        if name is not None:
            _expect(name, str, "voter name", f"{vpath}.name")
        weight = raw_voter.get("weight", 1)
        _expect(weight, int, "weight", f"{vpath}.weight")
        entries = []
        raw_ballots = _expect(raw_voter.get("ballots"), list, "array", f"{vpath}.ballots")
        for bi, raw_entry in enumerate(raw_ballots):
            epath = f"{vpath}.ballots[{bi}]"
            entries.append(_parse_entry(raw_entry, ids_by_name, epath))
        voters.append(ConditionalBallot(entries=tuple(entries), weight=weight, name=name))
    return Profile(issues=tuple(issues), voters=tuple(voters))


_ENTRY_KEYS = frozenset({"issue", "depends_on", "approve"})
_STMT_KEYS = frozenset({"when", "value"})


def _parse_entry(raw: Any, ids_by_name: dict[str, int], path: str) -> BallotEntry:
    # hot path for large profiles: path strings are only built on error
    _expect(raw, dict, "object", path)
    if not _ENTRY_KEYS.issuperset(raw):
        _reject_unknown_keys(raw, set(_ENTRY_KEYS), path)
    issue_raw = raw.get("issue")
    issue_id = ids_by_name.get(issue_raw) if type(issue_raw) is str else None
    if issue_id is None:
        name = _expect(issue_raw, str, "issue name", f"{path}.issue")
        raise ProfileFormatError(f"unknown issue {name!r}", f"{path}.issue")

    raw_deps = raw.get("depends_on", [])
    _expect(raw_deps, list, "array", f"{path}.depends_on")
    deps = []
    for di, dep_name in enumerate(raw_deps):
        dep = ids_by_name.get(dep_name) if type(dep_name) is str else None
        if dep is None:
            dpath = f"{path}.depends_on[{di}]"
            _expect(dep_name, str, "issue name", dpath)
            raise ProfileFormatError(f"unknown issue {dep_name!r}", dpath)
        deps.append(dep)

    statements = []
    raw_approve = raw.get("approve", [])
    _expect(raw_approve, list, "array", f"{path}.approve")
    for si, raw_stmt in enumerate(raw_approve):
        if type(raw_stmt) is not dict or not _STMT_KEYS.issuperset(raw_stmt):
            spath = f"{path}.approve[{si}]"
            _expect(raw_stmt, dict, "object", spath)
            _reject_unknown_keys(raw_stmt, set(_STMT_KEYS), spath)
        raw_when = raw_stmt.get("when", {})
        if type(raw_when) is not dict:
            _expect(raw_when, dict, "object", f"{path}.approve[{si}].when")
        bindings = {}
        for key, val in raw_when.items():
            issue = ids_by_name.get(key)
            if issue is None or not isinstance(val, bool):
                spath = f"{path}.approve[{si}].when"
                if issue is None:
                    raise ProfileFormatError(f"unknown issue {key!r}", spath)
                _expect(val, bool, "condition value", f"{spath}.{key}")
            bindings[issue] = val
        when = tuple(sorted(bindings.items()))
        value = raw_stmt.get("value")
        if isinstance(value, bool):
            statements.append(ApprovalStatement(when, value))
        elif isinstance(value, list):
            # grouped shorthand {t: {d, not d}} -> one statement per value
            for wi, v in enumerate(value):
                _expect(v, bool, "approved value", f"{path}.approve[{si}].value[{wi}]")
                statements.append(ApprovalStatement(when, v))
        else:
            _expect(value, bool, "approved value", f"{path}.approve[{si}].value")

    return BallotEntry(issue=issue_id, depends_on=tuple(deps), statements=tuple(statements))


def dumps_profile(profile: Profile, indent: int | None = None) -> str:
    names = profile.names_by_id
    doc: dict[str, Any] = {"issues": [i.name for i in profile.issues]}
    voters = []
    for voter in profile.voters:
        raw_voter: dict[str, Any] = {}
        if voter.name is not None:
            raw_voter["name"] = voter.name
        raw_voter["weight"] = voter.weight
        raw_voter["ballots"] = [
            {
                "issue": names[e.issue],
                "depends_on": [names[d] for d in e.depends_on],
                "approve": [
                    {"when": {names[p]: v for p, v in s.when}, "value": s.value}
                    for s in e.statements
                ],
            }
            for e in voter.entries
        ]
        voters.append(raw_voter)
    doc["voters"] = voters
    return _dumps(doc, indent)


def parse_outcome(text: str, profile: Profile) -> Outcome:
    doc = _loads(text, "outcome")
    _expect(doc, dict, "object", "$")
    values = {}
    for key, val in doc.items():
        if key not in profile.ids_by_name:
            raise ProfileFormatError(f"unknown issue {key!r}", f"$.{key}")
        _expect(val, bool, "issue value", f"$.{key}")
        values[profile.ids_by_name[key]] = val
    missing = [i.name for i in profile.issues if i.id not in values]
    if missing:
        raise ProfileFormatError(f"outcome is missing issue(s) {missing}")
    return Outcome(values)


def dumps_outcome(outcome: Outcome, profile: Profile, indent: int | None = None) -> str:
    doc = {
        i.name: outcome.values[i.id]
        for i in profile.issues
        if i.id in outcome.values
    }
    return _dumps(doc, indent)


def _dumps(doc: Any, indent: int | None) -> str:
    if indent is None:
        return json.dumps(doc, separators=(",", ":")) + "\n"
    return json.dumps(doc, indent=indent) + "\n"
