"""Exact solver by vertex elimination on the global dependency graph.

Requires every voter's dependency in-degree to be at most 1.  As long as
the undirected global graph keeps a vertex of degree <= 2 it can be
eliminated: the issue's best value is tabulated per joint value of its
neighbors, its cost contribution is folded into weighted replacement voters
on the neighbors, and the issue disappears.  Graphs of treewidth <= 2
(paths, trees, cycles, series-parallel and friends) always admit such a
vertex and stay closed under the operation, so the loop either reaches a
constant-size remainder solved by brute force or proves the profile out of
class.  Eliminated issues are assigned afterwards by walking the recorded
argmin tables in reverse.

The per-step operations build honest new profiles and are the unit of the
cost-preservation checks.  ``solve_elimination`` runs the same arithmetic
on incrementally maintained cost tables instead of rebuilding profiles,
which keeps large instances near-linear.
"""

from __future__ import annotations

import heapq
import itertools
import time
from typing import Mapping

from dataclasses import dataclass

from .brute import SolveResult
from .errors import UnsupportedProfileError
from .model import (
    ApprovalStatement,
    BallotEntry,
    ConditionalBallot,
    Outcome,
    Profile,
    fully_approving_entry,
    global_graph,
    single_predecessor_entry,
    total_cost,
)

_VALUES = (False, True)


@dataclass(frozen=True)
class EliminationStep:
    """Record of one elimination, sufficient to assign the issue afterwards.

    ``choices`` maps each joint value of ``neighbors`` (a 0-, 1- or 2-tuple)
    to the best value of the eliminated issue; ``ties`` lists the entries
    where both values were optimal and False was chosen.  ``base_cost`` is
    the unavoidable cost absorbed by the step (nonzero only for isolated
    issues; in the other cases the cost moves into replacement voters).
    """

    issue: int
    case: str  # "isolated" | "pendant" | "degree2"
    neighbors: tuple[int, ...]
    choices: Mapping[tuple[bool, ...], bool]
    base_cost: int = 0
    ties: tuple[tuple[bool, ...], ...] = ()

    def to_dict(self) -> dict:
        return {
            "issue": self.issue,
            "case": self.case,
            "neighbors": list(self.neighbors),
            "base_cost": self.base_cost,
            "choices": [
                {"given": list(k), "value": v}
                for k, v in sorted(self.choices.items())
            ],
            "ties": [list(t) for t in sorted(self.ties)],
        }


def _argmin_over_y(cost_of_y) -> tuple[int, bool, bool]:
    """Minimize over the two values of the eliminated issue, preferring
    False on ties.  Returns (minimum, chosen value, tied?)."""
    c0, c1 = cost_of_y(False), cost_of_y(True)
    if c1 < c0:
        return c1, True, False
    return c0, False, c0 == c1


def _check_max_indegree_one(profile: Profile) -> None:
    for vi, voter in enumerate(profile.voters):
        d = voter.max_indegree()
        if d > 1:
            raise UnsupportedProfileError(
                f"voter {profile.voter_label(vi)} has dependency in-degree {d}; "
                "elimination requires in-degree <= 1 for every voter"
            )


# ---------------------------------------------------------------------------
# Cost tables
#
# unary[y][v]: total weight of voters voting unconditionally on y and
#   dissatisfied with value v of y.
# pair[(x, y)][a][b]: total weight of voters whose entry on y depends exactly
#   on x and who are dissatisfied with y under (x, y) = (a, b).  The table
#   exists (possibly all zero) whenever some voter declares the edge.


def _unary_costs(profile: Profile, y: int) -> list[int]:
    costs = [0, 0]
    for voter in profile.voters:
        entry = voter.entry(y)
        if entry.depends_on:
            continue
        for v in _VALUES:
            if ((), v) not in entry.approved:
                costs[v] += voter.weight
    return costs


def _pair_costs(profile: Profile, src: int, dst: int) -> list[list[int]]:
    table = [[0, 0], [0, 0]]
    for voter in profile.voters:
        entry = voter.entry(dst)
        if entry.depends_on != (src,):
            continue
        for a in _VALUES:
            for b in _VALUES:
                if (((src, a),), b) not in entry.approved:
                    table[a][b] += voter.weight
    return table


def _strip_issue(
    profile: Profile, y: int, neighbors: tuple[int, ...]
) -> list[ConditionalBallot]:
    """Drop every voter's entry on y; entries on a neighbor that depended on
    y become fully approving (their cost was absorbed into the step)."""
    voters = []
    for voter in profile.voters:
        entries = []
        for entry in voter.entries:
            if entry.issue == y:
                continue
            if entry.issue in neighbors and entry.depends_on == (y,):
                entries.append(fully_approving_entry(entry.issue))
            else:
                entries.append(entry)
        voters.append(
            ConditionalBallot(tuple(entries), weight=voter.weight, name=voter.name)
        )
    return voters


def _require_degree(profile: Profile, y: int, expected: int) -> tuple[int, ...]:
    graph = global_graph(profile)
    neighbors = tuple(sorted(graph.neighbors.get(y, ())))
    if len(neighbors) != expected:
        raise UnsupportedProfileError(
            f"issue {y} has {len(neighbors)} global neighbor(s), expected {expected}"
        )
    return neighbors


def eliminate_isolated(profile: Profile, y: int) -> tuple[Profile, EliminationStep]:
    """Remove an issue with no global neighbors; its best value is fixed now
    and its cost is the step's base cost."""
    _check_max_indegree_one(profile)
    _require_degree(profile, y, 0)
    unary = _unary_costs(profile, y)
    best, value, tied = _argmin_over_y(lambda v: unary[v])
    step = EliminationStep(
        issue=y,
        case="isolated",
        neighbors=(),
        choices={(): value},
        base_cost=best,
        ties=((),) if tied else (),
    )
    reduced = Profile(
        issues=tuple(i for i in profile.issues if i.id != y),
        voters=tuple(_strip_issue(profile, y, ())),
    )
    return reduced, step


def eliminate_pendant(profile: Profile, y: int) -> tuple[Profile, EliminationStep]:
    """Remove an issue whose only global neighbor is some x.

    For each value a of x the best value of y and its cost c*(a) come from
    the unary table of y plus both directed pair tables; each nonzero c*(a)
    becomes one voter of that weight dissatisfied exactly with x = a.
    """
    _check_max_indegree_one(profile)
    (x,) = _require_degree(profile, y, 1)
    unary = _unary_costs(profile, y)
    xy = _pair_costs(profile, x, y)
    yx = _pair_costs(profile, y, x)

    choices: dict[tuple[bool, ...], bool] = {}
    ties = []
    cstar = {}
    for a in _VALUES:
        best, value, tied = _argmin_over_y(
            lambda v: unary[v] + xy[a][v] + yx[v][a]
        )
        cstar[a] = best
        choices[(a,)] = value
        if tied:
            ties.append((a,))

    voters = _strip_issue(profile, y, (x,))
    other_ids = [i.id for i in profile.issues if i.id not in (y, x)]
    for a in _VALUES:
        if cstar[a] == 0:
            continue
        entries = [BallotEntry(x, (), (ApprovalStatement((), not a),))]
        entries.extend(fully_approving_entry(i) for i in other_ids)
        voters.append(ConditionalBallot(tuple(entries), weight=cstar[a]))

    reduced = Profile(
        issues=tuple(i for i in profile.issues if i.id != y),
        voters=tuple(voters),
    )
    step = EliminationStep(
        issue=y, case="pendant", neighbors=(x,), choices=choices, ties=tuple(ties)
    )
    return reduced, step


def eliminate_degree2(profile: Profile, y: int) -> tuple[Profile, EliminationStep]:
    """Remove an issue with exactly two global neighbors x < z.

    The best value of y is tabulated per joint (x, z) value; each nonzero
    cost c*(a, b) becomes one weighted voter whose entry on z depends on x
    and rejects exactly that combination, which adds the undirected edge
    {x, z} to the global graph (when some c* is positive).
    """
    _check_max_indegree_one(profile)
    x, z = _require_degree(profile, y, 2)
    unary = _unary_costs(profile, y)
    xy = _pair_costs(profile, x, y)
    yx = _pair_costs(profile, y, x)
    zy = _pair_costs(profile, z, y)
    yz = _pair_costs(profile, y, z)

    choices: dict[tuple[bool, ...], bool] = {}
    ties = []
    cstar = {}
    for a in _VALUES:
        for b in _VALUES:
            best, value, tied = _argmin_over_y(
                lambda v: unary[v] + xy[a][v] + yx[v][a] + zy[b][v] + yz[v][b]
            )
            cstar[(a, b)] = best
            choices[(a, b)] = value
            if tied:
                ties.append((a, b))

    voters = _strip_issue(profile, y, (x, z))
    other_ids = [i.id for i in profile.issues if i.id not in (y, x, z)]
    for a in _VALUES:
        for b in _VALUES:
            if cstar[(a, b)] == 0:
                continue
            approved = [(p, q) for p in _VALUES for q in _VALUES if (p, q) != (a, b)]
            entries = [
                single_predecessor_entry(z, x, approved),
                fully_approving_entry(x),
            ]
            entries.extend(fully_approving_entry(i) for i in other_ids)
            voters.append(ConditionalBallot(tuple(entries), weight=cstar[(a, b)]))

    reduced = Profile(
        issues=tuple(i for i in profile.issues if i.id != y),
        voters=tuple(voters),
    )
    step = EliminationStep(
        issue=y, case="degree2", neighbors=(x, z), choices=choices, ties=tuple(ties)
    )
    return reduced, step


# ---------------------------------------------------------------------------
# Full solve on incrementally maintained tables


class _CostState:
    """The cost tables and undirected adjacency of a shrinking profile.

    Eliminating a vertex touches only its own tables and its neighbors',
    which is what makes the whole solve near-linear for bounded degree.
    """

    __slots__ = ("unary", "pair", "adj", "base_cost")

    def __init__(self, profile: Profile):
        self.unary: dict[int, list[int]] = {i: [0, 0] for i in profile.issue_ids}
        self.pair: dict[tuple[int, int], list[list[int]]] = {}
        self.adj: dict[int, set[int]] = {i: set() for i in profile.issue_ids}
        self.base_cost = 0
        for voter in profile.voters:
            w = voter.weight
            for entry in voter.entries:
                j = entry.issue
                # approval flags read straight off the statements; building
                # per-entry sets would dominate the whole solve at scale
                if not entry.depends_on:
                    approved = [False, False]
                    for s in entry.statements:
                        approved[s.value] = True
                    unary = self.unary[j]
                    for v in _VALUES:
                        if not approved[v]:
                            unary[v] += w
                else:
                    (p,) = entry.depends_on
                    flags = [[False, False], [False, False]]
                    for s in entry.statements:
                        ((_, a),) = s.when
                        flags[a][s.value] = True
                    table = self._edge_table(p, j)
                    for a in _VALUES:
                        row = flags[a]
                        for b in _VALUES:
                            if not row[b]:
                                table[a][b] += w

    def _edge_table(self, src: int, dst: int) -> list[list[int]]:
        key = (src, dst)
        table = self.pair.get(key)
        if table is None:
            table = [[0, 0], [0, 0]]
            self.pair[key] = table
            self.adj[src].add(dst)
            self.adj[dst].add(src)
        return table

    def _pair_or_zero(self, src: int, dst: int) -> list[list[int]]:
        return self.pair.get((src, dst)) or [[0, 0], [0, 0]]

    def _drop_edges(self, y: int) -> None:
        for other in self.adj.pop(y):
            self.pair.pop((y, other), None)
            self.pair.pop((other, y), None)
            self.adj[other].discard(y)
        del self.unary[y]

    def eliminate(self, y: int) -> EliminationStep:
        neighbors = tuple(sorted(self.adj[y]))
        unary = self.unary[y]
        if len(neighbors) == 0:
            best, value, tied = _argmin_over_y(lambda v: unary[v])
            self.base_cost += best
            self._drop_edges(y)
            return EliminationStep(
                issue=y,
                case="isolated",
                neighbors=(),
                choices={(): value},
                base_cost=best,
                ties=((),) if tied else (),
            )
        if len(neighbors) == 1:
            (x,) = neighbors
            xy = self._pair_or_zero(x, y)
            yx = self._pair_or_zero(y, x)
            choices: dict[tuple[bool, ...], bool] = {}
            ties = []
            cstar = {}
            for a in _VALUES:
                best, value, tied = _argmin_over_y(
                    lambda v: unary[v] + xy[a][v] + yx[v][a]
                )
                cstar[a] = best
                choices[(a,)] = value
                if tied:
                    ties.append((a,))
            self._drop_edges(y)
            for a in _VALUES:
                self.unary[x][a] += cstar[a]
            return EliminationStep(
                issue=y,
                case="pendant",
                neighbors=(x,),
                choices=choices,
                ties=tuple(ties),
            )
        if len(neighbors) == 2:
            x, z = neighbors
            xy = self._pair_or_zero(x, y)
            yx = self._pair_or_zero(y, x)
            zy = self._pair_or_zero(z, y)
            yz = self._pair_or_zero(y, z)
            choices = {}
            ties = []
            cstar = {}
            for a in _VALUES:
                for b in _VALUES:
                    best, value, tied = _argmin_over_y(
                        lambda v: unary[v] + xy[a][v] + yx[v][a] + zy[b][v] + yz[v][b]
                    )
                    cstar[(a, b)] = best
                    choices[(a, b)] = value
                    if tied:
                        ties.append((a, b))
            self._drop_edges(y)
            if any(cstar.values()):
                table = self._edge_table(x, z)
                for (a, b), c in cstar.items():
                    table[a][b] += c
            return EliminationStep(
                issue=y,
                case="degree2",
                neighbors=(x, z),
                choices=choices,
                ties=tuple(ties),
            )
        raise ValueError(f"issue {y} has degree {len(neighbors)} > 2")

    def solve_remainder(self) -> dict[int, bool]:
        """Brute force over the at most 3 surviving issues, lexicographic
        tie-break (False < True, issue id order)."""
        ids = sorted(self.unary)
        pairs = [
            (ids.index(a), ids.index(b), table)
            for (a, b), table in sorted(self.pair.items())
        ]
        best_cost = None
        best: tuple[bool, ...] = ()
        for combo in itertools.product(_VALUES, repeat=len(ids)):
            cost = sum(self.unary[i][v] for i, v in zip(ids, combo))
            cost += sum(table[combo[a]][combo[b]] for a, b, table in pairs)
            if best_cost is None or cost < best_cost:
                best_cost = cost
                best = combo
        return dict(zip(ids, best))


def solve_elimination(profile: Profile, trace: bool = False) -> SolveResult:
    """Exact solve for per-voter in-degree <= 1 profiles whose undirected
    global graph has treewidth <= 2.

    Repeatedly eliminates the lowest-id issue of undirected degree <= 2;
    finishes the last <= 3 issues by brute force and assigns the eliminated
    issues by backtracking.  Raises :class:`UnsupportedProfileError` when a
    voter has in-degree > 1 or no low-degree vertex remains (treewidth > 2).
    The returned cost is recomputed on the original profile.
    """
    t0 = time.perf_counter()
    _check_max_indegree_one(profile)
    state = _CostState(profile)

    alive = set(profile.issue_ids)
    heap = [i for i in alive if len(state.adj[i]) <= 2]
    heapq.heapify(heap)
    steps: list[EliminationStep] = []
    while len(alive) > 3:
        y = None
        while heap:
            candidate = heapq.heappop(heap)
            if candidate in alive:
                y = candidate
                break
        if y is None:
            raise UnsupportedProfileError(
                "treewidth exceeds 2: no issue of degree <= 2 remains "
                f"among the {len(alive)} still to eliminate"
            )
        neighbors = tuple(state.adj[y])
        steps.append(state.eliminate(y))
        alive.remove(y)
        for other in neighbors:
            if len(state.adj[other]) <= 2:
                heapq.heappush(heap, other)

    values = state.solve_remainder()
    for step in reversed(steps):
        key = tuple(values[i] for i in step.neighbors)
        values[step.issue] = step.choices[key]

    outcome = Outcome(values)
    cost = total_cost(profile, outcome)
    stats: dict = {"steps": len(steps), "elapsed_s": time.perf_counter() - t0}
    if trace:
        stats["trace"] = [s.to_dict() for s in steps]
    return SolveResult(outcome, cost, "elim", stats)
