"""Seeded random instance generator.

Reproducibility matters more than statistical quality here, so instead of
``random`` (whose streams are CPython-specific in practice) this uses
xoshiro256** (Blackman & Vigna), a member of the xorshift family with a
published reference implementation, seeded through splitmix64.  Identical
configurations therefore produce byte-identical profiles anywhere.

A generated instance picks a global dependency topology, samples each
voter's dependency graph as an acyclic subgraph of it with per-voter
in-degree at most k, assigns every topology edge left unused to some voter
that can still take it (so the global graph of the output equals the
requested topology), and finally includes each possible approval statement
independently with the configured density.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import CmsError
from .model import (
    ApprovalStatement,
    BallotEntry,
    ConditionalBallot,
    Issue,
    Profile,
)

_MASK64 = (1 << 64) - 1


def _splitmix64(state: int):
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


class Xoshiro256StarStar:
    """xoshiro256** with the reference update rule; 64-bit integer output.

    The rotations are inlined; masking only after multiplications is sound
    because all arithmetic is mod 2^64.
    """

    def __init__(self, seed: int):
        mix = _splitmix64(seed & _MASK64)
        self._s = tuple(next(mix) for _ in range(4))

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s
        x = (s1 * 5) & _MASK64
        result = (((x << 7) | (x >> 57)) * 9) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & _MASK64
        self._s = (s0, s1, s2, s3)
        return result

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n); modulo reduction (the tiny bias is
        irrelevant for test instances, determinism is what counts)."""
        return self.next_u64() % n

    def chance(self, p: float) -> bool:
        # same draw as random() < p, scaled to integers (exact: both sides
        # are only rescaled by a power of two)
        return (self.next_u64() >> 11) < p * 9007199254740992.0


TOPOLOGIES = ("random", "path", "tree", "cycle", "series-parallel")


@dataclass(frozen=True)
class GenConfig:
    """Parameters of one generated instance."""

    seed: int
    n: int
    m: int
    k: int = 1
    topology: str = "random"
    density: float = 0.5

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise CmsError("generator needs n >= 1 and m >= 1")
        if self.k < 0:
            raise CmsError("generator needs k >= 0")
        if not 0.0 <= self.density <= 1.0:
            raise CmsError("approval density must be within [0, 1]")
        if self.topology not in TOPOLOGIES:
            raise CmsError(
                f"unknown topology {self.topology!r}, pick one of {TOPOLOGIES}"
            )


def _topology_edges(cfg: GenConfig, rng: Xoshiro256StarStar) -> list[tuple[int, int]]:
    m, k = cfg.m, cfg.k
    if cfg.topology == "path":
        return [(i, i + 1) for i in range(m - 1)]
    if cfg.topology == "cycle":
        if m < 3:
            raise CmsError(f"cycle topology needs m >= 3, got {m}")
        return [(i, (i + 1) % m) for i in range(m)]
    if cfg.topology == "tree":
        return [(rng.below(i), i) for i in range(1, m)]
    if cfg.topology == "series-parallel":
        # grow a 2-tree: attach each new vertex to both ends of a random
        # existing edge; orientation low -> high keeps it a DAG
        if m == 1:
            return []
        edges = [(0, 1)]
        for v in range(2, m):
            a, b = edges[rng.below(len(edges))]
            edges.append((a, v))
            edges.append((b, v))
        return edges
    # random: a DAG with global in-degree at most k
    edges = []
    for b in range(1, m):
        pool = list(range(b))
        degree = rng.below(min(k, b) + 1)
        for _ in range(degree):
            a = pool.pop(rng.below(len(pool)))
            edges.append((a, b))
    return sorted(edges)


def _voter_edge_cap(cfg: GenConfig) -> int | None:
    # a full directed cycle would not be a DAG; cap one edge below
    return cfg.m - 1 if cfg.topology == "cycle" else None


def generate_profile(cfg: GenConfig) -> Profile:
    """Deterministically generate a valid profile for the configuration.

    Raises :class:`CmsError` when the topology cannot be realized, e.g. a
    cycle with m < 3, or a topology edge that no voter can take without
    breaking the per-voter in-degree bound or acyclicity.
    """
    rng = Xoshiro256StarStar(cfg.seed)
    edges = _topology_edges(cfg, rng)
    in_edges: dict[int, list[int]] = {j: [] for j in range(cfg.m)}
    for a, b in edges:
        in_edges[b].append(a)

    cap = _voter_edge_cap(cfg)
    taken: list[dict[int, list[int]]] = [{} for _ in range(cfg.n)]
    counts = [0] * cfg.n

    def can_take(v: int, b: int) -> bool:
        if len(taken[v].get(b, ())) >= cfg.k:
            return False
        return cap is None or counts[v] < cap

    # round-robin pre-assignment guarantees the global graph of the output
    # equals the topology (every edge used by at least one voter)
    for idx, (a, b) in enumerate(edges):
        for off in range(cfg.n):
            v = (idx + off) % cfg.n
            if can_take(v, b):
                taken[v].setdefault(b, []).append(a)
                counts[v] += 1
                break
        else:
            raise CmsError(
                f"cannot realize topology: edge ({a}, {b}) fits no voter "
                f"under per-voter in-degree {cfg.k}"
            )

    # random extra edges per voter, still within the caps
    for v in range(cfg.n):
        for b in range(cfg.m):
            for a in in_edges[b]:
                if a in taken[v].get(b, ()):
                    continue
                if can_take(v, b) and rng.chance(0.5):
                    taken[v].setdefault(b, []).append(a)
                    counts[v] += 1

    issues = tuple(Issue(i, f"i{i}") for i in range(cfg.m))
    voters = []
    for v in range(cfg.n):
        entries = []
        for j in range(cfg.m):
            deps = tuple(sorted(taken[v].get(j, ())))
            statements = []
            for cond in product((False, True), repeat=len(deps)):
                when = tuple(zip(deps, cond))
                for value in (False, True):
                    if rng.chance(cfg.density):
                        statements.append(ApprovalStatement(when, value))
            entries.append(BallotEntry(j, deps, tuple(statements)))
        voters.append(ConditionalBallot(tuple(entries), weight=1, name=f"v{v + 1}"))
    return Profile(issues=issues, voters=tuple(voters))
