"""Command-line front end.

Subcommands: ``solve``, ``eval``, ``reduce``, ``gen``, ``check``.  Output is
deterministic JSON (tables behind --pretty), so runs are byte-reproducible
for fixed inputs and seed.  Exit codes: 1 parse/schema error, 2 profile
unsupported for the requested method (or an unrealizable generator config),
3 a size cap would be exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .brute import DEFAULT_BRUTE_LIMIT, SolveResult, solve_exhaustive
from .elim import solve_elimination
from .errors import CmsError, ProfileFormatError, SizeCapError, UnsupportedProfileError
from .generator import GenConfig, generate_profile
from .minsat import DEFAULT_INDEGREE_CAP, export_dimacs, reduce_profile, solve_via_minsat
from .model import Profile, dissatisfaction, max_indegree, total_cost, validate
from .serialize import dumps_outcome, dumps_profile, parse_outcome, parse_profile


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ProfileFormatError(f"cannot read {path}: {e.strerror}") from e


def _load_profile(path: str) -> Profile:
    profile = parse_profile(_read(path))
    errors = [v for v in validate(profile) if v.level == "error"]
    if errors:
        first = errors[0]
        raise ProfileFormatError(
            f"invalid profile {path}: {first.message} "
            f"(voter={first.voter}, issue={first.issue})"
        )
    return profile


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# solve


def _solve_one(profile: Profile, args) -> dict:
    method = args.method
    result: SolveResult
    if method == "auto":
        result = _solve_auto(profile, args)
    elif method == "brute":
        result = solve_exhaustive(profile, limit=args.brute_limit)
    elif method == "elim":
        result = solve_elimination(profile, trace=args.trace)
    else:
        result = solve_via_minsat(profile, indegree_cap=args.indegree_cap)
    return _result_doc(profile, result, args)


def _solve_auto(profile: Profile, args) -> SolveResult:
    _, overall = max_indegree(profile)
    if overall <= 1:
        try:
            return solve_elimination(profile, trace=args.trace)
        except UnsupportedProfileError:
            pass
    if overall <= args.indegree_cap:
        return solve_via_minsat(profile, indegree_cap=args.indegree_cap)
    if profile.m <= args.brute_limit:
        return solve_exhaustive(profile, limit=args.brute_limit)
    raise SizeCapError(
        f"auto found no applicable method: in-degree {overall} exceeds the cap "
        f"and {profile.m} issues exceed the brute-force limit"
    )


def _result_doc(profile: Profile, result: SolveResult, args) -> dict:
    doc = {
        "method": result.method,
        "cost": result.cost,
        "outcome": {
            i.name: result.outcome.values[i.id] for i in profile.issues
        },
    }
    if "satisfied" in result.stats:
        doc["satisfied"] = result.stats["satisfied"]
    if args.trace and "trace" in result.stats:
        doc["trace"] = result.stats["trace"]
    return doc


def cmd_solve(args) -> int:
    path = Path(args.input)
    if path.is_dir():
        return _solve_batch(args, path)
    doc = _solve_one(_load_profile(args.input), args)
    _emit(args, _pretty_solve(doc) if args.pretty else _json(doc))
    return 0


def _solve_file(payload: tuple) -> tuple[str, dict]:
    path, namespace_dict = payload
    args = argparse.Namespace(**namespace_dict)
    return Path(path).name, _solve_one(_load_profile(path), args)


def _solve_batch(args, directory: Path) -> int:
    files = sorted(str(p) for p in directory.glob("*.json"))
    payloads = [(f, vars(args)) for f in files]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_solve_file, payloads))
    else:
        results = [_solve_file(p) for p in payloads]
    doc = {name: result for name, result in results}
    _emit(args, _json(doc))
    return 0


def _pretty_solve(doc: dict) -> str:
    lines = [f"method   {doc['method']}", f"cost     {doc['cost']}"]
    if "satisfied" in doc:
        lines.append(f"satisfied clauses  {doc['satisfied']}")
    lines.append("outcome:")
    for name, value in doc["outcome"].items():
        lines.append(f"  {name:<20} {'yes' if value else 'no'}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# eval / reduce / gen / check


def cmd_eval(args) -> int:
    profile = _load_profile(args.input)
    outcome = parse_outcome(_read(args.outcome), profile)
    per_voter = [dissatisfaction(v, outcome) for v in profile.voters]
    doc = {"per_voter": per_voter, "total": total_cost(profile, outcome)}
    if args.pretty:
        lines = [
            f"{profile.voter_label(i):<12} {d}" for i, d in enumerate(per_voter)
        ]
        lines.append(f"total        {doc['total']}")
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, _json(doc))
    return 0


def cmd_reduce(args) -> int:
    profile = _load_profile(args.input)
    instance = reduce_profile(profile, indegree_cap=args.indegree_cap)
    _emit(args, export_dimacs(instance))
    return 0


def cmd_gen(args) -> int:
    cfg = GenConfig(
        seed=args.seed,
        n=args.n,
        m=args.m,
        k=args.k,
        topology=args.topology,
        density=args.density,
    )
    profile = generate_profile(cfg)
    _emit(args, dumps_profile(profile, indent=2 if args.pretty else None))
    return 0


def cmd_check(args) -> int:
    profile = parse_profile(_read(args.input))
    violations = validate(profile)
    doc = {
        "valid": not any(v.level == "error" for v in violations),
        "violations": [v.to_dict() for v in violations],
    }
    if args.pretty:
        lines = [f"valid: {doc['valid']}"]
        for v in violations:
            lines.append(
                f"  [{v.level}] voter={v.voter} issue={v.issue}: {v.message}"
            )
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, _json(doc))
    return 0 if doc["valid"] else 1


# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cminisum",
        description="Solvers for conditional minisum approval elections.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve a profile (or a directory of profiles)")
    solve.add_argument("--input", required=True, help="profile JSON file or directory")
    solve.add_argument(
        "--method",
        choices=("auto", "brute", "elim", "minsat"),
        default="auto",
    )
    solve.add_argument("--brute-limit", type=int, default=DEFAULT_BRUTE_LIMIT)
    solve.add_argument("--indegree-cap", type=int, default=DEFAULT_INDEGREE_CAP)
    solve.add_argument("--trace", action="store_true", help="include elimination trace")
    solve.add_argument("--jobs", type=int, default=1, help="parallel solves for directories")
    solve.add_argument("--pretty", action="store_true")
    solve.add_argument("--output")
    solve.set_defaults(func=cmd_solve)

    ev = sub.add_parser("eval", help="per-voter dissatisfaction of an outcome")
    ev.add_argument("--input", required=True, help="profile JSON file")
    ev.add_argument("--outcome", required=True, help="outcome JSON file")
    ev.add_argument("--pretty", action="store_true")
    ev.add_argument("--output")
    ev.set_defaults(func=cmd_eval)

    red = sub.add_parser("reduce", help="emit the MIN SAT instance as DIMACS CNF")
    red.add_argument("--input", required=True)
    red.add_argument("--indegree-cap", type=int, default=DEFAULT_INDEGREE_CAP)
    red.add_argument("--output")
    red.set_defaults(func=cmd_reduce)

    gen = sub.add_parser("gen", help="generate a random profile")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--n", type=int, required=True, help="number of voters")
    gen.add_argument("--m", type=int, required=True, help="number of issues")
    gen.add_argument("--k", type=int, default=1, help="max per-voter in-degree")
    gen.add_argument(
        "--topology",
        choices=("random", "path", "tree", "cycle", "series-parallel"),
        default="random",
    )
    gen.add_argument("--density", type=float, default=0.5, help="approval density in [0,1]")
    gen.add_argument("--pretty", action="store_true", help="indented JSON")
    gen.add_argument("--output")
    gen.set_defaults(func=cmd_gen)

    chk = sub.add_parser("check", help="validate a profile")
    chk.add_argument("--input", required=True)
    chk.add_argument("--pretty", action="store_true")
    chk.add_argument("--output")
    chk.set_defaults(func=cmd_check)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ProfileFormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except UnsupportedProfileError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except SizeCapError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except CmsError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())
