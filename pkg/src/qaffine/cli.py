"""Command-line front end.

Exit codes (stable):

==  ===========================================================
0   success
1   a check failed (suite cell, verification block, proof replay)
2   usage, parse or configuration error
3   the word's weight flow leaves the nonzero objects ("zero object")
4   the word is not an endomorphism of the highest weight
5   bootstrap: no candidate convention survives
6   bootstrap: several inequivalent conventions survive
7   reduction: the rewriting engine met an uncovered case or ran out of budget
==  ===========================================================
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

from .bootstrap import BootstrapError, bootstrap, write_ledger
from .kmodel import (BASIS_ORDERING, DEFAULT_LEDGER, TRIVIAL, Convention, ModelConfig, dump_operator,
                     enumerate_basis, evaluate, load_convention)
from .relations import RELATIONS, SUITES, ledger_convention, report_lines, run_suite
from .stringrewrite import (BudgetExceeded, NotEndomorphismOfEta, UncoveredCase, corpus, measure_violations,
                            reduce_to_A, span_oracle, verify_exact_steps)
from .weightlat import ConfigMismatch, parse_weight
from .wordlang.flow import Zero, weight_flow
from .wordlang.proofs import bundled_scripts, load_scripts, replay
from .wordlang.syntax import WordSyntaxError, parse

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_ZERO = 3
EXIT_NOT_ETA = 4
EXIT_NO_CONVENTION = 5
EXIT_AMBIGUOUS = 6
EXIT_UNREDUCED = 7

SUITE_LIMITS = {"n": 6, "m": 4, "N": 5}

DEFAULT_SUITE = {
    "sides": ["symmetric", "skew"],
    "n": [2, 3, 4],
    "m": [2, 3],
    "N": [1, 2, 3],
    "relations": ["relations", "braid", "A", "appendix"],
    "workers": 1,
    "point": "generic",
}


class ConfigError(ValueError):
    pass


# -- helpers --------------------------------------------------------------------------------


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _convention(args, side: str) -> Convention:
    if getattr(args, "convention", None):
        return Convention.from_name(args.convention)
    return ledger_convention(side)


def _model(args) -> ModelConfig:
    return ModelConfig(args.side, args.n, args.m, args.N, _convention(args, args.side))


def _parse_word(text: str, n: int):
    try:
        return parse(text, n)
    except WordSyntaxError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return None


# -- eval ------------------------------------------------------------------------------------


def cmd_eval(args) -> int:
    cfg = _model(args)
    w = _parse_word(args.word, cfg.n)
    if w is None:
        return EXIT_USAGE
    try:
        source = parse_weight(args.k) if args.k else w.source_weight
    except ValueError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if source is None:
        print("parse error: give -k or end the word with an idempotent 1_(...)", file=sys.stderr)
        return EXIT_USAGE
    if source.n != cfg.n:
        print(f"parse error: source {source} does not have n={cfg.n} entries", file=sys.stderr)
        return EXIT_USAGE
    if w.source_weight is not None and w.source_weight != source:
        print(f"parse error: -k {source} disagrees with the idempotent {w.source_weight}", file=sys.stderr)
        return EXIT_USAGE
    flow = weight_flow(w, source, cfg.N)
    if isinstance(flow, Zero):
        print(f"zero object: {flow.reason}")
        return EXIT_ZERO
    op = evaluate(cfg, w, source)
    text = dump_operator(cfg, op)
    if args.q1:
        text = dump_operator(cfg, op.specialize_at_one()).replace(
            f"point={cfg.point}", f"point={cfg.point}@q=1", 1)
    _emit(text, args.out)
    return EXIT_OK


# -- reduce ----------------------------------------------------------------------------------


def _verification(trace, n: int, N: int, sides, ms) -> dict:
    configs = [ModelConfig(side, n, m, N, ledger_convention(side)) for side in sides for m in ms]
    exact = verify_exact_steps(trace, configs)
    span = {cfg.label(): span_oracle(trace.input, cfg) for cfg in configs}
    measures = measure_violations(trace)
    ok = not exact and all(span.values()) and not measures and trace.within_budget
    return {"exact_step_failures": exact, "span_membership": span, "measure_violations": measures,
            "within_weight_budget": trace.within_budget, "ok": ok}


def _reduce_one(text: str, args) -> tuple[int, dict | None]:
    try:
        trace = reduce_to_A(text, args.n, args.N)
    except WordSyntaxError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    except NotEndomorphismOfEta as exc:
        print(f"not an endomorphism of the highest weight: {exc}", file=sys.stderr)
        return EXIT_NOT_ETA, None
    except (UncoveredCase, BudgetExceeded) as exc:
        print(f"reduction stopped: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_UNREDUCED, None
    doc = trace.to_json()
    code = EXIT_OK
    if args.verify:
        sides = [args.side] if args.side else ["symmetric", "skew"]
        doc["verification"] = _verification(trace, trace.n, trace.N, sides, [args.m])
        if not doc["verification"]["ok"]:
            code = EXIT_FAIL
    return code, doc


def cmd_reduce(args) -> int:
    if args.word is not None:
        code, doc = _reduce_one(args.word, args)
        if doc is not None:
            _emit(json.dumps(doc, indent=1, sort_keys=True) + "\n", args.out)
        return code
    # no word: reduce the seeded corpus and write one summary line per word
    lines = []
    worst = EXIT_OK
    for w in corpus(args.seed, args.size):
        n, N = w.source_weight.n, sum(w.source_weight.entries)
        sub = argparse.Namespace(**{**vars(args), "n": n, "N": N})
        code, doc = _reduce_one(str(w), sub)
        row = {"input": str(w), "n": n, "N": N, "exit": code}
        if doc is not None:
            row["steps"] = len(doc["steps"])
            row["final"] = doc["final"]
            if "verification" in doc:
                row["verified"] = doc["verification"]["ok"]
        lines.append(json.dumps(row, sort_keys=True) + "\n")
        worst = max(worst, code)
    _emit("".join(lines), args.out)
    return worst


# -- suite -----------------------------------------------------------------------------------


@dataclass
class SuiteConfig:
    sides: list[str]
    n: list[int]
    m: list[int]
    N: list[int]
    relations: list[str]
    workers: int = 1
    point: str = "generic"
    ledger: str | None = None
    out: str | None = None
    conventions: dict = field(default_factory=dict)

    def combos(self) -> list[tuple[int, int, int]]:
        """``(n, m, N)`` triples of the sweep; triples with ``n <= N`` are dropped."""
        return [(n, m, N) for n, m, N in product(self.n, self.m, self.N) if n > N]

    def configs(self) -> list[ModelConfig]:
        out = []
        for side in self.sides:
            conv = self.conventions[side]
            for n, m, N in self.combos():
                out.append(ModelConfig(side, n, m, N, conv, self.point))
        return out


def _int_list(data: dict, key: str) -> list[int]:
    val = data[key]
    if isinstance(val, int):
        val = [val]
    if not isinstance(val, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in val):
        raise ConfigError(f"{key} must be an integer or a list of integers")
    if not val:
        raise ConfigError(f"{key} is empty")
    if min(val) < 1 or max(val) > SUITE_LIMITS[key]:
        raise ConfigError(f"{key} must lie in 1..{SUITE_LIMITS[key]}")
    return sorted(set(val))


def load_suite_config(data: dict) -> SuiteConfig:
    """Validate a suite configuration (missing keys take the default sweep)."""
    if not isinstance(data, dict):
        raise ConfigError("the suite configuration must be a JSON object")
    unknown = set(data) - set(DEFAULT_SUITE) - {"ledger", "out"}
    if unknown:
        raise ConfigError(f"unknown keys: {', '.join(sorted(unknown))}")
    merged = {**DEFAULT_SUITE, **data}
    sides = merged["sides"]
    if isinstance(sides, str):
        sides = [sides]
    if not sides or any(s not in ("symmetric", "skew") for s in sides):
        raise ConfigError("sides must be symmetric and/or skew")
    relations: list[str] = []
    for r in merged["relations"]:
        if r in SUITES:
            relations += SUITES[r]
        elif r in RELATIONS:
            relations.append(r)
        else:
            raise ConfigError(f"unknown relation or suite {r!r}")
    workers = merged["workers"]
    if not isinstance(workers, int) or workers < 1:
        raise ConfigError("workers must be a positive integer")
    if merged["point"] not in ("generic", "classical"):
        raise ConfigError("point must be generic or classical")
    cfg = SuiteConfig(sides, _int_list(merged, "n"), _int_list(merged, "m"), _int_list(merged, "N"),
                      list(dict.fromkeys(relations)), workers, merged["point"], merged.get("ledger"),
                      merged.get("out"))
    if not cfg.combos():
        raise ConfigError("no (n, m, N) in the ranges satisfies n > N")
    for side in sides:
        if cfg.point == "classical":
            cfg.conventions[side] = TRIVIAL
        elif cfg.ledger:
            try:
                cfg.conventions[side] = load_convention(cfg.ledger, side)
            except (OSError, KeyError, ValueError) as exc:
                raise ConfigError(f"cannot read convention ledger {cfg.ledger}: {exc}") from exc
        else:
            cfg.conventions[side] = ledger_convention(side)
    return cfg


def cmd_suite(args) -> int:
    try:
        data = json.loads(Path(args.config).read_text()) if args.config else {}
        cfg = load_suite_config(data)
    except (OSError, json.JSONDecodeError, ConfigError, ConfigMismatch) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    workers = args.workers or cfg.workers
    rows = run_suite(cfg.configs(), cfg.relations, workers)
    _emit(report_lines(rows), args.out or cfg.out)
    counts = {"pass": 0, "fail": 0, "skip": 0}
    for r in rows:
        counts[r["status"]] += 1
    print(f"{len(rows)} cells: {counts['pass']} pass, {counts['fail']} fail, {counts['skip']} skip",
          file=sys.stderr)
    return EXIT_FAIL if counts["fail"] else EXIT_OK


# -- bootstrap -------------------------------------------------------------------------------


def cmd_bootstrap(args) -> int:
    point = "classical" if args.q1 else "generic"
    extra = args.require or []
    for r in extra:
        if r not in RELATIONS:
            print(f"config error: unknown relation {r!r}", file=sys.stderr)
            return EXIT_USAGE
    try:
        doc = bootstrap(point, extra, args.workers)
    except BootstrapError as exc:
        print(f"bootstrap failed: {exc}", file=sys.stderr)
        return exc.exit_code
    path = write_ledger(doc, args.out or DEFAULT_LEDGER)
    for side, name in sorted(doc["selected"].items()):
        print(f"{side}: {name} (class {', '.join(doc['classes'][side][0])})")
    print(f"ledger written to {path}")
    return EXIT_OK


# -- dump-basis ------------------------------------------------------------------------------


def _basis_text(b) -> str:
    return "|".join("".join(str(c) for c in slot) or "-" for slot in b)


def cmd_dump_basis(args) -> int:
    cfg = _model(args)
    try:
        k = parse_weight(args.k)
    except ValueError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if k.n != cfg.n:
        print(f"parse error: weight {k} does not have n={cfg.n} entries", file=sys.stderr)
        return EXIT_USAGE
    if not k.is_nonzero_object(cfg.N):
        print(f"zero object: {k} is not a nonzero object for N={cfg.N}")
        return EXIT_ZERO
    basis = enumerate_basis(cfg, k)
    lines = [f"# side={cfg.side} n={cfg.n} m={cfg.m} N={cfg.N} weight={k}",
             f"# basis={BASIS_ORDERING} dim={len(basis)}"]
    lines += [f"{i}: {_basis_text(b)}" for i, b in enumerate(basis)]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# -- replay ----------------------------------------------------------------------------------


def cmd_replay(args) -> int:
    try:
        if args.scripts:
            groups = {Path(p).stem: load_scripts(p) for p in args.scripts}
        else:
            groups = bundled_scripts()
    except (OSError, ValueError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    lines = []
    ok = True
    for _, scripts in sorted(groups.items()):
        for s in scripts:
            rep = replay(s)
            ok = ok and rep.success
            lines.append(rep.summary())
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAIL


# -- argument parsing -----------------------------------------------------------------------


def _model_flags(p: argparse.ArgumentParser, side_default: str | None = "symmetric") -> None:
    p.add_argument("--side", choices=["symmetric", "skew"], default=side_default)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-m", type=int, default=2)
    p.add_argument("-N", type=int, required=True)
    p.add_argument("--convention", help="convention name overriding the ledger, e.g. EL+FR-")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qaffine", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a word in the Grothendieck-group model")
    _model_flags(p)
    p.add_argument("-k", help="source weight, e.g. (0,2)")
    p.add_argument("--q1", action="store_true", help="specialize the result at q=1")
    p.add_argument("--out")
    p.add_argument("word")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("reduce", help="reduce an endomorphism of the highest weight to A-products")
    _model_flags(p, side_default=None)
    p.add_argument("--verify", action="store_true", help="append the verification block")
    p.add_argument("--seed", type=int, default=0, help="corpus seed when no word is given")
    p.add_argument("--size", type=int, default=200, help="corpus size when no word is given")
    p.add_argument("--out")
    p.add_argument("word", nargs="?")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("suite", help="run a relation suite from a JSON configuration")
    p.add_argument("config", nargs="?", help="JSON configuration (default: the acceptance sweep)")
    p.add_argument("--workers", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("bootstrap", help="select the q-weight convention and write the ledger")
    p.add_argument("--q1", action="store_true", help="run the selection at q=1")
    p.add_argument("--require", action="append", metavar="RELATION", help="extra relation to require")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help=f"ledger path (default {DEFAULT_LEDGER})")
    p.set_defaults(func=cmd_bootstrap)

    p = sub.add_parser("dump-basis", help="list the ordered basis of a weight space")
    _model_flags(p)
    p.add_argument("-k", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dump_basis)

    p = sub.add_parser("replay", help="replay proof scripts (default: the bundled ones)")
    p.add_argument("scripts", nargs="*")
    p.add_argument("--out")
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    for key in ("n", "N", "m"):
        if key in vars(args) and getattr(args, key) is not None and getattr(args, key) < (0 if key == "N" else 1):
            print(f"config error: -{key} out of range", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args)
    except (ConfigMismatch, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
