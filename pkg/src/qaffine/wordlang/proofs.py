"""Proof scripts: line-oriented derivation chains replayed through the rule engine.

File format::

    # free-form comment
    # n: 3
    # start: E0
    # expect: T2 T1 E1,1 T1^-1 T2^-1
    step 1: E0def @ 0
    step 2: T0def @ 1

A ``# start:`` line opens a new chain; ``# n:`` sets the rank for the chains
that follow and ``# expect:`` lines (``<mult> * <word>`` or just ``<word>``)
list the summands the chain must end with. Positions are factor offsets in
summand 0; ``<s>:<p>`` addresses summand ``s``. Replaying never searches: each
step names its rule and position and either applies or fails.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..qlaurent import ONE, LaurentPoly, parse_poly
from .rules import PatternMismatch, WeightFlowZero, apply_rule
from .syntax import WordExpr, WordSyntaxError, parse

__all__ = [
    "ProofStep",
    "ProofScript",
    "StepReport",
    "ReplayReport",
    "parse_script",
    "load_scripts",
    "bundled_scripts",
    "replay",
    "replay_all",
]

_STEP = re.compile(r"step\s+(\d+)\s*:\s*(\S+)\s*@\s*(?:(\d+)\s*:\s*)?(\d+)\s*$")

Summands = list[tuple[LaurentPoly, WordExpr]]


@dataclass(frozen=True)
class ProofStep:
    number: int
    rule: str
    position: int
    summand: int = 0


@dataclass
class ProofScript:
    name: str
    steps: list[ProofStep] = field(default_factory=list)
    start: WordExpr | None = None
    expect: Summands | None = None
    n: int | None = None


@dataclass
class StepReport:
    number: int
    rule: str
    position: int
    summand: int
    ok: bool
    exact: bool = True
    cite: str = ""
    error: str = ""
    after: list[tuple[str, str]] = field(default_factory=list)


@dataclass
class ReplayReport:
    name: str
    start: str
    steps: list[StepReport]
    final: Summands
    success: bool
    failed_step: int | None = None
    matches_expected: bool | None = None

    @property
    def exact(self) -> bool:
        return all(s.exact for s in self.steps)

    def final_text(self) -> list[str]:
        return [_summand_text(m, w) for m, w in self.final]

    def summary(self) -> str:
        if not self.success:
            return f"{self.name}: FAIL at step {self.failed_step}"
        tail = "" if self.matches_expected is None else (" (expected result)" if self.matches_expected
                                                         else " (unexpected result)")
        return f"{self.name}: ok, {len(self.steps)} steps -> {' + '.join(self.final_text())}{tail}"


def _summand_text(m: LaurentPoly, w: WordExpr) -> str:
    return str(w) if m == ONE else f"({m}) * {w}"


_MULT = re.compile(r"^\s*(?:\((?P<poly>[^)]*)\)|(?P<int>-?\d+))\s*\*\s*(?P<word>.+)$")


def _parse_expect(text: str, n: int | None) -> tuple[LaurentPoly, WordExpr]:
    """``<word>``, ``<int> * <word>`` or ``(<poly>) * <word>``."""
    m = _MULT.match(text)
    if m:
        mult = parse_poly(m.group("poly") if m.group("poly") is not None else m.group("int"))
        return mult, parse(m.group("word").strip(), n)
    return ONE, parse(text.strip(), n)


def parse_script(text: str, name: str = "script") -> list[ProofScript]:
    """Parse a script file into its chains (a file without ``# start:`` gives one chain)."""
    chains: list[ProofScript] = []
    n: int | None = None
    current = ProofScript(name, n=n)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            key, sep, val = body.partition(":")
            key = key.strip().lower()
            if not sep:
                continue
            if key == "n":
                n = int(val)
                current.n = n
            elif key == "start":
                if current.start is not None or current.steps:
                    chains.append(current)
                current = ProofScript(f"{name}[{len(chains)}]", start=parse(val.strip(), n), n=n)
            elif key == "expect":
                if current.expect is None:
                    current.expect = []
                current.expect.append(_parse_expect(val, n))
            continue
        m = _STEP.match(line)
        if not m:
            raise WordSyntaxError(f"line {lineno}: expected 'step <n>: <rule> @ <position>'", 0, ["step"])
        number, rule, summand, pos = m.groups()
        current.steps.append(ProofStep(int(number), rule, int(pos), int(summand or 0)))
    chains.append(current)
    if len(chains) == 1 and chains[0].name.endswith("[0]"):
        chains[0].name = name
    return chains


def load_scripts(path: Path | str) -> list[ProofScript]:
    path = Path(path)
    return parse_script(path.read_text(), path.stem)


def bundled_scripts() -> dict[str, list[ProofScript]]:
    """The shipped derivations, keyed by file stem."""
    out = {}
    folder = resources.files("qaffine.wordlang") / "scripts"
    for entry in sorted(folder.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".proof"):
            stem = entry.name[: -len(".proof")]
            out[stem] = parse_script(entry.read_text(), stem)
    return out


def _canonical(summands: Summands) -> list[tuple[str, str]]:
    merged: dict[str, LaurentPoly] = {}
    for m, w in summands:
        key = str(w)
        merged[key] = merged.get(key, LaurentPoly()) + m
    return sorted((w, str(m)) for w, m in merged.items() if m)


def replay(script: ProofScript, start: WordExpr | None = None, n: int | None = None) -> ReplayReport:
    """Apply each step in order; a failing step halts the replay and is reported, not raised."""
    word = start if start is not None else script.start
    if word is None:
        raise ValueError(f"script {script.name} has no start word")
    n = n if n is not None else script.n
    state: Summands = [(ONE, word)]
    reports: list[StepReport] = []
    for step in script.steps:
        rep = StepReport(step.number, step.rule, step.position, step.summand, ok=False)
        reports.append(rep)
        if not 0 <= step.summand < len(state):
            rep.error = f"no summand {step.summand}"
            return ReplayReport(script.name, str(word), reports, state, False, step.number)
        mult, target = state[step.summand]
        try:
            res = apply_rule(target, step.rule, step.position, n=n)
        except (PatternMismatch, WeightFlowZero, ValueError) as exc:
            rep.error = f"{type(exc).__name__}: {exc}"
            return ReplayReport(script.name, str(word), reports, state, False, step.number)
        new = [(mult * m, w) for m, w in res.summands]
        state = state[: step.summand] + new + state[step.summand + 1:]
        rep.ok = True
        rep.exact = res.exact
        rep.cite = res.cite
        rep.after = [(str(m), str(w)) for m, w in state]
    matches = None
    if script.expect is not None:
        matches = _canonical(state) == _canonical(script.expect)
    return ReplayReport(script.name, str(word), reports, state, matches is not False, None, matches)


def replay_all(scripts: list[ProofScript]) -> list[ReplayReport]:
    return [replay(s) for s in scripts]
