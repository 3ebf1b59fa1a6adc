"""Reduction of endomorphism words of the highest weight to products of ``A^(l)``.

A word ``X 1_eta`` is rewritten in three phases, each a sequence of certified
steps that replace one summand by a family of summands (``X`` is a direct
summand of the indicated combination; steps flagged ``exact`` are
isomorphisms):

1. only-F lemma: the leftmost ``E`` is pushed left with the E/F commutation
   and absorbed at the left end through ``A^(N) E_{n-1}^(l) = F_0^(N) ...
   F_{n-2}^(N) F_{n-1}^(N-l)``, which leaves a factor ``A^(-N)`` on the left.
2. strictly-ordered induction: the first factor that breaks the pattern
   ``F_0 F_1 ... F_{n-1} F_0 ...`` is merged, commuted left or resolved with
   the sl3 lemma.
3. F-reduced lemma: a constant last block is peeled off as ``A^(a_0)``;
   otherwise an ``F_j E_j`` is inserted (``0 < j < n-1``) or the last block
   is split at ``eta`` so the sl3 lemma applies (``j = n-1``).

Summands are :class:`Term` values ``(A^(-N))^left . body . A^(r_1) ... A^(r_s) 1_eta``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

from .qlaurent import ONE, LaurentPoly, is_positive, qint
from .weightlat import Weight, eta, pairing, root, root_pairing
from .wordlang.flow import Zero, target_weight, weight_flow
from .wordlang.rules import apply_rule
from .wordlang.syntax import GenSymbol, WordExpr, WordSyntaxError, gen, idem, parse

__all__ = [
    "NotEndomorphismOfEta",
    "BudgetExceeded",
    "UncoveredCase",
    "FString",
    "Term",
    "SummandSet",
    "TraceStep",
    "ReductionTrace",
    "a_word",
    "parse_term",
    "ef_commute",
    "eliminate_E",
    "strictly_order",
    "reduce_to_A",
    "DEFAULT_BUDGET",
    "random_word",
    "corpus",
    "measure_violations",
    "verify_exact_steps",
    "span_oracle",
]

DEFAULT_BUDGET = 200_000


class NotEndomorphismOfEta(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


class UncoveredCase(RuntimeError):
    """A configuration the printed argument does not handle (see :func:`_phase3`)."""


# -- strings and terms --------------------------------------------------------------------


@dataclass(frozen=True)
class FString:
    """``F_{i_m}^(l_m) ... F_{i_1}^(l_1)``; ``factors`` is written left to right."""

    factors: tuple[tuple[int, int], ...]
    n: int
    source: Weight | None = None

    @classmethod
    def from_word(cls, w: WordExpr, n: int) -> FString:
        facs = []
        for f in w.core():
            if f.kind != "F":
                raise ValueError(f"{f} is not an F factor")
            facs.append((f.index, f.power))
        return cls(tuple(facs), n, w.source_weight)

    def to_word(self) -> WordExpr:
        body = [gen("F", i, a) for i, a in self.factors]
        return WordExpr(body + ([idem(self.source)] if self.source is not None else []))

    @property
    def strictly_ordered(self) -> bool:
        f = self.factors
        return all(a >= 1 for _, a in f) and all(
            f[t + 1][0] == (f[t][0] + 1) % self.n for t in range(len(f) - 1))

    @property
    def zero_count(self) -> int:
        if not self.strictly_ordered:
            raise ValueError("#_0 is defined for strictly ordered strings only")
        return sum(1 for i, _ in self.factors if i == 0)

    def __str__(self) -> str:
        return str(self.to_word())


def a_word(ell: int, n: int) -> list[GenSymbol]:
    """``A^(l)`` as generator factors."""
    if ell > 0:
        return [gen("F", i, ell) for i in range(n)]
    if ell < 0:
        return [gen("E", i, -ell) for i in range(n - 1, -1, -1)]
    return []


def _a_text(ell: int) -> str:
    return f"A^({ell})"


@dataclass(frozen=True)
class Term:
    """``(A^(-N))^left . body . A^(right[0]) ... A^(right[-1]) 1_eta``."""

    n: int
    N: int
    left: int = 0
    body: tuple[GenSymbol, ...] = ()
    right: tuple[int, ...] = ()
    bound: tuple | None = field(default=None, compare=False, hash=False)

    @property
    def eta(self) -> Weight:
        return eta(self.n, self.N)

    def body_word(self) -> WordExpr:
        return WordExpr(list(self.body) + [idem(self.eta)])

    def with_body(self, body, **kw) -> Term:
        return Term(self.n, self.N, kw.get("left", self.left), tuple(body), kw.get("right", self.right),
                    kw.get("bound", self.bound))

    @property
    def is_final(self) -> bool:
        return not self.body

    def a_product(self) -> tuple[int, ...]:
        return (-self.N,) * self.left + self.right

    def a_weight(self) -> int:
        return sum(abs(x) for x in self.a_product())

    def expanded(self) -> WordExpr:
        """The whole term as a word in ``E`` and ``F`` (for evaluation)."""
        facs: list[GenSymbol] = []
        for _ in range(self.left):
            facs += a_word(-self.N, self.n)
        facs += list(self.body)
        for r in self.right:
            facs += a_word(r, self.n)
        return WordExpr(facs + [idem(self.eta)])

    def __str__(self) -> str:
        parts = [_a_text(-self.N)] * self.left + [str(f) for f in self.body] + [_a_text(r) for r in self.right]
        return " ".join(parts + [str(idem(self.eta))])


@dataclass
class SummandSet:
    """A multiset of ``(multiplicity, term)`` with multiplicities in ``N[q, q^-1]``."""

    entries: list[tuple[LaurentPoly, Term]] = field(default_factory=list)

    def add(self, mult: LaurentPoly, term: Term) -> None:
        for idx, (m, t) in enumerate(self.entries):
            if t == term:
                self.entries[idx] = (m + mult, t)
                return
        self.entries.append((mult, term))

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def words(self) -> list[str]:
        return [str(t) for _, t in self.entries]

    def all_positive(self) -> bool:
        return all(is_positive(m) for m, _ in self.entries)

    def to_json(self) -> list[dict]:
        return [{"mult": str(m), "word": str(t)} for m, t in self.entries]


# -- parsing of inputs with A letters --------------------------------------------------


def parse_term(text: str, n: int | None = None, N: int | None = None) -> tuple[Term, LaurentPoly]:
    """Parse a word that may contain ``A^(l)`` letters; returns the term and its shift factor.

    A word made only of ``A`` letters keeps them as an A-product; otherwise
    they are expanded into their defining generators. Shifts ``<a>`` become
    the multiplicity ``q^a``.
    """
    tokens = text.split()
    plain: list[str] = []
    a_letters: list[tuple[int, int]] = []  # (position among factors, ell)
    for tok in tokens:
        if tok.startswith("A^(") and tok.endswith(")"):
            try:
                ell = int(tok[3:-1])
            except ValueError as exc:
                raise WordSyntaxError(f"bad A letter {tok!r}", text.find(tok), ["A^(<int>)"]) from exc
            a_letters.append((len(plain), ell))
            plain.append("__A__")
        else:
            plain.append(tok)
    w = parse(" ".join(t for t in plain if t != "__A__"), n)
    src = w.source_weight
    if src is None:
        if n is None or N is None:
            raise NotEndomorphismOfEta("the word needs a trailing idempotent 1_eta (or pass n and N)")
        src = eta(n, N)
    n = src.n
    N = sum(src.entries)
    if src != eta(n, N):
        raise NotEndomorphismOfEta(f"source {src} is not the highest weight {eta(n, N)}")
    mult = ONE
    facs: list[GenSymbol] = []
    it = iter(w.factors)
    only_a = all(t == "__A__" or t.startswith("1_") for t in plain)
    right: list[int] = []
    for tok in plain:
        if tok == "__A__":
            ell = a_letters.pop(0)[1]
            if not -N <= ell <= N:
                raise NotEndomorphismOfEta(f"A^({ell}) needs -N <= l <= N")
            if only_a:
                if ell:
                    right.append(ell)
            else:
                facs += a_word(ell, n)
            continue
        f = next(it)
        if f.kind == "Idem":
            continue
        if f.kind == "Shift":
            if f.shift[1] or f.shift[2]:
                raise NotEndomorphismOfEta("only <a> shifts have nonnegative multiplicities")
            mult = mult * LaurentPoly.monomial(f.shift[0])
            continue
        if f.kind not in ("E", "F"):
            raise NotEndomorphismOfEta(f"{f}: only E and F factors can be reduced")
        facs.append(f)
    for f in it:
        if f.kind == "Shift":
            mult = mult * LaurentPoly.monomial(f.shift[0])
    if only_a:
        return Term(n, N, 0, (), tuple(right)), mult
    term = Term(n, N, 0, tuple(facs))
    flow = weight_flow(term.body_word(), src, N)
    if isinstance(flow, Zero):
        raise NotEndomorphismOfEta(f"{text}: {flow.reason}")
    if target_weight(term.body_word(), src) != src:
        raise NotEndomorphismOfEta(f"{text} ends at {target_weight(term.body_word(), src)}, not at {src}")
    return term, mult


# -- trace ------------------------------------------------------------------------------


@dataclass
class TraceStep:
    step: int
    phase: int
    rule: str
    cite: str
    exact: bool
    position: int | None
    before: Term
    after: list[tuple[LaurentPoly, Term]]
    measure: dict
    dropped: int = 0

    def to_json(self) -> dict:
        return {
            "step": self.step,
            "phase": self.phase,
            "rule": self.rule,
            "cite": self.cite,
            "exact": self.exact,
            "position": self.position,
            "before": str(self.before),
            "after": [{"mult": str(m), "word": str(t)} for m, t in self.after],
            "dropped": self.dropped,
            "measure": self.measure,
        }


@dataclass
class ReductionTrace:
    input: str
    n: int
    N: int
    steps: list[TraceStep]
    final: SummandSet
    weight_budget: int

    @property
    def max_a_weight(self) -> int:
        return max((t.a_weight() for _, t in self.final), default=0)

    @property
    def within_budget(self) -> bool:
        return self.max_a_weight <= self.weight_budget

    def to_json(self) -> dict:
        return {
            "input": self.input,
            "n": self.n,
            "N": self.N,
            "weight_budget": self.weight_budget,
            "max_a_weight": self.max_a_weight,
            "steps": [s.to_json() for s in self.steps],
            "final": self.final.to_json(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True) + "\n"


# -- single steps -------------------------------------------------------------------------


@dataclass
class _Step:
    phase: int
    rule: str
    cite: str
    exact: bool
    position: int | None
    after: list[tuple[LaurentPoly, Term]]
    measure_before: tuple
    kind: str  # which measure the step is judged by


def _rule_step(term: Term, rule: str, position: int, phase: int, measure: tuple) -> _Step:
    res = apply_rule(term.body_word(), rule, position)
    after = [(m, term.with_body(w.core().factors)) for m, w in res.summands]
    return _Step(phase, rule, res.cite, res.exact, position, after, measure, f"phase{phase}")


def _e_count(body) -> int:
    return sum(1 for f in body if f.kind == "E")


def _phase1_measure(body) -> tuple:
    pos = next((p for p, f in enumerate(body) if f.kind == "E"), len(body))
    return (_e_count(body), pos)


def _phase1(term: Term) -> _Step:
    body = term.body
    n, N = term.n, term.N
    p = next(p for p, f in enumerate(body) if f.kind == "E")
    measure = _phase1_measure(body)
    if p == 0:
        e = body[0]
        if e.index != n - 1:
            raise AssertionError(f"{term}: a nonzero word cannot start with {e}")
        ell = e.power
        new = [gen("F", i, N) for i in range(n - 1)] + ([gen("F", n - 1, N - ell)] if N > ell else [])
        after = [(ONE, term.with_body(new + list(body[1:]), left=term.left + 1))]
        return _Step(1, "absorb", "only-F lemma", True, 0, after, measure, "phase1")
    x = body[p - 1]
    rule = "FE" if x.index == body[p].index else "commute"
    return _rule_step(term, rule, p - 1, 1, measure)


def _first_violation(body, n: int) -> int | None:
    if not body:
        return None
    if body[0].index != 0:
        return 0
    for t in range(1, len(body)):
        if body[t].index != (body[t - 1].index + 1) % n:
            return t
    return None


def _phase2(term: Term) -> _Step:
    body, n = term.body, term.n
    t = _first_violation(body, n)
    measure = (len(body), t)
    if t == 0:
        raise AssertionError(f"{term}: a nonzero F-string starts with F_0")
    j, i = body[t].index, body[t - 1].index
    if j == i:
        return _rule_step(term, "merge", t - 1, 2, measure)
    pairing_ij = root_pairing(i, j, n)
    if pairing_ij == 0:
        return _rule_step(term, "commute", t - 1, 2, measure)
    if i == (j + 1) % n and t >= 2 and body[t - 2].index == j:
        return _rule_step(term, "sl3", t - 2, 2, measure)
    raise AssertionError(f"{term}: unexpected violation at {t}")


def zero_count(body) -> int:
    return sum(1 for f in body if f.kind == "F" and f.index == 0)


def _phase3_measure(term: Term) -> tuple:
    n = term.n
    last = [f.power for f in term.body[-n:]]
    return (zero_count(term.body), sum(last))


def _phase3(term: Term) -> _Step:
    body, n, N = term.body, term.n, term.N
    if len(body) % n or any(body[t].index != t % n for t in range(len(body))):
        raise AssertionError(f"{term}: expected whole blocks F_0 ... F_{n - 1}")
    measure = _phase3_measure(term)
    a = [f.power for f in body[-n:]]
    start = len(body) - n
    if all(x == a[0] for x in a):
        after = [(ONE, term.with_body(body[:-n], right=(a[0],) + term.right, bound=measure))]
        return _Step(3, "A-peel", "F-reduced lemma", True, start, after, measure, "phase3")
    j = max(t for t in range(1, n) if a[t] != a[t - 1])
    if 0 < j < n - 1 or n == 2:
        # weight reached by the last block, where 1_k is a summand of F_j E_j 1_k
        k = target_weight(WordExpr(list(body[-n:]) + [idem(term.eta)]), term.eta)
        lam = pairing(k, root(j, n))
        if lam >= 0:
            raise UncoveredCase(f"{term}: <k, alpha_{j}> = {lam} >= 0 at k = {k}; 1_k is not a summand of F_j E_j 1_k")
        # E_j F^(a) 1_eta = [m] F^(a - e_j) 1_eta, with m from the sl2 relation at the source of F_j^(a_j)
        m = a[j + 1] - a[j] + 1 if j < n - 1 else N - a[j] + 1
        block = [gen("F", t, a[t] - (1 if t == j else 0)) for t in range(n)]
        new = list(body[:-n]) + [gen("F", j, 1)] + block
        after = [(qint(m), term.with_body(new, bound=measure))]
        return _Step(3, "insert-FE", "F-reduced lemma", False, start, after, measure, "phase3")
    # j = n - 1 with n >= 3: F_{n-2}^(p) F_{n-1}^(p+d) 1_eta = F_{n-1}^(d) F_{n-2}^(p) F_{n-1}^(p) 1_eta
    p, d = a[n - 2], a[n - 1] - a[n - 2]
    new = list(body[:-2]) + [gen("F", n - 1, d), gen("F", n - 2, p), gen("F", n - 1, p)]
    after = [(ONE, term.with_body(new, bound=measure))]
    return _Step(3, "split-at-eta", "F-reduced lemma", True, len(body) - 2, after, measure, "phase3")


def _finish(term: Term) -> _Step | None:
    """Cancel adjacent ``A^(-N) A^(N)`` once the body is empty."""
    if term.left and term.right and term.right[0] == term.N:
        after = [(ONE, Term(term.n, term.N, term.left - 1, (), term.right[1:]))]
        return _Step(3, "A-cancel", "A^(N) and A^(-N) are mutually inverse", True, term.left - 1, after,
                     (0, term.a_weight()), "final")
    return None


def _is_zero(term: Term) -> bool:
    return isinstance(weight_flow(term.body_word(), term.eta, term.N), Zero)


def _strictly_ordered(body, n: int) -> bool:
    return all(f.kind == "F" for f in body) and _first_violation(body, n) is None


def _next_step(term: Term, phases=(1, 2, 3)) -> _Step | None:
    body = term.body
    if any(f.kind == "E" for f in body):
        return _phase1(term) if 1 in phases else None
    if not _strictly_ordered(body, term.n):
        return _phase2(term) if 2 in phases else None
    if body:
        return _phase3(term) if 3 in phases else None
    return _finish(term) if 3 in phases else None


def _measure_of(term: Term, kind: str) -> tuple | None:
    if kind == "phase1":
        return _phase1_measure(term.body)
    if kind == "phase2":
        return (len(term.body), _first_violation(term.body, term.n))
    if kind == "final":
        return (0, term.a_weight())
    return None


def _run(start: Term, mult: LaurentPoly, phases=(1, 2, 3), budget: int = DEFAULT_BUDGET):
    steps: list[TraceStep] = []
    final = SummandSet()
    queue: deque[tuple[LaurentPoly, Term]] = deque([(mult, start)])
    while queue:
        m, term = queue.popleft()
        st = _next_step(term, phases)
        if st is None:
            final.add(m, term)
            continue
        if len(steps) >= budget:
            raise BudgetExceeded(f"step budget {budget} exhausted")
        kept, dropped = [], 0
        for mm, t in st.after:
            if _is_zero(t):
                dropped += 1
            else:
                kept.append((mm, t))
        measure: dict = {"order": st.kind, "before": list(st.measure_before)}
        if st.kind == "phase3":
            measure["bound"] = list(term.bound) if term.bound is not None else None
            measure["zero_count"] = st.measure_before[0]
        else:
            measure["after"] = [list(_measure_of(t, st.kind) or ()) if _next_kind(t) == st.kind else None
                                for _, t in kept]
        steps.append(TraceStep(len(steps) + 1, st.phase, st.rule, st.cite, st.exact, st.position,
                               term, kept, measure, dropped))
        for mm, t in kept:
            queue.append((m * mm, t))
    return steps, final


def _next_kind(term: Term) -> str:
    body = term.body
    if any(f.kind == "E" for f in body):
        return "phase1"
    if not _strictly_ordered(body, term.n):
        return "phase2"
    return "phase3" if body else "final"


# -- public operations ----------------------------------------------------------------------


def _as_term(word, n: int | None = None, N: int | None = None) -> tuple[Term, LaurentPoly, str]:
    if isinstance(word, Term):
        return word, ONE, str(word)
    text = str(word)
    term, mult = parse_term(text, n, N)
    return term, mult, text


def ef_commute(word: WordExpr | str, position: int, source: Weight | None = None) -> SummandSet:
    """One application of the E/F commutation lemma at ``position``.

    ``E_i^(a) F_i^(b)`` and ``F_i^(b) E_i^(a)`` become the commuted family;
    terms that leave the nonzero objects are dropped.
    """
    w = parse(word) if isinstance(word, str) else word
    src = source or w.source_weight
    f = w[position]
    rule = "EF" if f.kind == "E" else "FE"
    res = apply_rule(w, rule, position, source=src)
    out = SummandSet()
    N = sum(src.entries)
    for m, x in res.summands:
        if isinstance(weight_flow(x, src, N), Zero):
            continue
        core = x.core().factors
        out.add(m, Term(src.n, N, 0, core))
    return out


def eliminate_E(word, eta_weight: Weight | None = None) -> list[tuple[int, FString, LaurentPoly]]:
    """Phase 1 only: ``X 1_eta`` as a summand of ``(A^(-N))^a Y 1_eta`` with ``Y`` an F-string."""
    n = eta_weight.n if eta_weight is not None else None
    N = sum(eta_weight.entries) if eta_weight is not None else None
    term, mult, _ = _as_term(word, n, N)
    _, final = _run(term, mult, phases=(1,))
    out = []
    for m, t in final:
        fs = FString(tuple((f.index, f.power) for f in t.body), t.n, t.eta)
        out.append((t.left, fs, m))
    return out


def strictly_order(s: FString | WordExpr | str, N: int | None = None) -> SummandSet:
    """Phase 2 only: an F-string at ``eta`` as a summand of strictly ordered strings."""
    if isinstance(s, FString):
        src = s.source
        term = Term(s.n, sum(src.entries), 0, tuple(gen("F", i, a) for i, a in s.factors))
        mult = ONE
        if _is_zero(term):
            return SummandSet()
    else:
        term, mult, _ = _as_term(s, None, N)
    _, final = _run(term, mult, phases=(2,))
    return final


def reduce_to_A(word, n: int | None = None, N: int | None = None,
                budget: int = DEFAULT_BUDGET) -> ReductionTrace:
    """Run all three phases; the final summands are products of ``A^(l)``."""
    term, mult, text = _as_term(word, n, N)
    w_x = sum(f.power for f in term.body) + term.a_weight()
    steps, final = _run(term, mult, budget=budget)
    return ReductionTrace(text, term.n, term.N, steps, final, w_x)


# -- seeded corpus ---------------------------------------------------------------------------


def _distances(n: int, N: int) -> dict[Weight, int]:
    """Fewest single generators needed to go from each nonzero weight to ``eta``."""
    from .weightlat import object_weights

    h = eta(n, N)
    dist = {h: 0}
    frontier = [h]
    while frontier:
        nxt = []
        for k in frontier:
            for i in range(n):
                for sign in (1, -1):
                    k2 = k + sign * root(i, n)
                    if k2.is_nonzero_object(N) and k2 not in dist:
                        dist[k2] = dist[k] + 1
                        nxt.append(k2)
        frontier = nxt
    assert len(dist) == len(object_weights(n, N))
    return dist


def random_word(rng, n: int, N: int, max_weight: int = 8, max_power: int = 2) -> WordExpr:
    """A random nonzero endomorphism word of ``eta`` with total divided-power weight ``<= max_weight``.

    Factors are chosen right to left (in the order they act); every choice
    keeps ``eta`` reachable within the remaining weight.
    """
    dist = _distances(n, N)
    h = eta(n, N)
    while True:
        cur, left, facs = h, max_weight, []
        while True:
            if cur == h and facs and rng.random() < 0.25:
                break
            options = []
            for kind in ("E", "F"):
                for i in range(n):
                    for a in range(1, max_power + 1):
                        step = a * root(i, n)
                        k2 = cur + step if kind == "E" else cur - step
                        if k2.is_nonzero_object(N) and dist[k2] <= left - a:
                            options.append((kind, i, a, k2))
            if not options:
                break
            kind, i, a, k2 = options[rng.randrange(len(options))]
            facs.append(gen(kind, i, a))
            cur, left = k2, left - a
        if cur == h and facs:
            return WordExpr(facs[::-1] + [idem(h)])


def corpus(seed: int = 0, size: int = 200, configs=((2, 1), (3, 1), (3, 2)), max_weight: int = 8) -> list[WordExpr]:
    """The seeded reduction corpus: ``size`` words spread evenly over ``(n, N)`` configurations."""
    import random

    rng = random.Random(seed)
    out = []
    for idx in range(size):
        n, N = configs[idx % len(configs)]
        out.append(random_word(rng, n, N, max_weight))
    return out


# -- verification -----------------------------------------------------------------------------


def _lex_less(a, b) -> bool:
    return tuple(a) < tuple(b)


def measure_violations(trace: ReductionTrace) -> list[str]:
    """Steps whose declared measure does not strictly decrease (empty when the trace is sound).

    Phases 1 and 2 compare each output with the input; a phase-3 step is
    compared with the phase-3 step that produced its ancestor (``bound``).
    """
    bad = []
    for s in trace.steps:
        m = s.measure
        if m["order"] == "phase3":
            if m.get("bound") is not None and not _lex_less(m["before"], m["bound"]):
                bad.append(f"step {s.step}: phase-3 measure {m['before']} not below {m['bound']}")
        else:
            for after in m.get("after", []):
                if after is not None and not _lex_less(after, m["before"]):
                    bad.append(f"step {s.step}: {m['order']} measure {after} not below {m['before']}")
    return bad


def _evaluate_term(model, term: Term):
    from .kmodel import evaluate

    return evaluate(model, term.expanded())


def verify_exact_steps(trace: ReductionTrace, configs) -> list[str]:
    """Check every exact step as a matrix identity in each model configuration."""
    from .kmodel import KModel

    failures = []
    for cfg in configs:
        K = KModel(cfg)
        cache: dict = {}

        def ev(t: Term):
            key = (t.left, t.body, t.right)
            if key not in cache:
                cache[key] = _evaluate_term(K, t)
            return cache[key]

        for s in trace.steps:
            if not s.exact:
                continue
            lhs = ev(s.before)
            rhs = K.zero(lhs.source, lhs.target)
            for m, t in s.after:
                rhs = rhs + ev(t).scale(K.at_unit(m))
            if lhs.matrix != rhs.matrix:
                failures.append(f"{cfg.label()}: step {s.step} ({s.rule}) is not an identity")
    return failures


def span_oracle(word, cfg, budget: int | None = None) -> bool:
    """Is the matrix of ``word`` in the span of A-product matrices with total ``|l| <= budget``?

    Products are enumerated by increasing total weight, keeping one
    representative per distinct matrix; the search stops as soon as the word
    lies in the span.
    """
    from .braidops import BraidModel
    from .kmodel import KModel
    from .linalg import SpanBasis

    term, mult, _ = _as_term(word, cfg.n, cfg.N)
    if budget is None:
        budget = sum(f.power for f in term.body) + term.a_weight()
    K = KModel(cfg)
    B = BraidModel(K)
    target = _evaluate_term(K, term)
    d = K.dim(term.eta)

    def vec(op):
        return [op.matrix.entry(r, c) for r in range(d) for c in range(d)]

    span = SpanBasis(d * d)
    goal = vec(target)
    ident = K.identity(term.eta)
    span.add(vec(ident))
    if span.contains(goal):
        return True
    letters = [ell for ell in range(-cfg.N, cfg.N + 1) if ell]
    a_ops = {ell: B.A(ell) for ell in letters}
    seen = {tuple(vec(ident))}
    levels: dict[int, list] = {0: [ident]}
    for w in range(1, budget + 1):
        levels[w] = []
        for ell in letters:
            prev = levels.get(w - abs(ell), [])
            for op in prev:
                new = a_ops[ell] @ op
                key = tuple(vec(new))
                if key in seen:
                    continue
                seen.add(key)
                levels[w].append(new)
                span.add(list(key))
                if span.contains(goal):
                    return True
    return span.contains(goal)
