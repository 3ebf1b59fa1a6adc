"""Named rewrite rules on words, applied at an explicit factor position.

Every rule returns a :class:`RuleResult`: a tuple of ``(multiplicity, word)``
summands with multiplicities in ``N[q, q^-1]`` and an ``exact`` flag. Exact
results are isomorphism-level identities; inexact ones only assert that the
left word is a direct summand of the combination on the right.

The weight-dependent rules read ``lam = <k, alpha_i>`` at the source ``k`` of
the rightmost matched factor, which needs either a ``source`` weight or a
trailing idempotent on the word.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from ..qlaurent import ONE, ZERO, LaurentPoly, qbinom
from ..weightlat import DimensionMismatch, Weight, pairing, root, root_pairing
from .flow import Zero, factor_sources, weight_flow
from .syntax import GenSymbol, WordExpr, braid, gen, shift

__all__ = [
    "Rule",
    "RuleResult",
    "PatternMismatch",
    "WeightFlowZero",
    "RULES",
    "apply_rule",
    "sl3_family",
    "ef_terms",
]


class PatternMismatch(ValueError):
    pass


class WeightFlowZero(ValueError):
    pass


@dataclass(frozen=True)
class RuleResult:
    rule: str
    cite: str
    exact: bool
    position: int
    length: int
    summands: tuple[tuple[LaurentPoly, WordExpr], ...]

    def words(self) -> list[WordExpr]:
        return [w for _, w in self.summands]


@dataclass
class _Ctx:
    w: WordExpr
    p: int
    n: int | None
    sources: list[Weight] | None

    def need_n(self) -> int:
        if self.n is None:
            raise PatternMismatch("this rule needs n; pass a source weight or end the word with an idempotent")
        return self.n

    def lam(self, q: int, i: int) -> int:
        """``<k, alpha_i>`` at the source of factor ``q``."""
        if self.sources is None:
            raise PatternMismatch("this rule needs the local weight; pass a source weight")
        k = self.sources[q]
        return pairing(k, root(i, k.n))

    def at(self, offset: int) -> GenSymbol:
        q = self.p + offset
        if not 0 <= q < len(self.w):
            raise PatternMismatch(f"pattern runs past the end of the word at position {q}")
        return self.w[q]


@dataclass(frozen=True)
class Rule:
    name: str
    cite: str
    fn: Callable[[_Ctx], tuple[int, list[tuple[LaurentPoly, list[GenSymbol]]], bool, str | None]]
    weighted: bool = False


RULES: dict[str, Rule] = {}


def _rule(name: str, cite: str, weighted: bool = False):
    def deco(fn):
        RULES[name] = Rule(name, cite, fn, weighted)
        return fn
    return deco


def _is(f: GenSymbol, kind: str, index: int | None = None, power: int | None = None) -> bool:
    return f.kind == kind and (index is None or f.index == index) and (power is None or f.power == power)


def _dp(kind: str, i: int, a: int) -> list[GenSymbol]:
    return [gen(kind, i, a)] if a > 0 else []


def _single(length: int, factors: list[GenSymbol], cite: str | None = None):
    return length, [(ONE, factors)], True, cite


# -- action axioms: E F relation and commutation ----------------------------------


def ef_terms(a: int, b: int, lam: int, ef_first: bool) -> tuple[list[tuple[int, LaurentPoly]], bool]:
    """Divided-power sl2 commutation.

    ``E^(a) F^(b) 1_k = sum_t [a-b+lam choose t] F^(b-t) E^(a-t) 1_k`` and
    ``F^(b) E^(a) 1_k = sum_t [b-a-lam choose t] E^(a-t) F^(b-t) 1_k``. Returns
    ``[(t, multiplicity)]`` and whether the top coefficient is nonnegative
    (the isomorphism-level case). Otherwise the left word is only a summand of
    the swapped word, reported as ``[(0, 1)]`` with ``exact = False``.
    """
    top = a - b + lam if ef_first else b - a - lam
    if top < 0:
        return [(0, ONE)], False
    out = []
    for t in range(min(a, b) + 1):
        m = qbinom(top, t)
        if m:
            out.append((t, m))
    return out, True


def _ef(ctx: _Ctx, first: str):
    x, y = ctx.at(0), ctx.at(1)
    second = "F" if first == "E" else "E"
    if not (_is(x, first) and _is(y, second) and x.index == y.index):
        raise PatternMismatch(f"expected {first}_i^(a) {second}_i^(b) at position {ctx.p}")
    i = x.index
    lam = ctx.lam(ctx.p + 1, i)
    a, b = (x.power, y.power) if first == "E" else (y.power, x.power)
    terms, exact = ef_terms(a, b, lam, first == "E")
    out = []
    for t, m in terms:
        if first == "E":
            out.append((m, _dp("F", i, b - t) + _dp("E", i, a - t)))
        else:
            out.append((m, _dp("E", i, a - t) + _dp("F", i, b - t)))
    return 2, out, exact, None


@_rule("EF", "action axiom (iii)", weighted=True)
def _rule_ef(ctx):
    return _ef(ctx, "E")


@_rule("FE", "action axiom (iii)", weighted=True)
def _rule_fe(ctx):
    return _ef(ctx, "F")


def _commutes(x: GenSymbol, y: GenSymbol, n: int | None) -> str | None:
    """Citation if the adjacent factors ``x y`` may be swapped, else None."""
    if x.kind == "Shift" or y.kind == "Shift":
        return "shifts are central"

    def pair(i, j):
        if n is None:
            raise PatternMismatch("commutation needs n")
        return root_pairing(i, j, n)

    if x.is_generator and y.is_generator:
        if x.letter != y.letter:
            return "action axiom (iv)" if x.index != y.index else None
        if x.index != y.index and pair(x.index, y.index) == 0:
            return "distant generators commute"
        return None
    braids = ("T", "Tprime")
    if (x.kind in braids and y.is_generator) or (y.kind in braids and x.is_generator):
        if x.index != y.index and pair(x.index, y.index) == 0:
            return "braid letters commute with distant generators"
        return None
    if x.kind in braids and y.kind in braids:
        if x.index != y.index and pair(x.index, y.index) == 0:
            return "distant braid relation"
        return None
    phis = ("Phi", "Phiprime")
    if x.kind in phis and y.kind in phis:
        return "phi letters commute"
    if (x.kind in phis and y.is_generator) or (y.kind in phis and x.is_generator):
        if pair(x.index, y.index) == 0:
            return "phi commutation remark"
        return None
    return None


@_rule("commute", "action axiom (iv)")
def _rule_commute(ctx):
    x, y = ctx.at(0), ctx.at(1)
    cite = _commutes(x, y, ctx.n)
    if cite is None:
        raise PatternMismatch(f"{x} and {y} do not commute")
    return _single(2, [y, x], cite)


@_rule("merge", "divided-power merge")
def _rule_merge(ctx):
    x, y = ctx.at(0), ctx.at(1)
    if not (x.kind in ("E", "F") and y.kind == x.kind and x.index == y.index):
        raise PatternMismatch(f"expected X_i^(a) X_i^(b) at position {ctx.p}")
    a, b = x.power, y.power
    return 2, [(qbinom(a + b, a), [gen(x.kind, x.index, a + b)])], True, None


# -- sl3 lemma ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def _sl3(a: int, b: int, c: int) -> tuple[tuple[tuple[int, LaurentPoly], ...], bool]:
    if b <= a + c:
        terms = []
        for ell in range(b + 1):
            m = qbinom(a + c - b, a - b + ell)
            if m:
                terms.append((ell, m))
        return tuple(terms), True
    if a == 0:
        return ((b, ONE),), False
    if c == 0:
        return ((0, ONE),), False
    acc: dict[int, LaurentPoly] = {}

    def add(ell, m):
        acc[ell] = acc.get(ell, ZERO) + m

    if a == 1:
        # F_i F_j^(b) is a summand of F_j^(b-1) F_i F_j, and
        # F_i F_j F_i^(c) = F_i^(c+1) F_j + [c] F_j F_i^(c+1)
        add(b - 1, ONE)
        add(b, qbinom(c, 1) * qbinom(b, 1))
    else:
        # F_i^(a) is a summand of F_i^(a-1) F_i; expand the inner word, then
        # recurse on F_i^(a-1) F_j^(l) F_i^(c+1) and merge the trailing F_j's
        inner, _ = _sl3(1, b, c)
        for ell, m in inner:
            sub, _ = _sl3(a - 1, ell, c + 1)
            for ell2, m2 in sub:
                add(ell2, m * m2 * qbinom(b - ell2, b - ell))
    return tuple(sorted((k, v) for k, v in acc.items() if v)), False


def sl3_family(a: int, b: int, c: int) -> tuple[list[tuple[int, LaurentPoly]], bool]:
    """``X_i^(a) X_j^(b) X_i^(c)`` in terms of ``X_j^(l) X_i^(a+c) X_j^(b-l)``.

    For ``b <= a + c`` this is an identity with multiplicities
    ``[a+c-b choose a-b+l]``; for ``b > a + c`` the left word is only a direct
    summand of the returned combination (built by the induction in the sl3
    lemma).
    """
    terms, exact = _sl3(a, b, c)
    return list(terms), exact


@_rule("sl3", "sl3 lemma")
def _rule_sl3(ctx):
    x, y, z = ctx.at(0), ctx.at(1), ctx.at(2)
    if not (x.kind in ("E", "F") and y.kind == x.kind and z.kind == x.kind and x.index == z.index):
        raise PatternMismatch(f"expected X_i^(a) X_j^(b) X_i^(c) at position {ctx.p}")
    n = ctx.need_n()
    i, j = x.index, y.index
    if root_pairing(i, j, n) != -1:
        raise PatternMismatch(f"sl3 needs <alpha_{i}, alpha_{j}> = -1")
    a, b, c = x.power, y.power, z.power
    terms, exact = sl3_family(a, b, c)
    out = [(m, _dp(x.kind, j, ell) + _dp(x.kind, i, a + c) + _dp(x.kind, j, b - ell)) for ell, m in terms]
    return 3, out, exact, None


# -- braid group ------------------------------------------------------------------------


@_rule("cancel", "invertibility of braid letters")
def _rule_cancel(ctx):
    x, y = ctx.at(0), ctx.at(1)
    if not (x.is_invertible and y.kind == x.kind and y.index == x.index and y.power == -x.power):
        raise PatternMismatch(f"{x} {y} is not an inverse pair")
    return _single(2, [])


# (a, b, c) on x y x  ->  exponents on y x y; each entry is an identity in the
# three-strand braid group derived from x y x = y x y
_BRAID_TABLE = {
    (1, 1, 1): (1, 1, 1),
    (-1, -1, -1): (-1, -1, -1),
    (-1, 1, 1): (1, 1, -1),
    (1, 1, -1): (-1, 1, 1),
    (-1, -1, 1): (1, -1, -1),
    (1, -1, -1): (-1, -1, 1),
}


@_rule("braid", "braid relations")
def _rule_braid(ctx):
    x, y, z = ctx.at(0), ctx.at(1), ctx.at(2)
    if not (x.kind == y.kind == z.kind == "T" and x.index == z.index):
        raise PatternMismatch(f"expected T_i T_j T_i at position {ctx.p}")
    n = ctx.need_n()
    if root_pairing(x.index, y.index, n) != -1:
        raise PatternMismatch("braid move needs adjacent nodes")
    new = _BRAID_TABLE.get((x.power, y.power, z.power))
    if new is None:
        raise PatternMismatch(f"no braid move for exponents {(x.power, y.power, z.power)}")
    i, j = x.index, y.index
    return _single(3, [braid("T", j, new[0]), braid("T", i, new[1]), braid("T", j, new[2])])


def _adjacent(i: int, j: int, n: int) -> bool:
    return i != j and root_pairing(i, j, n) == -1


@_rule("TTE", "braid-generator relation TiTjEi")
def _rule_tte(ctx):
    # T_i T_j X_i -> X_j T_i T_j
    ti, tj, x = ctx.at(0), ctx.at(1), ctx.at(2)
    n = ctx.need_n()
    if not (_is(ti, "T", power=1) and _is(tj, "T", power=1) and x.kind in ("E", "F")
            and x.index == ti.index and _adjacent(ti.index, tj.index, n)):
        raise PatternMismatch(f"expected T_i T_j X_i at position {ctx.p}")
    return _single(3, [gen(x.kind, tj.index, x.power), ti, tj])


@_rule("TTE-rev", "braid-generator relation TiTjEi")
def _rule_tte_rev(ctx):
    # X_j T_i T_j -> T_i T_j X_i
    x, ti, tj = ctx.at(0), ctx.at(1), ctx.at(2)
    n = ctx.need_n()
    if not (_is(ti, "T", power=1) and _is(tj, "T", power=1) and x.kind in ("E", "F")
            and x.index == tj.index and _adjacent(ti.index, tj.index, n)):
        raise PatternMismatch(f"expected X_j T_i T_j at position {ctx.p}")
    return _single(3, [ti, tj, gen(x.kind, ti.index, x.power)])


@_rule("TTE-inv", "braid-generator relation TiTjEi")
def _rule_tte_inv(ctx):
    # X_i T_j^-1 T_i^-1 -> T_j^-1 T_i^-1 X_j
    x, tj, ti = ctx.at(0), ctx.at(1), ctx.at(2)
    n = ctx.need_n()
    if not (_is(ti, "T", power=-1) and _is(tj, "T", power=-1) and x.kind in ("E", "F")
            and x.index == ti.index and _adjacent(ti.index, tj.index, n)):
        raise PatternMismatch(f"expected X_i T_j^-1 T_i^-1 at position {ctx.p}")
    return _single(3, [tj, ti, gen(x.kind, tj.index, x.power)])


@_rule("TTE-inv-rev", "braid-generator relation TiTjEi")
def _rule_tte_inv_rev(ctx):
    # T_j^-1 T_i^-1 X_j -> X_i T_j^-1 T_i^-1
    tj, ti, x = ctx.at(0), ctx.at(1), ctx.at(2)
    n = ctx.need_n()
    if not (_is(ti, "T", power=-1) and _is(tj, "T", power=-1) and x.kind in ("E", "F")
            and x.index == tj.index and _adjacent(ti.index, tj.index, n)):
        raise PatternMismatch(f"expected T_j^-1 T_i^-1 X_j at position {ctx.p}")
    return _single(3, [gen(x.kind, ti.index, x.power), tj, ti])


@_rule("TEFT", "shifted braid relation TE=FT", weighted=True)
def _rule_teft(ctx):
    # T'_i E_i^(p) 1_k = F_i^(p) T'_i 1_k <-p(lam + p)>
    t, x = ctx.at(0), ctx.at(1)
    if not (_is(t, "Tprime", power=1) and _is(x, "E") and x.index == t.index):
        raise PatternMismatch(f"expected T'_i E_i^(p) at position {ctx.p}")
    p = x.power
    lam = ctx.lam(ctx.p + 1, x.index)
    return _single(2, [gen("F", x.index, p), t] + shift(-p * (lam + p)))


# -- affine node -----------------------------------------------------------------------


def _need_affine(n: int) -> None:
    if n < 3:
        raise PatternMismatch("the affine-node identities are used for n >= 3")


def _conj(n: int, kind: str, j: int, a: int) -> list[GenSymbol]:
    """``T_j^-1 T_0^-1 X_j^(a) T_0 T_j``."""
    return [braid("T", j, -1), braid("T", 0, -1), gen(kind, j, a), braid("T", 0, 1), braid("T", j, 1)]


def _match(ctx: _Ctx, pattern: list[GenSymbol], what: str) -> None:
    for off, want in enumerate(pattern):
        got = ctx.at(off)
        if (got.kind, got.index, got.power) != (want.kind, want.index, want.power):
            raise PatternMismatch(f"expected {what} at position {ctx.p}")


def _conj_rule(ctx, j_of_n, forward: bool):
    n = ctx.need_n()
    _need_affine(n)
    j = j_of_n(n)
    if forward:
        x = ctx.at(0)
        if not (x.kind in ("E", "F") and x.index == 0):
            raise PatternMismatch(f"expected X_0^(a) at position {ctx.p}")
        return _single(1, _conj(n, x.kind, j, x.power))
    x = ctx.at(2)
    if x.kind not in ("E", "F"):
        raise PatternMismatch(f"expected a generator at position {ctx.p + 2}")
    _match(ctx, _conj(n, x.kind, j, x.power), f"T_{j}^-1 T_0^-1 X_{j} T_0 T_{j}")
    return _single(5, [gen(x.kind, 0, x.power)])


@_rule("E0def", "definition of E_0 by conjugation")
def _rule_e0def(ctx):
    return _conj_rule(ctx, lambda n: 1, True)


@_rule("E0def-rev", "definition of E_0 by conjugation")
def _rule_e0def_rev(ctx):
    return _conj_rule(ctx, lambda n: 1, False)


@_rule("app1", "app1 lemma")
def _rule_app1(ctx):
    return _conj_rule(ctx, lambda n: n - 1, True)


@_rule("app1-rev", "app1 lemma")
def _rule_app1_rev(ctx):
    return _conj_rule(ctx, lambda n: n - 1, False)


def _t0_expansion(n: int, power: int) -> list[GenSymbol]:
    # T_0 = phi_1 ... phi_{n-1} T_1^-1 ... T_{n-1}^-1 ... T_1^-1
    pal = list(range(1, n)) + list(range(n - 2, 0, -1))
    if power == 1:
        return [braid("Phi", i, 1) for i in range(1, n)] + [braid("T", i, -1) for i in pal]
    return [braid("T", i, 1) for i in pal] + [braid("Phi", i, -1) for i in range(n - 1, 0, -1)]


@_rule("T0def", "definition of T_0")
def _rule_t0def(ctx):
    x = ctx.at(0)
    if not _is(x, "T", 0):
        raise PatternMismatch(f"expected T_0^(+-1) at position {ctx.p}")
    n = ctx.need_n()
    _need_affine(n)
    return _single(1, _t0_expansion(n, x.power))


@_rule("T0def-rev", "definition of T_0")
def _rule_t0def_rev(ctx):
    n = ctx.need_n()
    _need_affine(n)
    for power in (1, -1):
        pat = _t0_expansion(n, power)
        try:
            _match(ctx, pat, "the expansion of T_0")
        except PatternMismatch:
            continue
        return _single(len(pat), [braid("T", 0, power)])
    raise PatternMismatch(f"expected the expansion of T_0^(+-1) at position {ctx.p}")


def _phi_product(n: int, power: int) -> list[GenSymbol]:
    idx = range(1, n) if power == 1 else range(n - 1, 0, -1)
    return [braid("Phi", i, power) for i in idx]


@_rule("phi0", "product of the phi letters")
def _rule_phi0(ctx):
    # phi_1 ... phi_{n-1} = phi_0^-1
    n = ctx.need_n()
    for power in (1, -1):
        pat = _phi_product(n, power)
        try:
            _match(ctx, pat, "phi_1 ... phi_{n-1}")
        except PatternMismatch:
            continue
        return _single(len(pat), [braid("Phi", 0, -power)])
    raise PatternMismatch(f"expected a full product of phi letters at position {ctx.p}")


@_rule("phi0-rev", "product of the phi letters")
def _rule_phi0_rev(ctx):
    x = ctx.at(0)
    if not _is(x, "Phi", 0):
        raise PatternMismatch(f"expected phi_0 at position {ctx.p}")
    return _single(1, _phi_product(ctx.need_n(), -x.power))


_LOOP = {"E": "Eloop1", "F": "Floop-1"}
_UNLOOP = {"Eloop1": "E", "Floop-1": "F"}


@_rule("phi-loop", "loop generators via phi conjugation")
def _rule_phi_loop(ctx):
    # phi_0 X_i -> X_{i,loop} phi_0 for i in {1, n-1}, where <alpha_0, alpha_i> = -1
    ph, x = ctx.at(0), ctx.at(1)
    n = ctx.need_n()
    if not (_is(ph, "Phi", 0, 1) and x.kind in ("E", "F") and x.power == 1
            and 1 <= x.index <= n - 1 and root_pairing(0, x.index, n) == -1):
        raise PatternMismatch(f"expected phi_0 X_i with <alpha_0, alpha_i> = -1 at position {ctx.p}")
    return _single(2, [GenSymbol(_LOOP[x.kind], x.index), ph])


@_rule("phi-loop-rev", "loop generators via phi conjugation")
def _rule_phi_loop_rev(ctx):
    x, ph = ctx.at(0), ctx.at(1)
    n = ctx.need_n()
    if not (x.kind in _UNLOOP and _is(ph, "Phi", 0, 1) and root_pairing(0, x.index, n) == -1):
        raise PatternMismatch(f"expected X_(i,loop) phi_0 at position {ctx.p}")
    return _single(2, [ph, gen(_UNLOOP[x.kind], x.index)])


def _loop_shift_pattern(kind: str, i: int) -> list[GenSymbol]:
    return [braid("T", i, 1), braid("T", i + 1, -1), GenSymbol(kind, i), braid("T", i + 1, 1), braid("T", i, -1)]


@_rule("loop-shift", "loop braid relation")
def _rule_loop_shift(ctx):
    # T_i T_{i+1}^-1 X_{i,loop} T_{i+1} T_i^-1 -> X_{i+1,loop}
    x = ctx.at(2)
    n = ctx.need_n()
    if x.kind not in _UNLOOP or not 1 <= x.index <= n - 2:
        raise PatternMismatch(f"expected a loop generator at position {ctx.p + 2}")
    _match(ctx, _loop_shift_pattern(x.kind, x.index), "T_i T_(i+1)^-1 X_(i,loop) T_(i+1) T_i^-1")
    return _single(5, [GenSymbol(x.kind, x.index + 1)])


@_rule("loop-shift-rev", "loop braid relation")
def _rule_loop_shift_rev(ctx):
    x = ctx.at(0)
    n = ctx.need_n()
    if x.kind not in _UNLOOP or not 2 <= x.index <= n - 1:
        raise PatternMismatch(f"expected a loop generator X_(i+1,loop) with i >= 1 at position {ctx.p}")
    return _single(1, _loop_shift_pattern(x.kind, x.index - 1))


@_rule("loop-braid", "loop braid relation")
def _rule_loop_braid(ctx):
    # T_i^-1 X_{j,loop} T_i -> T_j^-1 X_{i,loop} T_j for adjacent finite i, j
    a, x, b = ctx.at(0), ctx.at(1), ctx.at(2)
    n = ctx.need_n()
    if not (_is(a, "T", power=-1) and _is(b, "T", a.index, 1) and x.kind in _UNLOOP
            and a.index != 0 and _adjacent(a.index, x.index, n)):
        raise PatternMismatch(f"expected T_i^-1 X_(j,loop) T_i at position {ctx.p}")
    i, j = a.index, x.index
    return _single(3, [braid("T", j, -1), GenSymbol(x.kind, i), braid("T", j, 1)])


# -- driver ----------------------------------------------------------------------------


def apply_rule(w: WordExpr, rule: str, position: int, source: Weight | None = None,
               n: int | None = None, N: int | None = None) -> RuleResult:
    """Apply ``rule`` to ``w`` with its pattern starting at factor ``position``.

    ``source`` defaults to the weight of a trailing idempotent. If a source is
    known the whole word must have a nonzero weight flow (``N`` defaults to
    the entry sum of the source).
    """
    r = RULES.get(rule)
    if r is None:
        raise PatternMismatch(f"unknown rule {rule!r}")
    if source is None:
        source = w.source_weight
    if source is not None:
        if n is not None and n != source.n:
            raise DimensionMismatch(f"source {source} does not have n={n} entries")
        n = source.n
        flow = weight_flow(w, source, sum(source.entries) if N is None else N)
        if isinstance(flow, Zero):
            raise WeightFlowZero(f"{w} is zero from {source}: {flow.reason}")
        sources = factor_sources(w, source)
    else:
        if r.weighted:
            raise PatternMismatch(f"rule {rule} needs a source weight")
        sources = None
    if not 0 <= position < len(w):
        raise PatternMismatch(f"position {position} outside the word")
    ctx = _Ctx(w, position, n, sources)
    length, summands, exact, cite = r.fn(ctx)
    out = tuple((m, w.splice(position, length, factors)) for m, factors in summands)
    return RuleResult(rule, cite or r.cite, exact, position, length, out)
