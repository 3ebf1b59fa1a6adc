"""Planar trees and forests: 1-morphisms from a weight to the middle weight.

A tree carries the ``k_i`` units sitting in one slot to ``k_i`` consecutive
slots holding one unit each, using only the finite generators (indices
``1 .. n-1``, so the corresponding web is planar). A forest is one tree per
nonzero slot, side by side. Their K-shadows are used for two checks: the two
bracketings of a three-leaf tree agree, and forests are injective on
Grothendieck groups (the shadow of conservativity).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .kmodel import KModel, ModelConfig, evaluate
from .linalg import rank
from .weightlat import ConfigMismatch, Weight, check_n_greater_than_N, eta, object_weights
from .wordlang.flow import Zero, target_weight, weight_flow
from .wordlang.syntax import GenSymbol, WordExpr, gen, idem

__all__ = [
    "InfeasibleFlow",
    "ForestWord",
    "ConservativityReport",
    "middle_weight",
    "tree_word",
    "forest_word",
    "conservativity_check",
    "bracketings",
    "associativity_check",
]


class InfeasibleFlow(ValueError):
    pass


def middle_weight(n: int, N: int) -> Weight:
    """``(0^(n-N), 1^N)``; unlike :func:`weightlat.mu` this allows ``N = n``."""
    if N > n:
        raise InfeasibleFlow(f"{N} units do not fit into {n} slots with one unit each")
    return Weight((0,) * (n - N) + (1,) * N)


@dataclass(frozen=True)
class ForestWord:
    source: Weight
    target: Weight
    word: WordExpr

    def __post_init__(self):
        for f in self.word.core():
            if f.kind not in ("E", "F"):
                raise ValueError(f"forest words use E and F only, found {f}")
            if f.index == 0:
                raise ValueError(f"forest words are planar and never use index 0, found {f}")
        N = sum(self.source.entries)
        if isinstance(weight_flow(self.word, self.source, N), Zero):
            raise InfeasibleFlow(f"{self.word} leaves the nonzero objects")
        if target_weight(self.word, self.source) != self.target:
            raise InfeasibleFlow(f"{self.word} ends at {target_weight(self.word, self.source)}, not {self.target}")

    @property
    def planar(self) -> bool:
        return all(f.index != 0 for f in self.word.core())

    def __str__(self) -> str:
        return str(self.word)


def _tree_factors(slot: int, lo: int, hi: int) -> list[GenSymbol]:
    """Move the units in ``slot`` (1-based) to one unit in each of the slots ``lo .. hi``.

    Returned in the order they act (first factor acts first). Rightward
    moves use ``E_j`` (slot ``j`` to ``j+1``), leftward moves ``F_j`` (slot
    ``j+1`` to ``j``); the power across a boundary is the number of target
    slots beyond it, which reproduces ``F_{n-N+1}^(1) ... F_{n-1}^(N-1)`` for
    the highest weight.
    """
    acting: list[GenSymbol] = []
    for j in range(slot, hi):
        d = hi - max(j, lo - 1)
        if d > 0:
            acting.append(gen("E", j, d))
    for j in range(slot - 1, lo - 1, -1):
        c = min(j, hi) - lo + 1
        if c > 0:
            acting.append(gen("F", j, c))
    return acting


def forest_word(cfg_or_n, k: Weight) -> ForestWord:
    """Side-by-side trees from ``k`` to the middle weight.

    Target slots are allocated left to right (tree of the leftmost nonzero
    slot gets the leftmost target slots); the tree of the rightmost slot acts
    first.
    """
    n = cfg_or_n.n if isinstance(cfg_or_n, ModelConfig) else int(cfg_or_n)
    if k.n != n:
        raise ConfigMismatch(f"weight {k} does not have n={n} entries")
    if any(x < 0 for x in k.entries):
        raise InfeasibleFlow(f"{k} is the zero object")
    N = sum(k.entries)
    target = middle_weight(n, N)
    nxt = n - N + 1
    ranges = []
    for slot in range(1, n + 1):
        units = k[slot - 1]
        if units:
            ranges.append((slot, nxt, nxt + units - 1))
            nxt += units
    acting: list[GenSymbol] = []
    for slot, lo, hi in reversed(ranges):
        acting += _tree_factors(slot, lo, hi)
    word = WordExpr(acting[::-1] + [idem(k)])
    return ForestWord(k, target, word)


def tree_word(n: int, N: int) -> ForestWord:
    """The canonical tree ``F_{n-N+1}^(1) ... F_{n-2}^(N-2) F_{n-1}^(N-1)`` from ``eta`` to ``mu``."""
    check_n_greater_than_N(n, N)
    return forest_word(n, eta(n, N))


@dataclass(frozen=True)
class ConservativityReport:
    k: Weight
    rank: int
    dim: int
    full_column_rank: bool
    degenerate: bool = False


def conservativity_check(cfg: ModelConfig, k: Weight) -> ConservativityReport:
    """Rank of the forest word ``K(k) -> K(mu)`` over the fraction field of ``Z[q, q^-1]``."""
    if any(x < 0 for x in k.entries) or sum(k.entries) != cfg.N:
        return ConservativityReport(k, 0, 0, True, degenerate=True)
    fw = forest_word(cfg, k)
    op = evaluate(cfg, fw.word)
    r = rank(op.matrix)
    d = op.shape[1]
    return ConservativityReport(k, r, d, r == d)


# -- the two bracketings of a three-leaf tree ----------------------------------------------


def bracketings(p: int, a: int, b: int, c: int, kind: str = "F") -> tuple[list[GenSymbol], list[GenSymbol]]:
    """Words for ``(a+b+c)`` in slot ``p+2`` split into ``(a, b, c)`` over slots ``p, p+1, p+2``.

    ``((a, b), c)``: ``F_p^(a) F_{p+1}^(a+b)``; ``(a, (b, c))``:
    ``F_{p+1}^(b) F_p^(a) F_{p+1}^(a)``. With ``kind="E"`` the merging
    direction ``(a, b, c) -> (a+b+c)`` is returned instead.
    """
    def dp(k, i, x):
        return [gen(k, i, x)] if x else []

    if kind == "F":
        left = dp("F", p, a) + dp("F", p + 1, a + b)
        right = dp("F", p + 1, b) + dp("F", p, a) + dp("F", p + 1, a)
    else:
        left = dp("E", p + 1, a + b) + dp("E", p, a)
        right = dp("E", p + 1, a) + dp("E", p, a) + dp("E", p + 1, b)
    return left, right


def associativity_check(cfg: ModelConfig) -> list[str]:
    """Compare both bracketings for every placement and every split; returns failures."""
    K = KModel(cfg)
    n, N = cfg.n, cfg.N
    failures = []
    for p in range(1, n - 1):
        for a, b, c in product(range(N + 1), repeat=3):
            if a + b + c > N or a + b + c == 0:
                continue
            for k in object_weights(n, N):
                if k[p - 1] or k[p]:
                    continue
                if k[p + 1] != a + b + c:
                    continue
                src = k
                left, right = bracketings(p, a, b, c, "F")
                l_op = evaluate(K, WordExpr(left + [idem(src)]))
                r_op = evaluate(K, WordExpr(right + [idem(src)]))
                if l_op != r_op:
                    failures.append(f"{cfg.label()} split {(a, b, c)} at p={p} from {src}")
                merged = target_weight(WordExpr(left + [idem(src)]), src)
                left, right = bracketings(p, a, b, c, "E")
                l_op = evaluate(K, WordExpr(left + [idem(merged)]))
                r_op = evaluate(K, WordExpr(right + [idem(merged)]))
                if l_op != r_op:
                    failures.append(f"{cfg.label()} merge {(a, b, c)} at p={p} into {src}")
    return failures
