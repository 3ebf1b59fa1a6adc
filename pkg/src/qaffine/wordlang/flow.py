"""Weight-flow typechecking, formal adjoints and shift bookkeeping for words."""

from __future__ import annotations

from dataclasses import dataclass

from ..weightlat import DimensionMismatch, Weight, pairing, reflect, root, rotate
from .syntax import GenSymbol, WordExpr, idem, shift

__all__ = [
    "Zero",
    "UnsupportedFactor",
    "step_weight",
    "weight_flow",
    "factor_sources",
    "target_weight",
    "right_adjoint",
    "left_adjoint",
    "net_shift",
    "normalize_shifts",
]


class UnsupportedFactor(ValueError):
    pass


@dataclass(frozen=True)
class Zero:
    """The zero 1-morphism: the flow left the nonzero objects at factor ``position``."""

    position: int
    weight: Weight | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        return "0"


def _check_index(f: GenSymbol, n: int) -> None:
    if f.index is not None and not 0 <= f.index < n:
        raise DimensionMismatch(f"factor {f} has index outside 0..{n - 1}")


def step_weight(f: GenSymbol, k: Weight) -> Weight:
    """Weight after applying the single factor ``f`` to ``1_k`` (formal, no vanishing check)."""
    n = k.n
    _check_index(f, n)
    kind = f.kind
    if kind in ("Idem", "Shift", "Phi", "Phiprime"):
        return k
    if kind in ("E", "Eloop1"):
        return k + f.power * root(f.index, n)
    if kind in ("F", "Floop-1"):
        return k - f.power * root(f.index, n)
    if kind in ("T", "Tprime"):
        return reflect(k, f.index)
    if kind == "Rprime":
        return rotate(k, f.power)
    raise ValueError(f"unknown factor kind {kind}")


def factor_sources(w: WordExpr, source: Weight) -> list[Weight]:
    """The weight entering each factor (``out[p]`` is the source of ``w[p]``), formally."""
    out: list[Weight] = [source] * len(w)
    cur = source
    for p in range(len(w) - 1, -1, -1):
        out[p] = cur
        cur = step_weight(w[p], cur)
    return out


def target_weight(w: WordExpr, source: Weight) -> Weight:
    cur = source
    for f in reversed(w.factors):
        cur = step_weight(f, cur)
    return cur


def weight_flow(w: WordExpr, source: Weight, N: int) -> list[Weight] | Zero:
    """Intermediate weights from ``source`` through every weight-changing factor.

    Idempotents and shifts do not contribute an entry. Returns :class:`Zero`
    if some intermediate weight is not a nonzero object or an idempotent does
    not match the incoming weight.
    """
    n = source.n
    if not source.is_nonzero_object(N):
        return Zero(len(w), source, "source is the zero object")
    flow = [source]
    cur = source
    for p in range(len(w) - 1, -1, -1):
        f = w[p]
        if f.kind == "Idem":
            if f.idem_weight.n != n:
                raise DimensionMismatch(f"idempotent {f} has {f.idem_weight.n} entries, expected {n}")
            if f.idem_weight != cur:
                return Zero(p, cur, f"idempotent {f} does not match incoming weight {cur}")
            continue
        if f.kind == "Shift":
            continue
        cur = step_weight(f, cur)
        if not cur.is_nonzero_object(N):
            return Zero(p, cur, f"weight {cur} after {f} is the zero object")
        flow.append(cur)
    return flow


def _adjoint(w: WordExpr, source: Weight, sign: int) -> WordExpr:
    # (X Y)^R = Y^R X^R; per factor the divided-power adjunction shifts are
    #   (E^(a) 1_k)^R = F^(a) <a(lam + a)>,   (F^(a) 1_k)^R = E^(a) <a(a - lam)>
    # with lam = <k, alpha_i> at the factor's source; left adjoints negate them.
    sources = factor_sources(w, source)
    gens: list[GenSymbol] = []
    total = [0, 0, 0]
    for f, k in zip(w.factors, sources):
        if f.kind in ("Idem",):
            continue
        if f.kind == "Shift":
            for t in range(3):
                total[t] -= f.shift[t]
            continue
        if f.kind not in ("E", "F"):
            raise UnsupportedFactor(f"no formal adjoint for {f}; braid letters are inverted instead")
        a = f.power
        lam = pairing(k, root(f.index, k.n))
        s = a * (lam + a) if f.kind == "E" else a * (a - lam)
        total[0] += sign * s
        gens.append(GenSymbol("F" if f.kind == "E" else "E", f.index, a))
    # the adjoint runs from the target of w back to its source; record the
    # source of w as the leading (target-side) idempotent, as in 1_k F <..>
    return WordExpr([idem(source)] + gens[::-1] + shift(*total))


def right_adjoint(w: WordExpr, source: Weight) -> WordExpr:
    return _adjoint(w, source, 1)


def left_adjoint(w: WordExpr, source: Weight) -> WordExpr:
    return _adjoint(w, source, -1)


def net_shift(w: WordExpr) -> tuple[int, int, int]:
    total = [0, 0, 0]
    for f in w:
        if f.kind == "Shift":
            for t in range(3):
                total[t] += f.shift[t]
    return tuple(total)


def normalize_shifts(w: WordExpr) -> WordExpr:
    """Collect all shifts into at most one ``<a> [c] {i}`` block before a trailing idempotent."""
    body = [f for f in w if f.kind != "Shift"]
    tail = []
    if body and body[-1].kind == "Idem":
        tail = [body.pop()]
    return WordExpr(body + shift(*net_shift(w)) + tail)
