"""Relation suite: the decategorified identities checked as exact matrix equalities.

A *cell* is one relation at one parameter choice (indices, powers, weight)
in one model configuration. :func:`check_relation` runs a single cell;
:func:`run_suite` sweeps configurations in a worker pool and returns report
rows sorted by cell key, so the report does not depend on the worker count.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from itertools import product
from typing import Callable, Iterable

from .braidops import BraidModel, PreconditionViolated
from .kmodel import DEFAULT_LEDGER, Convention, KModel, load_convention, ModelConfig, Operator, TRIVIAL, _braid_model
from .linalg import NotInvertible
from .qlaurent import ONE, ZERO, LaurentPoly, qbinom, qfactorial, qint
from .weightlat import Weight, eta, object_weights, pairing, reflect, root, root_pairing, rotate
from .wordlang.rules import sl3_family

__all__ = [
    "CheckResult",
    "UnknownRelation",
    "RELATIONS",
    "SUITES",
    "check_relation",
    "relation_cells",
    "run_cells",
    "run_suite",
    "sweep_configs",
    "ledger_convention",
    "report_lines",
]


class UnknownRelation(KeyError):
    pass


@dataclass
class CheckResult:
    passed: bool
    witness: str | None = None
    unit: str | None = None
    skipped: bool = False
    note: str = ""

    @property
    def status(self) -> str:
        return "skip" if self.skipped else ("pass" if self.passed else "fail")


RelationFn = Callable[[BraidModel, dict], CheckResult]
RELATIONS: dict[str, RelationFn] = {}
_CELLS: dict[str, Callable[[ModelConfig], list[dict]]] = {}


def _relation(name: str, cells: Callable[[ModelConfig], list[dict]]):
    def deco(fn):
        RELATIONS[name] = fn
        _CELLS[name] = cells
        return fn
    return deco


# -- helpers -----------------------------------------------------------------------------


def _w(params: dict) -> Weight:
    k = params["k"]
    return k if isinstance(k, Weight) else Weight(tuple(k))


def _word(B: BraidModel, letters: list[tuple], k: Weight) -> Operator:
    """Compose letters written left to right (rightmost first).

    Letters: ``("E"|"F", i, a)``, ``("T"|"Ti"|"Tp"|"Tpi", i)``, ``("R",)``.
    """
    K = B.k
    op = K.identity(k)
    cur = k
    for letter in reversed(letters):
        kind = letter[0]
        if kind in ("E", "F"):
            step = K.divided_power(kind, letter[1], letter[2], cur)
        elif kind == "T":
            step = B.T(letter[1], cur)
        elif kind == "Ti":
            step = B.T_inv(letter[1], cur)
        elif kind == "Tp":
            step = B.Tprime(letter[1], cur)
        elif kind == "Tpi":
            step = B.Tprime_inv(letter[1], cur)
        elif kind == "R":
            step = B.Rprime(cur)
        else:
            raise ValueError(kind)
        op = step @ op
        cur = step.target
    return op


def _compare(lhs: Operator, rhs: Operator, K: KModel) -> CheckResult:
    if lhs.target != rhs.target:
        return CheckResult(False, f"target weights differ: {lhs.target} vs {rhs.target}")
    if lhs.matrix == rhs.matrix:
        return CheckResult(True)
    diff = lhs.matrix.first_difference(rhs.matrix)
    r, c, a, b = diff
    rows, cols = K.basis(lhs.target), K.basis(lhs.source)
    return CheckResult(False, f"entry ({rows[r]}, {cols[c]}) at k={lhs.source}: lhs {a} vs rhs {b}")


def _sum(K: KModel, terms: Iterable[tuple[LaurentPoly, Operator]], source: Weight, target: Weight) -> Operator:
    out = K.zero(source, target)
    for m, op in terms:
        if m:
            out = out + op.scale(K.at_unit(m))
    return out


def _weights(cfg: ModelConfig) -> list[Weight]:
    return object_weights(cfg.n, cfg.N)


def _hat(cfg: ModelConfig) -> range:
    return range(cfg.n)


def _cells(**ranges) -> Callable[[ModelConfig], list[dict]]:
    """Cartesian product of parameter ranges; values may be callables of the config."""
    def build(cfg: ModelConfig) -> list[dict]:
        keys = list(ranges)
        values = [v(cfg) if callable(v) else v for v in ranges.values()]
        return [dict(zip(keys, combo)) for combo in product(*values)]
    return build


def _filtered(base: Callable[[ModelConfig], list[dict]], pred: Callable[[ModelConfig, dict], bool]):
    def build(cfg: ModelConfig) -> list[dict]:
        return [p for p in base(cfg) if pred(cfg, p)]
    return build


def _lam(B: BraidModel, i: int, k: Weight) -> int:
    return pairing(k, root(i, B.n))


# -- action axioms --------------------------------------------------------------------


@_relation("sl2", _cells(i=_hat, k=_weights))
def _sl2(B, p):
    """``E_i F_i 1_k - F_i E_i 1_k = [<k, alpha_i>] 1_k``."""
    K, i, k = B.k, p["i"], _w(p)
    lhs = _word(B, [("E", i, 1), ("F", i, 1)], k) - _word(B, [("F", i, 1), ("E", i, 1)], k)
    return _compare(lhs, K.identity(k).scale(K.at_unit(qint(_lam(B, i, k)))), K)


@_relation("sl2-divided", _filtered(_cells(i=_hat, a=(1, 2), b=(1, 2), k=_weights),
                                    lambda cfg, p: (p["a"], p["b"]) != (1, 1)))
def _sl2_divided(B, p):
    """Divided-power commutation in whichever order has a nonnegative binomial top."""
    K, i, a, b, k = B.k, p["i"], p["a"], p["b"], _w(p)
    lam = _lam(B, i, k)
    if a - b + lam >= 0:
        lhs = _word(B, [("E", i, a), ("F", i, b)], k)
        terms = [(qbinom(a - b + lam, t), _word(B, [("F", i, b - t), ("E", i, a - t)], k))
                 for t in range(min(a, b) + 1)]
    else:
        lhs = _word(B, [("F", i, b), ("E", i, a)], k)
        terms = [(qbinom(b - a - lam, t), _word(B, [("E", i, a - t), ("F", i, b - t)], k))
                 for t in range(min(a, b) + 1)]
    return _compare(lhs, _sum(K, terms, k, lhs.target), K)


@_relation("EiFj-commute", _filtered(_cells(i=_hat, j=_hat, k=_weights), lambda cfg, p: p["i"] != p["j"]))
def _eifj(B, p):
    K, i, j, k = B.k, p["i"], p["j"], _w(p)
    return _compare(_word(B, [("E", i, 1), ("F", j, 1)], k), _word(B, [("F", j, 1), ("E", i, 1)], k), K)


@_relation("EE-commute", _filtered(_cells(x=("E", "F"), i=_hat, j=_hat, k=_weights),
                                   lambda cfg, p: p["i"] < p["j"] and root_pairing(p["i"], p["j"], cfg.n) == 0))
def _ee(B, p):
    K, x, i, j, k = B.k, p["x"], p["i"], p["j"], _w(p)
    return _compare(_word(B, [(x, i, 1), (x, j, 1)], k), _word(B, [(x, j, 1), (x, i, 1)], k), K)


@_relation("divided-power", _cells(x=("E", "F"), i=_hat, a=(2, 3), k=_weights))
def _divided(B, p):
    """``X_i^a = [a]! X_i^(a)`` (the K-shadow of the decomposition of ``E_i E_i``)."""
    K, x, i, a, k = B.k, p["x"], p["i"], p["a"], _w(p)
    lhs = _word(B, [(x, i, 1)] * a, k)
    return _compare(lhs, _word(B, [(x, i, a)], k).scale(K.at_unit(qfactorial(a))), K)


@_relation("merge", _cells(x=("E", "F"), i=_hat, a=(1, 2), b=(1, 2), k=_weights))
def _merge(B, p):
    K, x, i, a, b, k = B.k, p["x"], p["i"], p["a"], p["b"], _w(p)
    lhs = _word(B, [(x, i, a), (x, i, b)], k)
    return _compare(lhs, _word(B, [(x, i, a + b)], k).scale(K.at_unit(qbinom(a + b, a))), K)


def _pairs(value: int):
    def build(cfg):
        return [(i, j) for i in range(cfg.n) for j in range(cfg.n)
                if i != j and root_pairing(i, j, cfg.n) == value]
    return build


@_relation("serre", _cells(x=("E", "F"), pair=lambda cfg: _pairs(-1)(cfg) + _pairs(-2)(cfg), k=_weights))
def _serre(B, p):
    """Quantum Serre: quadratic for ``<i,j> = -1``, cubic for the affine sl2 pair ``<i,j> = -2``."""
    K, x, (i, j), k = B.k, p["x"], p["pair"], _w(p)
    if root_pairing(i, j, B.n) == -1:
        lhs = _word(B, [(x, i, 1), (x, j, 1), (x, i, 1)], k)
        rhs = _word(B, [(x, i, 2), (x, j, 1)], k) + _word(B, [(x, j, 1), (x, i, 2)], k)
        return _compare(lhs, rhs, K)
    terms = [_word(B, [(x, i, 3 - r), (x, j, 1), (x, i, r)], k).scale((-1) ** r) for r in range(4)]
    total = terms[0]
    for t in terms[1:]:
        total = total + t
    return _compare(total, K.zero(k, total.target), K)


@_relation("sl3", _filtered(_cells(x=("E", "F"), pair=_pairs(-1), a=(0, 1, 2), b=(1, 2), c=(0, 1, 2), k=_weights),
                            lambda cfg, p: p["b"] <= p["a"] + p["c"]))
def _sl3(B, p):
    """The exact range of the sl3 lemma: ``X_i^(a) X_j^(b) X_i^(c)`` for ``b <= a + c``."""
    K, x, (i, j), k = B.k, p["x"], p["pair"], _w(p)
    a, b, c = p["a"], p["b"], p["c"]
    lhs = _word(B, [(x, i, a), (x, j, b), (x, i, c)], k)
    terms, exact = sl3_family(a, b, c)
    assert exact
    rhs = _sum(K, [(m, _word(B, [(x, j, ell), (x, i, a + c), (x, j, b - ell)], k)) for ell, m in terms],
               k, lhs.target)
    return _compare(lhs, rhs, K)


# -- braid suite -----------------------------------------------------------------------


@_relation("braid", _filtered(_cells(i=_hat, j=_hat, k=_weights),
                              lambda cfg, p: p["i"] < p["j"] and root_pairing(p["i"], p["j"], cfg.n) in (0, -1)))
def _braid(B, p):
    K, i, j, k = B.k, p["i"], p["j"], _w(p)
    if root_pairing(i, j, B.n) == -1:
        return _compare(_word(B, [("T", i), ("T", j), ("T", i)], k), _word(B, [("T", j), ("T", i), ("T", j)], k), K)
    return _compare(_word(B, [("T", i), ("T", j)], k), _word(B, [("T", j), ("T", i)], k), K)


@_relation("TTE", _cells(x=("E", "F"), pair=_pairs(-1), k=_weights))
def _tte(B, p):
    """``T_i T_j X_i = X_j T_i T_j`` for adjacent nodes."""
    K, x, (i, j), k = B.k, p["x"], p["pair"], _w(p)
    return _compare(_word(B, [("T", i), ("T", j), (x, i, 1)], k), _word(B, [(x, j, 1), ("T", i), ("T", j)], k), K)


@_relation("TEFT", _cells(i=_hat, p=(1, 2), k=_weights))
def _teft(B, p):
    """``F_i^(p) T'_i 1_k = T'_i E_i^(p) 1_k <p(<k, alpha_i> + p)>``."""
    K, i, pw, k = B.k, p["i"], p["p"], _w(p)
    lam = _lam(B, i, k)
    lhs = _word(B, [("F", i, pw), ("Tp", i)], k)
    rhs = _word(B, [("Tp", i), ("E", i, pw)], k).scale(K.shift_value(pw * (lam + pw), 0, 0))
    return _compare(lhs, rhs, K)


def _slot_pair(i: int, n: int) -> tuple[int, int]:
    return (n - 1, 0) if i == 0 else (i - 1, i)


@_relation("canonical", _filtered(_cells(i=_hat, k=_weights),
                                  lambda cfg, p: 0 in (Weight(tuple(p["k"]))[s] for s in _slot_pair(p["i"], cfg.n))))
def _canonical(B, p):
    """``(T'_i)^2 1_k = 1_k`` when one of the two swapped slots is empty."""
    K, i, k = B.k, p["i"], _w(p)
    return _compare(_word(B, [("Tp", i), ("Tp", i)], k), K.identity(k), K)


@_relation("rotation", _cells(x=("E", "F"), i=_hat, k=_weights))
def _rotation(B, p):
    """``X_i R' = R' X_{i+1}`` (indices mod n) wherever ``R'`` is defined on both sides."""
    K, x, i, k = B.k, p["x"], p["i"], _w(p)
    n = B.n
    j = (i + 1) % n
    if k[n - 1] != 0:
        return CheckResult(True, skipped=True, note="R' undefined at the source")
    inner = K.divided_power(x, j, 1, k)
    if inner.target[n - 1] != 0 or not inner.target.is_nonzero_object(B.cfg.N):
        if not inner.target.is_nonzero_object(B.cfg.N):
            lhs = _word(B, [(x, i, 1), ("R",)], k)
            return _compare(lhs, K.zero(k, lhs.target), K)
        return CheckResult(True, skipped=True, note="R' undefined after X_{i+1}")
    lhs = _word(B, [(x, i, 1), ("R",)], k)
    rhs = _word(B, [("R",), (x, j, 1)], k)
    return _compare(lhs, rhs, K)


@_relation("A-inverse", _cells())
def _a_inverse(B, p):
    """``A^(N) A^(-N) = A^(-N) A^(N) = 1_eta``."""
    K, N = B.k, B.cfg.N
    h = eta(B.n, N)
    one = K.identity(h)
    res = _compare(B.A(N) @ B.A(-N), one, K)
    if not res.passed:
        return res
    return _compare(B.A(-N) @ B.A(N), one, K)


# -- affine node cross-checks ------------------------------------------------------------


def _unit_of(lhs: Operator, rhs: Operator) -> LaurentPoly | None:
    """The scalar ``u`` with ``lhs = u * rhs`` if it exists and is a unit ``+-q^a``."""
    if lhs.target != rhs.target:
        return None
    u = None
    for r, c, x in rhs.matrix.entries():
        y = lhs.matrix.entry(r, c)
        if not y:
            return None
        if not x.divides(y):
            return None
        cand = y.exact_div(x)
        if u is None:
            u = cand
        elif cand != u:
            return None
    if u is None:
        return ONE if lhs.matrix.is_zero() else None
    if not u.is_unit() or rhs.scale(u).matrix != lhs.matrix:
        return None
    return u


def _conjugation_check(B: BraidModel, j: int) -> CheckResult:
    K = B.k
    unit = None
    for x in ("E", "F"):
        for k in object_weights(B.n, B.cfg.N):
            lhs = _word(B, [("Ti", j), ("Ti", 0), (x, j, 1), ("T", 0), ("T", j)], k)
            rhs = K.divided_power(x, 0, 1, k)
            if rhs.matrix.is_zero() and lhs.matrix.is_zero():
                continue
            u = _unit_of(lhs, rhs)
            if u is None:
                return CheckResult(False, f"{x}_0 at k={k} is not a unit multiple of the conjugate")
            if unit is None:
                unit = u
            elif u != unit:
                return CheckResult(False, f"unit {u} at k={k} ({x}) differs from {unit}", unit=str(unit))
    return CheckResult(True, unit=str(unit if unit is not None else ONE))


def _affine_cells(cfg: ModelConfig) -> list[dict]:
    return [{}] if cfg.n >= 3 else []


@_relation("E0def", _affine_cells)
def _e0def(B, p):
    """``E_0 = T_1^-1 T_0^-1 E_1 T_0 T_1`` up to one weight-independent unit (also for F)."""
    return _conjugation_check(B, 1)


@_relation("app1", _affine_cells)
def _app1(B, p):
    """``E_0 = T_{n-1}^-1 T_0^-1 E_{n-1} T_0 T_{n-1}`` up to one weight-independent unit (also for F)."""
    return _conjugation_check(B, B.n - 1)


@_relation("T0def", _affine_cells)
def _t0def(B, p):
    """``T_0 (T_1 ... T_{n-1} ... T_1)`` is diagonal and invertible on every weight space."""
    n = B.n
    pal = [("T", i) for i in list(range(1, n)) + list(range(n - 2, 0, -1))]
    for k in object_weights(n, B.cfg.N):
        op = _word(B, [("T", 0)] + pal, k)
        if op.target != k:
            return CheckResult(False, f"composite does not preserve k={k}")
        if not op.matrix.is_diagonal():
            for r, c, x in op.matrix.entries():
                if r != c:
                    rows = B.k.basis(k)
                    return CheckResult(False, f"off-diagonal entry {x} at ({rows[r]}, {rows[c]}), k={k}")
        try:
            op.inverse()
        except NotInvertible as exc:
            return CheckResult(False, f"not invertible at k={k}: {exc}")
    return CheckResult(True)


@_relation("cor-app1-EF", _cells(k=_weights))
def _cor_ef(B, p):
    """``E_0 F_0 1_k - F_0 E_0 1_k = [<k, alpha_0>] 1_k`` with the genuine affine root."""
    return _sl2(B, {"i": 0, "k": p["k"]})


@_relation("cor-app1-commute", _cells(x=("E", "F"), i=lambda cfg: range(1, cfg.n), k=_weights))
def _cor_commute(B, p):
    """``E_0 F_i = F_i E_0`` and ``F_0 E_i = E_i F_0`` for finite ``i``."""
    K, x, i, k = B.k, p["x"], p["i"], _w(p)
    y = "F" if x == "E" else "E"
    return _compare(_word(B, [(x, 0, 1), (y, i, 1)], k), _word(B, [(y, i, 1), (x, 0, 1)], k), K)


def _corruptions(conv: Convention) -> list[Convention]:
    flip = {"left": "right", "right": "left"}
    e_sign = conv.e_sign or 1
    f_sign = conv.f_sign or -1
    return [
        replace(conv, e_sign=-e_sign, f_sign=f_sign),
        replace(conv, e_side=flip[conv.e_side], e_sign=e_sign, f_sign=f_sign),
        replace(conv, f_side=flip[conv.f_side], e_sign=e_sign, f_sign=f_sign),
    ]


@_relation("negative-control", _cells())
def _negative(B, p):
    """The sl2 relation under corrupted conventions must fail with a witness.

    In small configurations (``N = 1``, or the skew side with two colours and
    two slots) every candidate convention satisfies the action axioms; the
    cell is skipped there because there is nothing to detect.
    """
    cfg = B.cfg
    if cfg.point == "classical":
        return CheckResult(True, skipped=True, note="conventions coincide at the classical point")
    for bad in _corruptions(cfg.convention):
        res = _sl2_everywhere(replace(cfg, convention=bad))
        if not res.passed:
            return CheckResult(True, witness=f"{bad.name} fails sl2: {res.witness}")
    if all(_sl2_everywhere(replace(cfg, convention=c)).passed for c in Convention.candidates()):
        return CheckResult(True, skipped=True, note="no candidate convention fails here")
    return CheckResult(False, "every corrupted convention passed sl2")


def _sl2_everywhere(cfg: ModelConfig) -> CheckResult:
    B = _braid_model(cfg)
    for i in range(cfg.n):
        for k in object_weights(cfg.n, cfg.N):
            res = _sl2(B, {"i": i, "k": k})
            if not res.passed:
                return res
    return CheckResult(True)


@_relation("EF-equal", _cells(i=_hat, k=_weights))
def _ef_equal(B, p):
    """Impossible constraint used as a negative control for the bootstrap: ``E_i F_i = F_i E_i``."""
    K, i, k = B.k, p["i"], _w(p)
    return _compare(_word(B, [("E", i, 1), ("F", i, 1)], k), _word(B, [("F", i, 1), ("E", i, 1)], k), K)


SUITES = {
    "relations": ["sl2", "sl2-divided", "EiFj-commute", "EE-commute", "divided-power", "merge", "serre", "sl3"],
    "braid": ["braid", "TTE", "TEFT", "canonical", "rotation"],
    "A": ["A-inverse"],
    "appendix": ["E0def", "app1", "T0def", "cor-app1-EF", "cor-app1-commute"],
    "control": ["negative-control"],
}


# -- running ------------------------------------------------------------------------------


def check_relation(cfg: ModelConfig, relation_id: str, params: dict) -> CheckResult:
    fn = RELATIONS.get(relation_id)
    if fn is None:
        raise UnknownRelation(relation_id)
    B = _braid_model(cfg)
    try:
        return fn(B, params)
    except PreconditionViolated as exc:
        return CheckResult(True, skipped=True, note=str(exc))
    except NotInvertible as exc:
        return CheckResult(False, f"braid letter not invertible: {exc}")


def relation_cells(cfg: ModelConfig, relation_id: str) -> list[dict]:
    if relation_id not in _CELLS:
        raise UnknownRelation(relation_id)
    return _CELLS[relation_id](cfg)


def _jsonable(params: dict) -> dict:
    out = {}
    for key, val in params.items():
        if isinstance(val, Weight):
            val = list(val.entries)
        elif isinstance(val, tuple):
            val = list(val)
        out[key] = val
    return out


def _config_key(cfg: ModelConfig) -> dict:
    return {"side": cfg.side, "n": cfg.n, "m": cfg.m, "N": cfg.N,
            "convention": cfg.convention.name, "point": cfg.point}


def run_cells(cfg: ModelConfig, relation_id: str) -> list[dict]:
    """All cells of one relation on one configuration, as report rows."""
    rows = []
    for params in relation_cells(cfg, relation_id):
        res = check_relation(cfg, relation_id, params)
        row = {"config": _config_key(cfg), "relation": relation_id, "params": _jsonable(params),
               "status": res.status}
        if res.witness:
            row["witness"] = res.witness
        if res.unit is not None:
            row["unit"] = res.unit
        if res.note:
            row["note"] = res.note
        rows.append(row)
    return rows


def _task(args):
    cfg, rel = args
    return run_cells(cfg, rel)


def _row_key(row: dict) -> str:
    c = row["config"]
    return json.dumps([c["side"], c["n"], c["m"], c["N"], c["point"], row["relation"], row["params"]])


def run_suite(configs: Iterable[ModelConfig], relations: Iterable[str], workers: int = 1) -> list[dict]:
    """Run every relation on every configuration; rows sorted by cell key."""
    tasks = [(cfg, rel) for cfg in configs for rel in relations]
    rows: list[dict] = []
    if workers <= 1 or len(tasks) <= 1:
        for t in tasks:
            rows.extend(_task(t))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(_task, tasks):
                rows.extend(chunk)
    rows.sort(key=_row_key)
    return rows


def report_lines(rows: list[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in rows)


def ledger_convention(side: str) -> Convention:
    """The convention frozen by the bootstrap (the built-in default if no ledger exists)."""
    if DEFAULT_LEDGER.exists():
        return load_convention(DEFAULT_LEDGER, side)
    return Convention()


def sweep_configs(sides=("symmetric", "skew"), ns=(2, 3, 4), ms=(2, 3), Ns=(1, 2, 3),
                  convention: Convention | dict | None = None, point: str = "generic") -> list[ModelConfig]:
    """Model configurations of a sweep; ``convention`` may map side -> convention."""
    out = []
    for side in sides:
        if point == "classical":
            conv = TRIVIAL
        elif isinstance(convention, dict):
            conv = convention[side]
        elif convention is None:
            conv = ledger_convention(side)
        else:
            conv = convention
        for n, m, N in product(ns, ms, Ns):
            out.append(ModelConfig(side, n, m, N, conv, point))
    return out
