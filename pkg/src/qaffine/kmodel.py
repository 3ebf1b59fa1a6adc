"""Exact matrix models of the decategorified level-zero action.

Two Grothendieck-group models are realised over ``Z[q, q^-1]``:

* the skew side ``Lambda^{k_1}(C^m) x ... x Lambda^{k_n}(C^m)``;
* the symmetric side ``Sym^{k_1}(C^m) x ... x Sym^{k_n}(C^m)``.

A basis vector is a tuple of ``n`` slots, each a sorted tuple of colours in
``1..m`` (a set on the skew side, a multiset on the symmetric side).
Equivalently it is an ``n x m`` occupation table, one column per colour.

``E_i`` moves one colour from slot ``i`` to slot ``i+1`` and ``F_i`` moves it
back. Every coefficient is written in the grading unit ``v`` = class of
``<1>`` (``q`` on the symmetric side, ``-q^-1`` on the skew side), so that
decategorified direct sums ``(+)_f X`` become ``f(v) [X]`` uniformly. A move
in colour ``c`` picks up the quantum multiplicity of that colour in the
source slot (always 1 on the skew side) and ``v^w`` where ``w`` is a signed
count of ``h_i = #slot(i+1) - #slot(i)`` over the colours strictly to one
side of ``c``. Which side and sign is the :class:`Convention`.

``E_0``/``F_0`` are obtained by conjugating ``E_{n-1}``/``F_{n-1}`` with the
cyclic rotation of slots.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

from .linalg import LMatrix, NotInvertible, inverse, rank
from .qlaurent import ONE, Q, ZERO, LaurentPoly, grading_unit, qint
from .wordlang.flow import UnsupportedFactor, Zero, factor_sources, target_weight, weight_flow
from .wordlang.syntax import WordExpr
from .weightlat import (ConfigMismatch, DimensionMismatch, Weight, check_n_greater_than_N, pairing,
                      reflect, root, rotate)

__all__ = [
    "Convention",
    "ModelConfig",
    "KModel",
    "Operator",
    "BasisVector",
    "UnsupportedFactor",
    "enumerate_basis",
    "load_convention",
    "evaluate",
    "dump_operator",
    "parse_dump",
    "check_relation",
    "BASIS_ORDERING",
    "DEFAULT_LEDGER",
]

BasisVector = tuple  # tuple of n sorted tuples of colours

DEFAULT_LEDGER = Path(__file__).with_name("data") / "convention_ledger.json"


@dataclass(frozen=True)
class Convention:
    """Exponent convention for single moves.

    ``e_side``/``f_side`` say which colours are counted (``"left"`` means
    colours with a smaller index than the moving one), ``e_sign``/``f_sign``
    the sign of the count. ``rot`` weights the cyclic rotation used for
    ``E_0``/``F_0`` by ``v^(rot * wrap)``, where ``wrap`` counts colours
    occupied in the last slot; the default 0 is the plain rotation.
    """

    e_side: str = "left"
    e_sign: int = 1
    f_side: str = "right"
    f_sign: int = -1
    rot: int = 0

    @property
    def name(self) -> str:
        def part(side, sign):
            return ("L" if side == "left" else "R") + ("+" if sign > 0 else "-" if sign < 0 else "0")
        base = f"E{part(self.e_side, self.e_sign)}F{part(self.f_side, self.f_sign)}"
        return base if not self.rot else f"{base}r{self.rot:+d}"

    @classmethod
    def from_name(cls, name: str) -> Convention:
        side = {"L": "left", "R": "right"}
        sign = {"+": 1, "-": -1, "0": 0}
        rot = 0
        if "r" in name[6:]:
            name, r = name[:6], name[7:]
            rot = int(r)
        if len(name) != 6 or name[0] != "E" or name[3] != "F":
            raise ValueError(f"bad convention name {name!r}")
        return cls(side[name[1]], sign[name[2]], side[name[4]], sign[name[5]], rot)

    @classmethod
    def candidates(cls) -> list[Convention]:
        out = []
        for es, eg, fs, fg in itertools.product(("left", "right"), (1, -1), ("left", "right"), (1, -1)):
            out.append(cls(es, eg, fs, fg))
        return out


TRIVIAL = Convention("right", 0, "left", 0)


def load_convention(path: Path | str = DEFAULT_LEDGER, side: str = "symmetric") -> Convention:
    data = json.loads(Path(path).read_text())
    return Convention.from_name(data["selected"][side])


@dataclass(frozen=True)
class ModelConfig:
    """A model instance. ``point`` is ``"generic"`` or ``"classical"`` (grading unit set to 1)."""

    side: str
    n: int
    m: int
    N: int
    convention: Convention = field(default_factory=Convention)
    point: str = "generic"

    def __post_init__(self):
        if self.side not in ("skew", "symmetric"):
            raise ConfigMismatch(f"unknown side {self.side!r}")
        if self.point not in ("generic", "classical"):
            raise ConfigMismatch(f"unknown evaluation point {self.point!r}")
        if self.m < 1 or self.n < 1 or self.N < 0:
            raise ConfigMismatch("need n >= 1, m >= 1, N >= 0")

    def require_n_greater_than_N(self) -> None:
        check_n_greater_than_N(self.n, self.N)

    @property
    def unit(self) -> LaurentPoly:
        """Class of ``<1>`` at this evaluation point."""
        if self.point == "classical":
            return ONE
        return grading_unit(self.side)

    def label(self) -> str:
        return f"{self.side} n={self.n} m={self.m} N={self.N} conv={self.convention.name} {self.point}"


def enumerate_basis(cfg: ModelConfig, k: Weight) -> list[BasisVector]:
    """Lexicographically ordered basis of the weight space ``k`` (empty for zero objects)."""
    if k.n != cfg.n:
        raise ConfigMismatch(f"weight {k} does not have n={cfg.n} entries")
    return list(_basis(cfg.side, cfg.m, k.entries))


@lru_cache(maxsize=None)
def _basis(side: str, m: int, k: tuple[int, ...]) -> tuple[BasisVector, ...]:
    if any(x < 0 for x in k):
        return ()
    colours = range(1, m + 1)
    pick = itertools.combinations if side == "skew" else itertools.combinations_with_replacement
    per_slot = [list(pick(colours, x)) for x in k]
    return tuple(itertools.product(*per_slot))


@dataclass(frozen=True)
class Operator:
    """A linear map ``K(source) -> K(target)`` with rows indexed by the target basis."""

    source: Weight
    target: Weight
    matrix: LMatrix

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def __matmul__(self, other: Operator) -> Operator:
        if other.target != self.source:
            raise DimensionMismatch(f"cannot compose {self.source}<-... with ...->{other.target}")
        return Operator(other.source, self.target, self.matrix @ other.matrix)

    def __add__(self, other: Operator) -> Operator:
        self._check_same(other)
        return Operator(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other: Operator) -> Operator:
        self._check_same(other)
        return Operator(self.source, self.target, self.matrix - other.matrix)

    def scale(self, s: LaurentPoly | int) -> Operator:
        return Operator(self.source, self.target, self.matrix.scale(s))

    def _check_same(self, other: Operator) -> None:
        if (self.source, self.target) != (other.source, other.target):
            raise DimensionMismatch("operators have different source/target weights")

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Operator):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.matrix == other.matrix

    __hash__ = None

    def specialize_at_one(self) -> Operator:
        return Operator(self.source, self.target, self.matrix.map(lambda x: LaurentPoly.const(x.at_one())))

    def inverse(self) -> Operator:
        return Operator(self.target, self.source, inverse(self.matrix))

    def rank(self) -> int:
        return rank(self.matrix)


class KModel:
    """Generators of the action on one :class:`ModelConfig`, with memoised matrices."""

    def __init__(self, cfg: ModelConfig):
        self.cfg = cfg
        self.unit = cfg.unit
        self._cache: dict = {}
        self._index: dict[tuple[int, ...], dict[BasisVector, int]] = {}

    # -- bases ------------------------------------------------------------------

    def basis(self, k: Weight) -> list[BasisVector]:
        if k.n != self.cfg.n:
            raise ConfigMismatch(f"weight {k} does not have n={self.cfg.n} entries")
        if not k.is_nonzero_object(self.cfg.N):
            return []
        return list(_basis(self.cfg.side, self.cfg.m, k.entries))

    def dim(self, k: Weight) -> int:
        return len(self.basis(k))

    def index(self, k: Weight) -> dict[BasisVector, int]:
        idx = self._index.get(k.entries)
        if idx is None:
            idx = {b: j for j, b in enumerate(self.basis(k))}
            self._index[k.entries] = idx
        return idx

    def identity(self, k: Weight) -> Operator:
        return Operator(k, k, LMatrix.identity(self.dim(k)))

    def zero(self, source: Weight, target: Weight) -> Operator:
        return Operator(source, target, LMatrix.zeros(self.dim(target), self.dim(source)))

    # -- quantum numbers in the grading unit ------------------------------------

    def vpow(self, e: int) -> LaurentPoly:
        return self.unit ** e if e >= 0 or self.unit.is_unit() else ZERO

    def vint(self, a: int) -> LaurentPoly:
        """``[a]`` evaluated at the grading unit."""
        if self.cfg.point == "classical":
            return LaurentPoly.const(a)
        return _vint(self.cfg.side, a)

    def at_unit(self, f: LaurentPoly) -> LaurentPoly:
        """A multiplicity ``f(q)`` read as a sum of ``<a>`` shifts, i.e. ``f`` at the grading unit."""
        if self.cfg.point == "classical":
            return LaurentPoly.const(f.at_one())
        if self.cfg.side == "skew":
            return f.substitute(-1, -1)
        return f

    def shift_value(self, angle: int, cohom: int, internal: int) -> LaurentPoly:
        """Class of ``<angle>[cohom]{internal}``."""
        q_val = Q
        if self.cfg.point == "classical":
            # v = 1 means q = 1 on the symmetric side and q = -1 on the skew side
            q_val = ONE if self.cfg.side == "symmetric" else -ONE
        out = self.unit ** angle * q_val ** internal
        return -out if cohom % 2 else out

    def vfactorial(self, a: int) -> LaurentPoly:
        out = ONE
        for j in range(1, a + 1):
            out = out * self.vint(j)
        return out

    # -- single moves -------------------------------------------------------------

    def _occupation(self, b: BasisVector) -> list[list[int]]:
        m = self.cfg.m
        occ = [[0] * (m + 1) for _ in range(self.cfg.n)]
        for s, slot in enumerate(b):
            for c in slot:
                occ[s][c] += 1
        return occ

    def _moves(self, b: BasisVector, src: int, dst: int, kind: str) -> list[tuple[BasisVector, LaurentPoly]]:
        """All single moves of one colour from slot ``src`` to ``dst``, with coefficients.

        ``kind`` is ``"E"`` or ``"F"``; it selects the exponent convention.
        The balancing count ``h = #dst - #src`` for ``E`` moves and
        ``#src - #dst`` reversed for ``F`` moves always refers to the
        ``E``-direction pair (lower slot -> upper slot).
        """
        conv = self.cfg.convention
        side, sign = (conv.e_side, conv.e_sign) if kind == "E" else (conv.f_side, conv.f_sign)
        occ = self._occupation(b)
        lo, hi = (src, dst) if kind == "E" else (dst, src)
        m = self.cfg.m
        h = [occ[hi][c] - occ[lo][c] for c in range(m + 1)]
        out = []
        skew = self.cfg.side == "skew"
        for c in sorted(set(b[src])):
            if skew and occ[dst][c]:
                continue
            if side == "left":
                w = sum(h[1:c])
            else:
                w = sum(h[c + 1:])
            coeff = self.vint(occ[src][c]) * self.vpow(sign * w)
            new = list(b)
            s_list = list(b[src])
            s_list.remove(c)
            new[src] = tuple(s_list)
            new[dst] = tuple(sorted(b[dst] + (c,)))
            out.append((tuple(new), coeff))
        return out

    def _slots(self, i: int) -> tuple[int, int]:
        if not 1 <= i <= self.cfg.n - 1:
            raise IndexError(f"finite root index {i} outside 1..{self.cfg.n - 1}")
        return i - 1, i

    # -- generators ----------------------------------------------------------------

    def divided_power(self, kind: str, i: int, a: int, k: Weight) -> Operator:
        """``E_i^(a) 1_k`` or ``F_i^(a) 1_k`` for any ``i`` in ``0..n-1``."""
        if k.n != self.cfg.n:
            raise ConfigMismatch(f"weight {k} does not have n={self.cfg.n} entries")
        key = (kind, i, a, k.entries)
        op = self._cache.get(key)
        if op is None:
            if i == 0:
                op = self._rotated(kind, a, k)
            else:
                op = self._finite(kind, i, a, k)
            self._cache[key] = op
        return op

    def E(self, i: int, k: Weight, a: int = 1) -> Operator:
        return self.divided_power("E", i, a, k)

    def F(self, i: int, k: Weight, a: int = 1) -> Operator:
        return self.divided_power("F", i, a, k)

    def _finite(self, kind: str, i: int, a: int, k: Weight) -> Operator:
        if a < 0:
            raise ValueError("divided power must be nonnegative")
        lo, hi = self._slots(i)
        alpha = root(i, self.cfg.n)
        target = k + a * alpha if kind == "E" else k - a * alpha
        src, dst = (lo, hi) if kind == "E" else (hi, lo)
        if a == 0:
            return self.identity(k)
        sbasis = self.basis(k)
        tindex = self.index(target)
        cols: dict[int, dict[int, LaurentPoly]] = {}
        norm = self.vfactorial(a)
        if sbasis and tindex:
            for j, b in enumerate(sbasis):
                # all ordered sequences of a single moves, then exact normalisation
                layer = {b: ONE}
                for _ in range(a):
                    nxt: dict[BasisVector, LaurentPoly] = {}
                    for vec, coeff in layer.items():
                        for new, c in self._moves(vec, src, dst, kind):
                            nxt[new] = nxt.get(new, ZERO) + coeff * c
                    layer = {v: c for v, c in nxt.items() if c}
                col = {}
                for vec, coeff in layer.items():
                    col[tindex[vec]] = coeff.exact_div(norm)
                col = {r: x for r, x in col.items() if x}
                if col:
                    cols[j] = col
        return Operator(k, target, LMatrix(len(tindex), len(sbasis), cols))

    def rotation(self, k: Weight) -> Operator:
        """Combinatorial rotation ``K(k) -> K(r.k)``: slot ``s+1`` becomes slot ``s``."""
        key = ("rho", k.entries)
        op = self._cache.get(key)
        if op is None:
            target = rotate(k)
            sbasis = self.basis(k)
            tindex = self.index(target)
            rot = self.cfg.convention.rot
            cols = {}
            for j, b in enumerate(sbasis):
                wrap = len(b[0])
                cols[j] = {tindex[b[1:] + b[:1]]: self.vpow(rot * wrap) if rot else ONE}
            op = Operator(k, target, LMatrix(len(tindex), len(sbasis), cols))
            self._cache[key] = op
        return op

    def rotation_inverse(self, k: Weight) -> Operator:
        """Inverse of :meth:`rotation` as a map ``K(k) -> K(r^-1.k)``."""
        src = rotate(k, -1)
        rho = self.rotation(src)
        m = rho.matrix
        cols: dict[int, dict[int, LaurentPoly]] = {}
        for r, c, x in m.entries():
            cols.setdefault(r, {})[c] = x ** -1
        return Operator(k, src, LMatrix(m.ncols, m.rows, cols))

    def _rotated(self, kind: str, a: int, k: Weight) -> Operator:
        # E_0 = rho^-1 E_{n-1} rho on K(k): rho moves slot 1 to the end, so the
        # move n -> 1 becomes the move n-1 -> n.
        n = self.cfg.n
        if n < 2:
            raise ConfigMismatch("E_0 needs n >= 2")
        alpha = root(0, n)
        target = k + a * alpha if kind == "E" else k - a * alpha
        if not self.basis(k) or not self.basis(target):
            return self.zero(k, target)
        inner = self.divided_power(kind, n - 1, a, rotate(k))
        out = self.rotation_inverse(inner.target) @ inner @ self.rotation(k)
        assert out.target == target, (out.target, target)
        return out


@lru_cache(maxsize=None)
def _vint(side: str, a: int) -> LaurentPoly:
    if side == "symmetric":
        return qint(a)
    # [a] at v = -q^-1
    return qint(a).substitute(-1, -1)


# -- evaluation of words ---------------------------------------------------------------

BASIS_ORDERING = "lex-slots-v1"


@lru_cache(maxsize=64)
def _braid_model(cfg: ModelConfig):
    from .braidops import BraidModel

    return BraidModel(KModel(cfg))


def _model_of(model) -> KModel:
    if isinstance(model, ModelConfig):
        return _braid_model(model).k
    if isinstance(model, KModel):
        return model
    return model.k  # a BraidModel


def _braids_of(model):
    if isinstance(model, ModelConfig):
        return _braid_model(model)
    if isinstance(model, KModel):
        b = model._cache.get("braids")
        if b is None:
            from .braidops import BraidModel

            b = model._cache["braids"] = BraidModel(model)
        return b
    return model


def evaluate(model, w: WordExpr, source: Weight | None = None) -> Operator:
    """Matrix of ``w 1_source``; factors compose right to left.

    ``model`` may be a :class:`ModelConfig`, :class:`KModel` or
    ``BraidModel``. Words whose weight flow leaves the nonzero objects give
    the zero operator. Loop generators and ``phi`` letters raise
    :class:`UnsupportedFactor`.
    """
    K = _model_of(model)
    cfg = K.cfg
    if source is None:
        source = w.source_weight
        if source is None:
            raise ValueError("evaluate needs a source weight or a trailing idempotent")
    if source.n != cfg.n:
        raise DimensionMismatch(f"source {source} does not have n={cfg.n} entries")
    for f in w:
        if f.kind in ("Eloop1", "Floop-1", "Phi", "Phiprime"):
            raise UnsupportedFactor(f"{f} exists only symbolically and has no matrix")
    flow = weight_flow(w, source, cfg.N)
    if isinstance(flow, Zero):
        try:
            target = target_weight(w, source)
        except Exception:
            target = source
        return K.zero(source, target)
    B = None
    op = K.identity(source)
    cur = source
    for f in reversed(w.factors):
        kind = f.kind
        if kind == "Idem":
            continue
        if kind == "Shift":
            op = op.scale(K.shift_value(*f.shift))
            continue
        if kind in ("E", "F"):
            step = K.divided_power(kind, f.index, f.power, cur)
        else:
            if B is None:
                B = _braids_of(model)
            if kind == "T":
                step = B.T(f.index, cur) if f.power == 1 else B.T_inv(f.index, cur)
            elif kind == "Tprime":
                step = B.Tprime(f.index, cur) if f.power == 1 else B.Tprime_inv(f.index, cur)
            elif kind == "Rprime":
                step = B.Rprime(cur) if f.power == 1 else B.Rprime(rotate(cur, -1)).inverse()
            else:
                raise UnsupportedFactor(f"no matrix for {f}")
        op = step @ op
        cur = step.target
    return op


def dump_operator(cfg: ModelConfig, op: Operator) -> str:
    """Text dump: a header then one line per target basis vector, entries separated by ``" ; "``."""
    lines = [
        f"# side={cfg.side} n={cfg.n} m={cfg.m} N={cfg.N} convention={cfg.convention.name} point={cfg.point}",
        f"# source={op.source} target={op.target}",
        f"# basis={BASIS_ORDERING} rows={op.shape[0]} cols={op.shape[1]}",
    ]
    for row in op.matrix.to_dense():
        lines.append(" ; ".join(str(x) for x in row))
    return "\n".join(lines) + "\n"


def parse_dump(text: str) -> tuple[dict[str, str], LMatrix]:
    from .qlaurent import parse_poly

    header: dict[str, str] = {}
    rows: list[list[LaurentPoly]] = []
    for line in text.splitlines():
        if line.startswith("#"):
            for part in line[1:].split():
                key, _, val = part.partition("=")
                header[key] = val
        elif line.strip():
            rows.append([parse_poly(x.strip()) for x in line.split(" ; ")])
    ncols = int(header.get("cols", len(rows[0]) if rows else 0))
    mat = LMatrix.from_dense(rows) if rows else LMatrix(0, ncols)
    if rows and mat.ncols != ncols:
        raise ValueError("dump column count does not match its header")
    return header, mat


def check_relation(cfg: ModelConfig, relation_id: str, params: dict | None = None):
    """Run one relation cell; see :mod:`qaffine.relations`."""
    from .relations import check_relation as _check

    return _check(cfg, relation_id, params or {})
