"""Sparse matrices over ``Z[q, q^-1]`` and exact linear algebra over ``Q(q)``.

Rank and inversion use fraction-free (Bareiss) elimination, so every
intermediate division is exact inside the Laurent ring; nothing ever leaves
``Z[q, q^-1]`` except the final division by the determinant, which must be
exact for the inverse to exist in the ring.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .qlaurent import ONE, ZERO, InexactDivision, LaurentPoly

__all__ = ["LMatrix", "rank", "inverse", "SpanBasis", "NotInvertible"]


class NotInvertible(ArithmeticError):
    pass


class LMatrix:
    """Sparse ``rows x cols`` matrix stored column-wise: ``cols[c] = {r: entry}``."""

    __slots__ = ("rows", "ncols", "cols")

    def __init__(self, rows: int, ncols: int, cols: dict[int, dict[int, LaurentPoly]] | None = None):
        self.rows = rows
        self.ncols = ncols
        self.cols = cols if cols is not None else {}

    @classmethod
    def zeros(cls, rows: int, ncols: int) -> LMatrix:
        return cls(rows, ncols, {})

    @classmethod
    def identity(cls, size: int, scale: LaurentPoly = ONE) -> LMatrix:
        if not scale:
            return cls(size, size, {})
        return cls(size, size, {i: {i: scale} for i in range(size)})

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[LaurentPoly | int]]) -> LMatrix:
        rows = len(dense)
        ncols = len(dense[0]) if rows else 0
        cols: dict[int, dict[int, LaurentPoly]] = {}
        for r, row in enumerate(dense):
            for c, x in enumerate(row):
                x = LaurentPoly._coerce(x)
                if x:
                    cols.setdefault(c, {})[r] = x
        return cls(rows, ncols, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.ncols

    def entry(self, r: int, c: int) -> LaurentPoly:
        return self.cols.get(c, {}).get(r, ZERO)

    def entries(self) -> Iterable[tuple[int, int, LaurentPoly]]:
        for c in sorted(self.cols):
            col = self.cols[c]
            for r in sorted(col):
                yield r, c, col[r]

    def to_dense(self) -> list[list[LaurentPoly]]:
        out = [[ZERO] * self.ncols for _ in range(self.rows)]
        for r, c, x in self.entries():
            out[r][c] = x
        return out

    def nnz(self) -> int:
        return sum(len(col) for col in self.cols.values())

    def is_zero(self) -> bool:
        return not self.cols

    def __matmul__(self, other: LMatrix) -> LMatrix:
        if self.ncols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out: dict[int, dict[int, LaurentPoly]] = {}
        mine = self.cols
        for c, bcol in other.cols.items():
            acc: dict[int, LaurentPoly] = {}
            for k, b in bcol.items():
                acol = mine.get(k)
                if not acol:
                    continue
                for r, a in acol.items():
                    v = acc.get(r)
                    acc[r] = a * b if v is None else v + a * b
            acc = {r: v for r, v in acc.items() if v}
            if acc:
                out[c] = acc
        return LMatrix(self.rows, other.ncols, out)

    def _combine(self, other: LMatrix, sign: int) -> LMatrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        out = {c: dict(col) for c, col in self.cols.items()}
        for c, col in other.cols.items():
            tgt = out.setdefault(c, {})
            for r, x in col.items():
                v = tgt.get(r, ZERO) + (x if sign > 0 else -x)
                if v:
                    tgt[r] = v
                else:
                    tgt.pop(r, None)
            if not tgt:
                del out[c]
        return LMatrix(self.rows, self.ncols, out)

    def __add__(self, other: LMatrix) -> LMatrix:
        return self._combine(other, 1)

    def __sub__(self, other: LMatrix) -> LMatrix:
        return self._combine(other, -1)

    def __neg__(self) -> LMatrix:
        return self.scale(-ONE)

    def scale(self, s: LaurentPoly | int) -> LMatrix:
        s = LaurentPoly._coerce(s)
        if not s:
            return LMatrix(self.rows, self.ncols, {})
        return LMatrix(self.rows, self.ncols,
                       {c: {r: x * s for r, x in col.items()} for c, col in self.cols.items()})

    def map(self, fn: Callable[[LaurentPoly], LaurentPoly]) -> LMatrix:
        out = {}
        for c, col in self.cols.items():
            new = {}
            for r, x in col.items():
                y = fn(x)
                if y:
                    new[r] = y
            if new:
                out[c] = new
        return LMatrix(self.rows, self.ncols, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LMatrix):
            return NotImplemented
        return self.shape == other.shape and self.cols == other.cols

    __hash__ = None

    def is_diagonal(self) -> bool:
        return all(set(col) == {c} for c, col in self.cols.items())

    def first_difference(self, other: LMatrix) -> tuple[int, int, LaurentPoly, LaurentPoly] | None:
        """First ``(row, col, self_entry, other_entry)`` where the two matrices differ."""
        keys = sorted({(r, c) for r, c, _ in self.entries()} | {(r, c) for r, c, _ in other.entries()},
                      key=lambda rc: (rc[1], rc[0]))
        for r, c in keys:
            a, b = self.entry(r, c), other.entry(r, c)
            if a != b:
                return r, c, a, b
        return None

    def column_vector(self) -> list[LaurentPoly]:
        """All entries flattened column-major (for span computations on matrices)."""
        out = [ZERO] * (self.rows * self.ncols)
        for r, c, x in self.entries():
            out[c * self.rows + r] = x
        return out

    def __repr__(self) -> str:
        return f"LMatrix({self.rows}x{self.ncols}, nnz={self.nnz()})"


def _bareiss(rows: list[list[LaurentPoly]], ncols_pivot: int) -> tuple[list[list[LaurentPoly]], list[int], LaurentPoly]:
    """In-place fraction-free row reduction; pivots restricted to the first ``ncols_pivot`` columns.

    Returns the reduced rows, pivot columns and the last pivot (the
    determinant up to sign for a square full-rank input).
    """
    m = len(rows)
    width = len(rows[0]) if m else 0
    prev = ONE
    pivots: list[int] = []
    r = 0
    sign = 1
    for c in range(ncols_pivot):
        if r >= m:
            break
        piv = None
        best = None
        for i in range(r, m):
            x = rows[i][c]
            if x:
                size = len(x._c)
                if best is None or size < best:
                    piv, best = i, size
                    if size == 1:
                        break
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            sign = -sign
        p = rows[r][c]
        pr = rows[r]
        for i in range(r + 1, m):
            row = rows[i]
            a = row[c]
            if not a:
                if prev != ONE or p != ONE:
                    rows[i] = [(x * p).exact_div(prev) if x else x for x in row]
                continue
            rows[i] = [((x * p - a * y).exact_div(prev)) if (x or y) else ZERO
                       for x, y in zip(row, pr)]
        pivots.append(c)
        prev = p
        r += 1
    det = prev if sign > 0 else -prev
    return rows, pivots, det


def rank(mat: LMatrix | Sequence[Sequence[LaurentPoly]]) -> int:
    """Rank over the fraction field ``Q(q)``."""
    dense = mat.to_dense() if isinstance(mat, LMatrix) else [list(r) for r in mat]
    if not dense or not dense[0]:
        return 0
    # eliminate along the shorter dimension
    if len(dense) > len(dense[0]):
        dense = [list(col) for col in zip(*dense)]
    dense = [row for row in dense if any(row)]
    if not dense:
        return 0
    _, pivots, _ = _bareiss(dense, len(dense[0]))
    return len(pivots)


def inverse(mat: LMatrix) -> LMatrix:
    """Exact inverse in ``Z[q, q^-1]``; raises :class:`NotInvertible` if the determinant is not a unit."""
    n = mat.rows
    if mat.ncols != n:
        raise NotInvertible("matrix is not square")
    if n == 0:
        return LMatrix(0, 0)
    dense = mat.to_dense()
    aug = [row + [ONE if j == i else ZERO for j in range(n)] for i, row in enumerate(dense)]
    rows, pivots, _ = _bareiss(aug, n)
    if len(pivots) < n:
        raise NotInvertible("singular matrix")
    # back substitution on the fraction-free echelon form
    det = rows[n - 1][n - 1]
    if not det.is_unit():
        raise NotInvertible(f"determinant {det} is not a unit")
    inv_cols: dict[int, dict[int, LaurentPoly]] = {}
    for j in range(n):
        x = [ZERO] * n
        for i in range(n - 1, -1, -1):
            s = rows[i][n + j] * det
            for t in range(i + 1, n):
                if rows[i][t] and x[t]:
                    s = s - rows[i][t] * x[t]
            try:
                x[i] = s.exact_div(rows[i][i])
            except InexactDivision as exc:
                raise NotInvertible("inverse does not clear denominators") from exc
        col = {}
        for i in range(n):
            try:
                v = x[i].exact_div(det)
            except InexactDivision as exc:
                raise NotInvertible("inverse does not clear denominators") from exc
            if v:
                col[i] = v
        if col:
            inv_cols[j] = col
    out = LMatrix(n, n, inv_cols)
    return out


class SpanBasis:
    """Incrementally maintained row-echelon basis of a subspace of ``Q(q)^d``.

    Vectors are kept fraction-free; membership is an exact rank test.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self._rows: list[list[LaurentPoly]] = []
        self._pivots: list[int] = []

    def __len__(self) -> int:
        return len(self._rows)

    def _reduce(self, v: Sequence[LaurentPoly]) -> list[LaurentPoly]:
        v = list(v)
        for row, p in zip(self._rows, self._pivots):
            a = v[p]
            if not a:
                continue
            b = row[p]
            v = [x * b - a * y if (x or y) else ZERO for x, y in zip(v, row)]
            v = _primitive(v)
        return v

    def contains(self, v: Sequence[LaurentPoly]) -> bool:
        return not any(self._reduce(v))

    def add(self, v: Sequence[LaurentPoly]) -> bool:
        """Add ``v``; returns True if it enlarged the span."""
        r = self._reduce(v)
        for p, x in enumerate(r):
            if x:
                self._rows.append(r)
                self._pivots.append(p)
                return True
        return False


def _primitive(v: list[LaurentPoly]) -> list[LaurentPoly]:
    # divide out the common monomial factor and integer content to keep entries small
    nz = [x for x in v if x]
    if not nz:
        return v
    low = min(x.valuation() for x in nz)
    from math import gcd
    g = 0
    for x in nz:
        for a in x._c.values():
            g = gcd(g, a)
            if g == 1:
                break
        if g == 1:
            break
    if low == 0 and g == 1:
        return v
    d = LaurentPoly.monomial(low, g)
    return [x.exact_div(d) if x else x for x in v]
