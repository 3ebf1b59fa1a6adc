"""The level-zero weight lattice ``Z^n`` of affine gl_n.

Roots are stored as ordinary :class:`Weight` values (their coordinates sum
to zero), so the one bilinear form serves both ``<k, alpha_i>`` and
``<alpha_i, alpha_j>``. Root index ``0`` is the affine root
``(1, 0, ..., 0, -1)``; index ``i`` in ``1..n-1`` has ``-1`` in slot ``i``
and ``+1`` in slot ``i+1`` (slots are 1-based in the text, 0-based in the
tuple).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Sequence

__all__ = [
    "DimensionMismatch",
    "ConfigMismatch",
    "Weight",
    "root",
    "pairing",
    "root_pairing",
    "reflect",
    "rotate",
    "p_map",
    "eta",
    "mu",
    "parse_weight",
    "object_weights",
    "check_n_greater_than_N",
]


class DimensionMismatch(ValueError):
    pass


class ConfigMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Weight:
    entries: tuple[int, ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("a weight needs at least one entry")
        object.__setattr__(self, "entries", tuple(int(x) for x in self.entries))

    @classmethod
    def of(cls, *entries: int) -> Weight:
        return cls(tuple(entries))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> int:
        return self.entries[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __add__(self, other: Weight) -> Weight:
        _same_n(self, other)
        return Weight(tuple(a + b for a, b in zip(self, other)))

    def __sub__(self, other: Weight) -> Weight:
        _same_n(self, other)
        return Weight(tuple(a - b for a, b in zip(self, other)))

    def __neg__(self) -> Weight:
        return Weight(tuple(-a for a in self))

    def __rmul__(self, c: int) -> Weight:
        return Weight(tuple(c * a for a in self))

    def is_nonzero_object(self, N: int) -> bool:
        """False exactly when some entry is negative or the entries do not sum to ``N``."""
        return all(x >= 0 for x in self.entries) and sum(self.entries) == N

    def __str__(self) -> str:
        return "(" + ",".join(str(x) for x in self.entries) + ")"


def _same_n(a: Weight, b: Weight) -> None:
    if a.n != b.n:
        raise DimensionMismatch(f"weights {a} and {b} have different lengths")


def parse_weight(text: str) -> Weight:
    m = re.fullmatch(r"\s*\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)\s*", text)
    if not m:
        raise ValueError(f"not a weight: {text!r}")
    return Weight(tuple(int(x) for x in m.group(1).split(",")))


def root(i: int, n: int) -> Weight:
    """The simple root ``alpha_i`` for ``i`` in ``0..n-1``."""
    if not 0 <= i < n:
        raise IndexError(f"root index {i} outside 0..{n - 1}")
    e = [0] * n
    if i == 0:
        e[0], e[n - 1] = 1, -1
        if n == 1:
            e[0] = 0
    else:
        e[i - 1], e[i] = -1, 1
    return Weight(tuple(e))


def pairing(a: Weight, b: Weight) -> int:
    _same_n(a, b)
    return sum(x * y for x, y in zip(a, b))


def root_pairing(i: int, j: int, n: int) -> int:
    """``<i, j>`` shorthand for ``<alpha_i, alpha_j>``."""
    return pairing(root(i, n), root(j, n))


def reflect(k: Weight, i: int) -> Weight:
    """Weyl reflection ``s_i``: swap slots ``i, i+1`` (``i = 0`` swaps the first and last slot)."""
    e = list(k.entries)
    n = len(e)
    if not 0 <= i < n:
        raise IndexError(f"root index {i} outside 0..{n - 1}")
    a, b = (0, n - 1) if i == 0 else (i - 1, i)
    e[a], e[b] = e[b], e[a]
    return Weight(tuple(e))


def rotate(k: Weight, times: int = 1) -> Weight:
    """``r.(k_1, ..., k_n) = (k_2, ..., k_n, k_1)``."""
    e = k.entries
    t = times % len(e)
    return Weight(e[t:] + e[:t])


def p_map(coeffs: Sequence[int]) -> tuple[int, ...]:
    """I-coordinates of ``sum_i coeffs[i] p(alpha_i)`` where ``p(alpha_0) = -sum_{j in I} alpha_j``."""
    n = len(coeffs)
    return tuple(coeffs[j] - coeffs[0] for j in range(1, n))


def check_n_greater_than_N(n: int, N: int) -> None:
    if n <= N:
        raise ConfigMismatch(f"need n > N, got n={n}, N={N}")
    if N < 0:
        raise ConfigMismatch("N must be nonnegative")


def eta(n: int, N: int) -> Weight:
    """Highest weight ``(0, ..., 0, N)``."""
    return Weight((0,) * (n - 1) + (N,))


def mu(n: int, N: int) -> Weight:
    """Middle weight ``(0^(n-N), 1^N)``."""
    check_n_greater_than_N(n, N)
    return Weight((0,) * (n - N) + (1,) * N)


def object_weights(n: int, N: int) -> list[Weight]:
    """All nonzero-object weights (compositions of ``N`` into ``n`` parts), lexicographically."""
    out: list[Weight] = []

    def rec(prefix: list[int], left: int, slots: int) -> None:
        if slots == 1:
            out.append(Weight(tuple(prefix + [left])))
            return
        for x in range(left + 1):
            rec(prefix + [x], left - x, slots - 1)

    rec([], N, n)
    return sorted(out, key=lambda w: w.entries)
