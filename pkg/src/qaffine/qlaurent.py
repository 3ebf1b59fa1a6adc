"""Exact Laurent polynomials in one variable ``q`` over the integers.

A :class:`LaurentPoly` is a sparse map ``exponent -> coefficient`` with no
zero coefficients stored. Values are immutable and hashable, so they can be
shared freely and used as dictionary keys.

The quantum combinatorics used everywhere else lives here too: quantum
integers, quantum factorials, Gaussian binomials and the Grothendieck
classes of grading shifts.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Union

__all__ = [
    "InexactDivision",
    "LaurentPoly",
    "Q",
    "ONE",
    "ZERO",
    "qint",
    "qfactorial",
    "qbinom",
    "shift_class",
    "is_positive",
    "parse_poly",
]


class InexactDivision(ArithmeticError):
    """Raised when an exact division of Laurent polynomials leaves a remainder."""


Coercible = Union["LaurentPoly", int]


class LaurentPoly:
    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict[int, int] = {}
        for e, a in items:
            if a:
                c[e] = c.get(e, 0) + a
        self._c = {e: a for e, a in c.items() if a}
        self._hash = None

    @classmethod
    def _raw(cls, c: dict[int, int]) -> LaurentPoly:
        # caller guarantees c has no zero values and will not be mutated
        p = object.__new__(cls)
        p._c = c
        p._hash = None
        return p

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> LaurentPoly:
        return cls._raw({exponent: coeff} if coeff else {})

    @classmethod
    def const(cls, a: int) -> LaurentPoly:
        return cls._raw({0: a} if a else {})

    # -- inspection ---------------------------------------------------------

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def items(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self._c.items(), reverse=True))

    def __getitem__(self, exponent: int) -> int:
        return self._c.get(exponent, 0)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def is_unit(self) -> bool:
        """True for ``±q^a``, the units of ``Z[q, q^-1]``."""
        return len(self._c) == 1 and next(iter(self._c.values())) in (1, -1)

    def is_constant(self) -> bool:
        return not self._c or set(self._c) == {0}

    def degree(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no degree")
        return max(self._c)

    def valuation(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no valuation")
        return min(self._c)

    # -- ring structure -----------------------------------------------------

    @staticmethod
    def _coerce(other) -> LaurentPoly | None:
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.const(other)
        return None

    def __add__(self, other: Coercible) -> LaurentPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o._c:
            return self
        if not self._c:
            return o
        c = dict(self._c)
        for e, a in o._c.items():
            v = c.get(e, 0) + a
            if v:
                c[e] = v
            else:
                del c[e]
        return LaurentPoly._raw(c)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._raw({e: -a for e, a in self._c.items()})

    def __sub__(self, other: Coercible) -> LaurentPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Coercible) -> LaurentPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: Coercible) -> LaurentPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self._c or not o._c:
            return ZERO
        if len(o._c) == 1:
            (f, b), = o._c.items()
            return LaurentPoly._raw({e + f: a * b for e, a in self._c.items()})
        if len(self._c) == 1:
            (f, b), = self._c.items()
            return LaurentPoly._raw({e + f: a * b for e, a in o._c.items()})
        c: dict[int, int] = {}
        for e, a in self._c.items():
            for f, b in o._c.items():
                c[e + f] = c.get(e + f, 0) + a * b
        return LaurentPoly._raw({e: a for e, a in c.items() if a})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPoly:
        if k < 0:
            if not self.is_unit():
                raise InexactDivision(f"{self} is not a unit")
            (e, a), = self._c.items()
            return LaurentPoly._raw({e * k: a ** -k})
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by ``q^k``."""
        if not k:
            return self
        return LaurentPoly._raw({e + k: a for e, a in self._c.items()})

    def exact_div(self, other: Coercible) -> LaurentPoly:
        """Exact quotient ``self / other``; raises :class:`InexactDivision` otherwise."""
        d = self._coerce(other)
        if d is None:
            raise TypeError(f"cannot divide by {other!r}")
        if not d._c:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self._c:
            return ZERO
        if len(d._c) == 1:
            (f, b), = d._c.items()
            c = {}
            for e, a in self._c.items():
                qt, r = divmod(a, b)
                if r:
                    raise InexactDivision(f"({self}) / ({d})")
                c[e - f] = qt
            return LaurentPoly._raw(c)
        # schoolbook long division from the top degree down
        rem = dict(self._c)
        dtop = max(d._c)
        dlow = min(d._c)
        lead = d._c[dtop]
        quot: dict[int, int] = {}
        while rem:
            top = max(rem)
            if top - dtop < min(rem) - dlow:
                raise InexactDivision(f"({self}) / ({d})")
            qt, r = divmod(rem[top], lead)
            if r:
                raise InexactDivision(f"({self}) / ({d})")
            s = top - dtop
            quot[s] = qt
            for f, b in d._c.items():
                v = rem.get(f + s, 0) - qt * b
                if v:
                    rem[f + s] = v
                else:
                    rem.pop(f + s, None)
        return LaurentPoly._raw(quot)

    def __floordiv__(self, other: Coercible) -> LaurentPoly:
        return self.exact_div(other)

    def divides(self, other: Coercible) -> bool:
        try:
            LaurentPoly._coerce(other).exact_div(self)
        except InexactDivision:
            return False
        return True

    # -- automorphisms and specialisations ----------------------------------

    def bar(self) -> LaurentPoly:
        """The bar involution ``q -> q^-1``."""
        return LaurentPoly._raw({-e: a for e, a in self._c.items()})

    def substitute(self, scale: int, exponent: int) -> LaurentPoly:
        """Apply the ring map ``q -> scale * q^exponent`` with ``scale = ±1``."""
        if scale not in (1, -1):
            raise ValueError("scale must be ±1 to stay inside Z[q, q^-1]")
        c: dict[int, int] = {}
        for e, a in self._c.items():
            k = e * exponent
            c[k] = c.get(k, 0) + (a if scale == 1 or e % 2 == 0 else -a)
        return LaurentPoly._raw({e: a for e, a in c.items() if a})

    def at(self, value):
        """Evaluate at ``q = value`` (any ring element supporting ``**`` with negative powers)."""
        return sum((a * value ** e for e, a in self._c.items()), 0 * value)

    def at_one(self) -> int:
        """The ring homomorphism ``Z[q, q^-1] -> Z``, ``q -> 1``."""
        return sum(self._c.values())

    def map_coefficients(self, fn: Callable[[int], int]) -> LaurentPoly:
        return LaurentPoly({e: fn(a) for e, a in self._c.items()})

    # -- comparison / hashing -----------------------------------------------

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._c == o._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    # -- text form ----------------------------------------------------------

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for e, a in sorted(self._c.items(), reverse=True):
            sign = "-" if a < 0 else "+"
            m = abs(a)
            if e == 0:
                body = str(m)
            else:
                var = "q" if e == 1 else f"q^{e}"
                body = var if m == 1 else f"{m}*{var}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"LaurentPoly('{self}')"


ZERO = LaurentPoly._raw({})
ONE = LaurentPoly._raw({0: 1})
Q = LaurentPoly._raw({1: 1})

_TERM = re.compile(r"(?:(\d+)\*)?q(?:\^(-?\d+))?|(\d+)")


def parse_poly(text: str) -> LaurentPoly:
    """Parse the canonical text form, e.g. ``3*q^2 + 1 - q^-4``.

    Terms must appear in strictly descending exponent order, with no zero
    or repeated terms, so that ``str(parse_poly(s)) == s``.
    """
    s = text.strip()
    if s == "0":
        return ZERO
    pos = 0
    coeffs: dict[int, int] = {}
    last = None
    first = True
    while pos < len(s):
        if first:
            sign = 1
            if s.startswith("-", pos):
                sign, pos = -1, pos + 1
        else:
            m = re.match(r" ([+-]) ", s[pos:])
            if not m:
                raise ValueError(f"expected ' + ' or ' - ' at offset {pos} in {text!r}")
            sign = -1 if m.group(1) == "-" else 1
            pos += m.end()
        m = _TERM.match(s, pos)
        if not m or not m.group(0):
            raise ValueError(f"expected a term at offset {pos} in {text!r}")
        if m.group(3) is not None:
            e, a = 0, int(m.group(3))
        else:
            a = int(m.group(1)) if m.group(1) else 1
            e = int(m.group(2)) if m.group(2) is not None else 1
            if m.group(1) == "1" or (m.group(2) is not None and e in (0, 1)):
                raise ValueError(f"non-canonical term {m.group(0)!r} in {text!r}")
        if a == 0 or (last is not None and e >= last):
            raise ValueError(f"terms out of order or zero in {text!r}")
        coeffs[e] = sign * a
        last = e
        pos = m.end()
        first = False
    return LaurentPoly._raw(coeffs)


@lru_cache(maxsize=None)
def qint(n: int) -> LaurentPoly:
    """Quantum integer ``[n] = q^(n-1) + q^(n-3) + ... + q^(1-n)``, with ``[-n] = -[n]``."""
    if n < 0:
        return -qint(-n)
    return LaurentPoly._raw({n - 1 - 2 * j: 1 for j in range(n)})


@lru_cache(maxsize=None)
def qfactorial(n: int) -> LaurentPoly:
    if n < 0:
        raise ValueError("quantum factorial of a negative integer")
    out = ONE
    for j in range(1, n + 1):
        out = out * qint(j)
    return out


@lru_cache(maxsize=None)
def qbinom(n: int, k: int) -> LaurentPoly:
    """Gaussian binomial ``[n choose k]`` for ``n >= 0``; zero when ``k`` is out of range."""
    if n < 0:
        raise ValueError("qbinom needs n >= 0")
    if k < 0 or k > n:
        return ZERO
    out = ONE
    for j in range(1, k + 1):
        out = (out * qint(n - k + j)).exact_div(qint(j))
    return out


SIDES = ("symmetric", "skew")


def shift_class(side: str, cohom: int, internal: int) -> LaurentPoly:
    """Grothendieck class of the shift ``[cohom]{internal}``: ``(-1)^cohom q^internal``.

    The ``side`` only matters through the caller's choice of shift: the
    grading shift ``<1>`` is ``{1}`` on the symmetric side and ``[1]{-1}`` on
    the skew side (see :func:`grading_unit`).
    """
    if side not in SIDES:
        raise ValueError(f"unknown side {side!r}")
    return LaurentPoly.monomial(internal, -1 if cohom % 2 else 1)


def grading_unit(side: str) -> LaurentPoly:
    """The class of ``<1>``: ``q`` on the symmetric side, ``-q^-1`` on the skew side."""
    if side == "symmetric":
        return shift_class(side, 0, 1)
    return shift_class(side, 1, -1)


def is_positive(f: LaurentPoly) -> bool:
    """Membership in ``N[q, q^-1]``."""
    return all(a >= 0 for a in f._c.values())
