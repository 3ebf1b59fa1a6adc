"""Typed AST, parser and printer for words in the generating 1-morphisms.

A word is a whitespace-separated list of factors read the way they are
written on paper: the rightmost factor acts first. Grammar::

    word   := factor { " " factor }
    factor := idem | gen | braid | shift
    idem   := "1_(" int { "," int } ")"
    gen    := ("E"|"F") index [ "^(" posint ")" ] | ("E"|"F") index ",1" | "F" index ",-1"
    braid  := "T" index ["'"] ["^-1"] | "phi" index ["'"] ["^-1"] | "R'" ["^-1"]
    shift  := "<" int ">" | "[" int "]" | "{" int "}"

``F<i>,1`` is accepted as an alternative spelling of the lowering loop
``F<i>,-1``; the printer always writes ``F<i>,-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Sequence

from ..weightlat import Weight

__all__ = [
    "GenSymbol",
    "WordExpr",
    "WordSyntaxError",
    "IndexOutOfRange",
    "parse",
    "parse_factor",
    "KINDS",
    "gen",
    "braid",
    "idem",
    "shift",
]

KINDS = ("E", "F", "Eloop1", "Floop-1", "T", "Tprime", "Phi", "Phiprime", "Rprime", "Idem", "Shift")
INVERTIBLE = ("T", "Tprime", "Phi", "Phiprime", "Rprime")
LOOPS = {"Eloop1": "E", "Floop-1": "F"}


class WordSyntaxError(SyntaxError):
    """Parse failure with a 0-based character ``offset`` and the sorted ``expected`` token set."""

    def __init__(self, message: str, offset: int, expected: Iterable[str] = ()):
        self.expected = tuple(sorted(set(expected)))
        detail = f"{message} at offset {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)
        # SyntaxError reserves ``offset``; set it after the base constructor
        self.offset = offset


class IndexOutOfRange(WordSyntaxError):
    pass


@dataclass(frozen=True)
class GenSymbol:
    kind: str
    index: int | None = None
    power: int = 1
    shift: tuple[int, int, int] = (0, 0, 0)
    idem_weight: Weight | None = None

    def __post_init__(self):
        k = self.kind
        if k not in KINDS:
            raise ValueError(f"unknown factor kind {k!r}")
        if k in ("E", "F"):
            if self.index is None or self.index < 0 or self.power < 1:
                raise ValueError(f"{k} needs an index >= 0 and a divided power >= 1")
        elif k in LOOPS:
            if self.index is None or self.index < 1 or self.power != 1:
                raise ValueError("loop generators carry a finite index and power 1")
        elif k in INVERTIBLE:
            if self.power not in (1, -1):
                raise ValueError(f"{k} takes exponent +1 or -1")
            if (k == "Rprime") != (self.index is None):
                raise ValueError("R' has no index; braid and phi letters need one")
        elif k == "Idem":
            if self.idem_weight is None or self.index is not None:
                raise ValueError("an idempotent carries a weight and no index")
        elif k == "Shift":
            if self.index is not None:
                raise ValueError("a shift carries no index")
            if sum(1 for x in self.shift if x) > 1:
                raise ValueError("a shift factor holds a single bracket; use one factor per component")

    # -- small predicates used by the rule engine --------------------------------

    @property
    def is_generator(self) -> bool:
        return self.kind in ("E", "F") or self.kind in LOOPS

    @property
    def is_invertible(self) -> bool:
        return self.kind in INVERTIBLE

    @property
    def letter(self) -> str:
        """``"E"`` or ``"F"`` for generators and loops, the kind otherwise."""
        return LOOPS.get(self.kind, self.kind)

    def inverse(self) -> GenSymbol:
        if not self.is_invertible:
            raise ValueError(f"{self} is not invertible")
        return replace(self, power=-self.power)

    def __str__(self) -> str:
        k, i = self.kind, self.index
        if k in ("E", "F"):
            return f"{k}{i}" + (f"^({self.power})" if self.power != 1 else "")
        if k == "Eloop1":
            return f"E{i},1"
        if k == "Floop-1":
            return f"F{i},-1"
        inv = "^-1" if self.power == -1 else ""
        if k == "T":
            return f"T{i}{inv}"
        if k == "Tprime":
            return f"T{i}'{inv}"
        if k == "Phi":
            return f"phi{i}{inv}"
        if k == "Phiprime":
            return f"phi{i}'{inv}"
        if k == "Rprime":
            return f"R'{inv}"
        if k == "Idem":
            return "1_(" + ",".join(str(x) for x in self.idem_weight.entries) + ")"
        a, c, s = self.shift
        if c:
            return f"[{c}]"
        if s:
            return "{" + str(s) + "}"
        return f"<{a}>"


def gen(kind: str, index: int, power: int = 1) -> GenSymbol:
    return GenSymbol(kind, index, power)


def braid(kind: str, index: int | None, power: int = 1) -> GenSymbol:
    return GenSymbol(kind, index, power)


def idem(weight: Weight) -> GenSymbol:
    return GenSymbol("Idem", idem_weight=weight)


def shift(angle: int = 0, cohom: int = 0, internal: int = 0) -> list[GenSymbol]:
    """Shift factors for ``<angle>[cohom]{internal}``, one factor per nonzero component."""
    out = []
    if angle:
        out.append(GenSymbol("Shift", shift=(angle, 0, 0)))
    if cohom:
        out.append(GenSymbol("Shift", shift=(0, cohom, 0)))
    if internal:
        out.append(GenSymbol("Shift", shift=(0, 0, internal)))
    return out


@dataclass(frozen=True)
class WordExpr:
    factors: tuple[GenSymbol, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    @classmethod
    def of(cls, *factors: GenSymbol) -> WordExpr:
        return cls(tuple(factors))

    def __str__(self) -> str:
        return " ".join(str(f) for f in self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self) -> Iterator[GenSymbol]:
        return iter(self.factors)

    def __getitem__(self, i):
        return self.factors[i]

    def compose(self, first: WordExpr) -> WordExpr:
        """``self o first``: ``first`` acts first, so its factors go on the right."""
        return WordExpr(self.factors + first.factors)

    def splice(self, position: int, length: int, new: Sequence[GenSymbol]) -> WordExpr:
        return WordExpr(self.factors[:position] + tuple(new) + self.factors[position + length:])

    @property
    def source_weight(self) -> Weight | None:
        """Weight of a trailing idempotent, if any."""
        if self.factors and self.factors[-1].kind == "Idem":
            return self.factors[-1].idem_weight
        return None

    def without_idempotents(self) -> WordExpr:
        return WordExpr(f for f in self.factors if f.kind != "Idem")

    def core(self) -> WordExpr:
        """Factors other than idempotents and shifts."""
        return WordExpr(f for f in self.factors if f.kind not in ("Idem", "Shift"))


# -- parser -----------------------------------------------------------------------


class _Scanner:
    def __init__(self, text: str, n: int | None):
        self.text = text
        self.pos = 0
        self.n = n

    def peek(self, s: str) -> bool:
        return self.text.startswith(s, self.pos)

    def eat(self, s: str) -> bool:
        if self.peek(s):
            self.pos += len(s)
            return True
        return False

    def expect(self, s: str) -> None:
        if not self.eat(s):
            raise WordSyntaxError(f"unexpected {self._here()}", self.pos, [repr(s)])

    def _here(self) -> str:
        if self.pos >= len(self.text):
            return "end of input"
        return repr(self.text[self.pos])

    def integer(self, signed: bool = True, what: str = "integer") -> int:
        start = self.pos
        if signed and self.peek("-"):
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.pos = start
            raise WordSyntaxError(f"unexpected {self._here()}", start, [what])
        return int(self.text[start:self.pos])

    def index(self, affine: bool) -> int:
        start = self.pos
        i = self.integer(signed=False, what="index")
        if self.n is not None:
            lo = 0 if affine else 1
            if not lo <= i <= self.n - 1:
                raise IndexOutOfRange(f"index {i} outside {lo}..{self.n - 1}", start, [f"index in {lo}..{self.n - 1}"])
        return i

    def inv(self) -> int:
        return -1 if self.eat("^-1") else 1

    def factor(self) -> GenSymbol:
        start = self.pos
        if self.eat("1_("):
            entries = [self.integer()]
            while self.eat(","):
                entries.append(self.integer())
            self.expect(")")
            return idem(Weight(tuple(entries)))
        if self.peek("E") or self.peek("F"):
            kind = self.text[self.pos]
            self.pos += 1
            # loop forms need a finite index; checked once we know which form this is
            after = self.pos
            i = self.index(affine=True)
            if self.peek(",-1") and kind == "F":
                self.pos += 3
                return self._loop("Floop-1", i, after)
            if self.peek(",1"):
                self.pos += 2
                return self._loop("Eloop1" if kind == "E" else "Floop-1", i, after)
            if self.eat("^("):
                a = self.integer(signed=False, what="positive integer")
                if a < 1:
                    raise WordSyntaxError("divided power must be positive", self.pos - 1, ["positive integer"])
                self.expect(")")
                return gen(kind, i, a)
            return gen(kind, i)
        if self.eat("phi"):
            i = self.index(affine=True)
            prime = self.eat("'")
            return braid("Phiprime" if prime else "Phi", i, self.inv())
        if self.eat("T"):
            i = self.index(affine=True)
            prime = self.eat("'")
            return braid("Tprime" if prime else "T", i, self.inv())
        if self.eat("R'"):
            return braid("Rprime", None, self.inv())
        for open_, close, slot in (("<", ">", 0), ("[", "]", 1), ("{", "}", 2)):
            if self.eat(open_):
                v = self.integer()
                self.expect(close)
                triple = [0, 0, 0]
                triple[slot] = v
                return GenSymbol("Shift", shift=tuple(triple))
        raise WordSyntaxError(f"unexpected {self._here()}", start,
                              ["'1_('", "'E'", "'F'", "'T'", "'phi'", "\"R'\"", "'<'", "'['", "'{'"])

    def _loop(self, kind: str, i: int, at: int) -> GenSymbol:
        if i < 1 or (self.n is not None and i > self.n - 1):
            hi = "n-1" if self.n is None else str(self.n - 1)
            raise IndexOutOfRange(f"loop generators need a finite index, got {i}", at, [f"index in 1..{hi}"])
        return GenSymbol(kind, i)


def parse(text: str, n: int | None = None) -> WordExpr:
    """Parse a word; with ``n`` given, indices are range-checked against ``0..n-1``."""
    sc = _Scanner(text, n)
    # leading/trailing whitespace is tolerated, interior separators are runs of spaces
    while sc.pos < len(text) and text[sc.pos].isspace():
        sc.pos += 1
    if sc.pos >= len(text):
        raise WordSyntaxError("empty word", sc.pos, ["factor"])
    factors = [sc.factor()]
    while sc.pos < len(text):
        if not text[sc.pos].isspace():
            raise WordSyntaxError(f"unexpected {sc._here()}", sc.pos, ["' '", "end of input"])
        while sc.pos < len(text) and text[sc.pos].isspace():
            sc.pos += 1
        if sc.pos < len(text):
            factors.append(sc.factor())
    return WordExpr(tuple(factors))


def parse_factor(text: str, n: int | None = None) -> GenSymbol:
    w = parse(text, n)
    if len(w) != 1:
        raise WordSyntaxError("expected a single factor", 0, ["factor"])
    return w[0]
