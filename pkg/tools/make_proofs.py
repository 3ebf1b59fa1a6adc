"""Write the bundled derivation scripts for the affine-node identities.

Each chain below follows the printed argument move by move; this helper only
computes the factor positions so the data files do not have to be counted by
hand. The emitted files are replayed by the test suite, which is what checks
them. Run from the repository root::

    python tools/make_proofs.py
"""

from __future__ import annotations

from pathlib import Path

from qaffine.qlaurent import ONE
from qaffine.wordlang import PatternMismatch, apply_rule, parse

OUT = Path(__file__).resolve().parents[1] / "src" / "qaffine" / "wordlang" / "scripts"


class Chain:
    def __init__(self, n: int, start: str, comment: str):
        self.n = n
        self.start = start
        self.comment = comment
        self.state = [(ONE, parse(start, n))]
        self.lines: list[str] = []

    def at(self, rule: str, word: str, summand: int = 0, nth: int = 0) -> Chain:
        """Apply ``rule`` where the ``nth`` occurrence of the factors of ``word`` starts."""
        pat = [str(f) for f in parse(word, self.n)]
        mult, w = self.state[summand]
        facs = [str(f) for f in w]
        hits = [p for p in range(len(facs) - len(pat) + 1) if facs[p:p + len(pat)] == pat]
        if len(hits) <= nth:
            raise PatternMismatch(f"{word} not found in {w}")
        p = hits[nth]
        res = apply_rule(w, rule, p, n=self.n)
        new = [(mult * m, x) for m, x in res.summands]
        self.state = self.state[:summand] + new + self.state[summand + 1:]
        pos = f"{summand}:{p}" if summand else str(p)
        self.lines.append(f"step {len(self.lines) + 1}: {rule} @ {pos}")
        return self

    def text(self, expect: list[str] | None = None) -> str:
        out = ["", f"# {self.comment}", f"# start: {self.start}"]
        for m, w in self.state:
            out.append(f"# expect: {w}" if m == ONE else f"# expect: ({m}) * {w}")
        if expect is not None:
            got = sorted(str(w) for _, w in self.state)
            assert got == sorted(expect), (got, expect)
        out += self.lines
        return "\n".join(out) + "\n"


def loop(x: str, i: int) -> str:
    return f"E{i},1" if x == "E" else f"F{i},-1"


def normal_one(n: int, x: str = "E") -> str:
    """``T_{n-1} ... T_1 X_{1,loop} T_1^-1 ... T_{n-1}^-1``."""
    left = " ".join(f"T{i}" for i in range(n - 1, 0, -1))
    right = " ".join(f"T{i}^-1" for i in range(1, n))
    return f"{left} {loop(x, 1)} {right}"


def phis(n: int, inv: bool) -> str:
    if inv:
        return " ".join(f"phi{i}^-1" for i in range(n - 1, 0, -1))
    return " ".join(f"phi{i}" for i in range(1, n))


def unfold_t0(c: Chain, n: int, x: str, i: int) -> None:
    """Expand both T_0 letters and turn the phi_0 conjugate of X_i into a loop generator."""
    c.at("T0def", "T0^-1")
    c.at("T0def", "T0")
    c.at("phi0", phis(n, True))
    c.at("phi0", phis(n, False))
    c.at("phi-loop", f"phi0 {x}{i}")
    c.at("cancel", "phi0 phi0^-1")


def descend_palindrome(c: Chain, n: int, inv: bool) -> None:
    """``T_1 .. T_{n-1} .. T_1`` -> ``T_{n-1} .. T_1 .. T_{n-1}`` (n = 4) by braid moves."""
    e = "^-1" if inv else ""
    c.at("braid", f"T2{e} T3{e} T2{e}")
    c.at("commute", f"T1{e} T3{e}")
    c.at("commute", f"T3{e} T1{e}", nth=1)
    c.at("braid", f"T1{e} T2{e} T1{e}")


def e0_to_normal(c: Chain, n: int, x: str = "E") -> None:
    """``X_0`` -> ``T_{n-1} .. T_1 X_{1,loop} T_1^-1 .. T_{n-1}^-1``."""
    c.at("E0def", f"{x}0")
    unfold_t0(c, n, x, 1)
    c.at("cancel", "T1^-1 T1")
    c.at("cancel", "T1^-1 T1")
    if n == 4:
        c.at("braid", "T2 T3 T2")
        c.at("braid", "T2^-1 T3^-1 T2^-1")
        c.at("commute", "T3 T1")
        c.at("commute", f"T3 {loop(x, 1)}")
        c.at("commute", "T3 T1^-1")
        c.at("cancel", "T3 T3^-1")


def lemma_app1(n: int) -> str:
    head = [
        f"# Derivations for the app1 lemma at n = {n}:",
        "#   E_0 = T_{n-1}^-1 T_0^-1 E_{n-1} T_0 T_{n-1}, and likewise for F_0.",
        "# Both sides are rewritten to the loop normal form",
        "#   T_{n-1} ... T_1 X_{1,loop} T_1^-1 ... T_{n-1}^-1",
        "# using the definitions of E_0 and T_0, phi_1 ... phi_{n-1} = phi_0^-1,",
        "# phi conjugation of E_1 and E_{n-1} into loop generators, the braid",
        "# relations and the loop braid relation T_i T_{i+1}^-1 E_{i,1} T_{i+1} T_i^-1 = E_{i+1,1}.",
        f"# n: {n}",
    ]
    parts = ["\n".join(head) + "\n"]
    for x in ("E", "F"):
        target = normal_one(n, x)
        c = Chain(n, f"{x}0", f"{x}_0 side")
        e0_to_normal(c, n, x)
        parts.append(c.text([target]))

        c = Chain(n, f"T{n - 1}^-1 T0^-1 {x}{n - 1} T0 T{n - 1}", f"{x}_(n-1) side")
        unfold_t0(c, n, x, n - 1)
        if n == 3:
            c.at("braid", "T1 T2 T1")
            c.at("braid", "T1^-1 T2^-1 T1^-1")
            c.at("cancel", "T2^-1 T2")
            c.at("cancel", "T2^-1 T2")
        else:
            descend_palindrome(c, n, False)
            descend_palindrome(c, n, True)
            c.at("cancel", "T3^-1 T3")
            c.at("cancel", "T3^-1 T3")
            c.at("braid", "T2 T1 T2")
            c.at("commute", "T1 T3")
            c.at("commute", f"T1 {loop(x, 3)}")
            c.at("commute", "T1 T3^-1")
            c.at("braid", "T2^-1 T1^-1 T2^-1")
            c.at("cancel", "T1 T1^-1")
        # T_1 .. T_{n-1} X_{n-1,loop} T_{n-1}^-1 .. T_1^-1: unshift the loop down to index 1
        for i in range(n - 1, 1, -1):
            c.at("loop-shift-rev", loop(x, i))
        if n == 3:
            c.at("braid", "T1 T2 T1")
            c.at("cancel", "T2 T2^-1")
            c.at("braid", "T2 T1^-1 T2^-1")
            c.at("cancel", "T1 T1^-1")
        else:
            c.at("braid", "T2 T3 T2")
            c.at("cancel", "T3 T3^-1")
            c.at("braid", "T2 T1 T2^-1")
            c.at("commute", "T3 T1^-1")
            c.at("cancel", "T1 T1^-1")
            c.at("braid", "T3 T2^-1 T3^-1")
            c.at("cancel", "T2 T2^-1")
            c.at("braid", "T2 T1^-1 T2^-1")
            c.at("commute", "T1 T3^-1")
            c.at("cancel", "T1 T1^-1")
        parts.append(c.text([target]))
    return "".join(parts)


def cor_app1(n: int) -> str:
    k = "1_(3," + ",".join(["0"] * (n - 2)) + ",1)"
    head = [
        f"# Derivations for the corollary of the app1 lemma at n = {n}.",
        "# (1) E_0 F_0 1_k = F_0 E_0 1_k (+)_[<k, alpha_0>] 1_k at k = (3,0,...,0,1), where",
        "#     <k, alpha_0> = 2: both sides are conjugated by T_0 T_1 to the finite relation",
        "#     at s_0 s_1 k, whose pairing with alpha_1 equals <k, alpha_0>.",
        "# (2) F_1 E_0 = E_0 F_1 through the loop normal form of E_0: F_1 passes the",
        "#     braid letters by the relation T_2 T_1 F_2 = F_1 T_2 T_1 and its inverse, and",
        "#     commutes with E_{1,1} as F_2.",
        f"# n: {n}",
    ]
    parts = ["\n".join(head) + "\n"]
    c = Chain(n, f"E0 F0 {k}", "E_0 F_0 side")
    c.at("E0def", "E0")
    c.at("E0def", "F0")
    c.at("cancel", "T1 T1^-1")
    c.at("cancel", "T0 T0^-1")
    c.at("EF", "E1 F1")
    c.at("cancel", "T0^-1 T0", summand=1)
    c.at("cancel", "T1^-1 T1", summand=1)
    parts.append(c.text([f"T1^-1 T0^-1 F1 E1 T0 T1 {k}", k]))
    c = Chain(n, f"F0 E0 {k}", "F_0 E_0 side")
    c.at("E0def", "E0")
    c.at("E0def", "F0")
    c.at("cancel", "T1 T1^-1")
    c.at("cancel", "T0 T0^-1")
    parts.append(c.text([f"T1^-1 T0^-1 F1 E1 T0 T1 {k}"]))

    target = normal_one(n) + " F1"
    c = Chain(n, "F1 E0", "F_1 E_0 side")
    e0_to_normal(c, n)
    if n == 4:
        c.at("commute", "F1 T3")
    c.at("TTE-rev", "F1 T2 T1")
    c.at("commute", "F2 E1,1")
    c.at("TTE-inv", "F2 T1^-1 T2^-1")
    if n == 4:
        c.at("commute", "F1 T3^-1")
    parts.append(c.text([target]))
    c = Chain(n, "E0 F1", "E_0 F_1 side")
    e0_to_normal(c, n)
    parts.append(c.text([target]))
    return "".join(parts)


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for n in (3, 4):
        (OUT / f"lemma_app1_n{n}.proof").write_text(lemma_app1(n))
        (OUT / f"cor_app1_n{n}.proof").write_text(cor_app1(n))
    print(f"wrote scripts to {OUT}")


if __name__ == "__main__":
    main()
