"""Property tests: parser round trip, weight-flow compositionality, exact rules as matrix identities."""

from __future__ import annotations

from hypothesis import assume, given
from hypothesis import strategies as st

from qaffine.kmodel import KModel, ModelConfig, evaluate
from qaffine.weightlat import Weight, object_weights
from qaffine.wordlang import (GenSymbol, WordExpr, apply_rule, left_adjoint, net_shift, normalize_shifts, parse,
                              right_adjoint, target_weight, weight_flow)
from qaffine.wordlang.flow import Zero
from qaffine.wordlang.syntax import braid, gen, idem, shift

N_MAX = 4


@st.composite
def factor(draw, n: int):
    choice = draw(st.sampled_from(["gen", "gen", "gen", "loop", "braid", "rot", "shift", "idem"]))
    if choice == "gen":
        return gen(draw(st.sampled_from("EF")), draw(st.integers(0, n - 1)), draw(st.integers(1, 3)))
    if choice == "loop":
        return GenSymbol(draw(st.sampled_from(["Eloop1", "Floop-1"])), draw(st.integers(1, n - 1)))
    if choice == "braid":
        kind = draw(st.sampled_from(["T", "Tprime", "Phi", "Phiprime"]))
        return braid(kind, draw(st.integers(0, n - 1)), draw(st.sampled_from([1, -1])))
    if choice == "rot":
        return braid("Rprime", None, draw(st.sampled_from([1, -1])))
    if choice == "shift":
        comp = draw(st.integers(0, 2))
        val = draw(st.integers(-4, 4).filter(bool))
        return shift(*[val if t == comp else 0 for t in range(3)])[0]
    return idem(Weight(tuple(draw(st.lists(st.integers(-2, 3), min_size=n, max_size=n)))))


@st.composite
def any_word(draw):
    n = draw(st.integers(2, N_MAX))
    return n, WordExpr(draw(st.lists(factor(n), min_size=1, max_size=8)))


@st.composite
def generator_word(draw, n: int, max_len: int = 4, max_power: int = 2):
    """E/F words (no idempotents) for index set ``0..n-1``."""
    return WordExpr(draw(st.lists(st.builds(gen, st.sampled_from("EF"), st.integers(0, n - 1),
                                            st.integers(1, max_power)), max_size=max_len)))


@st.composite
def model_and_source(draw):
    n = draw(st.integers(2, 3))
    m = draw(st.integers(1, 2))
    N = draw(st.integers(1, 2))
    side = draw(st.sampled_from(["symmetric", "skew"]))
    k = draw(st.sampled_from(object_weights(n, N)))
    return ModelConfig(side, n, m, N), k


@given(any_word())
def test_print_parse_round_trip(nw):
    n, w = nw
    text = str(w)
    again = parse(text, n)
    assert again == w
    assert str(again) == text


@given(st.data())
def test_weight_flow_is_compositional(data):
    n = data.draw(st.integers(2, N_MAX))
    u = data.draw(generator_word(n))
    v = data.draw(generator_word(n))
    k = Weight(tuple(data.draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))))
    N = sum(k.entries)
    uv = u.compose(v)
    assert target_weight(uv, k) == target_weight(u, target_weight(v, k))
    first = weight_flow(v, k, N)
    whole = weight_flow(uv, k, N)
    if isinstance(first, Zero):
        assert isinstance(whole, Zero)
    else:
        second = weight_flow(u, first[-1], N)
        if isinstance(second, Zero):
            assert isinstance(whole, Zero)
        else:
            assert whole == first + second[1:]


@given(model_and_source(), st.data())
def test_evaluation_is_a_functor(ms, data):
    cfg, k = ms
    u = data.draw(generator_word(cfg.n, 3))
    v = data.draw(generator_word(cfg.n, 3))
    K = KModel(cfg)
    inner = evaluate(K, v, k)
    outer = evaluate(K, u, inner.target)
    whole = evaluate(K, u.compose(v), k)
    assert whole.matrix == (outer @ inner).matrix


_PATTERNS = {
    "EF": lambda i, j, a, b: [gen("E", i, a), gen("F", i, b)],
    "FE": lambda i, j, a, b: [gen("F", i, a), gen("E", i, b)],
    "commute": lambda i, j, a, b: [gen("E", i, a), gen("F", j, b)],
    "merge": lambda i, j, a, b: [gen("F", i, a), gen("F", i, b)],
    "sl3": lambda i, j, a, b: [gen("F", i, a), gen("F", j, a + b), gen("F", i, b)],
}


@given(st.sampled_from(["symmetric", "skew"]), st.integers(2, 3), st.integers(1, 2), st.integers(1, 2),
       st.sampled_from(sorted(_PATTERNS)), st.data())
def test_exact_rules_are_matrix_identities(side, n, m, N, rule, data):
    cfg = ModelConfig(side, n, m, N)
    i = data.draw(st.integers(0, n - 1))
    if rule == "commute":
        j = data.draw(st.sampled_from([x for x in range(n) if x != i]))
    elif rule == "sl3":
        assume(n > 2)
        j = data.draw(st.sampled_from([(i + 1) % n, (i - 1) % n]))
    else:
        j = i
    a, b = data.draw(st.integers(1, 2)), data.draw(st.integers(1, 2))
    pattern = _PATTERNS[rule](i, j, a, b)
    live = [k for k in object_weights(n, N) if not isinstance(weight_flow(WordExpr(pattern), k, N), Zero)]
    assume(live)
    k = data.draw(st.sampled_from(live))
    w = WordExpr(pattern + [idem(k)])
    res = apply_rule(w, rule, 0)
    assume(res.exact)
    K = KModel(cfg)
    lhs = evaluate(K, w)
    rhs = K.zero(lhs.source, lhs.target)
    for mult, word in res.summands:
        rhs = rhs + evaluate(K, word).scale(K.at_unit(mult))
    assert lhs.matrix == rhs.matrix


@given(st.data())
def test_adjoints_are_mutually_inverse(data):
    n = data.draw(st.integers(2, N_MAX))
    w = data.draw(generator_word(n, 5, 3))
    k = Weight(tuple(data.draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))))
    t = target_weight(w, k)
    back = right_adjoint(left_adjoint(w, k), t)
    assert net_shift(back) == (0, 0, 0)
    assert normalize_shifts(back).core() == w.core()
    back = left_adjoint(right_adjoint(w, k), t)
    assert net_shift(back) == (0, 0, 0)
    assert normalize_shifts(back).core() == w.core()
