import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import mlsspf as m
from mlsspf import lang
from mlsspf.errors import ArityError, FormulaSyntaxError, UnboundVariable

from conftest import chain

A, B, C = chain(2)


def test_parse_examples():
    f = m.parse("x = y U z")
    assert f.literals == (lang.Literal(lang.UNION, ("x", "y", "z")),)
    f = m.parse("w in x & !Finite(x)")
    assert [l.kind for l in f.literals] == [lang.IN, lang.NOT_FINITE]
    f = m.parse("x = {y, z}")
    assert f.literals == (lang.Literal(lang.ENUM, ("x", "y", "z")),)


def test_parse_all_forms():
    text = ("a = b & !a = b & a = {} & !a = {} & a = b U c & a = b I c & "
            "a = b \\ c & a <= b & !a <= b & a in b & !a in b & "
            "a = Pow(b) & a = {b} & Finite(a) & !Finite(a)")
    f = m.parse(text)
    kinds = [l.kind for l in f.literals]
    assert kinds == [lang.EQ, lang.NEQ, lang.EQ_EMPTY, lang.NEQ_EMPTY,
                     lang.UNION, lang.INTER, lang.DIFF, lang.SUBSETEQ,
                     lang.NOT_SUBSETEQ, lang.IN, lang.NOT_IN, lang.POW,
                     lang.ENUM, lang.FINITE, lang.NOT_FINITE]
    assert f.vars == ("a", "b", "c")


def test_newline_is_a_conjunction():
    f = m.parse("x = y\nw in x\n")
    assert len(f.literals) == 2


@pytest.mark.parametrize("bad", [
    "!x = y U z", "!x = Pow(y)", "!x = {y}", "x =", "= y", "x ! y",
    "x in", "Finite(x", "x = {y,}", "", "x ? y",
])
def test_syntax_errors(bad):
    with pytest.raises(FormulaSyntaxError):
        m.parse(bad)


def test_syntax_error_carries_position():
    with pytest.raises(FormulaSyntaxError) as exc:
        m.parse("x = y\nz = !")
    assert exc.value.line == 2


def test_arity_errors():
    with pytest.raises(ArityError):
        lang.Literal(lang.EQ, ("x",))
    with pytest.raises(ArityError):
        lang.Literal(lang.ENUM, ("x",))
    with pytest.raises(ArityError):
        lang.Literal("Bogus", ("x",))


_NAMES = st.sampled_from(["x", "y", "z", "w", "u", "v_1", "long_name"])


@st.composite
def literals(draw):
    kind = draw(st.sampled_from(sorted(lang._ARITY) + [lang.ENUM]))
    if kind == lang.ENUM:
        ops = draw(st.lists(_NAMES, min_size=2, max_size=4))
    else:
        ops = draw(st.lists(_NAMES, min_size=lang._ARITY[kind],
                            max_size=lang._ARITY[kind]))
    return lang.Literal(kind, tuple(ops))


@given(st.lists(literals(), min_size=1, max_size=6))
@settings(max_examples=200)
def test_render_parse_round_trip(lits):
    f = lang.Formula(tuple(lits))
    assert m.parse(f.render()).literals == f.literals


def test_duplicate_literals_flagged():
    f = m.parse("x = y & x = y")
    assert f.has_duplicates and len(f.literals) == 2


def test_eval_literal_examples():
    M = m.Assignment({"v": m.make_set([]), "w": B,
                      "u": m.make_set([m.make_set([]), B])})
    assert lang.eval_literal(lang.Literal(lang.EQ_EMPTY, ("v",)), M)
    assert lang.eval_literal(lang.Literal(lang.POW, ("u", "w")), M)
    assert not lang.eval_literal(lang.Literal(lang.NOT_FINITE, ("w",)), M)
    assert lang.eval_literal(lang.Literal(lang.FINITE, ("u",)), M)


def test_eval_formula_examples(ex1):
    rep = m.evaluate(ex1.formula, ex1.assignment)
    assert rep.results == (True, False) and not rep.satisfied

    f = m.parse("x = x")
    rep = m.evaluate(f, m.Assignment({"x": B}))
    assert rep.satisfied

    f = m.parse("x in x")
    rep = m.evaluate(f, m.Assignment({"x": B}))
    assert rep.results == (False,)


def test_eval_unbound_variable():
    with pytest.raises(UnboundVariable):
        m.evaluate(m.parse("x = y"), m.Assignment({"x": B}))


def test_eval_permutation_invariance(ex1):
    f = ex1.formula
    swapped = lang.Formula(tuple(reversed(f.literals)))
    a = m.evaluate(f, ex1.assignment).results
    b = m.evaluate(swapped, ex1.assignment).results
    assert a == tuple(reversed(b))


def test_drop_finite_literals():
    f = m.parse("w in x & !Finite(x)")
    assert m.drop_finite_literals(f).literals == (
        lang.Literal(lang.IN, ("w", "x")),)
    assert m.drop_finite_literals(m.parse("Finite(x)")).literals == ()
    f = m.parse("x = y")
    assert m.drop_finite_literals(f).literals == f.literals
    g = m.drop_finite_literals(m.parse("w in x & !Finite(x)"))
    assert m.drop_finite_literals(g).literals == g.literals
