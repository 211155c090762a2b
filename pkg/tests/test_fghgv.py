import pytest

from hgv.fghgv import FAbsurd, FApp, Let, Ret, fg_check, fg_step, fg_translate, fg_translate_config, is_fg_term, to_hgv
from hgv.surface import parse_term, parse_type
from hgv.syntax import Inl, Lam, UnitVal, Var
from hgv.typecheck import HgvTypeError, check_term

from conftest import TYPED, corpus_config


def test_inl():
    got = fg_translate(parse_term("inl[1 + 1] ()"))
    assert isinstance(got, Let) and got.bound == Ret(UnitVal())
    assert got.body == Ret(Inl(Var(got.var), parse_type("1 + 1")))


def test_var():
    assert fg_translate(parse_term("x"), {"x": parse_type("1")}) == Ret(Var("x"))


def test_unit():
    assert fg_translate(parse_term("()")) == Ret(UnitVal())


def test_check_ret():
    assert fg_check({}, Ret(UnitVal())) == parse_type("1")


def test_check_mismatch():
    with pytest.raises(HgvTypeError):
        fg_check({}, Let("x", Ret(UnitVal()), FAbsurd(Var("x"), parse_type("1"))))


def test_step_let():
    assert fg_step(Let("x", Ret(UnitVal()), Ret(Var("x")))) == Ret(UnitVal())


def test_step_value():
    assert fg_step(Ret(UnitVal())) is None


def test_step_under_context():
    lam = Lam("y", parse_type("1"), Ret(Var("y")))
    m = Let("x", FApp(lam, UnitVal()), Ret(Var("x")))
    assert fg_step(m) == Let("x", Ret(UnitVal()), Ret(Var("x")))


@pytest.mark.parametrize("text", ["(\\y:1. y) ()", "let (a, b) = ((), ()) in a; b", "case inl[1 + 1] () { inl a -> a; inr b -> b }"])
def test_translation_preserves_type(text):
    m = parse_term(text)
    f = fg_translate(m)
    assert is_fg_term(f)
    assert fg_check({}, f) == check_term({}, m)
    assert check_term({}, to_hgv(f)) == check_term({}, m)


@pytest.mark.parametrize("name", TYPED)
def test_corpus_config_translates(name):
    c = fg_translate_config(corpus_config(name))
    assert c is not None
