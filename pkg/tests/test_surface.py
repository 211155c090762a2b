import pytest

from hgv.lexer import ParseError
from hgv.surface import parse, parse_config, parse_term, parse_type, print_ast, print_type
from hgv.syntax import (
    App,
    Const,
    EndOut,
    Lam,
    LetUnit,
    LinkThread,
    Par,
    Res,
    Send,
    Sum,
    Thread,
    Unit,
    alpha_eq,
    dual,
)

from conftest import CORPUS, corpus_text


def test_parse_fork():
    m = parse("fork (\\x:!1.end!. let y = send((),x) in y)")
    assert isinstance(m, App) and m.fn == Const("fork") and isinstance(m.arg, Lam)


def test_parse_new():
    c = parse("new (x y : !1.end!). (child x || main ())")
    assert isinstance(c, Res)
    assert (c.x, c.y, c.ann) == ("x", "y", Send(Unit(), EndOut()))
    assert isinstance(c.body, Par)


def test_semicolon_is_let_unit():
    m = parse_term("(); ()")
    assert isinstance(m, LetUnit)


def test_plus_choice_encoding():
    s1 = parse_type("!1.end!")
    s2 = parse_type("?1.end?")
    got = parse_type("+{!1.end!, ?1.end?}")
    assert got == Send(Unit(), Send(Sum(dual(s1), dual(s2)), EndOut()))


def test_select_shape():
    m = parse_term("select[+{!1.end!, !1.end!}] inl")
    assert isinstance(m, Lam)
    assert "fork" in print_ast(m) and "send" in print_ast(m)


def test_offer_empty_chain():
    text = print_ast(parse_term("\\l:&{}. offer[1] l {}"))
    for word in ("recv", "wait", "absurd"):
        assert word in text


@pytest.mark.parametrize("name", CORPUS)
def test_round_trip(name):
    m = parse(corpus_text(name))
    assert alpha_eq(parse(print_ast(m)), m)


def test_par_nests_right():
    c = parse_config("main () || child () || child ()")
    assert isinstance(c.right, Par)
    assert print_ast(c) == "main () || child () || child ()"


def test_link_thread_prints():
    assert print_ast(LinkThread("z", "x", "y")) == "link z x y"


def test_types_print_and_parse():
    for text in ("!1.end!", "?(1 * 1).end?", "1 -o 1", "(1 + 0) * 1"):
        assert print_type(parse_type(text)) == text


def test_parse_error():
    with pytest.raises(ParseError):
        parse("let x = in")


def test_main_thread():
    assert parse_config("main ()") == Thread("main", parse_term("()"))
