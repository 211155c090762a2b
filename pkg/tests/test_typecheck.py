import pytest

from hgv.surface import parse_term, parse_type
from hgv.syntax import Product, Unit, Void
from hgv.typecheck import HgvTypeError, check_term, check_value

S = parse_type("!1.end!")


def test_link_schema():
    m = parse_term("\\x:!1.end! * ?1.end?. link x")
    t = check_term({}, m)
    assert t == parse_type("(!1.end! * ?1.end?) -o end!")


def test_send_let():
    assert check_term({"x": S}, parse_term("let y = send((), x) in y")) == parse_type("end!")


def test_unused_linear_variable():
    with pytest.raises(HgvTypeError):
        check_term({"x": Unit()}, parse_term("\\y:1. y"))


def test_unit_value():
    assert check_value({}, parse_term("()")) == Unit()


def test_pair_value_splits_env():
    assert check_value({"x": Unit(), "y": Void()}, parse_term("(x, y)")) == Product(Unit(), Void())


def test_unbound():
    with pytest.raises(HgvTypeError):
        check_value({}, parse_term("x"))


def test_fork_returns_dual():
    t = check_term({}, parse_term("fork (\\x:!1.end!. send ((), x))"))
    assert t == parse_type("?1.end?")


def test_close_needs_mix():
    m = parse_term("\\x:end. close x")
    with pytest.raises(HgvTypeError):
        check_term({}, m)
    assert check_term({}, m, mix=True) == parse_type("end -o 1")
