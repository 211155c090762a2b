from hgv.surface import parse_term
from hgv.syntax import (
    EndIn,
    EndOut,
    LinkThread,
    Recv,
    Send,
    Thread,
    Unit,
    Void,
    alpha_eq,
    dual,
    free_names,
    substitute,
)

from conftest import PING
from hgv.surface import parse_config


def test_dual_end():
    assert dual(EndOut()) == EndIn()
    assert dual(EndIn()) == EndOut()


def test_dual_involutive():
    s = Send(Unit(), EndOut())
    assert dual(dual(s)) == s


def test_dual_unfolds():
    assert dual(Send(Unit(), Recv(Void(), EndIn()))) == Recv(Unit(), Send(Void(), EndOut()))


def test_substitute_free_occurrence():
    m = parse_term("(\\y:1. y) x")
    got = substitute(m, parse_term("z"), "x")
    assert alpha_eq(got, parse_term("(\\y:1. y) z"))


def test_substitute_skips_bound():
    m = parse_term("\\x:1. x")
    assert alpha_eq(substitute(m, parse_term("z"), "x"), m)


def test_substitute_in_thread():
    c = parse_config("main (wait x')")
    got = substitute(c, parse_term("y"), "x'")
    assert got == Thread("main", parse_term("wait y"))


def test_substitute_avoids_capture():
    m = parse_term("\\y:1. (x, y)")
    got = substitute(m, parse_term("y"), "x")
    assert free_names(got) == {"y"}
    assert alpha_eq(got, parse_term("\\w:1. (y, w)"))


def test_free_names():
    assert free_names(parse_term("\\x:1. x")) == frozenset()
    assert free_names(parse_config(PING)) == frozenset()
    assert free_names(LinkThread("z", "x", "y")) == {"z", "x", "y"}
