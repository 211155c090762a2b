import pytest

from hgv.fghgv import FAbsurd, Let, Ret, fg_translate_config
from hgv.hcp import Halt, Link, hcp_check, hcp_equiv, parse_process, ping, pong, Close
from hgv.surface import parse_config, parse_term, parse_type
from hgv.syntax import Const, UnitVal, Var
from hgv.translate import correspondence_check, down, tr_config, tr_term, tr_value, up

from conftest import PING

T = parse_type


def test_value_unit():
    assert tr_value({}, UnitVal(), "r") == Close("r", Halt())


def test_value_var():
    p = tr_value({"x": T("!1.end!")}, Var("x"), "r")
    assert isinstance(p, Link) and {p.x, p.y} == {"r", "x"}


def test_value_wait():
    p = tr_value({}, Const("wait"), "r", expected=T("end? -o 1"))
    assert hcp_equiv(p, parse_process("r(x).x().r[u].(u[].0 || r[].0)"))


def test_term_ret():
    assert hcp_equiv(tr_term({}, Ret(UnitVal()), "r"), ping("r", Close("r", Halt())))


def test_term_let():
    got = tr_term({}, Let("x", Ret(UnitVal()), Ret(Var("x"))), "r")
    want = parse_process("new (x x1). (x(u).u().r[v].(v[].0 || r<->x : 1) || x1[w].(w[].0 || x1[].0))")
    assert hcp_equiv(got, want)


def test_term_absurd():
    got = tr_term({"z": T("0")}, FAbsurd(Var("z"), T("1")), "r")
    assert hcp_equiv(got, parse_process("new (x x1). (x.absurd[r : 1 * 1] || x1<->z : 0)"))


def test_link_thread():
    types = {"z": T("end?"), "x": T("!1.end!"), "y": T("?1.end?")}
    got = tr_config(parse_config("link z x y"), types=types)
    assert hcp_equiv(got, parse_process("z().x<->y : 1 * 1"))


def test_child_value_thread():
    got = tr_config(parse_config("child z'"), types={"z'": T("end!")})
    assert hcp_check(got) == [{"z'": down(T("end!"))}]


def test_down_is_co_up():
    from hgv.hcp import co

    for t in ("1", "!1.end!", "?(1 * 0).end?", "1 -o 1", "(1 + 0) * end!"):
        assert down(T(t)) == co(up(T(t)))


def test_correspond_ping():
    rep = correspondence_check(fg_translate_config(parse_config(PING)))
    assert rep.ok and len(rep.reductions) == 2
    assert rep.configs[0].startswith("new")


def test_correspond_value_vacuous():
    rep = correspondence_check(parse_config("main ()"))
    assert rep.ok and rep.reductions == [] and rep.beta_checked == 0


def test_correspond_ping_reachable():
    rep = correspondence_check(fg_translate_config(parse_config(PING)), reachable=True)
    assert rep.ok and len(rep.configs) > 2 and not rep.failures
