import pytest

from hgv.aps import config_aps, is_tree
from hgv.runtime_typing import (
    Child,
    ConfigTypeError,
    GvEnv,
    Main,
    check_config,
    combine_runtime,
    flatten,
    gv_check_config,
    splitting,
)
from hgv.surface import parse_config, parse_gv_env, parse_hyperenv, parse_type
from hgv.syntax import Unit

PING = "new (x y : !1.end!). (child send (ping, x) || main (let ((), y) = recv y in wait y))"
REASSOC = (
    "new (x x' : !1.end!). new (y y' : !1.end!). ((child send ((), x) || child send ((), y)) "
    "|| main (let ((), a) = recv x' in let ((), b) = recv y' in wait a; wait b))"
)
UNIT = Main(Unit())


def gv(text):
    return GvEnv(*parse_gv_env(text))


def test_combine_runtime():
    assert combine_runtime(Child(), Child()) == Child()
    assert combine_runtime(UNIT, Child()) == UNIT
    with pytest.raises(ConfigTypeError) as e:
        combine_runtime(UNIT, UNIT)
    assert e.value.kind == "TwoMainThreads"


def test_ping_split_hyperenv():
    c = parse_config(PING)
    h = parse_hyperenv("x:!1.end!, ping:1 | y:?1.end?")
    assert check_config(h, c.body) == UNIT


def test_ping_closed():
    assert check_config(parse_hyperenv("ping:1"), parse_config(PING)) == UNIT


def test_main_unit():
    assert check_config([{}], parse_config("main ()")) == UNIT


def test_partition_failure():
    c = parse_config("child (send ((), x); send ((), y)) || main ()")
    h = parse_hyperenv("x:!1.end! | y:!1.end!")
    with pytest.raises(ConfigTypeError):
        check_config(h, c)


def test_gv_ping():
    c = parse_config(PING)
    assert gv_check_config(gv("lock(x, y):!1.end!, ping:1"), c.body) == UNIT
    assert gv_check_config(gv("ping:1"), c) == UNIT


def test_gv_rejects_reassociation():
    c = parse_config(REASSOC)
    with pytest.raises(ConfigTypeError) as e:
        gv_check_config(GvEnv({}, {}), c)
    assert e.value.kind == "ZeroOrManyLocks"
    assert check_config([{}], c) == UNIT


def test_gv_main_unit():
    assert gv_check_config(GvEnv({}, {}), parse_config("main ()")) == UNIT


def test_flatten():
    assert flatten(parse_hyperenv("x:1 | y:0")) == {"x": parse_type("1"), "y": parse_type("0")}
    assert flatten(gv("lock(x, y):!1.end!")) == {"x": parse_type("!1.end!"), "y": parse_type("?1.end?")}
    assert flatten([{}]) == {}


def test_splitting_ping():
    c = parse_config(PING).body
    got = splitting(gv("lock(x, y):!1.end!, ping:1"), c)
    assert sorted(map(sorted, got)) == [["ping", "x"], ["y"]]


def test_splitting_lock_free():
    assert splitting(gv("p:1"), parse_config("main p")) == [{"p": Unit()}]


def test_splitting_two_locks_is_path():
    text = (
        "child send ((), x) || (child (let ((), a) = recv x' in wait a; send ((), y)) "
        "|| main (let ((), b) = recv y' in wait b))"
    )
    c = parse_config(text)
    h = splitting(gv("lock(x, x'):!1.end!, lock(y, y'):!1.end!"), c)
    assert len(h) == 3
    _, g = config_aps(parse_config(f"new (x x' : !1.end!). new (y y' : !1.end!). ({text})"))
    assert is_tree(g)
