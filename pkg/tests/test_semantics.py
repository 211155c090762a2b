import pytest

from hgv.runtime_typing import Child, Main, check_config
from hgv.semantics import (
    FuelExhausted,
    NotSingletonEnv,
    blocked_endpoint,
    classify_progress,
    config_equiv,
    config_size,
    config_step_all,
    congruence_rewrites,
    diamond_check,
    independence,
    is_tree_canonical,
    run,
    term_step,
    trace_json,
    tree_canonical_form,
)
from hgv.surface import parse_config, parse_hyperenv, parse_term, print_ast
from hgv.syntax import Par, Res, Unit, UnitVal, alpha_eq

from conftest import PING, corpus_config
from test_runtime_typing import PING as PING_NAMED
from test_runtime_typing import REASSOC


def test_term_step_beta():
    assert term_step(parse_term("(\\x:1. x) ()")) == UnitVal()


def test_term_step_pair():
    assert term_step(parse_term("let (a, b) = ((), ()) in (b, a)")) == parse_term("((), ())")


def test_term_step_comm_is_config_level():
    assert term_step(parse_term("send ((), x)")) is None


def test_equiv_par_assoc():
    c = parse_config("child a || (child b || main ())")
    d = parse_config("(child a || child b) || main ()")
    assert config_equiv(c, d)


def test_equiv_new_swap():
    c = parse_config("new (x y : !1.end!). (child send ((), x) || main (let ((), y) = recv y in wait y))")
    d = parse_config("new (y x : ?1.end?). (child send ((), x) || main (let ((), y) = recv y in wait y))")
    assert config_equiv(c, d)


def test_equiv_link_comm():
    assert config_equiv(parse_config("link z x y"), parse_config("link z y x"))


def test_not_equiv():
    assert not config_equiv(parse_config("main ()"), parse_config("child ()"))


def test_reify_fork():
    c = parse_config("main (fork (\\x:!1.end!. send ((), x)))")
    [(redex, d)] = config_step_all(c)
    assert redex.rule == "E-Reify-Fork"
    assert isinstance(d, Res) and isinstance(d.body, Par)
    assert d.body.left.flag == "main" and d.body.right.flag == "child"
    assert d.body.left.term == parse_term(d.x)


def test_ping_chain():
    c = parse_config(PING)
    rules = []
    while True:
        steps = config_step_all(c)
        if not steps:
            break
        assert len(steps) == 1
        rules.append(steps[0][0].rule)
        c = steps[0][1]
    assert rules[0] == "E-Comm-Send" and rules[-1] == "E-Comm-Close"
    assert print_ast(c) == "main ()"


def test_value_has_no_steps():
    assert config_step_all(parse_config("main ()")) == []


def test_run_vending():
    r = run(corpus_config("vending"))
    assert r.terminal.flag == "main" and r.terminal.term == UnitVal()


def test_run_empty_trace():
    assert run(parse_config("main ()")).trace == []


def test_ping_traces():
    c = parse_config(PING)
    terminals = [run(c, "random", seed=s).terminal for s in range(10)]
    assert all(config_equiv(t, terminals[0]) for t in terminals)
    assert len(run(c).trace) == 4


def test_run_fuel():
    with pytest.raises(FuelExhausted):
        run(parse_config(PING), fuel=1)


def test_trace_json():
    c = parse_config(PING)
    j = trace_json(c, run(c), "det", None)
    assert j["terminal"] == "main ()" and len(j["steps"]) == 4


def test_tcf_no_new():
    t = tree_canonical_form(parse_config("main ()"))
    assert t.prefix == [] and t.aux == []


def test_tcf_reassociated():
    c = parse_config(REASSOC)
    t = tree_canonical_form(c)
    assert [b.x for b in t.prefix] == ["x", "y"]
    assert all(a.flag == "child" for a in t.aux)
    d = t.to_config()
    assert is_tree_canonical(d)
    assert config_equiv(c, d)


def test_tcf_idempotent():
    d = tree_canonical_form(parse_config(REASSOC)).to_config()
    assert alpha_eq(tree_canonical_form(d).to_config(), d)


def test_tcf_needs_single_env():
    with pytest.raises(NotSingletonEnv):
        tree_canonical_form(parse_config("main ()"), parse_hyperenv("p:1 | q:1"))


def test_independence_singleton():
    c = parse_config("main ()")
    assert independence(c, [{}]) == [({}, c, Main(Unit()))]


def test_independence_two_threads():
    c = parse_config("child p || main q")
    parts = independence(c, parse_hyperenv("p:end! | q:1"))
    assert [r for _, _, r in parts] == [Child(), Main(Unit())]


def test_independence_ping():
    c = parse_config(PING_NAMED).body
    parts = independence(c, parse_hyperenv("x:!1.end!, ping:1 | y:?1.end?"))
    assert [t.flag for _, t, _ in parts] == ["child", "main"]


def test_blocked_endpoint():
    assert blocked_endpoint(parse_config("child x")) == "x"
    assert blocked_endpoint(parse_config("main (let ((), y) = recv y in wait y)")) == "y"
    assert blocked_endpoint(parse_config("main ()")) is None


def test_progress_value():
    p = classify_progress(parse_config("main ()"))
    assert p.verdict == "MainValue" and p.value == UnitVal()


def test_progress_open_blocked():
    p = classify_progress(parse_config("main (wait y)"), parse_hyperenv("y:end?"))
    assert p.verdict == "OpenBlocked"


def test_progress_reducible():
    assert classify_progress(parse_config(PING)).verdict == "Reducible"


def test_progress_deadlock():
    assert classify_progress(corpus_config("cycle")).verdict == "Deadlock"


def test_diamond_spawn():
    c = corpus_config("spawn")
    seen = 0
    while True:
        assert diamond_check(c, mix=True)
        steps = config_step_all(c, mix=True)
        if not steps:
            break
        seen = max(seen, len(steps))
        c = steps[0][1]
    assert seen >= 2


def test_diamond_ping():
    c = parse_config(PING)
    while True:
        assert diamond_check(c)
        steps = config_step_all(c)
        if not steps:
            break
        c = steps[0][1]


def test_size_decreases():
    c = corpus_config("vending")
    for _, d in run(c).trace:
        assert config_size(d) < config_size(c)
        c = d


def test_congruence_preserves_typing():
    c = parse_config(REASSOC)
    rules = set()
    for rule, d in congruence_rewrites(c):
        rules.add(rule)
        assert config_equiv(c, d)
        assert check_config([{}], d) == Main(Unit())
    assert {"SC-ParAssoc", "SC-ParComm", "SC-NewSwap", "SC-NewComm"} <= rules


def test_main_sends_child_receives():
    c = parse_config("new (x y : !1.end?). (main (wait (send ((), x))) || child (let ((), y) = recv y in y))")
    r = run(c)
    assert [s.rule for s, _ in r.trace][0] == "E-Comm-Send"
    assert print_ast(r.terminal) == "main ()"
