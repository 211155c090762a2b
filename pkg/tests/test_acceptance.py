"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import contextlib
import random
import time

import pytest

from hgv.aps import build_aps, is_tree, leaves
from hgv.fghgv import Ret, fg_check, fg_translate, fg_translate_config, is_fg_value
from hgv.generate import configurations, programs
from hgv.hcp import ALPHA, BETA, co, hcp_check, is_inert, lts_step, same_hyperenv
from hgv.runtime_typing import ConfigTypeError, GvEnv, Main, check_config, gv_check_config
from hgv.semantics import (
    RULES,
    flatten_config,
    classify_progress,
    config_equiv,
    config_key,
    config_size,
    config_step_all,
    congruence_rewrites,
    diamond_check,
    is_tree_canonical,
    run,
    tree_canonical_form,
)
from hgv.surface import parse_config, parse_gv_env, parse_hyperenv
from hgv.syntax import (
    Const,
    EndIn,
    EndOut,
    Lolli,
    Par,
    Product,
    Recv,
    Send,
    Sum,
    Thread,
    Unit,
    UnitVal,
    Void,
    dual,
    free_names,
    threads,
)
from hgv.translate import correspondence_check, down, down_env, expected_config_env, tr_config, tr_term, tr_value, up
from hgv.typecheck import check_term
from hgv.hcp import One, Tensor

from conftest import corpus_config
from test_aps import EX_CYCLE, EX_TREE, PAIRS
from test_runtime_typing import PING, REASSOC

BASE = ["ping", "vending", "link"]
MIXED = ["link_mix", "spawn"]
CONGRUENCES = {"SC-LinkComm", "SC-ParComm", "SC-ParAssoc", "SC-ScopeExt", "SC-NewSwap", "SC-NewComm"}
SCOPE_EXT = (
    "new (c d : end!). ((new (x y : !1.end!). (child send ((), x) "
    "|| child (let ((), y) = recv y in wait y; c))) || main (wait d))"
)
UNIT = Main(Unit())


@pytest.fixture
def criterion(capsys):
    @contextlib.contextmanager
    def run_criterion(n, text):
        start = time.perf_counter()
        try:
            yield
        except pytest.xfail.Exception as e:
            emit(n, "FAIL", f"{text}; {e}", start)
            raise
        except BaseException:
            emit(n, "FAIL", text, start)
            raise
        emit(n, "PASS", text, start)

    def emit(n, status, text, start):
        with capsys.disabled():
            print(f"\ncriterion {n}: {status}: {text} ({time.perf_counter() - start:.1f}s)")

    return run_criterion


def reach(c, mix=False):
    seen = {}
    todo = [c]
    while todo:
        x = todo.pop()
        k = config_key(x)
        if k not in seen:
            seen[k] = x
            todo.extend(d for _, d in config_step_all(x, mix))
    return list(seen.values())


def corpus_states(names, mix=False):
    return [c for n in names for c in reach(corpus_config(n), mix)]


def test_criterion_1_worked_examples(criterion):
    with criterion(1, "worked examples: APS tree and cycle, ping under HGV and GV, reassociation"):
        g = build_aps(parse_hyperenv(EX_TREE), PAIRS[:2])
        assert is_tree(g) and leaves(g) == {1, 2}
        assert not is_tree(build_aps(parse_hyperenv(EX_CYCLE), PAIRS))

        ping = parse_config(PING)
        assert check_config(parse_hyperenv("x:!1.end!, ping:1 | y:?1.end?"), ping.body) == UNIT
        assert gv_check_config(GvEnv(*parse_gv_env("lock(x, y):!1.end!, ping:1")), ping.body) == UNIT

        reassoc = parse_config(REASSOC)
        with pytest.raises(ConfigTypeError) as e:
            gv_check_config(GvEnv({}, {}), reassoc)
        assert e.value.kind == "ZeroOrManyLocks"
        assert check_config([{}], reassoc) == UNIT


def test_criterion_2_preservation(criterion):
    with criterion(2, "preservation over 1000+ generated and directed configurations"):
        generated = configurations(2024, 1000)
        assert len(generated) >= 1000
        cases = [(c, False) for c in generated]
        cases += [(c, False) for c in corpus_states(BASE)]
        cases += [(c, True) for c in corpus_states(MIXED, True)]
        cases.append((parse_config(SCOPE_EXT), False))
        seen = set()
        for c, mix in cases:
            r = check_config([{}], c, mix)
            for rule, d in congruence_rewrites(c):
                seen.add(rule)
                assert check_config([{}], d, mix) == r, (rule, c)
            for redex, d in config_step_all(c, mix):
                seen.add(redex.rule)
                assert check_config([{}], d, mix) == r, (redex.rule, c)
        assert CONGRUENCES <= seen, CONGRUENCES - seen
        assert set(RULES) - {"E-Let"} <= seen, set(RULES) - seen


def test_criterion_3_diamond_and_termination(criterion):
    with criterion(3, "diamond, strictly decreasing size, termination within 10x size"):
        for k, c in enumerate(configurations(77, 1000)):
            assert diamond_check(c)
            n = config_size(c)
            for _, d in config_step_all(c):
                assert config_size(d) < n
            run(c, "random", seed=k, fuel=10 * n)


def test_criterion_4_global_progress(criterion):
    with criterion(4, "global progress on ground configurations; vending terminates cleanly"):
        states = 0
        for p in programs(4, 300):
            rng = random.Random(p.seed)
            c = p.config
            while True:
                states += 1
                verdict = classify_progress(c).verdict
                assert verdict in ("Reducible", "MainValue"), (verdict, p.source)
                if verdict == "MainValue":
                    break
                steps = config_step_all(c)
                c = steps[rng.randrange(len(steps))][1]
        assert states > 5000
        for seed in range(20):
            t = run(corpus_config("vending"), "random", seed=seed).terminal
            assert isinstance(t, Thread) and t.flag == "main" and t.term == UnitVal()


def test_criterion_5_tree_canonical_form(criterion):
    with criterion(5, "tree canonical form on the corpus and 200 generated configurations"):
        cases = corpus_states(BASE) + configurations(555, 200)[:200]
        for c in cases:
            r = check_config([{}], c)
            t = tree_canonical_form(c)
            d = t.to_config()
            assert is_tree_canonical(d)
            assert all(b.x in free_names(a) for b, a in zip(t.prefix, t.aux))
            assert config_equiv(c, d)
            assert check_config([{}], d) == r
            assert gv_check_config(GvEnv({}, {}), d) == r


def types_to_depth(depth):
    values = [Unit(), Void(), EndOut(), EndIn()]
    sessions = [EndOut(), EndIn()]
    for _ in range(depth - 1):
        sessions = list(
            dict.fromkeys(sessions + [k(p, s) for k in (Send, Recv) for p in values for s in sessions])
        )
        pairs = [k(a, b) for k in (Product, Sum, Lolli) for a in values for b in values]
        values = [Unit(), Void()] + sessions + pairs
    return values


def count_to_depth(depth):
    values, sessions = 4, 2
    for _ in range(depth - 1):
        sessions = 2 + 2 * values * sessions
        values = 2 + sessions + 3 * values * values
    return values


def closed_values(m):
    """Closed fine-grain values occurring in ``m``."""
    out = []

    def walk(x):
        if is_fg_value(x) and not free_names(x) and not isinstance(x, Const):
            out.append(x)
        for f in getattr(x, "__dataclass_fields__", {}):
            child = getattr(x, f)
            if hasattr(child, "__dataclass_fields__"):
                walk(child)

    walk(m)
    return out


def test_criterion_6_translation_typing(criterion):
    with criterion(6, "translation typing on the corpus; down = co . up exhaustively to depth 3"):
        terms = values = 0
        for name in BASE:
            for d in reach(corpus_config(name)):
                fl = flatten_config(d)
                types = {}
                for b in fl.binders:
                    types.update({b.x: b.ann, b.y: dual(b.ann)})
                for th in fl.threads:
                    if not (isinstance(th, Thread) and th.flag == "main"):
                        continue
                    env = {n: types[n] for n in free_names(th.term)}
                    t = check_term(env, th.term)
                    f = fg_translate(th.term, env)
                    want = {**down_env(env), "r": Tensor(One(), co(down(t)))}
                    assert same_hyperenv(hcp_check(tr_term(env, f, "r")), [want])
                    terms += 1
                    for v in closed_values(f):
                        vt = fg_check({}, Ret(v))
                        assert hcp_check(tr_value({}, v, "r", expected=vt)) == [{"r": co(down(vt))}]
                        values += 1
                fd = fg_translate_config(d)
                assert same_hyperenv(hcp_check(tr_config(fd)), expected_config_env(fd))
        assert terms and values
        types = types_to_depth(3)
        assert len(types) == count_to_depth(3)
        for ty in types:
            assert down(ty) == co(up(ty))
        pytest.xfail(f"depth 4 has {count_to_depth(4):.1e} types, beyond the 60 s budget")


def test_criterion_7_operational_correspondence(criterion):
    with criterion(7, "operational correspondence; HCP preservation and progress on explored states"):
        explored = []
        rep = correspondence_check(fg_translate_config(parse_config(PING.replace("ping", "()"))), reachable=True)
        assert rep.ok, rep.failures
        explored.append(rep)
        for name in BASE:
            rep = correspondence_check(fg_translate_config(corpus_config(name)))
            assert rep.ok, (name, rep.failures)
            assert rep.hcp_states <= 10**5
            explored.append(rep)
        for rep in explored:
            for p in rep.space.procs.values():
                h = hcp_check(p)
                steps = lts_step(p)
                assert steps or is_inert(p)
                for label, q in steps:
                    if label in (ALPHA, BETA):
                        assert same_hyperenv(hcp_check(q), h)


def drop_child_units(c):
    kept = [t for t in threads(c) if not (isinstance(t, Thread) and t.flag == "child" and t.term == UnitVal())]
    out = kept[-1]
    for t in reversed(kept[:-1]):
        out = Par(t, out)
    return out


def test_criterion_8_mix(criterion):
    with criterion(8, "spawn reduces to child M || main () under Mix; link terminals agree"):
        c = parse_config("main (spawn ((\\x:1. x) ()); ())")
        target = parse_config("child ((\\x:1. x) ()) || main ()")
        trace = run(c, mix=True).trace
        hits = [d for _, d in trace if config_equiv(d, target)]
        assert hits
        assert check_config([{}], hits[0], mix=True) == UNIT
        with pytest.raises(ConfigTypeError):
            check_config([{}], hits[0])

        base = run(corpus_config("link")).terminal
        rules = set()
        for seed in range(10):
            res = run(corpus_config("link_mix"), "random", seed=seed, mix=True)
            rules |= {r.rule for r, _ in res.trace}
            assert config_equiv(drop_child_units(res.terminal), base)
        assert "E-Link-Mix" in rules
        spawned = run(corpus_config("spawn"), mix=True).terminal
        assert config_equiv(drop_child_units(spawned), parse_config("main ()"))
