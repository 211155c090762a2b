from hgv.generate import configurations, programs, random_program
from hgv.runtime_typing import Main, check_config
from hgv.semantics import run
from hgv.surface import parse_config, print_ast
from hgv.syntax import alpha_eq


def test_deterministic():
    a, b = random_program(7), random_program(7)
    assert a.source == b.source


def test_programs_typecheck_and_terminate():
    for p in programs(1, 40):
        assert isinstance(check_config([{}], p.config), Main)
        t = run(p.config, "random", seed=p.seed).terminal
        assert t.flag == "main"


def test_configurations_count():
    cs = configurations(3, 50)
    assert len(cs) >= 50
    for c in cs:
        assert isinstance(check_config([{}], c), Main)


def test_print_round_trip():
    for p in programs(2, 20):
        assert alpha_eq(parse_config(print_ast(p.config)), p.config)
