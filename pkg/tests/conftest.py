from importlib import resources

import pytest

from hgv.surface import parse, parse_config

CORPUS = ["ping", "vending", "link", "link_mix", "cycle", "spawn"]
TYPED = ["ping", "vending", "link"]
MIX = ["link_mix", "spawn"]


def corpus_text(name: str) -> str:
    return (resources.files("hgv") / "corpus" / f"{name}.hgv").read_text(encoding="utf-8")


def corpus_config(name: str):
    return parse_config(corpus_text(name))


PING = "new (x y : !1.end!). (child send ((), x) || main (let ((), y) = recv y in wait y))"


@pytest.fixture
def ping():
    return parse_config(PING)


@pytest.fixture
def vending():
    return corpus_config("vending")


def term(text: str):
    return parse(text)
