"""Seeded random generation of well-typed closed HGV programs.

Programs fork a few sessions and drive them from the main thread with a
random interleaving. Payloads are ground values or delegated endpoints.
Administrative redexes (β, pairs, case) are sprinkled in so the pure
reduction rules are exercised too.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator

from .semantics import config_step_all
from .surface import parse_config, print_type
from .syntax import (
    Configuration,
    EndIn,
    EndOut,
    Product,
    Recv,
    Send,
    SessionType,
    Sum,
    Unit,
    ValueType,
    dual,
)

GROUND = (Unit(), Product(Unit(), Unit()), Sum(Unit(), Unit()))


@dataclass
class Program:
    seed: int
    source: str
    config: Configuration


class _Gen:
    def __init__(self, rng: random.Random):
        self.rng = rng
        self.n = 0

    def fresh(self, base: str) -> str:
        self.n += 1
        return f"{base}{self.n}"

    # -- types ---------------------------------------------------------------

    def session(self, depth: int, allow_delegate: bool = True) -> SessionType:
        """A protocol ending in ``end!`` (the forked side's view)."""
        if depth == 0 or self.rng.random() < 0.25:
            return EndOut()
        payload = self.payload(allow_delegate)
        cont = self.session(depth - 1, allow_delegate)
        return Send(payload, cont) if self.rng.random() < 0.5 else Recv(payload, cont)

    def payload(self, allow_delegate: bool) -> ValueType:
        if allow_delegate and self.rng.random() < 0.15:
            return dual(self.session(1, False))
        return self.rng.choice(GROUND)

    # -- values --------------------------------------------------------------

    def unit(self) -> str:
        r = self.rng.random()
        if r < 0.7:
            return "()"
        if r < 0.85:
            v = self.fresh("v")
            return f"((\\{v}:1. {v}) ())"
        a, b = self.fresh("a"), self.fresh("b")
        return f"(let ({a}, {b}) = ((), ()) in {a}; {b})"

    def ground_value(self, t: ValueType) -> str:
        if isinstance(t, Unit):
            return self.unit()
        if isinstance(t, Product):
            return f"({self.unit()}, {self.unit()})"
        side = self.rng.choice(("inl", "inr"))
        return f"{side}[{print_type(t)}] {self.unit()}"

    def consume(self, u: str, t: ValueType) -> str:
        """A unit-typed term using up the ground value ``u``."""
        if isinstance(t, Unit):
            return u
        if isinstance(t, Product):
            a, b = self.fresh("a"), self.fresh("b")
            return f"(let ({a}, {b}) = {u} in {a}; {b})"
        a, b = self.fresh("l"), self.fresh("r")
        return f"(case {u} {{ inl {a} -> {a}; inr {b} -> {b} }})"

    # -- processes -----------------------------------------------------------

    def steps(self, c: str, s: SessionType) -> list[str]:
        """Statements driving endpoint ``c`` through ``s`` (any ending).

        Each statement is a prefix text to be followed by the rest."""
        out: list[str] = []
        while isinstance(s, (Send, Recv)):
            t = s.payload
            if isinstance(s, Send):
                if isinstance(t, SessionType):
                    d = self.fresh("d")
                    body = self.serve(d, dual(t))
                    out.append(f"let {d} = fork (\\{d}:{print_type(dual(t))}. {body}) in ")
                    out.append(f"let {c} = send ({d}, {c}) in ")
                else:
                    out.append(f"let {c} = send ({self.ground_value(t)}, {c}) in ")
            else:
                u = self.fresh("u")
                out.append(f"let ({u}, {c}) = recv {c} in ")
                if isinstance(t, SessionType):
                    out.append("".join(self.steps(u, t)) + f"{self.finish(u, _end(t))}; ")
                else:
                    out.append(f"{self.consume(u, t)}; ")
            s = s.cont
        return out

    def finish(self, c: str, s: SessionType) -> str:
        """Close a fully used endpoint, yielding unit."""
        if isinstance(s, EndIn):
            return f"wait {c}"
        raise ValueError("only the waiting side finishes with unit")

    def serve(self, c: str, s: SessionType) -> str:
        """A term of type ``end!`` following ``s`` on ``c``."""
        seq = self.steps(c, s)
        return "".join(seq) + c

    def main(self, sessions: int, depth: int) -> str:
        chans = []
        head = []
        for _ in range(sessions):
            c = self.fresh("c")
            s = self.session(depth)
            head.append(f"let {c} = fork (\\{c}:{print_type(s)}. {self.serve(c, s)}) in ")
            chans.append((c, dual(s)))
        queues = [self.steps(c, s) + [f"{self.finish(c, _end(s))}; "] for c, s in chans]
        body = []
        while any(queues):
            q = self.rng.choice([q for q in queues if q])
            body.append(q.pop(0))
        tail = self.unit()
        return "main (" + "".join(head) + "".join(body) + tail + ")"


def _end(s: SessionType) -> SessionType:
    while isinstance(s, (Send, Recv)):
        s = s.cont
    return s


def random_program(seed: int, sessions: int | None = None, depth: int = 3) -> Program:
    rng = random.Random(seed)
    g = _Gen(rng)
    k = sessions if sessions is not None else rng.randint(1, 3)
    src = g.main(k, depth)
    return Program(seed, src, parse_config(src))


def programs(seed: int, count: int, **kw) -> Iterator[Program]:
    rng = random.Random(seed)
    for _ in range(count):
        yield random_program(rng.randrange(2**31), **kw)


def reachable(
    c: Configuration, limit: int, rng: random.Random | None = None, mix: bool = False
) -> list[Configuration]:
    """Up to ``limit`` configurations spread evenly over one random run
    from ``c``, always including ``c`` and the terminal."""
    rng = rng or random.Random(0)
    run = [c]
    cur = c
    while True:
        steps = config_step_all(cur, mix)
        if not steps:
            break
        _, cur = steps[rng.randrange(len(steps))]
        run.append(cur)
    if len(run) <= limit:
        return run
    idx = sorted({round(i * (len(run) - 1) / (limit - 1)) for i in range(limit)})
    return [run[i] for i in idx]


def configurations(seed: int, count: int, per_program: int = 12, mix: bool = False) -> list[Configuration]:
    """At least ``count`` well-typed closed configurations."""
    rng = random.Random(seed)
    out: list[Configuration] = []
    while len(out) < count:
        p = random_program(rng.randrange(2**31))
        out.extend(reachable(p.config, per_program, rng, mix))
    return out
