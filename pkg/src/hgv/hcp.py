"""HCP: processes typed by hypersequent classical linear logic.

Concrete syntax::

    P ::= 0 | x<->y : A | new (x y). P | P || Q | (P)
        | x[y].P | x(y).P | x[].P | x().P
        | x.inl[B].P | x.inr[A].P | x.case(P, Q) | x.absurd[r : A, ...]

    A ::= 1 | bot | 0 | top | A * A | A % A | A + A | A & A | (A)

``*`` and ``%`` bind tighter than ``+`` and ``&``; all are left
associative. A prefix continuation, and the body of ``new``, is a single
unary process, so parallel bodies need parentheses.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Optional

from .canon import canonical_key
from .lexer import ParseError, TokenStream
from .syntax import fresh

# ---------------------------------------------------------------------------
# Types


class LinearType:
    __slots__ = ()

    def __str__(self) -> str:
        return print_ltype(self)


@dataclass(frozen=True, slots=True)
class One(LinearType):
    pass


@dataclass(frozen=True, slots=True)
class Bot(LinearType):
    pass


@dataclass(frozen=True, slots=True)
class Zero(LinearType):
    pass


@dataclass(frozen=True, slots=True)
class Top(LinearType):
    pass


@dataclass(frozen=True, slots=True)
class Tensor(LinearType):
    left: LinearType
    right: LinearType


@dataclass(frozen=True, slots=True)
class Parr(LinearType):
    left: LinearType
    right: LinearType


@dataclass(frozen=True, slots=True)
class Plus(LinearType):
    left: LinearType
    right: LinearType


@dataclass(frozen=True, slots=True)
class With(LinearType):
    left: LinearType
    right: LinearType


_DUAL = {One: Bot, Bot: One, Zero: Top, Top: Zero, Tensor: Parr, Parr: Tensor, Plus: With, With: Plus}


@lru_cache(maxsize=4096)
def co(a: LinearType) -> LinearType:
    k = _DUAL[type(a)]
    if isinstance(a, (Tensor, Parr, Plus, With)):
        return k(co(a.left), co(a.right))
    return k()


def print_ltype(a: LinearType, prec: int = 0) -> str:
    if isinstance(a, One):
        return "1"
    if isinstance(a, Bot):
        return "bot"
    if isinstance(a, Zero):
        return "0"
    if isinstance(a, Top):
        return "top"
    # precedence: 0 additive, 1 multiplicative, 2 atom
    if isinstance(a, (Plus, With)):
        op = "+" if isinstance(a, Plus) else "&"
        s = f"{print_ltype(a.left, 0)} {op} {print_ltype(a.right, 1)}"
        return f"({s})" if prec > 0 else s
    op = "*" if isinstance(a, Tensor) else "%"
    s = f"{print_ltype(a.left, 1)} {op} {print_ltype(a.right, 2)}"
    return f"({s})" if prec > 1 else s


# ---------------------------------------------------------------------------
# Processes


class Process:
    __slots__ = ("_fv", "_ak", "_on")

    def __str__(self) -> str:
        return print_process(self)


@dataclass(frozen=True, slots=True)
class Link(Process):
    """``x <-> y`` with ``x : ann`` and ``y : co(ann)``."""

    x: str
    y: str
    ann: LinearType


@dataclass(frozen=True, slots=True)
class Res(Process):
    x: str
    y: str
    body: Process


@dataclass(frozen=True, slots=True)
class Par(Process):
    left: Process
    right: Process


@dataclass(frozen=True, slots=True)
class Halt(Process):
    pass


@dataclass(frozen=True, slots=True)
class Send(Process):
    """Bound output ``x[y].P``."""

    x: str
    y: str
    body: Process


@dataclass(frozen=True, slots=True)
class Recv(Process):
    x: str
    y: str
    body: Process


@dataclass(frozen=True, slots=True)
class Close(Process):
    x: str
    body: Process


@dataclass(frozen=True, slots=True)
class Wait(Process):
    x: str
    body: Process


@dataclass(frozen=True, slots=True)
class Inl(Process):
    """Select left; ``other`` is the type of the unchosen right branch."""

    x: str
    other: LinearType
    body: Process


@dataclass(frozen=True, slots=True)
class Inr(Process):
    x: str
    other: LinearType
    body: Process


@dataclass(frozen=True, slots=True)
class Offer(Process):
    x: str
    left: Process
    right: Process


@dataclass(frozen=True)
class AbsurdOn(Process):
    """``x.case()`` on ``x : top``; ``extra`` types the other names it holds."""

    x: str
    extra: tuple[tuple[str, LinearType], ...] = ()

    def __hash__(self) -> int:
        return hash((self.x, self.extra))


def absurd_on(x: str, extra: Mapping[str, LinearType] | None = None) -> AbsurdOn:
    return AbsurdOn(x, tuple(sorted((extra or {}).items())))


def par_all(ps: Iterable[Process]) -> Process:
    ps = list(ps)
    if not ps:
        return Halt()
    out = ps[-1]
    for p in reversed(ps[:-1]):
        out = Par(p, out)
    return out


# Derived forms


def usend(x: str, y: str, p: Process, z: str | None = None, ann: LinearType | None = None) -> Process:
    """Unbound send of ``y`` along ``x``; ``ann`` is the type of ``y``."""
    z = z or fresh("u", names(p) | {x, y})
    return Send(x, z, Par(Link(y, z, ann if ann is not None else One()), p))


def ping(x: str, p: Process, z: str | None = None) -> Process:
    z = z or fresh("u", names(p) | {x})
    return Send(x, z, Par(Close(z, Halt()), p))


def pong(x: str, p: Process, z: str | None = None) -> Process:
    z = z or fresh("u", names(p) | {x})
    return Recv(x, z, Wait(z, p))


# ---------------------------------------------------------------------------
# Names


def free_names(p: Process) -> frozenset[str]:
    try:
        return p._fv
    except AttributeError:
        pass
    fv = _free_names(p)
    object.__setattr__(p, "_fv", fv)
    return fv


def _free_names(p: Process) -> frozenset[str]:
    if isinstance(p, Link):
        return frozenset((p.x, p.y))
    if isinstance(p, Res):
        return free_names(p.body) - {p.x, p.y}
    if isinstance(p, Par):
        return free_names(p.left) | free_names(p.right)
    if isinstance(p, Halt):
        return frozenset()
    if isinstance(p, (Send, Recv)):
        return (free_names(p.body) - {p.y}) | {p.x}
    if isinstance(p, (Close, Wait, Inl, Inr)):
        return free_names(p.body) | {p.x}
    if isinstance(p, Offer):
        return free_names(p.left) | free_names(p.right) | {p.x}
    if isinstance(p, AbsurdOn):
        return frozenset((p.x, *(n for n, _ in p.extra)))
    raise TypeError(f"not a process: {p!r}")


def names(p: Process) -> set[str]:
    out: set[str] = set()
    stack = [p]
    while stack:
        q = stack.pop()
        if isinstance(q, Link):
            out.update((q.x, q.y))
        elif isinstance(q, (Res, Send, Recv)):
            out.update((q.x, q.y))
            stack.append(q.body)
        elif isinstance(q, Par):
            stack.extend((q.left, q.right))
        elif isinstance(q, (Close, Wait, Inl, Inr)):
            out.add(q.x)
            stack.append(q.body)
        elif isinstance(q, Offer):
            out.add(q.x)
            stack.extend((q.left, q.right))
        elif isinstance(q, AbsurdOn):
            out.add(q.x)
            out.update(n for n, _ in q.extra)
    return out


def ordered_free_names(p: Process) -> list[str]:
    out: list[str] = []
    seen: set[str] = set()

    def go(q, bound):
        def add(n):
            if n not in bound and n not in seen:
                seen.add(n)
                out.append(n)

        if isinstance(q, Link):
            add(q.x)
            add(q.y)
        elif isinstance(q, Res):
            go(q.body, bound | {q.x, q.y})
        elif isinstance(q, Par):
            go(q.left, bound)
            go(q.right, bound)
        elif isinstance(q, (Send, Recv)):
            add(q.x)
            go(q.body, bound | {q.y})
        elif isinstance(q, (Close, Wait, Inl, Inr)):
            add(q.x)
            go(q.body, bound)
        elif isinstance(q, Offer):
            add(q.x)
            go(q.left, bound)
            go(q.right, bound)
        elif isinstance(q, AbsurdOn):
            add(q.x)
            for n, _ in q.extra:
                add(n)

    go(p, frozenset())
    return out


def _occurrence(p: Process) -> tuple[str, ...]:
    """Memoized :func:`ordered_free_names`."""
    try:
        return p._on
    except AttributeError:
        pass
    if isinstance(p, Link):
        out = (p.x, p.y)
    elif isinstance(p, Res):
        out = tuple(n for n in _occurrence(p.body) if n != p.x and n != p.y)
    elif isinstance(p, Par):
        left = _occurrence(p.left)
        out = left + tuple(n for n in _occurrence(p.right) if n not in left)
    elif isinstance(p, (Send, Recv)):
        out = (p.x,) + tuple(n for n in _occurrence(p.body) if n != p.y and n != p.x)
    elif isinstance(p, (Close, Wait, Inl, Inr)):
        out = (p.x,) + tuple(n for n in _occurrence(p.body) if n != p.x)
    elif isinstance(p, Offer):
        seen = [p.x]
        for n in _occurrence(p.left) + _occurrence(p.right):
            if n not in seen:
                seen.append(n)
        out = tuple(seen)
    elif isinstance(p, AbsurdOn):
        out = tuple(dict.fromkeys((p.x, *(n for n, _ in p.extra))))
    else:
        out = ()
    object.__setattr__(p, "_on", out)
    return out


def canonical_pairs(pairs, items) -> list[tuple[str, str]]:
    """Order and orient restricted pairs by first occurrence in ``items``."""
    pos: dict[str, int] = {}
    for it in items:
        for n in _occurrence(it):
            pos.setdefault(n, len(pos))
    big = len(pos)
    out = []
    for x, y in pairs:
        px, py = pos.get(x, big), pos.get(y, big)
        out.append((min(px, py), (x, y) if px <= py else (y, x)))
    out.sort(key=lambda e: e[0])
    return [pr for _, pr in out]


def rename(p: Process, mapping: Mapping[str, str]) -> Process:
    """Capture-avoiding renaming of free names."""
    mapping = {k: v for k, v in mapping.items() if k != v}
    if not mapping:
        return p
    return _ren(p, mapping)


def _r(n, m):
    return m.get(n, n)


def _under(binders, body, mapping):
    inner = {k: v for k, v in mapping.items() if k not in binders}
    if not inner:
        return binders, body, inner
    danger = set(inner.values())
    if not danger.intersection(binders):
        return binders, body, inner
    new = []
    avoid = danger | names(body) | set(inner)
    for b in binders:
        if b in danger:
            nb = fresh(b, avoid)
            avoid.add(nb)
            inner[b] = nb
            new.append(nb)
        else:
            new.append(b)
    return tuple(new), body, inner


def _ren(p, m):
    if not m or free_names(p).isdisjoint(m):
        return p
    if isinstance(p, Link):
        return Link(_r(p.x, m), _r(p.y, m), p.ann)
    if isinstance(p, Halt):
        return p
    if isinstance(p, Res):
        (a, b), body, inner = _under((p.x, p.y), p.body, m)
        return Res(a, b, _ren(body, inner))
    if isinstance(p, Par):
        return Par(_ren(p.left, m), _ren(p.right, m))
    if isinstance(p, (Send, Recv)):
        (b,), body, inner = _under((p.y,), p.body, m)
        return type(p)(_r(p.x, m), b, _ren(body, inner))
    if isinstance(p, (Close, Wait)):
        return type(p)(_r(p.x, m), _ren(p.body, m))
    if isinstance(p, (Inl, Inr)):
        return type(p)(_r(p.x, m), p.other, _ren(p.body, m))
    if isinstance(p, Offer):
        return Offer(_r(p.x, m), _ren(p.left, m), _ren(p.right, m))
    if isinstance(p, AbsurdOn):
        return AbsurdOn(_r(p.x, m), tuple(sorted((_r(n, m), t) for n, t in p.extra)))
    raise TypeError(f"not a process: {p!r}")


def freshen(p: Process, avoid: Iterable[str] = ()) -> Process:
    """Rename every binder apart from each other and from free names."""
    taken = set(free_names(p)) | set(avoid)
    pool = taken | names(p)

    def pick(n):
        if n in taken:
            n2 = fresh(n, pool)
        else:
            n2 = n
        taken.add(n2)
        pool.add(n2)
        return n2

    def go(q, m):
        if isinstance(q, Link):
            return Link(_r(q.x, m), _r(q.y, m), q.ann)
        if isinstance(q, Halt):
            return q
        if isinstance(q, Res):
            a, b = pick(q.x), pick(q.y)
            return Res(a, b, go(q.body, {**m, q.x: a, q.y: b}))
        if isinstance(q, Par):
            return Par(go(q.left, m), go(q.right, m))
        if isinstance(q, (Send, Recv)):
            x = _r(q.x, m)
            b = pick(q.y)
            return type(q)(x, b, go(q.body, {**m, q.y: b}))
        if isinstance(q, (Close, Wait)):
            return type(q)(_r(q.x, m), go(q.body, m))
        if isinstance(q, (Inl, Inr)):
            return type(q)(_r(q.x, m), q.other, go(q.body, m))
        if isinstance(q, Offer):
            return Offer(_r(q.x, m), go(q.left, m), go(q.right, m))
        if isinstance(q, AbsurdOn):
            return AbsurdOn(_r(q.x, m), tuple(sorted((_r(n, m), t) for n, t in q.extra)))
        raise TypeError(f"not a process: {q!r}")

    return go(p, {})


def alpha_key(p: Process, env: Mapping[str, int] | None = None, d: int = 0):
    env = dict(env or {})

    def ref(n, env):
        lvl = env.get(n)
        return ("b", lvl) if lvl is not None else ("f", n)

    def go(q, env, d):
        if isinstance(q, Link):
            a, b = ref(q.x, env), ref(q.y, env)
            if repr(a) <= repr(b):
                return ("link", a, b, q.ann)
            return ("link", b, a, co(q.ann))
        if isinstance(q, Halt):
            return ("0",)
        if isinstance(q, Res):
            return ("res", go(q.body, {**env, q.x: d, q.y: d + 1}, d + 2))
        if isinstance(q, Par):
            return ("par", go(q.left, env, d), go(q.right, env, d))
        if isinstance(q, (Send, Recv)):
            tag = "send" if isinstance(q, Send) else "recv"
            return (tag, ref(q.x, env), go(q.body, {**env, q.y: d}, d + 1))
        if isinstance(q, (Close, Wait)):
            return (type(q).__name__, ref(q.x, env), go(q.body, env, d))
        if isinstance(q, (Inl, Inr)):
            return (type(q).__name__, ref(q.x, env), q.other, go(q.body, env, d))
        if isinstance(q, Offer):
            return ("offer", ref(q.x, env), go(q.left, env, d), go(q.right, env, d))
        if isinstance(q, AbsurdOn):
            return ("absurd", ref(q.x, env), tuple(sorted((repr(ref(n, env)), t) for n, t in q.extra)))
        raise TypeError(f"not a process: {q!r}")

    return go(p, env, d)


# ---------------------------------------------------------------------------
# Structural congruence


def flatten(p: Process, fresh_binders: bool = True) -> tuple[list[tuple[str, str]], list[Process]]:
    """Extrude top-level restrictions and drop inert components. Pass
    ``fresh_binders=False`` when binders are already distinct."""
    if fresh_binders:
        p = freshen(p)
    pairs: list[tuple[str, str]] = []
    items: list[Process] = []
    stack = [p]
    while stack:
        q = stack.pop()
        if isinstance(q, Res):
            pairs.append((q.x, q.y))
            stack.append(q.body)
        elif isinstance(q, Par):
            stack.append(q.right)
            stack.append(q.left)
        elif isinstance(q, Halt):
            continue
        else:
            items.append(q)
    return pairs, items


def unflatten(pairs, items) -> Process:
    out = par_all(items)
    for x, y in reversed(pairs):
        out = Res(x, y, out)
    return out


def hcp_key(p: Process) -> str:
    pairs, items = flatten(p)
    used = set().union(*(free_names(i) for i in items)) if items else set()
    pairs = [pr for pr in pairs if pr[0] in used or pr[1] in used]

    def item_names(t, flip):
        if isinstance(t, Link):
            return [t.y, t.x] if flip else [t.x, t.y]
        return ordered_free_names(t)

    return canonical_key(
        pairs,
        items,
        lambda t, env: alpha_key(t, env),
        item_names,
        lambda t: isinstance(t, Link),
        lambda i, a, b: (min(a, b), max(a, b)),
    )


def hcp_equiv(p: Process, q: Process) -> bool:
    return hcp_key(p) == hcp_key(q)


# ---------------------------------------------------------------------------
# Typing


class HcpTypeError(Exception):
    pass


HyperEnv = list[dict[str, LinearType]]


def _single(h: HyperEnv, what: str) -> dict:
    if not h:
        return {}
    if len(h) != 1:
        raise HcpTypeError(f"{what} needs a single environment, found {len(h)}")
    return dict(h[0])


def _find(h: HyperEnv, n: str) -> int:
    for i, env in enumerate(h):
        if n in env:
            return i
    raise HcpTypeError(f"name {n!r} is not used")


def _fresh_name(h: HyperEnv, n: str) -> None:
    for env in h:
        if n in env:
            raise HcpTypeError(f"name {n!r} used twice")


def hcp_check(p: Process) -> HyperEnv:
    """Synthesize the hyper-environment typing ``p``."""
    if isinstance(p, Halt):
        return []
    if isinstance(p, Link):
        if p.x == p.y:
            raise HcpTypeError("link endpoints must differ")
        return [{p.x: p.ann, p.y: co(p.ann)}]
    if isinstance(p, Par):
        h1, h2 = hcp_check(p.left), hcp_check(p.right)
        n1 = {n for e in h1 for n in e}
        n2 = {n for e in h2 for n in e}
        if n1 & n2:
            raise HcpTypeError(f"names {sorted(n1 & n2)} shared across ||")
        return h1 + h2
    if isinstance(p, Res):
        h = hcp_check(p.body)
        i, j = _find(h, p.x), _find(h, p.y)
        if i == j:
            raise HcpTypeError(f"both ends of {p.x}/{p.y} in one environment")
        if h[j][p.y] != co(h[i][p.x]):
            raise HcpTypeError(f"{p.x} and {p.y} are not dual")
        merged = {k: v for k, v in {**h[i], **h[j]}.items() if k not in (p.x, p.y)}
        return [e for k, e in enumerate(h) if k not in (i, j)] + [merged]
    if isinstance(p, Close):
        h = hcp_check(p.body)
        _fresh_name(h, p.x)
        return h + [{p.x: One()}]
    if isinstance(p, Wait):
        env = _single(hcp_check(p.body), "wait")
        if p.x in env:
            raise HcpTypeError(f"name {p.x!r} used twice")
        env[p.x] = Bot()
        return [env]
    if isinstance(p, Send):
        h = hcp_check(p.body)
        i, j = _find(h, p.y), _find(h, p.x)
        if i == j:
            raise HcpTypeError(f"{p.y} and {p.x} must come from separate environments")
        a, b = h[i][p.y], h[j][p.x]
        merged = {k: v for k, v in {**h[i], **h[j]}.items() if k not in (p.x, p.y)}
        merged[p.x] = Tensor(a, b)
        return [e for k, e in enumerate(h) if k not in (i, j)] + [merged]
    if isinstance(p, Recv):
        env = _single(hcp_check(p.body), "receive")
        if p.y not in env or p.x not in env:
            raise HcpTypeError(f"receive on {p.x} needs {p.x} and {p.y} in its continuation")
        a, b = env.pop(p.y), env.pop(p.x)
        env[p.x] = Parr(a, b)
        return [env]
    if isinstance(p, (Inl, Inr)):
        env = _single(hcp_check(p.body), "select")
        if p.x not in env:
            raise HcpTypeError(f"select on {p.x} needs {p.x} in its continuation")
        a = env.pop(p.x)
        env[p.x] = Plus(a, p.other) if isinstance(p, Inl) else Plus(p.other, a)
        return [env]
    if isinstance(p, Offer):
        l = _single(hcp_check(p.left), "offer")
        r = _single(hcp_check(p.right), "offer")
        if p.x not in l or p.x not in r:
            raise HcpTypeError(f"offer on {p.x} needs {p.x} in both branches")
        a, b = l.pop(p.x), r.pop(p.x)
        if l != r:
            raise HcpTypeError("offer branches use different environments")
        l[p.x] = With(a, b)
        return [l]
    if isinstance(p, AbsurdOn):
        env = dict(p.extra)
        if p.x in env:
            raise HcpTypeError(f"name {p.x!r} used twice")
        env[p.x] = Top()
        return [env]
    raise TypeError(f"not a process: {p!r}")


def same_hyperenv(g: HyperEnv, h: HyperEnv) -> bool:
    from collections import Counter

    def norm(x):
        return Counter(frozenset(e.items()) for e in x if e)

    return norm(g) == norm(h)


# ---------------------------------------------------------------------------
# Labels


@dataclass(frozen=True, order=True)
class Action:
    """kind: send, recv, close, wait, inl, inr, offer-inl, offer-inr, link."""

    kind: str
    x: str
    y: str = ""  # bound object for send/recv, partner for link

    def __str__(self) -> str:
        k, x, y = self.kind, self.x, self.y
        return {
            "send": f"{x}[{y}]",
            "recv": f"{x}({y})",
            "close": f"{x}[]",
            "wait": f"{x}()",
            "inl": f"{x}◁inl",
            "inr": f"{x}◁inr",
            "offer-inl": f"{x}▷inl",
            "offer-inr": f"{x}▷inr",
            "link": f"{x}↔{y}",
        }[k]

    def subjects(self) -> set[str]:
        return {self.x, self.y} if self.kind == "link" else {self.x}


def link_action(x: str, y: str) -> Action:
    a, b = sorted((x, y))
    return Action("link", a, b)


@dataclass(frozen=True, order=True)
class Joint:
    first: Action
    second: Action

    def __str__(self) -> str:
        return f"{self.first} ∥ {self.second}"


def joint(a: Action, b: Action) -> Joint:
    return Joint(*sorted((a, b)))


ALPHA = "α"
BETA = "β"
TAU = "τ"
Label = object  # Action | Joint | ALPHA | BETA | TAU


def label_str(l) -> str:
    return str(l)


_BOUND_OBJ = ("send", "recv")


def _bound_objects(l) -> list[str]:
    if isinstance(l, Action):
        return [l.y] if l.kind in _BOUND_OBJ else []
    if isinstance(l, Joint):
        return _bound_objects(l.first) + _bound_objects(l.second)
    return []


def _rename_label(l, m):
    if isinstance(l, Action):
        if l.kind == "link":
            return link_action(_r(l.x, m), _r(l.y, m))
        return Action(l.kind, _r(l.x, m), _r(l.y, m) if l.y else "")
    if isinstance(l, Joint):
        return joint(_rename_label(l.first, m), _rename_label(l.second, m))
    return l


# ---------------------------------------------------------------------------
# Transitions


def _act(p: Process):
    if isinstance(p, Send):
        return [(Action("send", p.x, p.y), p.body)]
    if isinstance(p, Recv):
        return [(Action("recv", p.x, p.y), p.body)]
    if isinstance(p, Close):
        return [(Action("close", p.x), p.body)]
    if isinstance(p, Wait):
        return [(Action("wait", p.x), p.body)]
    if isinstance(p, Inl):
        return [(Action("inl", p.x), p.body)]
    if isinstance(p, Inr):
        return [(Action("inr", p.x), p.body)]
    if isinstance(p, Offer):
        return [(Action("offer-inl", p.x), p.left), (Action("offer-inr", p.x), p.right)]
    if isinstance(p, Link):
        return [(link_action(p.x, p.y), Halt())]
    return []


_DUALS = {
    ("send", "recv"),
    ("close", "wait"),
    ("inl", "offer-inl"),
    ("inr", "offer-inr"),
}


def _mentions(l, x: str, y: str) -> bool:
    if isinstance(l, Action):
        return bool(l.subjects() & {x, y})
    if isinstance(l, Joint):
        return _mentions(l.first, x, y) or _mentions(l.second, x, y)
    return False


def _syncs(a: Action, b: Action, partner: Mapping[str, str]) -> bool:
    """Whether a joint label of ``a`` and ``b`` can survive the enclosing
    restrictions: either a dual pair on a restricted name pair, or two
    actions on free names only."""
    if a.kind != "link" and b.kind != "link" and partner.get(a.x) == b.x:
        return (a.kind, b.kind) in _DUALS or (b.kind, a.kind) in _DUALS
    return not any(n in partner for n in a.subjects() | b.subjects())


def _steps(p: Process, partner: Mapping[str, str]):
    """Transitions of a process whose binders are all distinct.
    ``partner`` maps each enclosing restricted name to its co-name."""
    if isinstance(p, Par):
        left = _steps(p.left, partner)
        right = _steps(p.right, partner)
        out = [(l, Par(q, p.right)) for l, q in left]
        out += [(l, Par(p.left, q)) for l, q in right]
        for l1, q1 in left:
            if not isinstance(l1, Action):
                continue
            for l2, q2 in right:
                if isinstance(l2, Action) and _syncs(l1, l2, partner):
                    out.append((joint(l1, l2), Par(q1, q2)))
        return out
    if isinstance(p, Res):
        x, y = p.x, p.y
        out = []
        for l, q in _steps(p.body, {**partner, x: y, y: x}):
            if isinstance(l, Joint):
                a, b = l.first, l.second
                for s, r in ((a, b), (b, a)):
                    if {s.x, r.x} == {x, y} and (s.kind, r.kind) in _DUALS:
                        if s.kind == "send":
                            out.append((BETA, Res(x, y, Res(s.y, r.y, q))))
                        elif s.kind == "close":
                            out.append((BETA, q))
                        else:
                            out.append((BETA, Res(x, y, q)))
                if not _mentions(l, x, y):
                    out.append((l, Res(x, y, q)))
                continue
            if isinstance(l, Action) and l.kind == "link":
                ends = {l.x, l.y}
                if ends == {x, y}:
                    continue
                if x in ends:
                    (w,) = ends - {x}
                    out.append((ALPHA, rename(q, {y: w})))
                    continue
                if y in ends:
                    (w,) = ends - {y}
                    out.append((ALPHA, rename(q, {x: w})))
                    continue
            if not _mentions(l, x, y):
                out.append((l, Res(x, y, q)))
        return out
    return _act(p)


def prune(p: Process) -> Process:
    """Drop inert parallel components and unused restrictions."""
    return _prune(p)[0]


def _prune(p):
    if isinstance(p, Par):
        a, fa = _prune(p.left)
        b, fb = _prune(p.right)
        if isinstance(a, Halt):
            return b, fb
        if isinstance(b, Halt):
            return a, fa
        return Par(a, b), fa | fb
    if isinstance(p, Res):
        body, fv = _prune(p.body)
        if p.x not in fv and p.y not in fv:
            return body, fv
        return Res(p.x, p.y, body), fv - {p.x, p.y}
    return p, free_names(p)


@lru_cache(maxsize=None)
def _tstr(a: LinearType) -> str:
    return print_ltype(a)


def key_str(p: Process) -> str:
    """String form of :func:`alpha_key` using de Bruijn indices; memoized
    per node so shared subtrees are keyed once."""
    return _ks(p, {}, 0)


def _ks(q, env, d):
    fv = free_names(q)
    sig = tuple(d - env[n] if n in env else n for n in fv)
    try:
        cache = q._ak
    except AttributeError:
        cache = {}
        object.__setattr__(q, "_ak", cache)
    hit = cache.get(sig)
    if hit is not None:
        return hit

    def ref(n):
        lvl = env.get(n)
        return f"#{d - lvl}" if lvl is not None else f"${n}"

    if isinstance(q, Link):
        a, b = ref(q.x), ref(q.y)
        out = f"<{a} {b}:{_tstr(q.ann)}>" if a <= b else f"<{b} {a}:{_tstr(co(q.ann))}>"
    elif isinstance(q, Halt):
        out = "0"
    elif isinstance(q, Res):
        out = f"R({_ks(q.body, {**env, q.x: d, q.y: d + 1}, d + 2)})"
    elif isinstance(q, Par):
        out = f"P({_ks(q.left, env, d)},{_ks(q.right, env, d)})"
    elif isinstance(q, (Send, Recv)):
        tag = "S" if isinstance(q, Send) else "V"
        out = f"{tag}{ref(q.x)}({_ks(q.body, {**env, q.y: d}, d + 1)})"
    elif isinstance(q, (Close, Wait)):
        tag = "C" if isinstance(q, Close) else "W"
        out = f"{tag}{ref(q.x)}({_ks(q.body, env, d)})"
    elif isinstance(q, (Inl, Inr)):
        tag = "L" if isinstance(q, Inl) else "I"
        out = f"{tag}{ref(q.x)}:{_tstr(q.other)}({_ks(q.body, env, d)})"
    elif isinstance(q, Offer):
        out = f"O{ref(q.x)}({_ks(q.left, env, d)},{_ks(q.right, env, d)})"
    elif isinstance(q, AbsurdOn):
        extra = ",".join(sorted(f"{ref(n)}:{_tstr(t)}" for n, t in q.extra))
        out = f"A{ref(q.x)}[{extra}]"
    else:
        raise TypeError(f"not a process: {q!r}")
    cache[sig] = out
    return out


def state_key(p: Process):
    """A cheap identity for LTS states: α-equivalence after pruning.
    Coarser than syntax, finer than structural congruence."""
    return key_str(prune(p))


def alpha_normal(p: Process, fresh_binders: bool = True) -> Process:
    """Fire every enabled α-step (link renaming) eagerly.

    α-steps are confluent and commute with all other transitions, so the
    result is weakly bisimilar to ``p`` whenever α is internal.
    """
    pairs, items = flatten(p, fresh_binders)
    partner: dict[str, str] = {}
    for x, y in pairs:
        partner[x] = y
        partner[y] = x
    fvs = [set(free_names(i)) for i in items]
    alive = [True] * len(items)
    changed = True
    while changed:
        changed = False
        for k, it in enumerate(items):
            if not alive[k] or not isinstance(it, Link):
                continue
            a, b = it.x, it.y
            if partner.get(a) == b:
                continue
            if a in partner:
                gone, keep = a, b
            elif b in partner:
                gone, keep = b, a
            else:
                continue
            other = partner.pop(gone)
            partner.pop(other, None)
            alive[k] = False
            for j, jt in enumerate(items):
                if alive[j] and other in fvs[j]:
                    items[j] = rename(jt, {other: keep})
                    fvs[j] = set(free_names(items[j]))
                    break
            changed = True
    used: set[str] = set()
    for k in range(len(items)):
        if alive[k]:
            used |= fvs[k]
    items = [it for k, it in enumerate(items) if alive[k]]
    pairs = [(x, y) for x, y in pairs if x in partner and (x in used or y in used)]
    return unflatten(canonical_pairs(pairs, items), items)


_PREFIXES = (Send, Recv, Close, Wait, Inl, Inr, Offer)


def forward_normal(p: Process, fresh_binders: bool = True) -> Process:
    """α-normal form that also plugs blocked forwardees into their links.

    When a restricted pair (a, b) has a top-level component whose first
    action is on ``b`` and ``a`` occurs only as one end of a single link
    ``a <-> w`` elsewhere, the component moves into the link's place with
    ``b`` renamed to ``w``. The component cannot act before the link
    fires, and the link firing is an α-step, so the result is weakly
    α-bisimilar to ``p``. Binders must be distinct from each other and
    from free names.
    """
    p = alpha_normal(p, fresh_binders)
    pairs, items = flatten(p, False)
    partner: dict[str, str] = {}
    for x, y in pairs:
        partner[x] = y
        partner[y] = x
    changed = True
    while changed:
        changed = False
        for k, it in enumerate(items):
            if not isinstance(it, _PREFIXES) or it.x not in partner:
                continue
            b = it.x
            a = partner[b]
            holders = [j for j, jt in enumerate(items) if j != k and a in free_names(jt)]
            if len(holders) != 1:
                continue
            j = holders[0]
            plugged = _plug(items[j], a, it, b)
            if plugged is None:
                continue
            items[j] = plugged
            del items[k]
            del partner[a], partner[b]
            changed = True
            break
    pairs = [(x, y) for x, y in pairs if x in partner]
    return unflatten(canonical_pairs(pairs, items), items)


def _plug(q: Process, a: str, comp: Process, b: str) -> Optional[Process]:
    """Replace the unique link ``a <-> w`` in ``q`` by ``comp{w/b}``;
    ``None`` unless ``a`` occurs exactly there."""
    if a not in free_names(q):
        return q
    if isinstance(q, Link):
        w = q.y if q.x == a else q.x
        if w == a:
            return None
        return rename(comp, {b: w})
    if isinstance(q, Res):
        body = _plug(q.body, a, comp, b)
        return None if body is None else Res(q.x, q.y, body)
    if isinstance(q, Par):
        if a in free_names(q.left) and a in free_names(q.right):
            return None
        left, right = _plug(q.left, a, comp, b), _plug(q.right, a, comp, b)
        if left is None or right is None:
            return None
        return Par(left, right)
    if isinstance(q, (Send, Recv)):
        if q.x == a:
            return None
        body = _plug(q.body, a, comp, b)
        return None if body is None else type(q)(q.x, q.y, body)
    if isinstance(q, (Close, Wait)):
        if q.x == a:
            return None
        body = _plug(q.body, a, comp, b)
        return None if body is None else type(q)(q.x, body)
    if isinstance(q, (Inl, Inr)):
        if q.x == a:
            return None
        body = _plug(q.body, a, comp, b)
        return None if body is None else type(q)(q.x, q.other, body)
    return None


def _lts_step_keyed(p: Process, distinct: bool = False, normalize: bool = False):
    """``distinct``: binders of ``p`` are already pairwise distinct and
    apart from its free names; steps preserve this. ``normalize``: return
    α-normal successors."""
    if not distinct:
        p = freshen(p)
    out = []
    seen = set()
    for l, q in _steps(p, {}):
        objs = _bound_objects(l)
        if objs:
            taken = set(free_names(q)) - set(objs)
            m = {}
            for o in objs:
                i = 0
                while f"~{i}" in taken:
                    i += 1
                m[o] = f"~{i}"
                taken.add(f"~{i}")
            l = _rename_label(l, m)
            q = rename(q, m)
        q = alpha_normal(q, False) if normalize else prune(q)
        k = key_str(q)
        if (l, k) not in seen:
            seen.add((l, k))
            out.append((l, q, k))
    return out


def lts_step(p: Process) -> list[tuple[object, Process]]:
    """All transitions of ``p``; bound objects of visible labels are
    renamed to ``~0``, ``~1``, ... (smallest unused)."""
    return [(l, q) for l, q, _ in _lts_step_keyed(p)]


# ---------------------------------------------------------------------------
# Exploration and bisimulation


class StateSpaceExceeded(Exception):
    pass


DEFAULT_CAP = 100_000


@dataclass
class Lts:
    states: list[Process] = field(default_factory=list)
    index: dict[object, int] = field(default_factory=dict)
    edges: list[list[tuple[object, int]]] = field(default_factory=list)

    reduced: bool = False

    def add(self, p: Process, key=None) -> tuple[int, bool]:
        if key is None:
            p = freshen(p)
            if self.reduced:
                p = alpha_normal(p, False)
            key = state_key(p)
        k = key
        if k in self.index:
            return self.index[k], False
        i = len(self.states)
        self.index[k] = i
        self.states.append(p)
        self.edges.append([])
        return i, True

    def state_of(self, p: Process) -> int:
        if self.reduced:
            p = alpha_normal(p)
        return self.index[state_key(p)]

    def transitions(self):
        for i, es in enumerate(self.edges):
            for l, j in es:
                yield i, l, j

    def to_dot(self) -> str:
        lines = ["digraph lts {"]
        for i, p in enumerate(self.states):
            lab = print_process(p).replace('"', '\\"')
            lines.append(f'  s{i} [label="{lab}"];')
        for i, l, j in self.transitions():
            lines.append(f'  s{i} -> s{j} [label="{str(l)}"];')
        lines.append("}")
        return "\n".join(lines)


def explore(
    roots: Iterable[Process],
    cap: int = DEFAULT_CAP,
    lts: Lts | None = None,
    reduce_alpha: bool = False,
) -> Lts:
    """Breadth-first state space. With ``reduce_alpha`` states are kept in
    α-normal form; sound for weak bisimilarity with α internal."""
    if lts is None:
        lts = Lts(reduced=reduce_alpha)
    queue = deque()
    for r in roots:
        i, new = lts.add(r)
        if new:
            queue.append(i)
    while queue:
        i = queue.popleft()
        for l, q, k in _lts_step_keyed(lts.states[i], True, lts.reduced):
            j, new = lts.add(q, k)
            if new:
                if len(lts.states) > cap:
                    raise StateSpaceExceeded(f"more than {cap} states")
                queue.append(j)
            lts.edges[i].append((l, j))
    return lts


def tau_closure(lts: Lts, internal: frozenset) -> list[frozenset[int]]:
    """States reachable by zero or more ``internal`` steps."""
    n = len(lts.states)
    succ = [[j for l, j in lts.edges[i] if l in internal] for i in range(n)]
    out: list[Optional[frozenset[int]]] = [None] * n
    for s in range(n):
        seen = {s}
        stack = [s]
        while stack:
            i = stack.pop()
            for j in succ[i]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        out[s] = frozenset(seen)
    return out


def saturate(lts: Lts, internal: Iterable[str]) -> list[set[tuple[object, int]]]:
    """Weak transitions: τ for internal closure, ℓ for τ ℓ τ."""
    internal = frozenset(internal)
    clo = tau_closure(lts, internal)
    n = len(lts.states)
    out: list[set] = []
    for s in range(n):
        acc = {(TAU, t) for t in clo[s]}
        for a in clo[s]:
            for l, b in lts.edges[a]:
                if l in internal:
                    continue
                for t in clo[b]:
                    acc.add((l, t))
        out.append(acc)
    return out


def saturated(p: Process, internal: Iterable[str] = (), cap: int = DEFAULT_CAP):
    lts = explore([p], cap)
    sat = saturate(lts, internal)
    return [(l, lts.states[j]) for l, j in sorted(sat[0], key=lambda e: (str(e[0]), e[1]))]


def _partition(lts: Lts, trans: list[set[tuple[object, int]]]) -> list[int]:
    n = len(lts.states)
    ids: dict[object, int] = {}
    trans = [[(ids.setdefault(l, len(ids)), t) for l, t in ts] for ts in trans]
    block = [0] * n
    while True:
        sigs = {}
        new = []
        for s in range(n):
            sig = (block[s], frozenset([(l, block[t]) for l, t in trans[s]]))
            new.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == len(set(block)):
            return new
        block = new


def bisim_classes(lts: Lts, mode: str = "weak", internal: Iterable[str] = (ALPHA, BETA)) -> list[int]:
    if mode == "strong":
        trans = [set(es) for es in lts.edges]
    else:
        trans = saturate(lts, internal)
    return _partition(lts, trans)


def bisim(
    p: Process,
    q: Process,
    mode: str = "weak",
    internal: Iterable[str] = (ALPHA, BETA),
    cap: int = DEFAULT_CAP,
    reduce_alpha: Optional[bool] = None,
) -> bool:
    internal = tuple(internal)
    if reduce_alpha is None:
        reduce_alpha = mode == "weak" and ALPHA in internal
    lts = explore([p, q], cap, reduce_alpha=reduce_alpha)
    blocks = bisim_classes(lts, mode, internal)
    return blocks[lts.state_of(p)] == blocks[lts.state_of(q)]


# ---------------------------------------------------------------------------
# Progress


def is_inert(p: Process) -> bool:
    _, items = flatten(p)
    return not items


def stuck_on_top(p: Process, free_tops: Iterable[str]) -> bool:
    """Every remaining component waits on ``absurd`` over a free top name,
    or is blocked behind one."""
    tops = set(free_tops)
    _, items = flatten(p)
    return any(isinstance(i, AbsurdOn) and i.x in tops for i in items)


# ---------------------------------------------------------------------------
# Concrete syntax


def parse_ltype(text: str) -> LinearType:
    p = _HcpParser(text)
    a = p.ltype()
    p.finish()
    return a


def parse_process(text: str) -> Process:
    p = _HcpParser(text)
    out = p.process()
    p.finish()
    return out


class _HcpParser:
    def __init__(self, text: str):
        self.ts = TokenStream(text)

    def finish(self):
        t = self.ts.peek()
        if t.kind != "eof":
            self.ts.error(f"unexpected {t.text!r}")

    def ident(self) -> str:
        t = self.ts.peek()
        if t.kind != "ident":
            self.ts.error(f"expected a name, found {t.text or 'end of input'!r}")
        self.ts.next()
        return t.text

    def ltype(self) -> LinearType:
        a = self.lmul()
        while True:
            if self.ts.accept("+") or self.ts.accept("⊕"):
                a = Plus(a, self.lmul())
            elif self.ts.accept("&"):
                a = With(a, self.lmul())
            else:
                return a

    def lmul(self) -> LinearType:
        a = self.latom()
        while True:
            if self.ts.accept("*") or self.ts.accept("⊗"):
                a = Tensor(a, self.latom())
            elif self.ts.accept("%") or self.ts.accept("⅋"):
                a = Parr(a, self.latom())
            else:
                return a

    def latom(self) -> LinearType:
        ts = self.ts
        t = ts.peek()
        if ts.accept("("):
            a = self.ltype()
            ts.expect(")")
            return a
        if t.kind == "num" and t.text in ("0", "1"):
            ts.next()
            return One() if t.text == "1" else Zero()
        if ts.accept("bot") or ts.accept("⊥"):
            return Bot()
        if ts.accept("top") or ts.accept("⊤"):
            return Top()
        ts.error(f"expected a type, found {t.text or 'end of input'!r}")

    def process(self) -> Process:
        p = self.unary()
        while self.ts.accept("||") or self.ts.accept("∥"):
            p = Par(p, self.unary())
        return p

    def unary(self) -> Process:
        ts = self.ts
        t = ts.peek()
        if t.kind == "num" and t.text == "0":
            ts.next()
            return Halt()
        if ts.accept("("):
            p = self.process()
            ts.expect(")")
            return p
        if ts.accept("new"):
            ts.expect("(")
            x, y = self.ident(), self.ident()
            ts.expect(")")
            ts.expect(".")
            return Res(x, y, self.unary())
        x = self.ident()
        if ts.accept("<->"):
            y = self.ident()
            ts.expect(":")
            return Link(x, y, self.ltype())
        if ts.accept("["):
            if ts.accept("]"):
                ts.expect(".")
                return Close(x, self.unary())
            y = self.ident()
            ts.expect("]")
            ts.expect(".")
            return Send(x, y, self.unary())
        if ts.accept("("):
            if ts.accept(")"):
                ts.expect(".")
                return Wait(x, self.unary())
            y = self.ident()
            ts.expect(")")
            ts.expect(".")
            return Recv(x, y, self.unary())
        ts.expect(".")
        if ts.accept("inl") or ts.accept("inr"):
            kind = ts.toks[ts.pos - 1].text
            ts.expect("[")
            other = self.ltype()
            ts.expect("]")
            ts.expect(".")
            return (Inl if kind == "inl" else Inr)(x, other, self.unary())
        if ts.accept("case"):
            ts.expect("(")
            left = self.process()
            ts.expect(",")
            right = self.process()
            ts.expect(")")
            return Offer(x, left, right)
        if ts.accept("absurd"):
            ts.expect("[")
            extra = {}
            while ts.at_ident():
                n = self.ident()
                ts.expect(":")
                extra[n] = self.ltype()
                if not ts.accept(","):
                    break
            ts.expect("]")
            return absurd_on(x, extra)
        ts.error(f"expected a prefix after {x!r}.")


def print_process(p: Process) -> str:
    return _pp(p, 0)


def _pp(p: Process, prec: int) -> str:
    if isinstance(p, Halt):
        return "0"
    if isinstance(p, Link):
        return f"{p.x}<->{p.y} : {print_ltype(p.ann)}"
    if isinstance(p, Par):
        s = f"{_pp(p.left, 0)} || {_pp(p.right, 1)}"
        return f"({s})" if prec > 0 else s
    if isinstance(p, Res):
        return f"new ({p.x} {p.y}). {_pp(p.body, 1)}"
    if isinstance(p, Send):
        return f"{p.x}[{p.y}].{_pp(p.body, 1)}"
    if isinstance(p, Recv):
        return f"{p.x}({p.y}).{_pp(p.body, 1)}"
    if isinstance(p, Close):
        return f"{p.x}[].{_pp(p.body, 1)}"
    if isinstance(p, Wait):
        return f"{p.x}().{_pp(p.body, 1)}"
    if isinstance(p, (Inl, Inr)):
        kw = "inl" if isinstance(p, Inl) else "inr"
        return f"{p.x}.{kw}[{print_ltype(p.other)}].{_pp(p.body, 1)}"
    if isinstance(p, Offer):
        return f"{p.x}.case({_pp(p.left, 0)}, {_pp(p.right, 0)})"
    if isinstance(p, AbsurdOn):
        extra = ", ".join(f"{n} : {print_ltype(t)}" for n, t in p.extra)
        return f"{p.x}.absurd[{extra}]"
    raise TypeError(f"not a process: {p!r}")


def hyperenv_str(h: HyperEnv) -> str:
    if not h:
        return "∅"
    return " | ".join(
        ", ".join(f"{n}:{print_ltype(t)}" for n, t in sorted(e.items())) or "∅" for e in h
    )


__all__ = [n for n in dir() if not n.startswith("_")] + ["ParseError"]
