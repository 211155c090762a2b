"""Core abstract syntax for HGV: types, terms and configurations.

Everything here is immutable. Names are plain strings; binders are
renamed on demand so substitution never captures.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union


# ---------------------------------------------------------------------------
# Types


class ValueType:
    """Base class of value types. Session types are value types too."""

    __slots__ = ()


class SessionType(ValueType):
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Unit(ValueType):
    pass


@dataclass(frozen=True, slots=True)
class Void(ValueType):
    pass


@dataclass(frozen=True, slots=True)
class Product(ValueType):
    left: ValueType
    right: ValueType


@dataclass(frozen=True, slots=True)
class Sum(ValueType):
    left: ValueType
    right: ValueType


@dataclass(frozen=True, slots=True)
class Lolli(ValueType):
    arg: ValueType
    res: ValueType


@dataclass(frozen=True, slots=True)
class Send(SessionType):
    payload: ValueType
    cont: SessionType


@dataclass(frozen=True, slots=True)
class Recv(SessionType):
    payload: ValueType
    cont: SessionType


@dataclass(frozen=True, slots=True)
class EndOut(SessionType):
    pass


@dataclass(frozen=True, slots=True)
class EndIn(SessionType):
    pass


@dataclass(frozen=True, slots=True)
class End(SessionType):
    """Self-dual end, only meaningful with the Mix variant."""


def dual(s: SessionType) -> SessionType:
    if isinstance(s, Send):
        return Recv(s.payload, dual(s.cont))
    if isinstance(s, Recv):
        return Send(s.payload, dual(s.cont))
    if isinstance(s, EndOut):
        return EndIn()
    if isinstance(s, EndIn):
        return EndOut()
    if isinstance(s, End):
        return End()
    raise TypeError(f"not a session type: {s!r}")


def is_session(t: ValueType) -> bool:
    return isinstance(t, SessionType)


def mentions_end(t: ValueType) -> bool:
    """True if the self-dual ``end`` type occurs in ``t``."""
    if isinstance(t, End):
        return True
    if isinstance(t, (Send, Recv)):
        return mentions_end(t.payload) or mentions_end(t.cont)
    if isinstance(t, (Product, Sum)):
        return mentions_end(t.left) or mentions_end(t.right)
    if isinstance(t, Lolli):
        return mentions_end(t.arg) or mentions_end(t.res)
    return False


def type_depth(t: ValueType) -> int:
    if isinstance(t, (Send, Recv)):
        return 1 + max(type_depth(t.payload), type_depth(t.cont))
    if isinstance(t, (Product, Sum)):
        return 1 + max(type_depth(t.left), type_depth(t.right))
    if isinstance(t, Lolli):
        return 1 + max(type_depth(t.arg), type_depth(t.res))
    return 1


# ---------------------------------------------------------------------------
# Terms

CONSTANTS = ("link", "fork", "send", "recv", "wait", "close", "spawn")


class Term:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: str


@dataclass(frozen=True, slots=True)
class Const(Term):
    name: str

    def __post_init__(self) -> None:
        if self.name not in CONSTANTS:
            raise ValueError(f"unknown constant {self.name!r}")


@dataclass(frozen=True, slots=True)
class Lam(Term):
    """``ann`` may be None only for a λ in let-redex position."""

    var: str
    ann: ValueType | None
    body: Term


@dataclass(frozen=True, slots=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class UnitVal(Term):
    pass


@dataclass(frozen=True, slots=True)
class LetUnit(Term):
    bound: Term
    body: Term


@dataclass(frozen=True, slots=True)
class Pair(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class LetPair(Term):
    x: str
    y: str
    bound: Term
    body: Term


@dataclass(frozen=True, slots=True)
class Inl(Term):
    """``ann`` is the whole sum type."""

    term: Term
    ann: ValueType


@dataclass(frozen=True, slots=True)
class Inr(Term):
    term: Term
    ann: ValueType


@dataclass(frozen=True, slots=True)
class Case(Term):
    scrut: Term
    x: str
    left: Term
    y: str
    right: Term


@dataclass(frozen=True, slots=True)
class Absurd(Term):
    """``ann`` is the result type."""

    term: Term
    ann: ValueType


def is_value(t: Term) -> bool:
    if isinstance(t, (Var, Const, Lam, UnitVal)):
        return True
    if isinstance(t, Pair):
        return is_value(t.left) and is_value(t.right)
    if isinstance(t, (Inl, Inr)):
        return is_value(t.term)
    return False


# ---------------------------------------------------------------------------
# Configurations

MAIN = "main"
CHILD = "child"


class Configuration:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Thread(Configuration):
    flag: str
    term: object  # a Term, or an fgHGV term

    def __post_init__(self) -> None:
        if self.flag not in (MAIN, CHILD):
            raise ValueError(f"bad thread flag {self.flag!r}")


@dataclass(frozen=True, slots=True)
class LinkThread(Configuration):
    z: str
    x: str
    y: str

    def __post_init__(self) -> None:
        if len({self.z, self.x, self.y}) != 3:
            raise ValueError("link thread names must be pairwise distinct")


@dataclass(frozen=True, slots=True)
class Res(Configuration):
    """Binds ``x`` at type ``ann`` and ``y`` at its dual."""

    x: str
    y: str
    ann: SessionType
    body: Configuration


@dataclass(frozen=True, slots=True)
class Par(Configuration):
    left: Configuration
    right: Configuration


def par_all(items: Iterable[Configuration]) -> Configuration:
    """Right-nested parallel composition of a non-empty sequence."""
    items = list(items)
    if not items:
        raise ValueError("empty parallel composition")
    out = items[-1]
    for c in reversed(items[:-1]):
        out = Par(c, out)
    return out


# ---------------------------------------------------------------------------
# Free names

Node = Union[Term, Configuration]


def free_names(m) -> frozenset[str]:
    if isinstance(m, Var):
        return frozenset((m.name,))
    if isinstance(m, (Const, UnitVal)):
        return frozenset()
    if isinstance(m, Lam):
        return free_names(m.body) - {m.var}
    if isinstance(m, App):
        return free_names(m.fn) | free_names(m.arg)
    if isinstance(m, LetUnit):
        return free_names(m.bound) | free_names(m.body)
    if isinstance(m, Pair):
        return free_names(m.left) | free_names(m.right)
    if isinstance(m, LetPair):
        return free_names(m.bound) | (free_names(m.body) - {m.x, m.y})
    if isinstance(m, (Inl, Inr, Absurd)):
        return free_names(m.term)
    if isinstance(m, Case):
        return (
            free_names(m.scrut)
            | (free_names(m.left) - {m.x})
            | (free_names(m.right) - {m.y})
        )
    if isinstance(m, Thread):
        return free_names(m.term)
    if isinstance(m, LinkThread):
        return frozenset((m.z, m.x, m.y))
    if isinstance(m, Res):
        return free_names(m.body) - {m.x, m.y}
    if isinstance(m, Par):
        return free_names(m.left) | free_names(m.right)
    if hasattr(m, "free_names"):
        return m.free_names()
    raise TypeError(f"no free names for {m!r}")


def all_names(m) -> set[str]:
    """Every name occurring in ``m``, bound or free."""
    out: set[str] = set()
    _collect_names(m, out)
    return out


def _collect_names(m, out: set[str]) -> None:
    if isinstance(m, Var):
        out.add(m.name)
    elif isinstance(m, (Const, UnitVal)):
        pass
    elif isinstance(m, Lam):
        out.add(m.var)
        _collect_names(m.body, out)
    elif isinstance(m, App):
        _collect_names(m.fn, out)
        _collect_names(m.arg, out)
    elif isinstance(m, (LetUnit,)):
        _collect_names(m.bound, out)
        _collect_names(m.body, out)
    elif isinstance(m, Pair):
        _collect_names(m.left, out)
        _collect_names(m.right, out)
    elif isinstance(m, LetPair):
        out.update((m.x, m.y))
        _collect_names(m.bound, out)
        _collect_names(m.body, out)
    elif isinstance(m, (Inl, Inr, Absurd)):
        _collect_names(m.term, out)
    elif isinstance(m, Case):
        out.update((m.x, m.y))
        _collect_names(m.scrut, out)
        _collect_names(m.left, out)
        _collect_names(m.right, out)
    elif isinstance(m, Thread):
        _collect_names(m.term, out)
    elif isinstance(m, LinkThread):
        out.update((m.z, m.x, m.y))
    elif isinstance(m, Res):
        out.update((m.x, m.y))
        _collect_names(m.body, out)
    elif isinstance(m, Par):
        _collect_names(m.left, out)
        _collect_names(m.right, out)
    elif hasattr(m, "all_names"):
        out.update(m.all_names())
    else:
        raise TypeError(f"no names for {m!r}")


_SUFFIX = re.compile(r"^(.*?)(\d+)$")


def fresh(base: str, avoid: Iterable[str]) -> str:
    """Smallest ``stem<n>`` not in ``avoid``; deterministic in its inputs."""
    avoid = set(avoid)
    m = _SUFFIX.match(base)
    stem = m.group(1) if m and m.group(1) else base
    stem = stem.rstrip("_") or "v"
    if base not in avoid:
        return base
    n = 1
    while f"{stem}{n}" in avoid:
        n += 1
    return f"{stem}{n}"


# ---------------------------------------------------------------------------
# Substitution


def substitute(m, v, x: str | None = None):
    """Capture-avoiding substitution.

    Either ``substitute(m, v, x)`` replacing ``x`` by ``v`` (a term or a
    name), or ``substitute(m, mapping)`` for a simultaneous substitution.
    Inside configurations only names may be substituted.
    """
    if x is None:
        mapping = dict(v)
    else:
        mapping = {x: v}
    mapping = {k: (Var(t) if isinstance(t, str) else t) for k, t in mapping.items()}
    return _subst(m, mapping)


def _fv_of_mapping(mapping: Mapping[str, object]) -> set[str]:
    out: set[str] = set()
    for t in mapping.values():
        out |= free_names(t)
    return out


def _enter(binders: tuple[str, ...], body_fv: frozenset[str], mapping, avoid_extra=()):
    """Prepare a mapping for going under ``binders``.

    Returns (new binder names, mapping for the body).
    """
    inner = {k: t for k, t in mapping.items() if k not in binders}
    if not inner:
        return binders, inner
    inner = {k: t for k, t in inner.items() if k in body_fv}
    if not inner:
        return binders, inner
    danger = _fv_of_mapping(inner)
    new_binders = []
    avoid = set(danger) | set(body_fv) | set(inner) | set(avoid_extra) | set(binders)
    for b in binders:
        if b in danger:
            nb = fresh(b, avoid)
            avoid.add(nb)
            inner[b] = Var(nb)
            new_binders.append(nb)
        else:
            new_binders.append(b)
    return tuple(new_binders), inner


def _subst(m, mapping):
    if not mapping:
        return m
    if isinstance(m, Var):
        return mapping.get(m.name, m)
    if isinstance(m, (Const, UnitVal)):
        return m
    if isinstance(m, Lam):
        (b,), inner = _enter((m.var,), free_names(m.body), mapping)
        return Lam(b, m.ann, _subst(m.body, inner))
    if isinstance(m, App):
        return App(_subst(m.fn, mapping), _subst(m.arg, mapping))
    if isinstance(m, LetUnit):
        return LetUnit(_subst(m.bound, mapping), _subst(m.body, mapping))
    if isinstance(m, Pair):
        return Pair(_subst(m.left, mapping), _subst(m.right, mapping))
    if isinstance(m, LetPair):
        (a, b), inner = _enter((m.x, m.y), free_names(m.body), mapping)
        return LetPair(a, b, _subst(m.bound, mapping), _subst(m.body, inner))
    if isinstance(m, Inl):
        return Inl(_subst(m.term, mapping), m.ann)
    if isinstance(m, Inr):
        return Inr(_subst(m.term, mapping), m.ann)
    if isinstance(m, Absurd):
        return Absurd(_subst(m.term, mapping), m.ann)
    if isinstance(m, Case):
        (a,), inl = _enter((m.x,), free_names(m.left), mapping)
        (b,), inr = _enter((m.y,), free_names(m.right), mapping)
        return Case(_subst(m.scrut, mapping), a, _subst(m.left, inl), b, _subst(m.right, inr))
    if isinstance(m, Thread):
        return Thread(m.flag, _subst(m.term, mapping))
    if isinstance(m, LinkThread):
        return LinkThread(*(_subst_name(n, mapping) for n in (m.z, m.x, m.y)))
    if isinstance(m, Res):
        (a, b), inner = _enter((m.x, m.y), free_names(m.body), mapping)
        return Res(a, b, m.ann, _subst(m.body, inner))
    if isinstance(m, Par):
        return Par(_subst(m.left, mapping), _subst(m.right, mapping))
    if hasattr(m, "substitute"):
        return m.substitute(mapping)
    raise TypeError(f"cannot substitute into {m!r}")


def _subst_name(n: str, mapping) -> str:
    t = mapping.get(n)
    if t is None:
        return n
    if not isinstance(t, Var):
        raise TypeError("only names may replace names in link threads")
    return t.name


def rename(m, mapping: Mapping[str, str]):
    """Rename free names; a convenience wrapper over substitute."""
    return substitute(m, {k: Var(v) for k, v in mapping.items()})


# ---------------------------------------------------------------------------
# Alpha-equivalence


def alpha_key(m, env: Mapping[str, int] | None = None, depth: int = 0):
    """A hashable key equal for exactly the α-equivalent terms.

    Bound names become de Bruijn levels; free names stay literal.
    """
    env = dict(env or {})
    return _key(m, env, depth)


def _ref(name: str, env: Mapping[str, int]):
    lvl = env.get(name)
    return ("b", lvl) if lvl is not None else ("f", name)


def _key(m, env, d):
    if isinstance(m, Var):
        return ("var", _ref(m.name, env))
    if isinstance(m, Const):
        return ("const", m.name)
    if isinstance(m, UnitVal):
        return ("unit",)
    if isinstance(m, Lam):
        return ("lam", m.ann, _key(m.body, {**env, m.var: d}, d + 1))
    if isinstance(m, App):
        return ("app", _key(m.fn, env, d), _key(m.arg, env, d))
    if isinstance(m, LetUnit):
        return ("letunit", _key(m.bound, env, d), _key(m.body, env, d))
    if isinstance(m, Pair):
        return ("pair", _key(m.left, env, d), _key(m.right, env, d))
    if isinstance(m, LetPair):
        inner = {**env, m.x: d, m.y: d + 1}
        return ("letpair", _key(m.bound, env, d), _key(m.body, inner, d + 2))
    if isinstance(m, Inl):
        return ("inl", m.ann, _key(m.term, env, d))
    if isinstance(m, Inr):
        return ("inr", m.ann, _key(m.term, env, d))
    if isinstance(m, Absurd):
        return ("absurd", m.ann, _key(m.term, env, d))
    if isinstance(m, Case):
        return (
            "case",
            _key(m.scrut, env, d),
            _key(m.left, {**env, m.x: d}, d + 1),
            _key(m.right, {**env, m.y: d}, d + 1),
        )
    if isinstance(m, Thread):
        return ("thread", m.flag, _key(m.term, env, d))
    if isinstance(m, LinkThread):
        return ("linkthread", _ref(m.z, env), _ref(m.x, env), _ref(m.y, env))
    if isinstance(m, Res):
        inner = {**env, m.x: d, m.y: d + 1}
        return ("res", m.ann, _key(m.body, inner, d + 2))
    if isinstance(m, Par):
        return ("par", _key(m.left, env, d), _key(m.right, env, d))
    if hasattr(m, "alpha_key"):
        return m.alpha_key(env, d)
    raise TypeError(f"no key for {m!r}")


def alpha_eq(a, b) -> bool:
    return alpha_key(a) == alpha_key(b)


# ---------------------------------------------------------------------------
# Size measure


CONST_SIZE = 3


def size(m) -> int:
    """AST size used as the termination measure.

    Constants weigh CONST_SIZE and case branches count by their maximum, so
    every reduction step strictly shrinks a well-typed configuration.
    """
    if isinstance(m, (Var, UnitVal)):
        return 1
    if isinstance(m, Const):
        return CONST_SIZE
    if isinstance(m, Lam):
        return 1 + size(m.body)
    if isinstance(m, (App, LetUnit)):
        a, b = (m.fn, m.arg) if isinstance(m, App) else (m.bound, m.body)
        return 1 + size(a) + size(b)
    if isinstance(m, Pair):
        return 1 + size(m.left) + size(m.right)
    if isinstance(m, LetPair):
        return 1 + size(m.bound) + size(m.body)
    if isinstance(m, (Inl, Inr, Absurd)):
        return 1 + size(m.term)
    if isinstance(m, Case):
        return 1 + size(m.scrut) + max(size(m.left), size(m.right))
    if isinstance(m, Thread):
        return size(m.term)
    if isinstance(m, LinkThread):
        return CONST_SIZE
    if isinstance(m, Res):
        return size(m.body)
    if isinstance(m, Par):
        return size(m.left) + size(m.right)
    if hasattr(m, "size"):
        return m.size()
    raise TypeError(f"no size for {m!r}")


def threads(c: Configuration) -> list[Configuration]:
    """Leaf threads of a configuration, left to right."""
    out: list[Configuration] = []
    stack = [c]
    while stack:
        n = stack.pop()
        if isinstance(n, Par):
            stack.append(n.right)
            stack.append(n.left)
        elif isinstance(n, Res):
            stack.append(n.body)
        else:
            out.append(n)
    return out


def ordered_free_names(m) -> list[str]:
    """Free names in left-to-right order of first occurrence."""
    out: list[str] = []
    seen: set[str] = set()
    _ofn(m, frozenset(), out, seen)
    return out


def _ofn(m, bound, out, seen) -> None:
    def add(n):
        if n not in bound and n not in seen:
            seen.add(n)
            out.append(n)

    if isinstance(m, Var):
        add(m.name)
    elif isinstance(m, (Const, UnitVal)):
        pass
    elif isinstance(m, Lam):
        _ofn(m.body, bound | {m.var}, out, seen)
    elif isinstance(m, App):
        _ofn(m.fn, bound, out, seen)
        _ofn(m.arg, bound, out, seen)
    elif isinstance(m, LetUnit):
        _ofn(m.bound, bound, out, seen)
        _ofn(m.body, bound, out, seen)
    elif isinstance(m, Pair):
        _ofn(m.left, bound, out, seen)
        _ofn(m.right, bound, out, seen)
    elif isinstance(m, LetPair):
        _ofn(m.bound, bound, out, seen)
        _ofn(m.body, bound | {m.x, m.y}, out, seen)
    elif isinstance(m, (Inl, Inr, Absurd)):
        _ofn(m.term, bound, out, seen)
    elif isinstance(m, Case):
        _ofn(m.scrut, bound, out, seen)
        _ofn(m.left, bound | {m.x}, out, seen)
        _ofn(m.right, bound | {m.y}, out, seen)
    elif isinstance(m, Thread):
        _ofn(m.term, bound, out, seen)
    elif isinstance(m, LinkThread):
        for n in (m.z, m.x, m.y):
            add(n)
    elif isinstance(m, Res):
        _ofn(m.body, bound | {m.x, m.y}, out, seen)
    elif isinstance(m, Par):
        _ofn(m.left, bound, out, seen)
        _ofn(m.right, bound, out, seen)
    elif hasattr(m, "ordered_free_names"):
        for n in m.ordered_free_names():
            add(n)
    else:
        raise TypeError(f"no names for {m!r}")
