"""Runtime typing of configurations.

HGV configurations are typed against hyper-environments (lists of
disjoint type environments). Checking is by synthesis: each thread
contributes exactly the environment of its free names, parallel
composition concatenates, and a restriction merges the two environments
holding its endpoints. The result is then compared with the given
hyper-environment.

GV configurations are typed against a single environment whose channel
bindings ``lock(x, y) : S`` may be split across exactly one parallel
composition each.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

from .syntax import (
    CHILD,
    EndIn,
    EndOut,
    LinkThread,
    Par,
    Res,
    SessionType,
    Thread,
    Unit,
    ValueType,
    all_names,
    dual,
    free_names,
    fresh,
    rename,
)
from .typecheck import HgvTypeError, check_term

HyperEnv = list[dict[str, ValueType]]


class RuntimeType:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Child(RuntimeType):
    def __str__(self) -> str:
        return "○"


@dataclass(frozen=True, slots=True)
class Main(RuntimeType):
    type: ValueType

    def __str__(self) -> str:
        from .surface import print_type

        return f"•{print_type(self.type)}"


@dataclass(frozen=True)
class GvEnv:
    """Plain bindings plus channel bindings ``lock(x, y) : S``."""

    plain: Mapping[str, ValueType]
    locks: Mapping[tuple[str, str], SessionType]


class ConfigTypeError(Exception):
    KINDS = (
        "TwoMainThreads",
        "ZeroOrManyLocks",
        "partition",
        "orphan",
        "disjointness",
        "unbound",
        "mismatch",
        "term",
    )

    def __init__(self, kind: str, message: str, cause: Exception | None = None):
        assert kind in self.KINDS, kind
        super().__init__(f"{kind}: {message}")
        self.kind = kind
        self.message = message
        self.cause = cause


def combine_runtime(r1: RuntimeType, r2: RuntimeType) -> RuntimeType:
    if isinstance(r1, Main) and isinstance(r2, Main):
        raise ConfigTypeError("TwoMainThreads", "a configuration has at most one main thread")
    return r1 if isinstance(r1, Main) else r2


def runtime_to_json(r: RuntimeType) -> dict:
    from .surface import print_type

    if isinstance(r, Main):
        return {"kind": "main", "type": print_type(r.type)}
    return {"kind": "child"}


# ---------------------------------------------------------------------------
# Threads


def check_thread(env: Mapping[str, ValueType], c, mix: bool = False) -> RuntimeType:
    """Type a single thread or link thread under one environment."""
    if isinstance(c, LinkThread):
        if set(env) != {c.z, c.x, c.y}:
            raise ConfigTypeError("mismatch", "link thread environment must be exactly its three names")
        sx, sy = env[c.x], env[c.y]
        if env[c.z] != EndIn() or not isinstance(sx, SessionType) or sy != dual(sx):
            raise ConfigTypeError("mismatch", f"ill-typed link thread {c.z} {c.x} {c.y}")
        return Child()
    if isinstance(c, Thread):
        try:
            t = _check_payload(env, c.term, mix)
        except HgvTypeError as e:
            raise ConfigTypeError("term", str(e), e) from e
        if c.flag == CHILD:
            done = Unit() if mix else EndOut()
            if t != done:
                raise ConfigTypeError("mismatch", f"child thread must return {'1' if mix else 'end!'}")
            return Child()
        return Main(t)
    raise TypeError(f"not a thread: {c!r}")


def _check_payload(env, term, mix):
    if hasattr(term, "fg_check"):
        return term.fg_check(env, mix)
    return check_term(env, term, mix)


# ---------------------------------------------------------------------------
# HGV


def _freshen_binder(c: Res, taken: set[str]) -> Res:
    if c.x not in taken and c.y not in taken:
        return c
    avoid = taken | all_names(c)
    nx = fresh(c.x, avoid)
    avoid.add(nx)
    ny = fresh(c.y, avoid)
    body = rename(c.body, {c.x: nx, c.y: ny})
    return Res(nx, ny, c.ann, body)


def synthesize(c, types: Mapping[str, ValueType], mix: bool = False) -> tuple[HyperEnv, RuntimeType]:
    """The finest hyper-environment typing ``c``, with its runtime type.

    ``types`` supplies the types of the free names.
    """
    if isinstance(c, (Thread, LinkThread)):
        env = {}
        for n in sorted(free_names(c)):
            if n not in types:
                raise ConfigTypeError("unbound", f"name {n!r} has no type")
            env[n] = types[n]
        return [env], check_thread(env, c, mix)
    if isinstance(c, Par):
        h1, r1 = synthesize(c.left, types, mix)
        h2, r2 = synthesize(c.right, types, mix)
        return h1 + h2, combine_runtime(r1, r2)
    if isinstance(c, Res):
        c = _freshen_binder(c, set(types))
        inner = {**types, c.x: c.ann, c.y: dual(c.ann)}
        h, r = synthesize(c.body, inner, mix)
        ix = [i for i, e in enumerate(h) if c.x in e]
        iy = [i for i, e in enumerate(h) if c.y in e]
        if not ix or not iy:
            unused = c.x if not ix else c.y
            raise ConfigTypeError("orphan", f"endpoint {unused!r} is never used")
        i, j = ix[0], iy[0]
        if i == j:
            raise ConfigTypeError(
                "partition", f"both endpoints {c.x!r} and {c.y!r} fall in one environment"
            )
        merged = {k: v for k, v in {**h[i], **h[j]}.items() if k not in (c.x, c.y)}
        rest = [e for k, e in enumerate(h) if k not in (i, j)]
        return rest + [merged], r
    raise TypeError(f"not a configuration: {c!r}")


def flatten(h) -> dict[str, ValueType]:
    """Drop separators (hyper-environment) or expand locks (GV environment)."""
    out: dict[str, ValueType] = {}

    def add(n, t):
        if n in out:
            raise ConfigTypeError("disjointness", f"name {n!r} bound twice")
        out[n] = t

    if isinstance(h, GvEnv):
        for n, t in h.plain.items():
            add(n, t)
        for (x, y), s in h.locks.items():
            add(x, s)
            add(y, dual(s))
        return out
    for env in h:
        for n, t in env.items():
            add(n, t)
    return out


def _env_key(env: Mapping[str, ValueType]):
    return frozenset(env.items())


def is_coarsening(coarse: Sequence[Mapping], fine: Sequence[Mapping]) -> bool:
    """Whether each environment of ``coarse`` is a union of ones in ``fine``."""
    owner: dict[str, int] = {}
    for i, env in enumerate(coarse):
        for n in env:
            owner[n] = i
    covered: list[dict] = [{} for _ in coarse]
    empties = 0
    for env in fine:
        if not env:
            empties += 1
            continue
        idx = {owner.get(n) for n in env}
        if len(idx) != 1 or None in idx:
            return False
        (i,) = idx
        covered[i].update(env)
    for i, env in enumerate(coarse):
        if dict(env) != covered[i]:
            return False
        if not env:
            if empties == 0:
                return False
            empties -= 1
    # leftover empty environments merge into any coarse one
    return empties == 0 or bool(coarse)


def check_config(h: Sequence[Mapping[str, ValueType]], c, mix: bool = False) -> RuntimeType:
    """Runtime type of ``c`` under hyper-environment ``h``.

    In the Mix variant environments may additionally be merged, so ``h``
    need only be a coarsening of the synthesized hyper-environment.
    """
    types = flatten(h)
    got, r = synthesize(c, types, mix)
    if mix:
        if not is_coarsening(h, got):
            raise ConfigTypeError(
                "partition", f"hyper-environment does not match; synthesized {format_hyperenv(got)}"
            )
        return r
    if Counter(map(_env_key, h)) != Counter(map(_env_key, got)):
        unused = set(types) - set(flatten(got))
        if unused:
            raise ConfigTypeError("orphan", f"names never used: {sorted(unused)}")
        raise ConfigTypeError(
            "partition", f"hyper-environment does not match; synthesized {format_hyperenv(got)}"
        )
    return r


def format_hyperenv(h: Sequence[Mapping[str, ValueType]]) -> str:
    from .surface import print_type

    return " | ".join(", ".join(f"{n}:{print_type(t)}" for n, t in env.items()) for env in h)


# ---------------------------------------------------------------------------
# GV


def gv_check_config(g: GvEnv, c, mix: bool = False) -> RuntimeType:
    flatten(g)
    return _gv(dict(g.plain), dict(g.locks), c, mix)


def _gv(plain: dict, locks: dict, c, mix: bool) -> RuntimeType:
    if isinstance(c, (Thread, LinkThread)):
        if locks:
            raise ConfigTypeError("ZeroOrManyLocks", "a thread cannot hold a channel binding")
        fv = free_names(c)
        for n in fv:
            if n not in plain:
                raise ConfigTypeError("unbound", f"name {n!r} has no type")
        extra = set(plain) - fv
        if extra:
            raise ConfigTypeError("orphan", f"names never used: {sorted(extra)}")
        return check_thread(plain, c, mix)
    if isinstance(c, Res):
        taken = set(plain) | {n for pair in locks for n in pair}
        c = _freshen_binder(c, taken)
        return _gv(plain, {**locks, (c.x, c.y): c.ann}, c.body, mix)
    if isinstance(c, Par):
        fl, fr = free_names(c.left), free_names(c.right)
        pl, pr = {}, {}
        for n, t in plain.items():
            if n in fl and n in fr:
                raise ConfigTypeError("partition", f"name {n!r} used on both sides")
            if n in fl:
                pl[n] = t
            elif n in fr:
                pr[n] = t
            else:
                raise ConfigTypeError("orphan", f"name {n!r} never used")
        ll, lr, connecting = {}, {}, []
        for (x, y), s in locks.items():
            sides = (x in fl, y in fl, x in fr, y in fr)
            if sides == (True, True, False, False):
                ll[(x, y)] = s
            elif sides == (False, False, True, True):
                lr[(x, y)] = s
            elif sides in ((True, False, False, True), (False, True, True, False)):
                connecting.append((x, y, s))
            else:
                raise ConfigTypeError("partition", f"channel {x}/{y} is not split cleanly")
        if len(connecting) != 1:
            raise ConfigTypeError(
                "ZeroOrManyLocks",
                f"parallel composition must split exactly one channel, found {len(connecting)}",
            )
        x, y, s = connecting[0]
        if x in fl:
            pl[x], pr[y] = s, dual(s)
        else:
            pr[x], pl[y] = s, dual(s)
        return combine_runtime(_gv(pl, ll, c.left, mix), _gv(pr, lr, c.right, mix))
    raise TypeError(f"not a configuration: {c!r}")


def splitting(g: GvEnv, c, mix: bool = False) -> HyperEnv:
    """A hyper-environment with the same flattening that types ``c`` in HGV.

    Fails unless ``c`` is GV-typable under ``g``.
    """
    gv_check_config(g, c, mix)
    h, _ = synthesize(c, flatten(g), mix)
    if len(h) != len(g.locks) + 1:
        raise ConfigTypeError("partition", "splitting has the wrong number of environments")
    return h
