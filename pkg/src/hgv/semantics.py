"""Operational semantics of HGV configurations.

Terms reduce call-by-value, left to right. Configurations are handled in
a flat form: a list of restrictions and a list of threads, obtained by
extruding every restriction after making binder names unique. Structural
congruence is decided by comparing canonical keys of flat forms.

The term language is pluggable (see ``Lang``) so fine-grain terms reuse
the same configuration machinery.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .canon import canonical_key
from .syntax import (
    CHILD,
    MAIN,
    Absurd,
    App,
    Case,
    Configuration,
    Const,
    End,
    EndIn,
    Inl,
    Inr,
    Lam,
    LetPair,
    LetUnit,
    LinkThread,
    Pair,
    Par,
    Res,
    SessionType,
    Term,
    Thread,
    UnitVal,
    Var,
    all_names,
    alpha_key,
    dual,
    free_names,
    fresh,
    is_value,
    ordered_free_names,
    par_all,
    rename,
    size,
    substitute,
)

# ---------------------------------------------------------------------------
# Term language interface


@dataclass(frozen=True)
class Step:
    term: object
    rule: str


@dataclass(frozen=True)
class Comm:
    """A constant applied to a value in evaluation position."""

    const: str
    arg: object
    plug: Callable[[object], object]


class Lang:
    """Operations the configuration semantics needs from a term language."""

    def focus(self, m) -> Optional[Step | Comm]:
        raise NotImplementedError

    def value_of(self, m):
        """The value a finished thread returns, or None."""
        raise NotImplementedError

    def var(self, n: str):
        raise NotImplementedError

    def unit(self):
        raise NotImplementedError

    def pair(self, a, b):
        raise NotImplementedError

    def app(self, f, a):
        raise NotImplementedError

    def as_var(self, v) -> Optional[str]:
        raise NotImplementedError

    def as_pair(self, v):
        raise NotImplementedError

    def fork_session(self, v) -> Optional[SessionType]:
        """Session type of the parameter of a forked function value."""
        raise NotImplementedError

    def is_unit(self, v) -> bool:
        raise NotImplementedError


class HgvLang(Lang):
    def focus(self, m):
        if is_value(m):
            return None
        if isinstance(m, App):
            if not is_value(m.fn):
                return _wrap(self.focus(m.fn), lambda h: App(h, m.arg))
            if not is_value(m.arg):
                return _wrap(self.focus(m.arg), lambda h: App(m.fn, h))
            if isinstance(m.fn, Lam):
                return Step(substitute(m.fn.body, m.arg, m.fn.var), "E-Lam")
            if isinstance(m.fn, Const):
                return Comm(m.fn.name, m.arg, lambda v: v)
            return None
        if isinstance(m, LetUnit):
            if not is_value(m.bound):
                return _wrap(self.focus(m.bound), lambda h: LetUnit(h, m.body))
            if isinstance(m.bound, UnitVal):
                return Step(m.body, "E-Unit")
            return None
        if isinstance(m, Pair):
            if not is_value(m.left):
                return _wrap(self.focus(m.left), lambda h: Pair(h, m.right))
            return _wrap(self.focus(m.right), lambda h: Pair(m.left, h))
        if isinstance(m, LetPair):
            if not is_value(m.bound):
                return _wrap(self.focus(m.bound), lambda h: LetPair(m.x, m.y, h, m.body))
            if isinstance(m.bound, Pair):
                return Step(substitute(m.body, {m.x: m.bound.left, m.y: m.bound.right}), "E-Pair")
            return None
        if isinstance(m, (Inl, Inr)):
            return _wrap(self.focus(m.term), lambda h: type(m)(h, m.ann))
        if isinstance(m, Case):
            if not is_value(m.scrut):
                return _wrap(
                    self.focus(m.scrut), lambda h: Case(h, m.x, m.left, m.y, m.right)
                )
            if isinstance(m.scrut, Inl):
                return Step(substitute(m.left, m.scrut.term, m.x), "E-Inl")
            if isinstance(m.scrut, Inr):
                return Step(substitute(m.right, m.scrut.term, m.y), "E-Inr")
            return None
        if isinstance(m, Absurd):
            if not is_value(m.term):
                return _wrap(self.focus(m.term), lambda h: Absurd(h, m.ann))
            return None
        return None

    def value_of(self, m):
        return m if is_value(m) else None

    def var(self, n):
        return Var(n)

    def unit(self):
        return UnitVal()

    def pair(self, a, b):
        return Pair(a, b)

    def app(self, f, a):
        return App(f, a)

    def as_var(self, v):
        return v.name if isinstance(v, Var) else None

    def as_pair(self, v):
        return (v.left, v.right) if isinstance(v, Pair) else None

    def fork_session(self, v):
        if isinstance(v, Lam) and isinstance(v.ann, SessionType):
            return v.ann
        if isinstance(v, Const) and v.name == "close":
            return End()
        return None

    def is_unit(self, v):
        return isinstance(v, UnitVal)


def _wrap(f, ctx):
    if f is None:
        return None
    if isinstance(f, Step):
        return Step(ctx(f.term), f.rule)
    inner = f.plug
    return Comm(f.const, f.arg, lambda v: ctx(inner(v)))


HGV = HgvLang()


def term_step(m: Term, lang: Lang = HGV):
    """The unique pure reduct of ``m``, or None."""
    f = lang.focus(m)
    return f.term if isinstance(f, Step) else None


def term_step_rule(m: Term, lang: Lang = HGV):
    f = lang.focus(m)
    return (f.rule, f.term) if isinstance(f, Step) else None


# ---------------------------------------------------------------------------
# Flat configurations


@dataclass(frozen=True)
class Binder:
    x: str
    y: str
    ann: SessionType


@dataclass
class Flat:
    binders: list[Binder]
    threads: list[Configuration]

    def to_config(self) -> Configuration:
        out = par_all(self.threads)
        for b in reversed(self.binders):
            out = Res(b.x, b.y, b.ann, out)
        return out

    def partner(self, n: str) -> Optional[tuple[int, str]]:
        for i, b in enumerate(self.binders):
            if b.x == n:
                return i, b.y
            if b.y == n:
                return i, b.x
        return None


def flatten_config(c: Configuration) -> Flat:
    """Extrude all restrictions, renaming binders apart first."""
    avoid = set(all_names(c))
    taken = set(free_names(c))
    binders: list[Binder] = []
    threads: list[Configuration] = []

    def go(c, ren):
        if isinstance(c, Par):
            go(c.left, ren)
            go(c.right, ren)
        elif isinstance(c, Res):
            names = []
            for n in (c.x, c.y):
                nn = n if n not in taken else fresh(n, avoid | taken)
                taken.add(nn)
                avoid.add(nn)
                names.append(nn)
            binders.append(Binder(names[0], names[1], c.ann))
            go(c.body, {**ren, c.x: names[0], c.y: names[1]})
        else:
            threads.append(rename(c, ren) if ren else c)

    go(c, {})
    return Flat(binders, threads)


# ---------------------------------------------------------------------------
# Structural congruence


def _thread_key(t, env):
    if isinstance(t, LinkThread):
        z = _name_ref(t.z, env)
        xy = sorted((_name_ref(t.x, env), _name_ref(t.y, env)), key=repr)
        return ("link", z, tuple(xy))
    return alpha_key(t, env)


def _name_ref(n, env):
    lvl = env.get(n)
    return ("b", lvl) if lvl is not None else ("f", n)


def _thread_names(t, flip: bool) -> list[str]:
    if isinstance(t, LinkThread):
        return [t.z, t.y, t.x] if flip else [t.z, t.x, t.y]
    return ordered_free_names(t)


def config_key(c: Configuration) -> str:
    """A string equal for exactly the structurally congruent configurations.

    Exact up to a bounded search over orderings of indistinguishable
    threads; beyond the bound the first ordering is used.
    """
    fl = flatten_config(c)

    def pair_key(i, ix, iy):
        b = fl.binders[i]
        return (ix, iy, b.ann) if ix >= iy else (iy, ix, dual(b.ann))

    return canonical_key(
        [(b.x, b.y) for b in fl.binders],
        fl.threads,
        _thread_key,
        _thread_names,
        lambda t: isinstance(t, LinkThread),
        pair_key,
    )


def config_equiv(c: Configuration, d: Configuration) -> bool:
    return config_key(c) == config_key(d)


# ---------------------------------------------------------------------------
# Configuration reduction


RULES = (
    "E-Lam",
    "E-Unit",
    "E-Pair",
    "E-Inl",
    "E-Inr",
    "E-Reify-Fork",
    "E-Reify-Link",
    "E-Comm-Link",
    "E-Comm-Send",
    "E-Comm-Close",
    "E-Link-Mix",
    "E-Close",
    "E-Let",
)


@dataclass(frozen=True)
class Redex:
    rule: str
    locus: tuple[int, ...]
    channel: tuple[str, ...] = ()

    def sort_key(self):
        return (self.locus, RULES.index(self.rule))

    def to_json(self) -> dict:
        return {"rule": self.rule, "locus": list(self.locus), "channel": list(self.channel)}


def _focus_thread(t, lang):
    if isinstance(t, Thread):
        return lang.focus(t.term)
    return None


def config_step_all(
    c: Configuration, mix: bool = False, lang: Lang = HGV
) -> list[tuple[Redex, Configuration]]:
    """Every one-step reduct of ``c`` modulo structural congruence."""
    fl = flatten_config(c)
    return flat_step_all(fl, mix, lang)


def flat_step_all(fl: Flat, mix: bool = False, lang: Lang = HGV):
    ths = fl.threads
    foci = [_focus_thread(t, lang) for t in ths]
    avoid = set()
    for t in ths:
        avoid |= all_names(t)
    avoid |= {n for b in fl.binders for n in (b.x, b.y)}
    out: list[tuple[Redex, Configuration]] = []

    def emit(redex, binders, threads):
        out.append((redex, Flat(binders, threads).to_config()))

    def holder(n, exclude=()):
        for k, t in enumerate(ths):
            if k not in exclude and n in free_names(t):
                return k
        return None

    for i, (t, f) in enumerate(zip(ths, foci)):
        if isinstance(f, Step):
            new = list(ths)
            new[i] = Thread(t.flag, f.term)
            emit(Redex(f.rule, (i,)), fl.binders, new)
            continue
        if isinstance(t, LinkThread) and not mix:
            out.extend(_comm_link(fl, i, t, ths, lang, holder))
            continue
        if not isinstance(f, Comm):
            continue
        if f.const == "fork":
            s = lang.fork_session(f.arg)
            if s is None:
                continue
            x = fresh("x", avoid)
            y = fresh("y", avoid | {x})
            new = list(ths)
            new[i] = Thread(t.flag, f.plug(lang.var(x)))
            new.append(Thread(CHILD, lang.app(f.arg, lang.var(y))))
            emit(Redex("E-Reify-Fork", (i,), (x, y)), fl.binders + [Binder(x, y, dual(s))], new)
        elif f.const == "link":
            parts = lang.as_pair(f.arg)
            if parts is None:
                continue
            a, b = (lang.as_var(p) for p in parts)
            if a is None or b is None:
                continue
            if not mix:
                z = fresh("z", avoid)
                z2 = fresh("z", avoid | {z})
                new = list(ths)
                new[i] = Thread(t.flag, f.plug(lang.var(z2)))
                new.append(LinkThread(z, a, b))
                emit(Redex("E-Reify-Link", (i,), (z, z2)), fl.binders + [Binder(z, z2, EndIn())], new)
            else:
                for mine, other in ((a, b), (b, a)):
                    p = fl.partner(mine)
                    if p is None:
                        continue
                    bi, co = p
                    k = holder(co, exclude=(i,))
                    if k is None:
                        continue
                    new = list(ths)
                    new[i] = Thread(t.flag, f.plug(lang.unit()))
                    new[k] = rename(ths[k], {co: other})
                    binders = [bb for j, bb in enumerate(fl.binders) if j != bi]
                    emit(Redex("E-Link-Mix", (i, k), (mine, co)), binders, new)
        elif f.const == "send":
            parts = lang.as_pair(f.arg)
            if parts is None:
                continue
            v, ch = parts
            x = lang.as_var(ch)
            p = fl.partner(x) if x else None
            if p is None:
                continue
            bi, y = p
            b = fl.binders[bi]
            binders = list(fl.binders)
            binders[bi] = Binder(b.x, b.y, b.ann.cont)
            for j, g in enumerate(foci):
                if j != i and isinstance(g, Comm) and g.const == "recv" and lang.as_var(g.arg) == y:
                    new = list(ths)
                    new[i] = Thread(t.flag, f.plug(lang.var(x)))
                    new[j] = Thread(ths[j].flag, g.plug(lang.pair(v, lang.var(y))))
                    emit(Redex("E-Comm-Send", (i, j), (x, y)), binders, new)
        elif f.const == "wait" and not mix:
            x = lang.as_var(f.arg)
            p = fl.partner(x) if x else None
            if p is None:
                continue
            bi, y = p
            for j, u in enumerate(ths):
                if (
                    j != i
                    and isinstance(u, Thread)
                    and u.flag == CHILD
                    and lang.as_var(lang.value_of(u.term)) == y
                ):
                    new = list(ths)
                    new[i] = Thread(t.flag, f.plug(lang.unit()))
                    del new[j]
                    binders = [bb for k, bb in enumerate(fl.binders) if k != bi]
                    emit(Redex("E-Comm-Close", (i, j), (x, y)), binders, new)
        elif f.const == "close" and mix:
            x = lang.as_var(f.arg)
            p = fl.partner(x) if x else None
            if p is None:
                continue
            bi, y = p
            for j, g in enumerate(foci):
                if j > i and isinstance(g, Comm) and g.const == "close" and lang.as_var(g.arg) == y:
                    new = list(ths)
                    new[i] = Thread(t.flag, f.plug(lang.unit()))
                    new[j] = Thread(ths[j].flag, g.plug(lang.unit()))
                    binders = [bb for k, bb in enumerate(fl.binders) if k != bi]
                    emit(Redex("E-Close", (i, j), (x, y)), binders, new)
    return out


def _comm_link(fl: Flat, i, t: LinkThread, ths, lang, holder):
    pz = fl.partner(t.z)
    if pz is None:
        return []
    bz, z2 = pz
    j = None
    for k, u in enumerate(ths):
        if (
            k != i
            and isinstance(u, Thread)
            and u.flag == CHILD
            and lang.as_var(lang.value_of(u.term)) == z2
        ):
            j = k
    if j is None:
        return []
    out = []
    for mine, other in ((t.x, t.y), (t.y, t.x)):
        p = fl.partner(mine)
        if p is None:
            continue
        bx, co = p
        k = holder(co, exclude=(i, j))
        if k is None:
            continue
        new = []
        for idx, u in enumerate(ths):
            if idx in (i, j):
                continue
            new.append(rename(u, {co: other}) if idx == k else u)
        binders = [bb for idx, bb in enumerate(fl.binders) if idx not in (bz, bx)]
        out.append(
            (Redex("E-Comm-Link", (i, j, k), (t.z, mine)), Flat(binders, new).to_config())
        )
    return out


def config_size(c: Configuration) -> int:
    return size(c)


# ---------------------------------------------------------------------------
# Running


class FuelExhausted(Exception):
    pass


class IllTyped(Exception):
    pass


@dataclass
class RunResult:
    trace: list[tuple[Redex, Configuration]]
    terminal: Configuration


def run(
    c: Configuration,
    policy: str = "det",
    seed: int | None = None,
    fuel: int | None = None,
    mix: bool = False,
    lang: Lang = HGV,
    check: bool = True,
    env=None,
) -> RunResult:
    """Reduce until no rule applies.

    ``policy`` is ``det`` (least redex by thread index then rule) or
    ``random`` (uniform over redexes, seeded).
    """
    if check:
        from .runtime_typing import ConfigTypeError, check_config

        try:
            check_config(env if env is not None else [{}], c, mix)
        except ConfigTypeError as e:
            raise IllTyped(str(e)) from e
    if fuel is None:
        fuel = 10 * max(1, size(c))
    rng = random.Random(seed)
    trace: list[tuple[Redex, Configuration]] = []
    cur = c
    while True:
        steps = config_step_all(cur, mix, lang)
        if not steps:
            return RunResult(trace, cur)
        if len(trace) >= fuel:
            raise FuelExhausted(f"no normal form within {fuel} steps")
        if policy == "det":
            red, nxt = min(steps, key=lambda p: p[0].sort_key())
        elif policy == "random":
            red, nxt = steps[rng.randrange(len(steps))]
        else:
            raise ValueError(f"unknown policy {policy!r}")
        trace.append((red, nxt))
        cur = nxt


def trace_json(c: Configuration, result: RunResult, policy: str, seed) -> dict:
    from .surface import print_ast

    steps = []
    pre = c
    for red, post in result.trace:
        steps.append({**red.to_json(), "pre": print_ast(pre), "post": print_ast(post)})
        pre = post
    return {
        "format": "hgv-trace/1",
        "policy": policy,
        "seed": seed,
        "initial": print_ast(c),
        "steps": steps,
        "terminal": print_ast(result.terminal),
    }


# ---------------------------------------------------------------------------
# Canonical forms


class NotSingletonEnv(Exception):
    pass


@dataclass
class CanonicalConfig:
    prefix: list[Binder]
    aux: list[Configuration]
    final: Configuration

    def to_config(self) -> Configuration:
        out = self.final
        for b, a in reversed(list(zip(self.prefix, self.aux))):
            out = Res(b.x, b.y, b.ann, Par(a, out))
        return out


def _is_aux(t) -> bool:
    return isinstance(t, LinkThread) or (isinstance(t, Thread) and t.flag == CHILD)


def tree_canonical_form(c: Configuration, h=None) -> CanonicalConfig:
    """Peel auxiliary leaves of the process structure until one thread is left."""
    if h is not None and len(h) != 1:
        raise NotSingletonEnv("tree canonical form needs a single environment")
    fl = flatten_config(c)
    ths = list(fl.threads)
    binders = list(fl.binders)
    fvs = [free_names(t) for t in ths]
    alive = list(range(len(ths)))
    prefix: list[Binder] = []
    aux: list[Configuration] = []

    def owner(n):
        for k in alive:
            if n in fvs[k]:
                return k
        return None

    while len(alive) > 1:
        degree = {k: 0 for k in alive}
        edge_of = {}
        for b in binders:
            for n in (b.x, b.y):
                k = owner(n)
                if k is not None:
                    degree[k] += 1
                    edge_of[k] = (b, n)
        cands = [k for k in alive if degree[k] == 1 and _is_aux(ths[k])]
        if not cands:
            raise NotSingletonEnv("process structure is not a tree")
        k = cands[0]
        b, n = edge_of[k]
        if n == b.x:
            prefix.append(b)
        else:
            prefix.append(Binder(b.y, b.x, dual(b.ann)))
        aux.append(ths[k])
        binders.remove(b)
        alive.remove(k)
    if binders:
        raise NotSingletonEnv("process structure is not a tree")
    return CanonicalConfig(prefix, aux, ths[alive[0]])


def is_tree_canonical(c: Configuration) -> bool:
    """Shape check: nested ν(x y)(A ∥ ...) ending in a thread, x free in A."""
    while isinstance(c, Res):
        body = c.body
        if not isinstance(body, Par):
            return False
        a = body.left
        if not isinstance(a, (Thread, LinkThread)) or not _is_aux(a):
            return False
        if c.x not in free_names(a):
            return False
        c = body.right
    return isinstance(c, (Thread, LinkThread))


def independence(c: Configuration, h, mix: bool = False):
    """Split ``c`` into one component per environment of ``h``."""
    from .runtime_typing import check_config

    out = []
    used_envs: set[int] = set()
    for sub in _components(flatten_config(c)):
        free = free_names(sub)
        idx = None
        for i, env in enumerate(h):
            if i in used_envs:
                continue
            if free and free <= set(env):
                idx = i
                break
            if not free and not env:
                idx = i
                break
        if idx is None:
            env = {n: t for e in h for n, t in e.items() if n in free}
        else:
            used_envs.add(idx)
            env = dict(h[idx])
        out.append((env, sub, check_config([env], sub, mix)))
    return out


# ---------------------------------------------------------------------------
# Progress


def blocked_endpoint(t, lang: Lang = HGV) -> Optional[str]:
    if isinstance(t, LinkThread):
        return t.z
    if not isinstance(t, Thread):
        return None
    if t.flag == CHILD:
        v = lang.value_of(t.term)
        if v is not None:
            return lang.as_var(v)
    f = lang.focus(t.term)
    if isinstance(f, Comm):
        if f.const == "send":
            parts = lang.as_pair(f.arg)
            return lang.as_var(parts[1]) if parts else None
        if f.const in ("recv", "wait", "close"):
            return lang.as_var(f.arg)
    return None


@dataclass
class Progress:
    verdict: str  # Reducible | MainValue | OpenBlocked | Deadlock
    redexes: list[Redex] = field(default_factory=list)
    value: object = None
    report: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        from .surface import print_ast

        out = {"verdict": self.verdict, "report": self.report}
        if self.redexes:
            out["redexes"] = [r.to_json() for r in self.redexes]
        if self.value is not None:
            out["value"] = print_ast(self.value)
        return out


def classify_progress(c: Configuration, h=None, mix: bool = False, lang: Lang = HGV) -> Progress:
    h = h if h is not None else [{}]
    steps = config_step_all(c, mix, lang)
    if steps:
        return Progress("Reducible", redexes=[r for r, _ in steps])
    fl = flatten_config(c)
    mains = [t for t in fl.threads if isinstance(t, Thread) and t.flag == MAIN]
    rest = [t for t in fl.threads if t not in mains]
    if (
        not fl.binders
        and len(mains) == 1
        and lang.value_of(mains[0].term) is not None
        and all(
            isinstance(t, Thread) and lang.value_of(t.term) is not None and lang.is_unit(lang.value_of(t.term))
            for t in rest
        )
        and (mix or not rest)
    ):
        return Progress("MainValue", value=lang.value_of(mains[0].term))
    free = {n for env in h for n in env}
    report: list[str] = []
    ok = True
    if len(h) > 1 or mix:
        parts = [(sub, [env]) for env, sub, _ in independence(c, h, mix)] if not mix else [
            (sub, None) for sub in _components(fl)
        ]
    else:
        parts = [(c, h)]
    for sub, henv in parts:
        try:
            cf = tree_canonical_form(sub, henv)
        except NotSingletonEnv as e:
            return Progress("Deadlock", report=[str(e)])
        seen_y: set[str] = set()
        for b, a in zip(cf.prefix, cf.aux):
            z = blocked_endpoint(a, lang)
            if z is None or not (z == b.x or z in seen_y or z in free):
                ok = False
                report.append(f"auxiliary thread on {b.x} is not blocked on {b.x}, an earlier endpoint or a free name")
            seen_y.add(b.y)
        fin = cf.final
        if isinstance(fin, Thread) and lang.value_of(fin.term) is not None:
            pass
        else:
            z = blocked_endpoint(fin, lang)
            if z is None or not (z in seen_y or z in free):
                ok = False
                report.append("final thread is neither a value nor blocked on a bound or free name")
    if ok:
        return Progress("OpenBlocked", report=report or ["blocked on free names"])
    return Progress("Deadlock", report=report)


def _components(fl: Flat) -> list[Configuration]:
    fvs = [free_names(t) for t in fl.threads]
    parent = list(range(len(fl.threads)))

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    for b in fl.binders:
        ks = [k for k, fv in enumerate(fvs) if b.x in fv or b.y in fv]
        for k in ks[1:]:
            parent[find(k)] = find(ks[0])
    comps: dict[int, list[int]] = {}
    for k in range(len(fl.threads)):
        comps.setdefault(find(k), []).append(k)
    out = []
    for members in comps.values():
        names = set().union(*(fvs[k] for k in members))
        binders = [b for b in fl.binders if b.x in names or b.y in names]
        out.append(Flat(binders, [fl.threads[k] for k in members]).to_config())
    return out


def diamond_check(c: Configuration, mix: bool = False, lang: Lang = HGV) -> bool:
    """Distinct one-step reducts are joinable in one step each, up to ≡."""
    succ: dict[str, Configuration] = {}
    for _, d in config_step_all(c, mix, lang):
        succ.setdefault(config_key(d), d)
    if len(succ) <= 1:
        return True
    nexts = {k: {config_key(e) for _, e in config_step_all(d, mix, lang)} for k, d in succ.items()}
    keys = list(succ)
    for a, b in itertools.combinations(keys, 2):
        if not (nexts[a] & nexts[b]):
            return False
    return True


# ---------------------------------------------------------------------------
# Congruence rewrites


def congruence_rewrites(c: Configuration) -> list[tuple[str, Configuration]]:
    """Every single application of a congruence axiom, at any position,
    in either direction where it applies."""
    out: list[tuple[str, Configuration]] = []
    if isinstance(c, LinkThread):
        out.append(("SC-LinkComm", LinkThread(c.z, c.y, c.x)))
    if isinstance(c, Par):
        out.append(("SC-ParComm", Par(c.right, c.left)))
        if isinstance(c.right, Par):
            out.append(("SC-ParAssoc", Par(Par(c.left, c.right.left), c.right.right)))
        if isinstance(c.left, Par):
            out.append(("SC-ParAssoc", Par(c.left.left, Par(c.left.right, c.right))))
        if isinstance(c.left, Res):
            r = c.left
            if r.x not in free_names(c.right) and r.y not in free_names(c.right):
                out.append(("SC-ScopeExt", Res(r.x, r.y, r.ann, Par(r.body, c.right))))
        for name, d in congruence_rewrites(c.left):
            out.append((name, Par(d, c.right)))
        for name, d in congruence_rewrites(c.right):
            out.append((name, Par(c.left, d)))
    if isinstance(c, Res):
        out.append(("SC-NewSwap", Res(c.y, c.x, dual(c.ann), c.body)))
        b = c.body
        if isinstance(b, Res):
            out.append(("SC-NewComm", Res(b.x, b.y, b.ann, Res(c.x, c.y, c.ann, b.body))))
        if isinstance(b, Par):
            if c.x not in free_names(b.right) and c.y not in free_names(b.right):
                out.append(("SC-ScopeExt", Par(Res(c.x, c.y, c.ann, b.left), b.right)))
        for name, d in congruence_rewrites(c.body):
            out.append((name, Res(c.x, c.y, c.ann, d)))
    return out
