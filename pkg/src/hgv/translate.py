"""Translation of fine-grain HGV into HCP, and an operational
correspondence harness.

Every value, term and configuration is translated at a result endpoint
``r``. Annotations on links are computed from the HGV types, so the
translator carries a type environment and a small inference pass.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Mapping, Optional

from . import hcp as H
from . import syntax as S
from .fghgv import FAbsurd, FApp, FCase, FLetPair, FLetUnit, Let, Ret, fg_translate_config, is_fg_term
from .typecheck import const_result
from .surface import print_ast

# ---------------------------------------------------------------------------
# Types


class TranslationError(Exception):
    pass


def up(t: S.ValueType) -> H.LinearType:
    if isinstance(t, S.Unit):
        return H.One()
    if isinstance(t, S.Void):
        return H.Zero()
    if isinstance(t, S.Product):
        return H.Tensor(up(t.left), up(t.right))
    if isinstance(t, S.Sum):
        return H.Plus(up(t.left), up(t.right))
    if isinstance(t, S.Lolli):
        return H.Parr(H.co(up(t.arg)), H.Tensor(H.One(), up(t.res)))
    if isinstance(t, S.Send):
        return H.Parr(H.co(up(t.payload)), up(t.cont))
    if isinstance(t, S.Recv):
        return H.Tensor(up(t.payload), up(t.cont))
    if isinstance(t, S.EndOut):
        return H.Bot()
    if isinstance(t, S.EndIn):
        return H.One()
    raise TranslationError(f"type {t} has no HCP counterpart")


def down(t: S.ValueType) -> H.LinearType:
    if isinstance(t, S.Unit):
        return H.Bot()
    if isinstance(t, S.Void):
        return H.Top()
    if isinstance(t, S.Product):
        return H.Parr(down(t.left), down(t.right))
    if isinstance(t, S.Sum):
        return H.With(down(t.left), down(t.right))
    if isinstance(t, S.Lolli):
        return H.Tensor(up(t.arg), H.Parr(H.Bot(), down(t.res)))
    if isinstance(t, S.Send):
        return H.Tensor(up(t.payload), down(t.cont))
    if isinstance(t, S.Recv):
        return H.Parr(down(t.payload), down(t.cont))
    if isinstance(t, S.EndOut):
        return H.One()
    if isinstance(t, S.EndIn):
        return H.Bot()
    raise TranslationError(f"type {t} has no HCP counterpart")


def down_env(env: Mapping[str, S.ValueType]) -> dict[str, H.LinearType]:
    return {n: down(t) for n, t in env.items()}


# ---------------------------------------------------------------------------
# Inference over fine-grain terms that are already known to be well typed


class _Pending:
    """A let-bound constant whose type is fixed by its use."""

    __slots__ = ("const", "type")

    def __init__(self, const: str):
        self.const = const
        self.type: Optional[S.ValueType] = None


def _lookup(env, x, expected=None):
    t = env.get(x)
    if t is None:
        raise TranslationError(f"unbound variable {x!r}")
    if isinstance(t, _Pending):
        if t.type is None and expected is not None:
            t.type = expected
        if t.type is None:
            raise TranslationError(f"cannot determine the type of constant {t.const!r}")
        return t.type
    return t


def _const_type(name: str, arg: S.ValueType) -> S.Lolli:
    res = const_result(name, arg, False)
    if res is None:
        raise TranslationError(f"constant {name!r} cannot take {arg}")
    return S.Lolli(arg, res)


def infer_value(env, v, expected: Optional[S.ValueType] = None) -> S.ValueType:
    if isinstance(v, S.Var):
        return _lookup(env, v.name, expected)
    if isinstance(v, S.Const):
        if expected is None:
            raise TranslationError(f"cannot determine the type of constant {v.name!r}")
        return expected
    if isinstance(v, S.UnitVal):
        return S.Unit()
    if isinstance(v, S.Pair):
        el = expected.left if isinstance(expected, S.Product) else None
        er = expected.right if isinstance(expected, S.Product) else None
        return S.Product(infer_value(env, v.left, el), infer_value(env, v.right, er))
    if isinstance(v, (S.Inl, S.Inr)):
        part = v.ann.left if isinstance(v, S.Inl) else v.ann.right
        infer_value(env, v.term, part)
        return v.ann
    if isinstance(v, S.Lam):
        if v.ann is None:
            raise TranslationError("unannotated λ")
        return S.Lolli(v.ann, infer_term({**env, v.var: v.ann}, v.body))
    raise TranslationError(f"not a fine-grain value: {v!r}")


def _bind_pending(env, x, bound):
    if isinstance(bound, Ret) and isinstance(bound.value, S.Const):
        return {**env, x: _Pending(bound.value.name)}
    return None


def infer_term(env, m) -> S.ValueType:
    if isinstance(m, Ret):
        return infer_value(env, m.value)
    if isinstance(m, Let):
        pend = _bind_pending(env, m.var, m.bound)
        if pend is not None:
            return infer_term(pend, m.body)
        return infer_term({**env, m.var: infer_term(env, m.bound)}, m.body)
    if isinstance(m, FApp):
        return _app_type(env, m).res
    if isinstance(m, FLetUnit):
        return infer_term(env, m.body)
    if isinstance(m, FLetPair):
        t = infer_value(env, m.value)
        return infer_term({**env, m.x: t.left, m.y: t.right}, m.body)
    if isinstance(m, FCase):
        t = infer_value(env, m.value)
        return infer_term({**env, m.x: t.left}, m.left)
    if isinstance(m, FAbsurd):
        return m.ann
    raise TranslationError(f"not a fine-grain term: {m!r}")


def _app_type(env, m: FApp) -> S.Lolli:
    fn = m.fn
    if isinstance(fn, S.Const):
        return _const_type(fn.name, infer_value(env, m.arg))
    if isinstance(fn, S.Var) and isinstance(env.get(fn.name), _Pending):
        cell = env[fn.name]
        if cell.type is None:
            cell.type = _const_type(cell.const, infer_value(env, m.arg))
        return cell.type
    t = infer_value(env, fn)
    if not isinstance(t, S.Lolli):
        raise TranslationError(f"applying a non-function of type {t}")
    infer_value(env, m.arg, t.arg)
    return t


# ---------------------------------------------------------------------------
# Values and terms


class _Names:
    def __init__(self, avoid):
        self.taken = set(avoid)

    def __call__(self, base: str) -> str:
        n = S.fresh(base, self.taken)
        self.taken.add(n)
        return n


def _apart(binders, body, clash, names):
    """Rename binders of ``body`` that collide with ``clash``."""
    out, mapping = [], {}
    for b in binders:
        if b in clash:
            nb = names(b)
            mapping[b] = nb
            out.append(nb)
        else:
            out.append(b)
    if mapping:
        body = S.substitute(body, mapping)
    return out, body


def _usend(x, y, ann, p, names):
    return H.usend(x, y, p, z=names("u"), ann=ann)


def _ping(x, p, names):
    return H.ping(x, p, z=names("u"))


def _pong(x, p, names):
    return H.pong(x, p, z=names("u"))


def _const_process(name: str, t: S.Lolli, r: str, names) -> H.Process:
    arg = t.arg
    if name == "wait":
        x = names("x")
        return H.Recv(r, x, H.Wait(x, _ping(r, H.Close(r, H.Halt()), names)))
    if name == "link":
        s = arg.left
        x, y = names("x"), names("y")
        body = _ping(r, H.Wait(r, H.Link(x, y, down(s))), names)
        return H.Recv(r, y, H.Recv(y, x, body))
    if name == "send":
        pay, sess = arg.left, arg.right.cont
        x, y = names("x"), names("y")
        inner = _usend(y, x, down(pay), _ping(r, H.Link(r, y, up(sess)), names), names)
        return H.Recv(r, y, H.Recv(y, x, inner))
    if name == "recv":
        pay, sess = arg.payload, arg.cont
        x, y = names("x"), names("y")
        inner = _ping(r, _usend(r, y, down(pay), H.Link(r, x, up(sess)), names), names)
        return H.Recv(r, x, H.Recv(x, y, inner))
    if name == "fork":
        d = down(arg.arg)
        y, y2, x, x2 = names("y"), names("y"), names("x"), names("x")
        left = H.Recv(r, x, _usend(y, x, _fork_ann(d), _ping(r, H.Link(r, y, d), names), names))
        right = H.Recv(
            y2, x2, _usend(x2, y2, d, _pong(x2, H.Close(x2, H.Halt()), names), names)
        )
        return H.Res(y, y2, H.Par(left, right))
    raise TranslationError(f"constant {name!r} has no HCP translation")


def _fork_ann(d: H.LinearType) -> H.LinearType:
    return H.Tensor(H.co(d), H.Parr(H.Bot(), H.One()))


def tr_value(env, v, r: str, names=None, expected: Optional[S.ValueType] = None) -> H.Process:
    names = names or _Names(_env_names(env) | S.all_names(v) | {r})
    if isinstance(v, S.Var):
        return H.Link(r, v.name, up(_lookup(env, v.name, expected)))
    if isinstance(v, S.Const):
        t = expected
        if t is None:
            raise TranslationError(f"cannot determine the type of constant {v.name!r}")
        return _const_process(v.name, t, r, names)
    if isinstance(v, S.UnitVal):
        return H.Close(r, H.Halt())
    if isinstance(v, S.Lam):
        (x,), body = _apart((v.var,), v.body, {r}, names)
        return H.Recv(r, x, tr_term({**env, x: v.ann}, body, r, names))
    if isinstance(v, S.Pair):
        el = expected.left if isinstance(expected, S.Product) else None
        er = expected.right if isinstance(expected, S.Product) else None
        x = names("x")
        return H.Send(r, x, H.Par(tr_value(env, v.left, x, names, el), tr_value(env, v.right, r, names, er)))
    if isinstance(v, (S.Inl, S.Inr)):
        left = isinstance(v, S.Inl)
        part = v.ann.left if left else v.ann.right
        other = up(v.ann.right if left else v.ann.left)
        body = tr_value(env, v.term, r, names, part)
        return H.Inl(r, other, body) if left else H.Inr(r, other, body)
    raise TranslationError(f"not a fine-grain value: {v!r}")


def _env_names(env) -> set[str]:
    return set(env)


def tr_term(env, m, r: str, names=None) -> H.Process:
    names = names or _Names(_env_names(env) | S.all_names(m) | {r})
    if isinstance(m, Ret):
        return _ping(r, tr_value(env, m.value, r, names), names)
    if isinstance(m, Let):
        (x,), mbody = _apart((m.var,), m.body, set(S.free_names(m.bound)) | {r}, names)
        x2 = names(x)
        pend = _bind_pending(env, x, m.bound)
        if pend is not None:
            infer_term(pend, mbody)
            t = pend[x].type
            if t is None:
                raise TranslationError(f"cannot determine the type of constant {m.bound.value.name!r}")
            bound = _ping(x2, tr_value(env, m.bound.value, x2, names, t), names)
        else:
            t = infer_term(env, m.bound)
            bound = tr_term(env, m.bound, x2, names)
        body = tr_term({**env, x: t}, mbody, r, names)
        return H.Res(x, x2, H.Par(_pong(x, body, names), bound))
    if isinstance(m, FApp):
        t = _app_type(env, m)
        x, x2, y, y2 = names("x"), names("x"), names("y"), names("y")
        head = _usend(y, x, down(t.arg), H.Link(r, y, H.Tensor(H.One(), up(t.res))), names)
        fn = tr_value(env, m.fn, y2, names, t)
        arg = tr_value(env, m.arg, x2, names, t.arg)
        return H.Res(x, x2, H.Res(y, y2, H.Par(head, H.Par(fn, arg))))
    if isinstance(m, FLetUnit):
        x, x2 = names("x"), names("x")
        return H.Res(x, x2, H.Par(H.Wait(x, tr_term(env, m.body, r, names)), tr_value(env, m.value, x2, names)))
    if isinstance(m, FLetPair):
        t = infer_value(env, m.value)
        (x, y), mbody = _apart((m.x, m.y), m.body, set(S.free_names(m.value)) | {r}, names)
        y2 = names(y)
        body = tr_term({**env, x: t.left, y: t.right}, mbody, r, names)
        return H.Res(y, y2, H.Par(H.Recv(y, x, body), tr_value(env, m.value, y2, names, t)))
    if isinstance(m, FCase):
        t = infer_value(env, m.value)
        clash = set(S.free_names(m.value)) | {r}
        (x,), left = _apart((m.x,), m.left, clash | (S.free_names(m.right) - {m.y}), names)
        right = S.substitute(m.right, {m.y: S.Var(x)}) if m.y != x else m.right
        m = FCase(m.value, x, left, x, right)
        x2 = names(x)
        left_p = tr_term({**env, x: t.left}, m.left, r, names)
        right_p = tr_term({**env, x: t.right}, right, r, names)
        return H.Res(x, x2, H.Par(H.Offer(x, left_p, right_p), tr_value(env, m.value, x2, names, t)))
    if isinstance(m, FAbsurd):
        x, x2 = names("x"), names("x")
        extra = {r: H.Tensor(H.One(), up(m.ann))}
        return H.Res(x, x2, H.Par(H.absurd_on(x, extra), tr_value(env, m.value, x2, names, S.Void())))
    raise TranslationError(f"not a fine-grain term: {m!r}")


# ---------------------------------------------------------------------------
# Configurations


def _fg(c):
    """Translate any coarse-grain threads to fine grain."""
    for t in S.threads(c):
        if isinstance(t, S.Thread) and not is_fg_term(t.term):
            return fg_translate_config(c)
    return c


def tr_config(c, r: str = "r", types: Optional[Mapping[str, S.ValueType]] = None, names=None) -> H.Process:
    """Translate a configuration; ``types`` gives its free names' types."""
    c = _fg(c)
    types = dict(types or {})
    names = names or _Names(S.all_names(c) | set(types) | {r})
    return _tr_config(c, r, types, names)


def _tr_config(c, r, types, names) -> H.Process:
    if isinstance(c, S.Res):
        inner = {**types, c.x: c.ann, c.y: S.dual(c.ann)}
        return H.Res(c.x, c.y, _tr_config(c.body, r, inner, names))
    if isinstance(c, S.Par):
        return H.Par(_tr_config(c.left, r, types, names), _tr_config(c.right, r, types, names))
    if isinstance(c, S.LinkThread):
        if c.x not in types:
            raise TranslationError(f"unknown type for {c.x!r}")
        return H.Wait(c.z, H.Link(c.x, c.y, down(types[c.x])))
    if isinstance(c, S.Thread):
        env = {n: types[n] for n in S.free_names(c.term) if n in types}
        missing = set(S.free_names(c.term)) - set(env)
        if missing:
            raise TranslationError(f"unknown types for {sorted(missing)}")
        done = isinstance(c.term, Ret)
        if c.flag == "main":
            t = infer_term(env, c.term)
            a, a2 = names("a"), names("a")
            if done:
                # a finished main thread, after its result ping
                fwd = H.Link(a2, r, down(t))
                return H.Res(a, a2, H.Par(tr_value(env, c.term.value, a, names, t), fwd))
            fwd = _pong(a2, H.Link(a2, r, down(t)), names)
            return H.Res(a, a2, H.Par(tr_term(env, c.term, a, names), fwd))
        w, w2 = names("w"), names("w")
        if done:
            # a finished child, after its result ping
            t = infer_term(env, c.term)
            body = tr_value(env, c.term.value, w, names, t)
            return H.Res(w, w2, H.Par(body, H.Close(w2, H.Halt())))
        tail = _pong(w2, H.Close(w2, H.Halt()), names)
        return H.Res(w, w2, H.Par(tr_term(env, c.term, w, names), tail))
    raise TranslationError(f"not a configuration: {c!r}")


def main_type(c, types: Optional[Mapping[str, S.ValueType]] = None) -> Optional[S.ValueType]:
    c = _fg(c)
    found = []

    def go(c, types):
        if isinstance(c, S.Res):
            go(c.body, {**types, c.x: c.ann, c.y: S.dual(c.ann)})
        elif isinstance(c, S.Par):
            go(c.left, types)
            go(c.right, types)
        elif isinstance(c, S.Thread) and c.flag == "main":
            env = {n: types[n] for n in S.free_names(c.term) if n in types}
            found.append(infer_term(env, c.term))

    go(c, dict(types or {}))
    return found[0] if found else None


def expected_config_env(c, r: str = "r", h=None) -> list[dict[str, H.LinearType]]:
    """The hyper-environment a translated configuration must have."""
    h = [dict(e) for e in (h or [])]
    t = main_type(c, {n: ty for e in h for n, ty in e.items()})
    out = [down_env(e) for e in h]
    if t is not None:
        # the main thread's environment is the last one
        if out:
            out[-1] = {**out[-1], r: H.co(down(t))}
        else:
            out.append({r: H.co(down(t))})
    return out


# ---------------------------------------------------------------------------
# Operational correspondence


class BudgetExceeded(Exception):
    pass


class CorrespondenceFailure(Exception):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass
class StepCheck:
    source: int
    target: int
    rule: str
    beta_steps: Optional[int] = None  # clause 1 witness length
    ok: bool = False

    def to_json(self):
        return {
            "source": self.source,
            "target": self.target,
            "rule": self.rule,
            "beta_steps": self.beta_steps,
            "ok": self.ok,
        }


@dataclass
class CorrespondenceReport:
    configs: list[str] = field(default_factory=list)
    reductions: list[StepCheck] = field(default_factory=list)
    alpha_checked: int = 0
    beta_checked: int = 0
    hcp_states: int = 0
    bisim_fallbacks: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def clause1(self) -> bool:
        return all(s.ok for s in self.reductions)

    @property
    def clause2(self) -> bool:
        return not any(f.startswith("clause 2") for f in self.failures)

    @property
    def ok(self) -> bool:
        return self.clause1 and self.clause2 and not self.failures

    def to_json(self):
        return {
            "ok": self.ok,
            "clause1": self.clause1,
            "clause2": self.clause2,
            "configurations": self.configs,
            "reductions": [s.to_json() for s in self.reductions],
            "alpha_transitions_checked": self.alpha_checked,
            "beta_transitions_checked": self.beta_checked,
            "hcp_states": self.hcp_states,
            "bisim_fallbacks": self.bisim_fallbacks,
            "failures": self.failures,
            "seconds": round(self.seconds, 3),
        }


def _reachable_configs(c, budget: int):
    from .fghgv import FG
    from .semantics import config_key, config_step_all

    keys = {config_key(c): 0}
    configs = [c]
    edges: list[tuple[int, int, str]] = []
    i = 0
    while i < len(configs):
        for redex, d in config_step_all(configs[i], False, FG):
            k = config_key(d)
            j = keys.get(k)
            if j is None:
                if len(configs) >= budget:
                    raise BudgetExceeded(f"more than {budget} configurations")
                j = keys[k] = len(configs)
                configs.append(d)
            edges.append((i, j, redex.rule))
        i += 1
    return configs, edges


class _Space:
    """Memoized α-normalized state space shared by all queries of one check."""

    def __init__(self, budget: int):
        self.budget = budget
        self.procs: dict[str, H.Process] = {}
        self.succ: dict[str, list[tuple[object, str]]] = {}
        self.fwd: dict[str, str] = {}

    def witness_key(self, k: str) -> str:
        """Key modulo plugging blocked forwardees; equal keys imply weak
        α-bisimilarity."""
        out = self.fwd.get(k)
        if out is None:
            out = self.fwd[k] = H.state_key(H.forward_normal(self.procs[k], False))
        return out

    def add(self, p: H.Process) -> str:
        q = H.alpha_normal(H.freshen(p), False)
        k = H.state_key(q)
        self._put(k, q)
        return k

    def _put(self, k, q):
        if k not in self.procs:
            if len(self.procs) >= self.budget:
                raise BudgetExceeded(f"more than {self.budget} HCP states")
            self.procs[k] = q

    def steps(self, k: str) -> list[tuple[object, str]]:
        out = self.succ.get(k)
        if out is None:
            out = []
            for l, q, k2 in H._lts_step_keyed(self.procs[k], True, True):
                self._put(k2, q)
                out.append((l, k2))
            self.succ[k] = out
        return out

    def search(self, start: str, targets: set[str], min_beta: int) -> Optional[int]:
        """Fewest β-steps (at least ``min_beta``) from ``start`` to a state
        whose key is in ``targets``; α-steps are absorbed by normalization."""
        targets = {self.witness_key(k) for k in targets}
        frontier = [start]
        seen = {start}
        depth = 0
        while frontier:
            if depth >= min_beta and any(self.witness_key(k) in targets for k in frontier):
                return depth
            nxt = []
            for k in frontier:
                for l, k2 in self.steps(k):
                    if l in (H.ALPHA, H.BETA) and k2 not in seen:
                        seen.add(k2)
                        nxt.append(k2)
            if depth < min_beta:
                seen = set(nxt)
            frontier = nxt
            depth += 1
        return None

    def lts(self, roots: list[str]) -> tuple[H.Lts, dict[str, int]]:
        """Everything reachable from ``roots`` as an explicit LTS."""
        lts = H.Lts(reduced=True)
        ids: dict[str, int] = {}
        stack = list(roots)
        while stack:
            k = stack.pop()
            if k in ids:
                continue
            ids[k], _ = lts.add(self.procs[k], k)
            stack.extend(k2 for _, k2 in self.steps(k))
        for k, i in ids.items():
            lts.edges[i] = [(l, ids[k2]) for l, k2 in self.steps(k)]
        return lts, ids


def _alpha_beta_reach(lts: H.Lts, start: int, min_beta: int) -> dict[int, int]:
    """States reachable by α and β steps with at least ``min_beta`` β
    steps, mapped to the fewest β steps used."""
    out: dict[int, int] = {}
    frontier = [(start, 0)]
    seen = {(start, 0)}
    while frontier:
        nxt = []
        for s, b in frontier:
            if b >= min_beta and s not in out:
                out[s] = b
            for l, t in lts.edges[s]:
                if l == H.ALPHA:
                    key = (t, b)
                elif l == H.BETA:
                    key = (t, min(b + 1, min_beta))
                else:
                    continue
                if key not in seen:
                    seen.add(key)
                    nxt.append(key)
        frontier = nxt
    return out


def correspondence_check(
    c,
    r: str = "r",
    budget: int = H.DEFAULT_CAP,
    types: Optional[Mapping[str, S.ValueType]] = None,
    reachable: bool = False,
) -> CorrespondenceReport:
    """Check both clauses of operational correspondence on ``c``, or on
    every configuration reachable from it when ``reachable`` is set.

    Witnesses are first sought as states identical up to α-equivalence
    after α-normalization, which implies weak α-bisimilarity. Only when
    none exists is the full weak α-bisimilarity computed."""
    start = time.perf_counter()
    c = _fg(c)
    report = CorrespondenceReport()
    if reachable:
        configs, edges = _reachable_configs(c, budget)
    else:
        configs, edges = _successor_configs(c)
    checked = range(len(configs)) if reachable else range(1)
    space = _Space(budget)
    procs: dict[int, H.Process] = {}
    keys: dict[int, str] = {}

    def key_of(i: int) -> str:
        if i not in keys:
            procs[i] = tr_config(configs[i], r, types)
            keys[i] = space.add(procs[i])
        return keys[i]

    report.configs = [print_ast(d) for d in configs]
    succ: dict[int, list[int]] = {}
    for i, j, _ in edges:
        succ.setdefault(i, []).append(j)

    def bisimilar_reach(start_key: str, target_idx: list[int], min_beta: int) -> Optional[int]:
        report.bisim_fallbacks += 1
        roots = [start_key] + [key_of(j) for j in target_idx]
        lts, ids = space.lts(roots)
        blocks = H.bisim_classes(lts, "weak", (H.ALPHA,))
        goal = {blocks[ids[key_of(j)]] for j in target_idx}
        reach = _alpha_beta_reach(lts, ids[start_key], min_beta)
        hits = [b for s, b in reach.items() if blocks[s] in goal]
        return min(hits) if hits else None

    try:
        # clause 1
        for i, j, rule in edges:
            if i not in checked:
                continue
            chk = StepCheck(i, j, rule)
            n = space.search(key_of(i), {key_of(j)}, 1)
            if n is None:
                n = bisimilar_reach(key_of(i), [j], 1)
            if n is not None:
                chk.ok = True
                chk.beta_steps = n
            else:
                report.failures.append(f"clause 1: no β-path from [{configs[i]}] to [{configs[j]}] ({rule})")
            report.reductions.append(chk)

        # clause 2
        for i in checked:
            key_of(i)
            targets = succ.get(i, [])
            tkeys = {key_of(j) for j in targets}
            for l, qp in H.lts_step(procs[i]):
                if l == H.ALPHA:
                    report.alpha_checked += 1
                    q = space.add(qp)
                    same = space.witness_key(q) == space.witness_key(keys[i])
                    if not same and bisimilar_reach(q, [i], 0) != 0:
                        report.failures.append(
                            f"clause 2: α-step of [{configs[i]}] leaves its class: {H.print_process(qp)}"
                        )
                elif l == H.BETA:
                    report.beta_checked += 1
                    q = space.add(qp)
                    n = space.search(q, tkeys, 0) if targets else None
                    if n is None and targets:
                        n = bisimilar_reach(q, targets, 0)
                    if n is None:
                        report.failures.append(
                            f"clause 2: β-step of [{configs[i]}] to {H.print_process(qp)} is unmatched"
                        )
    except H.StateSpaceExceeded as e:
        raise BudgetExceeded(str(e)) from e
    report.hcp_states = len(space.procs)
    report.seconds = time.perf_counter() - start
    report.space = space
    return report


def _successor_configs(c):
    from .fghgv import FG
    from .semantics import config_step_all

    configs = [c]
    edges = []
    for redex, d in config_step_all(c, False, FG):
        edges.append((0, len(configs), redex.rule))
        configs.append(d)
    return configs, edges


