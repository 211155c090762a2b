"""Static linear typing of HGV terms.

Checking is syntax-directed: every rule splits its environment by the
free names of the subterms, so no search is needed. The only place an
annotation may be missing is a λ in let-redex position, ``(λx.N) M``,
whose binder type is read off the argument.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .syntax import (
    Absurd,
    App,
    Case,
    Const,
    End,
    EndIn,
    EndOut,
    Inl,
    Inr,
    Lam,
    LetPair,
    LetUnit,
    Lolli,
    Pair,
    Product,
    Recv,
    Send,
    SessionType,
    Sum,
    Term,
    Unit,
    UnitVal,
    ValueType,
    Var,
    Void,
    dual,
    free_names,
    is_value,
)

TypeEnv = Mapping[str, ValueType]


class HgvTypeError(Exception):
    """A typing failure; ``kind`` is one of KINDS."""

    KINDS = ("unbound", "reuse", "unused", "mismatch", "nonlinear-split")

    def __init__(self, kind: str, message: str, location: str = "", expected=None, actual=None):
        assert kind in self.KINDS, kind
        super().__init__(f"{kind}: {message}")
        self.kind = kind
        self.message = message
        self.location = location
        self.expected = expected
        self.actual = actual


@dataclass
class Derivation:
    rule: str
    type: ValueType
    premises: list["Derivation"] = field(default_factory=list)

    def to_json(self) -> dict:
        from .surface import print_type

        return {
            "rule": self.rule,
            "type": print_type(self.type),
            "premises": [p.to_json() for p in self.premises],
        }


def _loc(m) -> str:
    from .surface import print_ast

    try:
        text = print_ast(m)
    except TypeError:
        text = repr(m)
    return text if len(text) <= 80 else text[:77] + "..."


def _show(t) -> str:
    from .surface import print_type

    return print_type(t) if isinstance(t, ValueType) else str(t)


# ---------------------------------------------------------------------------
# Constants


def const_result(name: str, arg: ValueType, mix: bool) -> ValueType | None:
    """Result type of constant ``name`` applied to ``arg``, or None."""
    if name == "link":
        if isinstance(arg, Product) and isinstance(arg.left, SessionType):
            if arg.right == dual(arg.left):
                return Unit() if mix else EndOut()
        return None
    if name == "fork":
        done = Unit() if mix else EndOut()
        if isinstance(arg, Lolli) and isinstance(arg.arg, SessionType) and arg.res == done:
            return dual(arg.arg)
        return None
    if name == "send":
        if isinstance(arg, Product) and isinstance(arg.right, Send):
            if arg.right.payload == arg.left:
                return arg.right.cont
        return None
    if name == "recv":
        if isinstance(arg, Recv):
            return Product(arg.payload, arg.cont)
        return None
    if name == "wait":
        return Unit() if isinstance(arg, EndIn) and not mix else None
    if name == "close":
        return Unit() if isinstance(arg, End) and mix else None
    return None


def const_available(name: str, mix: bool) -> bool:
    if name == "wait":
        return not mix
    if name == "close":
        return mix
    return name in ("link", "fork", "send", "recv")


SCHEMAS = {
    "link": "(S * ~S) -o end!",
    "fork": "(S -o end!) -o ~S",
    "send": "(T * !T.S) -o S",
    "recv": "?T.S -o (T * S)",
    "wait": "end? -o 1",
}
MIX_SCHEMAS = {
    "link": "(S * ~S) -o 1",
    "fork": "(S -o 1) -o ~S",
    "send": "(T * !T.S) -o S",
    "recv": "?T.S -o (T * S)",
    "close": "end -o 1",
}


# ---------------------------------------------------------------------------
# Checker


class _Checker:
    def __init__(self, mix: bool):
        self.mix = mix

    def enter(self, env: TypeEnv, m: Term) -> None:
        fv = free_names(m)
        for n in fv:
            if n not in env:
                raise HgvTypeError("unbound", f"name {n!r} is not in scope", _loc(m))
        for n in env:
            if n not in fv:
                raise HgvTypeError("unused", f"linear name {n!r} is never used", _loc(m))

    def split(self, env: TypeEnv, *parts: Term, binders=()) -> list[dict]:
        """Restrict env to each part's free names; parts must not overlap."""
        out = []
        seen: dict[str, int] = {}
        for i, (p, bound) in enumerate(zip(parts, binders or [()] * len(parts))):
            fv = free_names(p) - set(bound)
            for n in fv:
                if n in seen:
                    raise HgvTypeError("reuse", f"linear name {n!r} used more than once", _loc(p))
                seen[n] = i
            out.append({n: env[n] for n in fv if n in env})
        return out

    def infer(self, env: TypeEnv, m: Term):
        self.enter(env, m)
        return self._infer(env, m)

    def _infer(self, env, m):
        if isinstance(m, Var):
            return env[m.name], m, Derivation("T-Var", env[m.name])
        if isinstance(m, UnitVal):
            return Unit(), m, Derivation("T-Unit", Unit())
        if isinstance(m, Const):
            raise HgvTypeError(
                "mismatch", f"constant {m.name!r} needs a known type; apply it or annotate", _loc(m)
            )
        if isinstance(m, Lam):
            if m.ann is None:
                raise HgvTypeError("mismatch", f"λ{m.var} needs a type annotation", _loc(m))
            body_env = dict(env)
            if m.var in body_env:
                raise HgvTypeError("reuse", f"binder {m.var!r} shadows a linear name", _loc(m))
            body_env[m.var] = m.ann
            res, body, d = self.infer(body_env, m.body)
            t = Lolli(m.ann, res)
            return t, Lam(m.var, m.ann, body), Derivation("T-Lam", t, [d])
        if isinstance(m, App):
            return self._app(env, m)
        if isinstance(m, LetUnit):
            e1, e2 = self.split(env, m.bound, m.body)
            t1, b1, d1 = self.infer(e1, m.bound)
            self.expect(Unit(), t1, m.bound)
            t2, b2, d2 = self.infer(e2, m.body)
            return t2, LetUnit(b1, b2), Derivation("T-LetUnit", t2, [d1, d2])
        if isinstance(m, Pair):
            e1, e2 = self.split(env, m.left, m.right)
            t1, a, d1 = self.infer(e1, m.left)
            t2, b, d2 = self.infer(e2, m.right)
            t = Product(t1, t2)
            return t, Pair(a, b), Derivation("T-Pair", t, [d1, d2])
        if isinstance(m, LetPair):
            if m.x == m.y:
                raise HgvTypeError("reuse", f"pattern binds {m.x!r} twice", _loc(m))
            e1, e2 = self.split(env, m.bound, m.body, binders=((), (m.x, m.y)))
            t1, b1, d1 = self.infer(e1, m.bound)
            if not isinstance(t1, Product):
                raise HgvTypeError("mismatch", "let-pair on a non-product", _loc(m.bound), "T * U", t1)
            for b in (m.x, m.y):
                if b in e2:
                    raise HgvTypeError("reuse", f"binder {b!r} shadows a linear name", _loc(m))
            e2 = {**e2, m.x: t1.left, m.y: t1.right}
            t2, b2, d2 = self.infer(e2, m.body)
            return t2, LetPair(m.x, m.y, b1, b2), Derivation("T-LetPair", t2, [d1, d2])
        if isinstance(m, (Inl, Inr)):
            if not isinstance(m.ann, Sum):
                raise HgvTypeError("mismatch", "injection annotation must be a sum", _loc(m), "T + U", m.ann)
            want = m.ann.left if isinstance(m, Inl) else m.ann.right
            t, a, d = self.infer(env, m.term)
            self.expect(want, t, m.term)
            rule = "T-Inl" if isinstance(m, Inl) else "T-Inr"
            return m.ann, type(m)(a, m.ann), Derivation(rule, m.ann, [d])
        if isinstance(m, Case):
            return self._case(env, m)
        if isinstance(m, Absurd):
            t, a, d = self.infer(env, m.term)
            self.expect(Void(), t, m.term)
            return m.ann, Absurd(a, m.ann), Derivation("T-Absurd", m.ann, [d])
        raise TypeError(f"not a term: {m!r}")

    def _case(self, env, m: Case):
        fv_l = free_names(m.left) - {m.x}
        fv_r = free_names(m.right) - {m.y}
        if fv_l != fv_r:
            diff = sorted(fv_l ^ fv_r)
            raise HgvTypeError(
                "nonlinear-split", f"case branches disagree on linear names {diff}", _loc(m)
            )
        fv_s = free_names(m.scrut)
        overlap = fv_s & fv_l
        if overlap:
            raise HgvTypeError("reuse", f"linear names {sorted(overlap)} used twice", _loc(m))
        e_s = {n: env[n] for n in fv_s}
        delta = {n: env[n] for n in fv_l}
        t, s, ds = self.infer(e_s, m.scrut)
        if not isinstance(t, Sum):
            raise HgvTypeError("mismatch", "case on a non-sum", _loc(m.scrut), "T + U", t)
        for b in (m.x, m.y):
            if b in delta:
                raise HgvTypeError("reuse", f"binder {b!r} shadows a linear name", _loc(m))
        tl, left, dl = self.infer({**delta, m.x: t.left}, m.left)
        tr, right, dr = self.infer({**delta, m.y: t.right}, m.right)
        self.expect(tl, tr, m.right)
        return tl, Case(s, m.x, left, m.y, right), Derivation("T-Case", tl, [ds, dl, dr])

    def _app(self, env, m: App):
        e1, e2 = self.split(env, m.fn, m.arg)
        fn = m.fn
        if isinstance(fn, Const):
            if not const_available(fn.name, self.mix):
                raise HgvTypeError("unbound", f"constant {fn.name!r} is not available here", _loc(fn))
            ta, a, da = self.infer(e2, m.arg)
            res = const_result(fn.name, ta, self.mix)
            if res is None:
                raise HgvTypeError(
                    "mismatch",
                    f"argument of {fn.name} has type {_show(ta)}, outside its schema",
                    _loc(m),
                    (MIX_SCHEMAS if self.mix else SCHEMAS)[fn.name],
                    ta,
                )
            dk = Derivation("T-Const", Lolli(ta, res))
            return res, App(fn, a), Derivation("T-App", res, [dk, da])
        if isinstance(fn, Lam) and fn.ann is None:
            ta, a, da = self.infer(e2, m.arg)
            lam = Lam(fn.var, ta, fn.body)
            tf, f, df = self.infer(e1, lam)
            return tf.res, App(f, a), Derivation("T-App", tf.res, [df, da])
        tf, f, df = self.infer(e1, fn)
        if not isinstance(tf, Lolli):
            raise HgvTypeError("mismatch", "application of a non-function", _loc(fn), "T -o U", tf)
        a, da = self.check(e2, m.arg, tf.arg)
        return tf.res, App(f, a), Derivation("T-App", tf.res, [df, da])

    def check(self, env, m: Term, want: ValueType):
        """Check ``m`` against ``want``; lets bare constants be typed."""
        if isinstance(m, Const):
            self.enter(env, m)
            if not const_available(m.name, self.mix):
                raise HgvTypeError("unbound", f"constant {m.name!r} is not available here", _loc(m))
            if not isinstance(want, Lolli) or const_result(m.name, want.arg, self.mix) != want.res:
                raise HgvTypeError(
                    "mismatch", f"{m.name} is not an instance of {_show(want)}", _loc(m), want, None
                )
            return m, Derivation("T-Const", want)
        if isinstance(m, Lam) and m.ann is None and isinstance(want, Lolli):
            m = Lam(m.var, want.arg, m.body)
        if isinstance(m, Pair) and isinstance(want, Product):
            self.enter(env, m)
            e1, e2 = self.split(env, m.left, m.right)
            a, d1 = self.check(e1, m.left, want.left)
            b, d2 = self.check(e2, m.right, want.right)
            return Pair(a, b), Derivation("T-Pair", want, [d1, d2])
        t, out, d = self.infer(env, m)
        self.expect(want, t, m)
        return out, d

    def expect(self, want: ValueType, got: ValueType, m) -> None:
        if want != got:
            raise HgvTypeError(
                "mismatch", f"expected {_show(want)}, found {_show(got)}", _loc(m), want, got
            )


def check_term(env: TypeEnv, m: Term, mix: bool = False) -> ValueType:
    """Type of ``m`` under ``env``, consuming every binding exactly once."""
    t, _, _ = _Checker(mix).infer(dict(env), m)
    return t


def check_value(env: TypeEnv, v: Term, mix: bool = False) -> ValueType:
    if not is_value(v):
        raise HgvTypeError("mismatch", "expected a value", _loc(v))
    return check_term(env, v, mix)


def elaborate(env: TypeEnv, m: Term, mix: bool = False) -> tuple[ValueType, Term]:
    """Type ``m`` and return a copy with every λ annotated."""
    t, out, _ = _Checker(mix).infer(dict(env), m)
    return t, out


def derivation(env: TypeEnv, m: Term, mix: bool = False) -> Derivation:
    _, _, d = _Checker(mix).infer(dict(env), m)
    return d
