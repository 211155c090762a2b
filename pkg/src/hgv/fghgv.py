"""Fine-grain call-by-value HGV.

Values reuse the HGV value classes (a λ-value simply carries a fine-grain
body). Computations are the classes below; every intermediate result is
named by ``let``. Configurations holding fine-grain threads run on the
shared semantics through ``FG``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from . import syntax as S
from .semantics import Comm, Lang, Step, _wrap
from .syntax import (
    Const,
    Inl,
    Inr,
    Lam,
    Pair,
    SessionType,
    Term,
    UnitVal,
    ValueType,
    Var,
    all_names,
    alpha_key,
    free_names,
    fresh,
    ordered_free_names,
    substitute,
)


class FgTerm:
    """A fine-grain computation."""

    __slots__ = ()

    def ordered_free_names(self) -> list[str]:
        return ordered_free_names(to_hgv(self))

    def fg_check(self, env, mix=False):
        return fg_check(env, self, mix)

    def __str__(self) -> str:
        return self.pretty()


def _v(v) -> str:
    from .surface import _pterm

    return _pterm(v, 2)


def _vf(v) -> str:
    from .surface import _pterm

    return _pterm(v, 0)


@dataclass(frozen=True, slots=True)
class Ret(FgTerm):
    value: Term

    def free_names(self):
        return free_names(self.value)

    def all_names(self):
        return all_names(self.value)

    def substitute(self, mapping):
        return Ret(S._subst(self.value, mapping))

    def alpha_key(self, env, d):
        return ("ret", S._key(self.value, env, d))

    def size(self):
        return 1 + S.size(self.value)

    def pretty(self):
        return f"ret {_v(self.value)}"


@dataclass(frozen=True, slots=True)
class Let(FgTerm):
    var: str
    bound: FgTerm
    body: FgTerm

    def free_names(self):
        return free_names(self.bound) | (free_names(self.body) - {self.var})

    def all_names(self):
        return {self.var} | all_names(self.bound) | all_names(self.body)

    def substitute(self, mapping):
        (b,), inner = S._enter((self.var,), free_names(self.body), mapping)
        return Let(b, S._subst(self.bound, mapping), S._subst(self.body, inner))

    def alpha_key(self, env, d):
        return ("let", S._key(self.bound, env, d), S._key(self.body, {**env, self.var: d}, d + 1))

    def size(self):
        return 1 + S.size(self.bound) + S.size(self.body)

    def pretty(self):
        return f"let {self.var} = {self.bound.pretty()} in {self.body.pretty()}"


@dataclass(frozen=True, slots=True)
class FApp(FgTerm):
    fn: Term
    arg: Term

    def free_names(self):
        return free_names(self.fn) | free_names(self.arg)

    def all_names(self):
        return all_names(self.fn) | all_names(self.arg)

    def substitute(self, mapping):
        return FApp(S._subst(self.fn, mapping), S._subst(self.arg, mapping))

    def alpha_key(self, env, d):
        return ("app", S._key(self.fn, env, d), S._key(self.arg, env, d))

    def size(self):
        return 1 + S.size(self.fn) + S.size(self.arg)

    def pretty(self):
        return f"{_v(self.fn)} {_v(self.arg)}"


@dataclass(frozen=True, slots=True)
class FLetUnit(FgTerm):
    value: Term
    body: FgTerm

    def free_names(self):
        return free_names(self.value) | free_names(self.body)

    def all_names(self):
        return all_names(self.value) | all_names(self.body)

    def substitute(self, mapping):
        return FLetUnit(S._subst(self.value, mapping), S._subst(self.body, mapping))

    def alpha_key(self, env, d):
        return ("letunit", S._key(self.value, env, d), S._key(self.body, env, d))

    def size(self):
        return 1 + S.size(self.value) + S.size(self.body)

    def pretty(self):
        return f"let () = {_vf(self.value)} in {self.body.pretty()}"


@dataclass(frozen=True, slots=True)
class FLetPair(FgTerm):
    x: str
    y: str
    value: Term
    body: FgTerm

    def free_names(self):
        return free_names(self.value) | (free_names(self.body) - {self.x, self.y})

    def all_names(self):
        return {self.x, self.y} | all_names(self.value) | all_names(self.body)

    def substitute(self, mapping):
        (a, b), inner = S._enter((self.x, self.y), free_names(self.body), mapping)
        return FLetPair(a, b, S._subst(self.value, mapping), S._subst(self.body, inner))

    def alpha_key(self, env, d):
        inner = {**env, self.x: d, self.y: d + 1}
        return ("letpair", S._key(self.value, env, d), S._key(self.body, inner, d + 2))

    def size(self):
        return 1 + S.size(self.value) + S.size(self.body)

    def pretty(self):
        return f"let ({self.x}, {self.y}) = {_vf(self.value)} in {self.body.pretty()}"


@dataclass(frozen=True, slots=True)
class FAbsurd(FgTerm):
    value: Term
    ann: ValueType

    def free_names(self):
        return free_names(self.value)

    def all_names(self):
        return all_names(self.value)

    def substitute(self, mapping):
        return FAbsurd(S._subst(self.value, mapping), self.ann)

    def alpha_key(self, env, d):
        return ("absurd", self.ann, S._key(self.value, env, d))

    def size(self):
        return 1 + S.size(self.value)

    def pretty(self):
        from .surface import print_type

        return f"absurd[{print_type(self.ann)}] {_v(self.value)}"


@dataclass(frozen=True, slots=True)
class FCase(FgTerm):
    value: Term
    x: str
    left: FgTerm
    y: str
    right: FgTerm

    def free_names(self):
        return (
            free_names(self.value)
            | (free_names(self.left) - {self.x})
            | (free_names(self.right) - {self.y})
        )

    def all_names(self):
        return {self.x, self.y} | all_names(self.value) | all_names(self.left) | all_names(self.right)

    def substitute(self, mapping):
        (a,), inl = S._enter((self.x,), free_names(self.left), mapping)
        (b,), inr = S._enter((self.y,), free_names(self.right), mapping)
        return FCase(S._subst(self.value, mapping), a, S._subst(self.left, inl), b, S._subst(self.right, inr))

    def alpha_key(self, env, d):
        return (
            "case",
            S._key(self.value, env, d),
            S._key(self.left, {**env, self.x: d}, d + 1),
            S._key(self.right, {**env, self.y: d}, d + 1),
        )

    def size(self):
        return 1 + S.size(self.value) + max(S.size(self.left), S.size(self.right))

    def pretty(self):
        return (
            f"case {_vf(self.value)} {{ inl {self.x} -> {self.left.pretty()}; "
            f"inr {self.y} -> {self.right.pretty()} }}"
        )


# ---------------------------------------------------------------------------
# Translation from HGV


def _has_unannotated(m) -> bool:
    if isinstance(m, Lam):
        return m.ann is None or _has_unannotated(m.body)
    for f in getattr(m, "__slots__", ()):
        sub = getattr(m, f)
        if isinstance(sub, Term) and _has_unannotated(sub):
            return True
    return False


def fg_translate(m: Term, env: Optional[Mapping[str, ValueType]] = None, mix: bool = False) -> FgTerm:
    """Name every subterm in value position with a let.

    λ-binders left unannotated (let sugar) are filled in by typing first.
    """
    if _has_unannotated(m):
        from .typecheck import elaborate

        _, m = elaborate(dict(env or {}), m, mix)
    avoid = set(all_names(m))

    def new(base):
        n = fresh(base, avoid)
        avoid.add(n)
        return n

    def tr(m) -> FgTerm:
        if isinstance(m, (Var, Const, UnitVal)):
            return Ret(m)
        if isinstance(m, Lam):
            return Ret(Lam(m.var, m.ann, tr(m.body)))
        if isinstance(m, S.App):
            f, a = new("f"), new("a")
            return Let(f, tr(m.fn), Let(a, tr(m.arg), FApp(Var(f), Var(a))))
        if isinstance(m, S.LetUnit):
            z = new("z")
            return Let(z, tr(m.bound), FLetUnit(Var(z), tr(m.body)))
        if isinstance(m, Pair):
            x, y = new("x"), new("y")
            return Let(x, tr(m.left), Let(y, tr(m.right), Ret(Pair(Var(x), Var(y)))))
        if isinstance(m, S.LetPair):
            z = new("z")
            return Let(z, tr(m.bound), FLetPair(m.x, m.y, Var(z), tr(m.body)))
        if isinstance(m, (Inl, Inr)):
            z = new("z")
            return Let(z, tr(m.term), Ret(type(m)(Var(z), m.ann)))
        if isinstance(m, S.Case):
            z = new("z")
            return Let(z, tr(m.scrut), FCase(Var(z), m.x, tr(m.left), m.y, tr(m.right)))
        if isinstance(m, S.Absurd):
            z = new("z")
            return Let(z, tr(m.term), FAbsurd(Var(z), m.ann))
        raise TypeError(f"not a term: {m!r}")

    return tr(m)


def fg_translate_config(c, mix: bool = False, types: Optional[Mapping[str, ValueType]] = None):
    """Translate every thread of a configuration.

    ``types`` gives the free names' types, needed only to elaborate
    unannotated λs; restriction annotations supply the rest.
    """
    types = dict(types or {})
    if isinstance(c, S.Thread):
        env = {n: types[n] for n in free_names(c) if n in types}
        return S.Thread(c.flag, fg_translate(c.term, env, mix))
    if isinstance(c, S.LinkThread):
        return c
    if isinstance(c, S.Res):
        inner = {**types, c.x: c.ann, c.y: S.dual(c.ann)}
        return S.Res(c.x, c.y, c.ann, fg_translate_config(c.body, mix, inner))
    if isinstance(c, S.Par):
        return S.Par(
            fg_translate_config(c.left, mix, types), fg_translate_config(c.right, mix, types)
        )
    raise TypeError(f"not a configuration: {c!r}")


# ---------------------------------------------------------------------------
# Embedding back into HGV (used for typing)


def to_hgv(m) -> Term:
    if isinstance(m, Ret):
        return _val(m.value)
    if isinstance(m, Let):
        if (
            isinstance(m.bound, Ret)
            and isinstance(m.bound.value, Const)
            and m.var in free_names(m.body)
        ):
            # A bare constant has no principal type; it is closed, so
            # substituting it for its single use types the same.
            return to_hgv(substitute(m.body, m.bound.value, m.var))
        return S.App(Lam(m.var, None, to_hgv(m.body)), to_hgv(m.bound))
    if isinstance(m, FApp):
        return S.App(_val(m.fn), _val(m.arg))
    if isinstance(m, FLetUnit):
        return S.LetUnit(_val(m.value), to_hgv(m.body))
    if isinstance(m, FLetPair):
        return S.LetPair(m.x, m.y, _val(m.value), to_hgv(m.body))
    if isinstance(m, FAbsurd):
        return S.Absurd(_val(m.value), m.ann)
    if isinstance(m, FCase):
        return S.Case(_val(m.value), m.x, to_hgv(m.left), m.y, to_hgv(m.right))
    if isinstance(m, Term):
        return _val(m)
    raise TypeError(f"not a fine-grain term: {m!r}")


def _val(v) -> Term:
    if isinstance(v, Lam):
        body = v.body if isinstance(v.body, Term) else to_hgv(v.body)
        return Lam(v.var, v.ann, body)
    if isinstance(v, Pair):
        return Pair(_val(v.left), _val(v.right))
    if isinstance(v, (Inl, Inr)):
        return type(v)(_val(v.term), v.ann)
    if isinstance(v, (Var, Const, UnitVal)):
        return v
    raise TypeError(f"not a fine-grain value: {v!r}")


def is_fg_value(v) -> bool:
    if isinstance(v, (Var, Const, UnitVal)):
        return True
    if isinstance(v, Lam):
        return isinstance(v.body, FgTerm)
    if isinstance(v, Pair):
        return is_fg_value(v.left) and is_fg_value(v.right)
    if isinstance(v, (Inl, Inr)):
        return is_fg_value(v.term)
    return False


def is_fg_term(m) -> bool:
    """Well-formedness: values only where the grammar asks for values."""
    if isinstance(m, Ret):
        return is_fg_value(m.value) and _fg_lams_ok(m.value)
    if isinstance(m, Let):
        return is_fg_term(m.bound) and is_fg_term(m.body)
    if isinstance(m, FApp):
        return all(is_fg_value(v) and _fg_lams_ok(v) for v in (m.fn, m.arg))
    if isinstance(m, (FLetUnit, FLetPair)):
        return is_fg_value(m.value) and is_fg_term(m.body)
    if isinstance(m, FAbsurd):
        return is_fg_value(m.value)
    if isinstance(m, FCase):
        return is_fg_value(m.value) and is_fg_term(m.left) and is_fg_term(m.right)
    return False


def _fg_lams_ok(v) -> bool:
    if isinstance(v, Lam):
        return is_fg_term(v.body)
    if isinstance(v, Pair):
        return _fg_lams_ok(v.left) and _fg_lams_ok(v.right)
    if isinstance(v, (Inl, Inr)):
        return _fg_lams_ok(v.term)
    return True


# ---------------------------------------------------------------------------
# Typing


def fg_check(env: Mapping[str, ValueType], m: FgTerm, mix: bool = False) -> ValueType:
    """Type of a fine-grain term; the rules coincide with HGV's on the embedding."""
    from .typecheck import HgvTypeError, check_term

    if not (is_fg_term(m) if isinstance(m, FgTerm) else is_fg_value(m)):
        raise HgvTypeError("mismatch", "not a well-formed fine-grain term")
    return check_term(env, to_hgv(m), mix)


# ---------------------------------------------------------------------------
# Reduction


class FgLang(Lang):
    def focus(self, m):
        if isinstance(m, Ret):
            return None
        if isinstance(m, Let):
            if isinstance(m.bound, Ret):
                return Step(substitute(m.body, m.bound.value, m.var), "E-Let")
            return _wrap(self.focus(m.bound), lambda h: Let(m.var, h, m.body))
        if isinstance(m, FApp):
            if isinstance(m.fn, Lam):
                return Step(substitute(m.fn.body, m.arg, m.fn.var), "E-Lam")
            if isinstance(m.fn, Const):
                return Comm(m.fn.name, m.arg, Ret)
            return None
        if isinstance(m, FLetUnit):
            if isinstance(m.value, UnitVal):
                return Step(m.body, "E-Unit")
            return None
        if isinstance(m, FLetPair):
            if isinstance(m.value, Pair):
                return Step(substitute(m.body, {m.x: m.value.left, m.y: m.value.right}), "E-Pair")
            return None
        if isinstance(m, FCase):
            if isinstance(m.value, Inl):
                return Step(substitute(m.left, m.value.term, m.x), "E-Inl")
            if isinstance(m.value, Inr):
                return Step(substitute(m.right, m.value.term, m.y), "E-Inr")
            return None
        return None

    def value_of(self, m):
        return m.value if isinstance(m, Ret) else None

    def var(self, n):
        return Var(n)

    def unit(self):
        return UnitVal()

    def pair(self, a, b):
        return Pair(a, b)

    def app(self, f, a):
        return FApp(f, a)

    def as_var(self, v):
        return v.name if isinstance(v, Var) else None

    def as_pair(self, v):
        return (v.left, v.right) if isinstance(v, Pair) else None

    def fork_session(self, v):
        if isinstance(v, Lam) and isinstance(v.ann, SessionType):
            return v.ann
        if isinstance(v, Const) and v.name == "close":
            return S.End()
        return None

    def is_unit(self, v):
        return isinstance(v, UnitVal)


FG = FgLang()


def fg_step(m: FgTerm) -> Optional[FgTerm]:
    f = FG.focus(m)
    return f.term if isinstance(f, Step) else None


def admin_normal(m):
    """Contract every ``let x = ret V in N``, also under binders."""
    if isinstance(m, Let):
        bound = admin_normal(m.bound)
        if isinstance(bound, Ret):
            return admin_normal(substitute(m.body, bound.value, m.var))
        return Let(m.var, bound, admin_normal(m.body))
    if isinstance(m, Ret):
        return Ret(_admin_val(m.value))
    if isinstance(m, FApp):
        return FApp(_admin_val(m.fn), _admin_val(m.arg))
    if isinstance(m, FLetUnit):
        return FLetUnit(_admin_val(m.value), admin_normal(m.body))
    if isinstance(m, FLetPair):
        return FLetPair(m.x, m.y, _admin_val(m.value), admin_normal(m.body))
    if isinstance(m, FAbsurd):
        return FAbsurd(_admin_val(m.value), m.ann)
    if isinstance(m, FCase):
        return FCase(_admin_val(m.value), m.x, admin_normal(m.left), m.y, admin_normal(m.right))
    return m


def _admin_val(v):
    if isinstance(v, Lam):
        return Lam(v.var, v.ann, admin_normal(v.body))
    if isinstance(v, Pair):
        return Pair(_admin_val(v.left), _admin_val(v.right))
    if isinstance(v, (Inl, Inr)):
        return type(v)(_admin_val(v.term), v.ann)
    return v
