"""Concrete syntax for HGV: parser, printer and sugar.

Types::

    T ::= T -o T | T + T | T * T | 1 | 0 | (T) | S | Alias
    S ::= !T.S | ?T.S | end! | end? | end | ~S | +{S, S} | &{S, S} | +{} | &{}

Terms::

    M ::= \\x:T. M | \\(). M | \\(x:T, y:U). M
        | let p = M in M | M; M | M M | x | K | () | (M, M)
        | inl[T] M | inr[T] M | absurd[T] M
        | case M { inl x -> M; inr y -> M }
        | select[S] inl | select[S] inr
        | offer M { inl x -> M; inr y -> M } | offer[T] M {} | spawn M

Configurations::

    C ::= main M | child M | link z x y | new (x y : S). C | C || C | (C)

A source file may start with ``type Name = T;`` aliases.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lexer import ParseError, TokenStream
from .syntax import (
    CHILD,
    CONSTANTS,
    MAIN,
    Absurd,
    App,
    Case,
    Configuration,
    Const,
    End,
    EndIn,
    EndOut,
    Inl,
    Inr,
    Lam,
    LetPair,
    LetUnit,
    LinkThread,
    Lolli,
    Pair,
    Par,
    Product,
    Recv,
    Res,
    Send,
    SessionType,
    Sum,
    Term,
    Thread,
    Unit,
    UnitVal,
    ValueType,
    Var,
    Void,
    all_names,
    dual,
    fresh,
)

__all__ = [
    "ParseError",
    "SourceProgram",
    "parse",
    "parse_term",
    "parse_config",
    "parse_type",
    "parse_hyperenv",
    "parse_gv_env",
    "print_ast",
    "print_type",
    "choice_plus",
    "choice_with",
    "select",
    "offer",
    "offer_empty",
    "spawn",
]

KEYWORDS = {
    "let",
    "in",
    "case",
    "inl",
    "inr",
    "absurd",
    "offer",
    "select",
    "new",
    "main",
    "child",
    "type",
    "spawn",
    "end",
    "end!",
    "end?",
} | set(CONSTANTS)


@dataclass(frozen=True)
class SourceProgram:
    text: str
    kind: str = "auto"  # "term", "configuration" or "auto"


# ---------------------------------------------------------------------------
# Choice encoding


def choice_plus(s1: SessionType, s2: SessionType) -> SessionType:
    """⊕{s1, s2}: select one of two continuations."""
    return Send(Unit(), Send(Sum(dual(s1), dual(s2)), EndOut()))


def choice_with(s1: SessionType, s2: SessionType) -> SessionType:
    """&{s1, s2}: offer two continuations."""
    return Recv(Unit(), Recv(Sum(s1, s2), EndIn()))


def empty_plus() -> SessionType:
    return Send(Unit(), Send(Void(), EndOut()))


def empty_with() -> SessionType:
    return Recv(Unit(), Recv(Void(), EndIn()))


def _let(x: str, m: Term, n: Term) -> Term:
    return App(Lam(x, None, n), m)


def _send(v: Term, c: Term) -> Term:
    return App(Const("send"), Pair(v, c))


def select(label: str, choice: ValueType) -> Term:
    """``select inl`` / ``select inr`` for a choice type ⊕{S1, S2}."""
    if not (
        isinstance(choice, Send)
        and isinstance(choice.payload, Unit)
        and isinstance(choice.cont, Send)
        and isinstance(choice.cont.payload, Sum)
        and isinstance(choice.cont.cont, EndOut)
    ):
        raise ValueError("select needs a binary choice type +{S1, S2}")
    summ = choice.cont.payload
    branch = summ.left if label == "inl" else summ.right
    inj = Inl if label == "inl" else Inr
    x, x1, y = "x", "x1", "y"
    body = _let(
        x1,
        _send(UnitVal(), Var(x)),
        App(Const("fork"), Lam(y, branch, _send(inj(Var(y), summ), Var(x1)))),
    )
    return Lam(x, choice, body)


def offer(l: Term, x: str, m: Term, y: str, n: Term) -> Term:
    """``offer L {inl x -> M; inr y -> N}``; the shadowed binder is renamed."""
    avoid = all_names(l) | all_names(m) | all_names(n) | {x, y}
    u = fresh("u", avoid)
    avoid.add(u)
    z = fresh("z", avoid)
    avoid.add(z)
    z2 = fresh("z", avoid)
    avoid.add(z2)
    w = fresh("w", avoid)
    tail = LetUnit(App(Const("wait"), Var(z2)), Case(Var(w), x, m, y, n))
    inner = LetPair(w, z2, App(Const("recv"), Var(z)), tail)
    return LetPair(u, z, App(Const("recv"), l), LetUnit(Var(u), inner))


def offer_empty(l: Term, result: ValueType) -> Term:
    """``offer L {}`` on the empty choice."""
    avoid = all_names(l)
    u = fresh("u", avoid)
    avoid.add(u)
    c = fresh("c", avoid)
    avoid.add(c)
    c2 = fresh("c", avoid)
    avoid.add(c2)
    z = fresh("z", avoid)
    tail = LetUnit(App(Const("wait"), Var(c2)), Absurd(Var(z), result))
    inner = LetPair(z, c2, App(Const("recv"), Var(c)), tail)
    return LetPair(u, c, App(Const("recv"), l), LetUnit(Var(u), inner))


def spawn(m: Term) -> Term:
    """Mix-variant ``spawn M``: run M in a new thread with no channel."""
    avoid = all_names(m)
    x = fresh("x", avoid)
    y = fresh("y", avoid | {x})
    body = LetUnit(App(Const("close"), Var(y)), m)
    return _let(x, App(Const("fork"), Lam(y, End(), body)), App(Const("close"), Var(x)))


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, src: str, aliases: dict[str, ValueType] | None = None):
        self.ts = TokenStream(src)
        self.aliases: dict[str, ValueType] = dict(aliases or {})
        self.counter = 0

    # -- helpers
    def ident(self) -> str:
        t = self.ts.peek()
        if t.kind != "ident" or t.text in KEYWORDS:
            self.ts.error(f"expected a name, found {t.text or 'end of input'!r}")
        self.ts.next()
        return t.text

    def tmp(self, base: str) -> str:
        self.counter += 1
        return f"{base}'{self.counter}"

    # -- aliases
    def aliases_block(self) -> None:
        while self.ts.at("type"):
            self.ts.next()
            name = self.ident()
            self.ts.expect("=")
            self.aliases[name] = self.type_()
            self.ts.expect(";")

    # -- types
    def type_(self) -> ValueType:
        left = self.type_sum()
        if self.ts.accept("-o") or self.ts.accept("⊸"):
            return Lolli(left, self.type_())
        return left

    def type_sum(self) -> ValueType:
        t = self.type_prod()
        while self.ts.at("+") and not self.ts.at("{", 1):
            self.ts.next()
            t = Sum(t, self.type_prod())
        return t

    def type_prod(self) -> ValueType:
        t = self.type_atom()
        while self.ts.at("*"):
            self.ts.next()
            t = Product(t, self.type_atom())
        return t

    def session(self) -> SessionType:
        tok = self.ts.peek()
        t = self.type_atom()
        if not isinstance(t, SessionType):
            self.ts.error("expected a session type", tok)
        return t

    def type_atom(self) -> ValueType:
        ts = self.ts
        tok = ts.peek()
        if tok.kind == "num" and tok.text in ("0", "1"):
            ts.next()
            return Unit() if tok.text == "1" else Void()
        if ts.accept("("):
            t = self.type_()
            ts.expect(")")
            return t
        if ts.at("!") or ts.at("?"):
            out = ts.next().text == "!"
            payload = self.type_atom()
            ts.expect(".")
            cont = self.session()
            return Send(payload, cont) if out else Recv(payload, cont)
        if ts.accept("end!"):
            return EndOut()
        if ts.accept("end?"):
            return EndIn()
        if ts.accept("end"):
            return End()
        if ts.accept("~"):
            return dual(self.session())
        if ts.at("+") or ts.at("&") or ts.at("⊕"):
            plus = ts.next().text != "&"
            ts.expect("{")
            if ts.accept("}"):
                return empty_plus() if plus else empty_with()
            s1 = self.session()
            ts.expect(",")
            s2 = self.session()
            ts.expect("}")
            return choice_plus(s1, s2) if plus else choice_with(s1, s2)
        if tok.kind == "ident" and tok.text in self.aliases:
            ts.next()
            return self.aliases[tok.text]
        ts.error(f"expected a type, found {tok.text or 'end of input'!r}")

    def bracket_type(self) -> ValueType:
        self.ts.expect("[")
        t = self.type_()
        self.ts.expect("]")
        return t

    # -- terms
    def term(self) -> Term:
        ts = self.ts
        if ts.at("\\") or ts.at("λ"):
            ts.next()
            return self.lam_rest()
        if ts.at("let"):
            ts.next()
            pat = self.pattern()
            ts.expect("=")
            bound = self.term()
            ts.expect("in")
            body = self.term()
            return self.bind_pattern(pat, bound, body)
        return self.seq()

    def lam_rest(self) -> Term:
        ts = self.ts
        if ts.at("(") and ts.at(")", 1):
            ts.next()
            ts.next()
            ts.expect(".")
            body = self.term()
            z = fresh("z", all_names(body))
            return Lam(z, Unit(), LetUnit(Var(z), body))
        if ts.accept("("):
            x = self.ident()
            ts.expect(":")
            tx = self.type_()
            ts.expect(",")
            y = self.ident()
            ts.expect(":")
            ty = self.type_()
            ts.expect(")")
            ts.expect(".")
            body = self.term()
            z = fresh("z", all_names(body) | {x, y})
            return Lam(z, Product(tx, ty), LetPair(x, y, Var(z), body))
        x = self.ident()
        ann = None
        if ts.accept(":"):
            ann = self.type_()
        ts.expect(".")
        return Lam(x, ann, self.term())

    def pattern(self):
        ts = self.ts
        if ts.accept("("):
            if ts.accept(")"):
                return ()
            p1 = self.pattern()
            ts.expect(",")
            p2 = self.pattern()
            ts.expect(")")
            return (p1, p2)
        return self.ident()

    def bind_pattern(self, pat, bound: Term, body: Term) -> Term:
        if isinstance(pat, str):
            return _let(pat, bound, body)
        if pat == ():
            return LetUnit(bound, body)
        p1, p2 = pat
        n1 = p1 if isinstance(p1, str) else self.tmp("p")
        n2 = p2 if isinstance(p2, str) else self.tmp("p")
        if not isinstance(p2, str):
            body = self.bind_pattern(p2, Var(n2), body)
        if not isinstance(p1, str):
            body = self.bind_pattern(p1, Var(n1), body)
        return LetPair(n1, n2, bound, body)

    def seq(self) -> Term:
        m = self.app()
        ts = self.ts
        if ts.at(";") and not self._branch_follows(1) and not ts.at("}", 1):
            ts.next()
            return LetUnit(m, self.term())
        return m

    def _branch_follows(self, k: int) -> bool:
        ts = self.ts
        return ts.at("inr", k) and ts.at_ident(k + 1) and ts.at("->", k + 2)

    def app(self) -> Term:
        ts = self.ts
        if ts.at("case"):
            return self.case_()
        if ts.at("offer"):
            return self.offer_()
        m = self.prefix()
        while self._atom_starts():
            m = App(m, self.prefix())
        return m

    def _atom_starts(self) -> bool:
        t = self.ts.peek()
        if t.kind == "ident":
            if t.text in ("in", "let", "case", "offer", "type", "main", "child", "new"):
                return False
            if t.text in ("inl", "inr") and self.ts.at("[", 1) is False:
                return False
            return True
        return t.kind == "sym" and t.text in ("(", "\\", "λ")

    def prefix(self) -> Term:
        ts = self.ts
        if ts.at("\\") or ts.at("λ"):
            ts.next()
            return self.lam_rest()
        if ts.at("inl") or ts.at("inr") or ts.at("absurd"):
            kw = ts.next().text
            ann = self.bracket_type()
            arg = self.prefix()
            return {"inl": Inl, "inr": Inr, "absurd": Absurd}[kw](arg, ann)
        if ts.at("spawn"):
            ts.next()
            return spawn(self.prefix())
        if ts.at("select"):
            ts.next()
            ann = self.bracket_type()
            tok = ts.next()
            if tok.text not in ("inl", "inr"):
                ts.error("select expects inl or inr", tok)
            try:
                return select(tok.text, ann)
            except ValueError as e:
                ts.error(str(e), tok)
        return self.atom()

    def atom(self) -> Term:
        ts = self.ts
        tok = ts.peek()
        if ts.accept("("):
            if ts.accept(")"):
                return UnitVal()
            m = self.term()
            if ts.accept(","):
                n = self.term()
                ts.expect(")")
                return Pair(m, n)
            ts.expect(")")
            return m
        if tok.kind == "ident" and tok.text in CONSTANTS and tok.text != "spawn":
            ts.next()
            return Const(tok.text)
        return Var(self.ident())

    def branches(self):
        ts = self.ts
        ts.expect("{")
        ts.expect("inl")
        x = self.ident()
        ts.expect("->")
        m = self.term()
        ts.expect(";")
        ts.expect("inr")
        y = self.ident()
        ts.expect("->")
        n = self.term()
        ts.accept(";")
        ts.expect("}")
        return x, m, y, n

    def case_(self) -> Term:
        self.ts.expect("case")
        scrut = self.term()
        x, m, y, n = self.branches()
        return Case(scrut, x, m, y, n)

    def offer_(self) -> Term:
        ts = self.ts
        ts.expect("offer")
        if ts.at("["):
            result = self.bracket_type()
            scrut = self.prefix()
            ts.expect("{")
            ts.expect("}")
            return offer_empty(scrut, result)
        scrut = self.prefix()
        x, m, y, n = self.branches()
        return offer(scrut, x, m, y, n)

    # -- configurations
    def config(self) -> Configuration:
        left = self.config_atom()
        if self.ts.accept("||") or self.ts.accept("∥"):
            return Par(left, self.config())
        return left

    def config_atom(self) -> Configuration:
        ts = self.ts
        if ts.accept("new"):
            ts.expect("(")
            x = self.ident()
            y = self.ident()
            ts.expect(":")
            tok = ts.peek()
            ann = self.type_()
            if not isinstance(ann, SessionType):
                ts.error("channel annotation must be a session type", tok)
            ts.expect(")")
            ts.expect(".")
            return Res(x, y, ann, self.config())
        if ts.accept("main"):
            return Thread(MAIN, self.term())
        if ts.accept("child"):
            return Thread(CHILD, self.term())
        if ts.at("link") and ts.at_ident(1):
            ts.next()
            z, x, y = self.ident(), self.ident(), self.ident()
            return LinkThread(z, x, y)
        if ts.accept("("):
            c = self.config()
            ts.expect(")")
            return c
        ts.error(f"expected a configuration, found {ts.peek().text or 'end of input'!r}")

    def looks_like_config(self) -> bool:
        ts = self.ts
        k = 0
        while ts.at("(", k):
            k += 1
        return ts.at("new", k) or ts.at("main", k) or ts.at("child", k) or (
            ts.at("link", k) and ts.at_ident(k + 1)
        )

    def finish(self) -> None:
        t = self.ts.peek()
        if t.kind != "eof":
            self.ts.error(f"unexpected {t.text!r}")


def parse(src: SourceProgram | str, aliases: dict[str, ValueType] | None = None):
    """Parse a term or a configuration (decided by the leading keyword)."""
    if isinstance(src, str):
        src = SourceProgram(src)
    p = _Parser(src.text, aliases)
    p.aliases_block()
    kind = src.kind
    if kind == "auto":
        kind = "configuration" if p.looks_like_config() else "term"
    out = p.config() if kind == "configuration" else p.term()
    p.finish()
    return out


def parse_term(text: str, aliases=None) -> Term:
    return parse(SourceProgram(text, "term"), aliases)


def parse_config(text: str, aliases=None) -> Configuration:
    return parse(SourceProgram(text, "configuration"), aliases)


def parse_type(text: str, aliases=None) -> ValueType:
    p = _Parser(text, aliases)
    t = p.type_()
    p.finish()
    return t


def parse_aliases(text: str) -> dict[str, ValueType]:
    p = _Parser(text)
    p.aliases_block()
    return p.aliases


def parse_hyperenv(text: str, aliases=None) -> list[dict[str, ValueType]]:
    """``x:!1.end!, p:1 | y:?1.end?`` → list of environments."""
    p = _Parser(text, aliases)
    envs: list[dict[str, ValueType]] = []
    while True:
        env: dict[str, ValueType] = {}
        while p.ts.at_ident():
            name = p.ident()
            p.ts.expect(":")
            if name in env:
                p.ts.error(f"duplicate binding {name!r}")
            env[name] = p.type_()
            if not p.ts.accept(","):
                break
        envs.append(env)
        if not p.ts.accept("|"):
            break
    p.finish()
    return envs


def parse_gv_env(text: str, aliases=None):
    """``lock(x, y):!1.end!, ping:1`` → (plain bindings, lock bindings)."""
    p = _Parser(text, aliases)
    plain: dict[str, ValueType] = {}
    locks: dict[tuple[str, str], SessionType] = {}
    while p.ts.at_ident():
        if p.ts.at("lock") and p.ts.at("(", 1):
            p.ts.next()
            p.ts.expect("(")
            x = p.ident()
            p.ts.accept(",")
            y = p.ident()
            p.ts.expect(")")
            p.ts.expect(":")
            tok = p.ts.peek()
            s = p.type_()
            if not isinstance(s, SessionType):
                p.ts.error("lock needs a session type", tok)
            locks[(x, y)] = s
        else:
            name = p.ident()
            p.ts.expect(":")
            plain[name] = p.type_()
        if not p.ts.accept(","):
            break
    p.finish()
    return plain, locks


# ---------------------------------------------------------------------------
# Printer


def print_type(t: ValueType) -> str:
    return _ptype(t, 0)


# precedence: 0 lolli, 1 sum, 2 product, 3 atom
def _ptype(t: ValueType, prec: int) -> str:
    if isinstance(t, Unit):
        return "1"
    if isinstance(t, Void):
        return "0"
    if isinstance(t, EndOut):
        return "end!"
    if isinstance(t, EndIn):
        return "end?"
    if isinstance(t, End):
        return "end"
    if isinstance(t, Send):
        return f"!{_ptype(t.payload, 3)}.{_ptype(t.cont, 3)}"
    if isinstance(t, Recv):
        return f"?{_ptype(t.payload, 3)}.{_ptype(t.cont, 3)}"
    if isinstance(t, Lolli):
        s = f"{_ptype(t.arg, 1)} -o {_ptype(t.res, 0)}"
        return f"({s})" if prec > 0 else s
    if isinstance(t, Sum):
        s = f"{_ptype(t.left, 1)} + {_ptype(t.right, 2)}"
        return f"({s})" if prec > 1 else s
    if isinstance(t, Product):
        s = f"{_ptype(t.left, 2)} * {_ptype(t.right, 3)}"
        return f"({s})" if prec > 2 else s
    raise TypeError(f"not a type: {t!r}")


def print_ast(m) -> str:
    if isinstance(m, Term):
        return _pterm(m, 0)
    if isinstance(m, Configuration):
        return _pconf(m, 0)
    if isinstance(m, ValueType):
        return print_type(m)
    if hasattr(m, "pretty"):
        return m.pretty()
    raise TypeError(f"cannot print {m!r}")


# term precedence: 0 binder-level, 1 app, 2 atom
def _pterm(m: Term, prec: int) -> str:
    if not isinstance(m, Term) and hasattr(m, "pretty"):
        s = m.pretty()
        return f"({s})" if prec > 0 else s
    if isinstance(m, Var):
        return m.name
    if isinstance(m, Const):
        return m.name
    if isinstance(m, UnitVal):
        return "()"
    if isinstance(m, Pair):
        return f"({_pterm(m.left, 0)}, {_pterm(m.right, 0)})"
    if isinstance(m, App) and isinstance(m.fn, Lam) and m.fn.ann is None:
        s = f"let {m.fn.var} = {_pterm(m.arg, 0)} in {_pterm(m.fn.body, 0)}"
        return f"({s})" if prec > 0 else s
    if isinstance(m, Lam):
        ann = f":{print_type(m.ann)}" if m.ann is not None else ""
        s = f"\\{m.var}{ann}. {_pterm(m.body, 0)}"
        return f"({s})" if prec > 0 else s
    if isinstance(m, App):
        s = f"{_pterm(m.fn, 1)} {_pterm(m.arg, 2)}"
        return f"({s})" if prec > 1 else s
    if isinstance(m, LetUnit):
        s = f"let () = {_pterm(m.bound, 0)} in {_pterm(m.body, 0)}"
        return f"({s})" if prec > 0 else s
    if isinstance(m, LetPair):
        s = f"let ({m.x}, {m.y}) = {_pterm(m.bound, 0)} in {_pterm(m.body, 0)}"
        return f"({s})" if prec > 0 else s
    if isinstance(m, (Inl, Inr, Absurd)):
        kw = {Inl: "inl", Inr: "inr", Absurd: "absurd"}[type(m)]
        s = f"{kw}[{print_type(m.ann)}] {_pterm(m.term, 2)}"
        return f"({s})" if prec > 1 else s
    if isinstance(m, Case):
        s = (
            f"case {_pterm(m.scrut, 0)} {{ inl {m.x} -> {_pterm(m.left, 0)}; "
            f"inr {m.y} -> {_pterm(m.right, 0)} }}"
        )
        return f"({s})" if prec > 0 else s
    raise TypeError(f"not a term: {m!r}")


def _pconf(c: Configuration, prec: int) -> str:
    if isinstance(c, Thread):
        return f"{c.flag} {print_ast(c.term) if not isinstance(c.term, Term) else _pterm(c.term, 0)}"
    if isinstance(c, LinkThread):
        return f"link {c.z} {c.x} {c.y}"
    if isinstance(c, Res):
        s = f"new ({c.x} {c.y} : {print_type(c.ann)}). {_pconf(c.body, 0)}"
        return f"({s})" if prec > 0 else s
    if isinstance(c, Par):
        s = f"{_pconf(c.left, 1)} || {_pconf(c.right, 0)}"
        return f"({s})" if prec > 0 else s
    raise TypeError(f"not a configuration: {c!r}")
