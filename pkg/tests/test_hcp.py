from hgv.hcp import (
    BETA,
    Close,
    Halt,
    Link,
    One,
    Tensor,
    Bot,
    Parr,
    bisim,
    co,
    hcp_check,
    hcp_equiv,
    label_str,
    lts_step,
    parse_ltype,
    parse_process,
    print_ltype,
    print_process,
    saturated,
)

P = parse_process


def test_check_halt():
    assert hcp_check(Halt()) == []


def test_check_close():
    assert hcp_check(Close("x", Halt())) == [{"x": One()}]


def test_check_link():
    a = Tensor(One(), Bot())
    assert hcp_check(Link("x", "y", a)) == [{"x": a, "y": co(a)}]


def test_co_involutive():
    a = parse_ltype("(1 * bot) + (0 & top)")
    assert co(co(a)) == a
    assert co(Tensor(One(), Bot())) == Parr(Bot(), One())


def test_print_round_trip():
    for t in ("x[].0", "new (x y). (x[].0 || y().z[].0)", "x<->y : 1 * bot", "x.case(x().0, x().0)"):
        assert print_process(P(t)) == t
    assert print_ltype(parse_ltype("1 * bot")) == "1 * bot"


def test_equiv_halt_unit():
    assert hcp_equiv(P("x[].0 || 0"), P("x[].0"))


def test_equiv_link_sym():
    assert hcp_equiv(P("x<->y : 1 * bot"), P("y<->x : bot % 1"))


def test_equiv_res_comm():
    p = P("new (x y). new (z w). (x[].0 || y().z[].0 || w().0)")
    q = P("new (z w). new (x y). (x[].0 || y().z[].0 || w().0)")
    assert hcp_equiv(p, q)


def test_lts_act():
    [(l, q)] = lts_step(P("x[].0"))
    assert label_str(l) == "x[]" and q == Halt()


def test_lts_beta():
    [(l, q)] = lts_step(P("new (x y). (x[].0 || y().z[].0)"))
    assert l == BETA and hcp_equiv(q, P("z[].0"))


def test_lts_alpha():
    steps = [(label_str(l), q) for l, q in lts_step(P("new (x y). (x<->w : bot || y().z[].0)"))]
    assert ("α", P("w().z[].0")) in steps


def test_saturated_beta_chain():
    p = P("new (a b). (a[].0 || b().new (c d). (c[].0 || d().x[].0))")
    labels = {label_str(l) for l, _ in saturated(p, ["β"])}
    assert "x[]" in labels


def test_saturated_empty_adds_identity():
    got = saturated(P("x[].0"), [])
    assert {label_str(l) for l, _ in got} == {"x[]", "τ"}


def test_bisim_reflexive():
    p = P("new (x y). (x[].0 || y().z[].0)")
    assert bisim(p, p, "strong")


def test_bisim_beta():
    assert bisim(P("new (x y). (x[].0 || y().z[].0)"), P("z[].0"), "weak", ["β"])
    assert not bisim(P("new (x y). (x[].0 || y().z[].0)"), P("z[].0"), "strong")


def test_not_bisim():
    assert not bisim(P("z[].0"), P("z().0"))
