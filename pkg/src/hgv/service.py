"""HTTP service over the HGV workbench.

Every operation is a pydantic request model, a pure handler and a
pydantic response model. The FastAPI app exposes the handlers at
``POST /<operation>``; the CLI calls the same handlers in-process or
through HTTP.
"""

from __future__ import annotations

from typing import Callable, Literal, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import aps as A
from . import hcp as H
from . import semantics as Sem
from . import translate as T
from .fghgv import fg_check, fg_translate, fg_translate_config
from .lexer import ParseError
from .runtime_typing import (
    ConfigTypeError,
    check_config,
    format_hyperenv,
    gv_check_config,
    runtime_to_json,
    synthesize,
)
from .surface import parse, parse_aliases, parse_gv_env, parse_hyperenv, print_ast, print_type
from .syntax import CHILD, MAIN, Configuration, Term, Thread
from .typecheck import HgvTypeError, check_term, derivation

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Malformed input: parse errors, unknown options."""


# ---------------------------------------------------------------------------
# Models


class Request(BaseModel):
    mix: bool = False


class SourceRequest(Request):
    source: str = Field(description="HGV program text")


class Derivation(BaseModel):
    rule: str
    type: str
    premises: list["Derivation"] = []


class TraceStep(BaseModel):
    rule: str
    locus: list[int]
    channel: list[str]
    pre: str
    post: str


class Trace(BaseModel):
    format: Literal["hgv-trace/1"]
    policy: Literal["det", "random"]
    seed: Optional[int]
    initial: str
    steps: list[TraceStep]
    terminal: str


class StepCheck(BaseModel):
    source: int
    target: int
    rule: str
    beta_steps: int
    ok: bool


class CorrespondenceReport(BaseModel):
    ok: bool
    clause1: bool
    clause2: bool
    configurations: list[str]
    reductions: list[StepCheck]
    alpha_transitions_checked: int
    beta_transitions_checked: int
    hcp_states: int
    bisim_fallbacks: int
    failures: list[str]
    seconds: float


class Redex(BaseModel):
    rule: str
    locus: list[int]
    channel: list[str]


class ProgressReport(BaseModel):
    verdict: Literal["Reducible", "MainValue", "OpenBlocked", "Deadlock"]
    report: list[str]
    redexes: list[Redex] = []
    value: Optional[str] = None


class Response(BaseModel):
    ok: bool
    exit_code: int = EXIT_OK
    error: Optional[str] = None
    text: str = Field("", description="human-readable rendering")


class CheckResponse(Response):
    type: Optional[str] = None
    derivation: Optional[Derivation] = None


class CheckConfigRequest(SourceRequest):
    env: Optional[str] = Field(None, description="hyper-environment, e.g. 'x:!1.end! | y:?1.end?'")
    gv: Optional[str] = Field(None, description="GV environment, e.g. 'lock(x, y):!1.end!, p:1'")


class CheckConfigResponse(Response):
    runtime: Optional[dict] = None
    hyperenv: Optional[str] = None


class RunRequest(SourceRequest):
    policy: Literal["det", "random"] = "det"
    seed: Optional[int] = None
    fuel: Optional[int] = None


class RunResponse(Response):
    terminal: Optional[str] = None
    steps: int = 0
    trace: Optional[Trace] = None


class ApsRequest(SourceRequest):
    pass


class ApsResponse(Response):
    verdict: Optional[str] = None
    is_tree: Optional[bool] = None
    leaves: list[int] = []
    environments: list[str] = []
    dot: str = ""


class TcfRequest(SourceRequest):
    pass


class TcfResponse(Response):
    canonical: Optional[str] = None
    is_tree_canonical: Optional[bool] = None
    equivalent: Optional[bool] = None


class FgResponse(Response):
    fg: Optional[str] = None


class TranslateRequest(SourceRequest):
    r: str = "r"


class TranslateResponse(Response):
    process: Optional[str] = None
    hyperenv: Optional[str] = None


class LtsRequest(Request):
    process: str = Field(description="HCP process text")
    cap: int = H.DEFAULT_CAP


class LtsTransition(BaseModel):
    source: int
    label: str
    target: int


class LtsResponse(Response):
    states: list[str] = []
    transitions: list[LtsTransition] = []
    dot: str = ""


class BisimRequest(Request):
    left: str
    right: str
    mode: Literal["strong", "weak"] = "weak"
    internal: list[Literal["α", "β", "alpha", "beta"]] = ["α", "β"]
    cap: int = H.DEFAULT_CAP


class BisimResponse(Response):
    bisimilar: Optional[bool] = None


class CorrespondRequest(SourceRequest):
    budget: int = H.DEFAULT_CAP
    reachable: bool = False
    r: str = "r"


class CorrespondResponse(Response):
    report: Optional[CorrespondenceReport] = None


class ProgressRequest(SourceRequest):
    env: Optional[str] = None


class ProgressResponse(Response):
    verdict: Optional[str] = None
    report: Optional[ProgressReport] = None


# ---------------------------------------------------------------------------
# Helpers


def _parse(source: str):
    try:
        return parse(source), parse_aliases(source)
    except ParseError as e:
        raise UsageError(str(e)) from e


def _config(source: str) -> tuple[Configuration, dict]:
    """Parse a program; a bare term becomes ``main M``."""
    m, aliases = _parse(source)
    if isinstance(m, Term):
        m = Thread(MAIN, m)
    return m, aliases


def _hyperenv(text: Optional[str], aliases) -> list[dict]:
    if text is None:
        return [{}]
    try:
        return parse_hyperenv(text, aliases)
    except ParseError as e:
        raise UsageError(f"--env: {e}") from e


# ---------------------------------------------------------------------------
# Handlers


def do_check(req: SourceRequest) -> CheckResponse:
    m, _ = _parse(req.source)
    try:
        if isinstance(m, Term):
            t = check_term({}, m, req.mix)
            d = derivation({}, m, req.mix).to_json()
            return CheckResponse(ok=True, type=print_type(t), text=print_type(t), derivation=d)
        r = check_config([{}], m, req.mix)
        d = None
        if isinstance(m, Thread) and m.flag == MAIN:
            d = {"rule": "TC-Main", "type": str(r), "premises": [derivation({}, m.term, req.mix).to_json()]}
        return CheckResponse(ok=True, type=str(r), text=str(r), derivation=d)
    except (HgvTypeError, ConfigTypeError) as e:
        return CheckResponse(ok=False, exit_code=EXIT_NEGATIVE, error=str(e), text=str(e))


def do_check_config(req: CheckConfigRequest) -> CheckConfigResponse:
    c, aliases = _config(req.source)
    try:
        if req.gv is not None:
            try:
                plain, locks = parse_gv_env(req.gv, aliases)
            except ParseError as e:
                raise UsageError(f"--gv: {e}") from e
            from .runtime_typing import GvEnv

            r = gv_check_config(GvEnv(plain, locks), c, req.mix)
            return CheckConfigResponse(ok=True, runtime=runtime_to_json(r), text=str(r))
        if req.env is not None:
            h = _hyperenv(req.env, aliases)
            r = check_config(h, c, req.mix)
        else:
            h, r = synthesize(c, {}, req.mix)
        return CheckConfigResponse(
            ok=True, runtime=runtime_to_json(r), hyperenv=format_hyperenv(h), text=str(r)
        )
    except (HgvTypeError, ConfigTypeError) as e:
        return CheckConfigResponse(ok=False, exit_code=EXIT_NEGATIVE, error=str(e), text=str(e))


def do_run(req: RunRequest) -> RunResponse:
    c, _ = _config(req.source)
    try:
        res = Sem.run(c, req.policy, req.seed, req.fuel, req.mix)
    except Sem.IllTyped as e:
        return RunResponse(ok=False, exit_code=EXIT_NEGATIVE, error=str(e), text=str(e))
    except Sem.FuelExhausted as e:
        return RunResponse(ok=False, exit_code=EXIT_NEGATIVE, error=str(e), text=str(e))
    term = print_ast(res.terminal)
    return RunResponse(
        ok=True,
        terminal=term,
        steps=len(res.trace),
        trace=Sem.trace_json(c, res, req.policy, req.seed),
        text=term,
    )


def do_aps(req: ApsRequest) -> ApsResponse:
    c, _ = _config(req.source)
    try:
        h, g = A.config_aps(c)
    except A.ApsError as e:
        return ApsResponse(ok=False, exit_code=EXIT_NEGATIVE, error=str(e), text=str(e))
    v = A.verdict(g)
    envs = [", ".join(f"{n}:{print_type(t)}" for n, t in e.items()) or "∅" for e in h]
    tree = A.is_tree(g)
    return ApsResponse(
        ok=tree,
        exit_code=EXIT_OK if tree else EXIT_NEGATIVE,
        verdict=v,
        is_tree=tree,
        leaves=sorted(A.leaves(g)),
        environments=envs,
        dot=A.to_dot(g, h),
        text=v,
    )


def do_tcf(req: TcfRequest) -> TcfResponse:
    c, _ = _config(req.source)
    try:
        cf = Sem.tree_canonical_form(c)
    except Sem.NotSingletonEnv as e:
        return TcfResponse(ok=False, exit_code=EXIT_NEGATIVE, error=str(e), text=str(e))
    d = cf.to_config()
    s = print_ast(d)
    return TcfResponse(
        ok=True,
        canonical=s,
        is_tree_canonical=Sem.is_tree_canonical(d),
        equivalent=Sem.config_equiv(c, d),
        text=s,
    )


def do_fg(req: SourceRequest) -> FgResponse:
    m, _ = _parse(req.source)
    try:
        if isinstance(m, Term):
            check_term({}, m, req.mix)
            f = fg_translate(m, {}, req.mix)
            fg_check({}, f, req.mix)
        else:
            check_config([{}], m, req.mix)
            f = fg_translate_config(m, req.mix)
    except (HgvTypeError, ConfigTypeError) as e:
        return FgResponse(ok=False, exit_code=EXIT_NEGATIVE, error=str(e), text=str(e))
    s = print_ast(f)
    return FgResponse(ok=True, fg=s, text=s)


def do_translate(req: TranslateRequest) -> TranslateResponse:
    c, _ = _config(req.source)
    try:
        check_config([{}], c, req.mix)
        p = T.tr_config(fg_translate_config(c, req.mix), req.r)
        h = H.hcp_check(p)
    except (HgvTypeError, ConfigTypeError, T.TranslationError, H.HcpTypeError) as e:
        return TranslateResponse(ok=False, exit_code=EXIT_NEGATIVE, error=str(e), text=str(e))
    s = H.print_process(p)
    return TranslateResponse(ok=True, process=s, hyperenv=H.hyperenv_str(h), text=s)


def _process(text: str) -> H.Process:
    try:
        return H.parse_process(text)
    except ParseError as e:
        raise UsageError(str(e)) from e


def do_hcp_lts(req: LtsRequest) -> LtsResponse:
    p = _process(req.process)
    try:
        lts = H.explore([p], req.cap)
    except H.StateSpaceExceeded as e:
        return LtsResponse(ok=False, exit_code=EXIT_NEGATIVE, error=str(e), text=str(e))
    states = [H.print_process(q) for q in lts.states]
    trans = [LtsTransition(source=i, label=str(l), target=j) for i, l, j in lts.transitions()]
    text = "\n".join(f"{t.source} --{t.label}--> {t.target}" for t in trans)
    return LtsResponse(ok=True, states=states, transitions=trans, dot=lts.to_dot(), text=text)


_INTERNAL = {"α": H.ALPHA, "alpha": H.ALPHA, "β": H.BETA, "beta": H.BETA}


def do_bisim(req: BisimRequest) -> BisimResponse:
    p, q = _process(req.left), _process(req.right)
    internal = tuple(dict.fromkeys(_INTERNAL[x] for x in req.internal))
    try:
        b = H.bisim(p, q, req.mode, internal, req.cap)
    except H.StateSpaceExceeded as e:
        return BisimResponse(ok=False, exit_code=EXIT_NEGATIVE, error=str(e), text=str(e))
    return BisimResponse(
        ok=b, exit_code=EXIT_OK if b else EXIT_NEGATIVE, bisimilar=b, text="bisimilar" if b else "not bisimilar"
    )


def do_correspond(req: CorrespondRequest) -> CorrespondResponse:
    c, _ = _config(req.source)
    try:
        check_config([{}], c, req.mix)
        rep = T.correspondence_check(fg_translate_config(c, req.mix), req.r, req.budget, reachable=req.reachable)
    except (HgvTypeError, ConfigTypeError) as e:
        return CorrespondResponse(ok=False, exit_code=EXIT_NEGATIVE, error=str(e), text=str(e))
    except T.BudgetExceeded as e:
        return CorrespondResponse(ok=False, exit_code=EXIT_NEGATIVE, error=f"budget exceeded: {e}", text=str(e))
    j = rep.to_json()
    lines = [f"clause 1: {'pass' if rep.clause1 else 'FAIL'}", f"clause 2: {'pass' if rep.clause2 else 'FAIL'}"]
    lines += [f"  {s.rule} {s.source}->{s.target}: β×{s.beta_steps}" for s in rep.reductions]
    lines += rep.failures[:1]
    return CorrespondResponse(
        ok=rep.ok, exit_code=EXIT_OK if rep.ok else EXIT_NEGATIVE, report=j, text="\n".join(lines)
    )


def do_progress(req: ProgressRequest) -> ProgressResponse:
    c, aliases = _config(req.source)
    h = _hyperenv(req.env, aliases)
    try:
        check_config(h, c, req.mix)
    except (HgvTypeError, ConfigTypeError) as e:
        return ProgressResponse(ok=False, exit_code=EXIT_NEGATIVE, error=str(e), text=str(e))
    p = Sem.classify_progress(c, h, req.mix)
    good = p.verdict != "Deadlock"
    return ProgressResponse(
        ok=good,
        exit_code=EXIT_OK if good else EXIT_NEGATIVE,
        verdict=p.verdict,
        report=p.to_json(),
        text=p.verdict,
    )


OPERATIONS: dict[str, tuple[type[BaseModel], type[Response], Callable]] = {
    "check": (SourceRequest, CheckResponse, do_check),
    "check-config": (CheckConfigRequest, CheckConfigResponse, do_check_config),
    "run": (RunRequest, RunResponse, do_run),
    "aps": (ApsRequest, ApsResponse, do_aps),
    "tcf": (TcfRequest, TcfResponse, do_tcf),
    "fg": (SourceRequest, FgResponse, do_fg),
    "translate": (TranslateRequest, TranslateResponse, do_translate),
    "hcp-lts": (LtsRequest, LtsResponse, do_hcp_lts),
    "bisim": (BisimRequest, BisimResponse, do_bisim),
    "correspond": (CorrespondRequest, CorrespondResponse, do_correspond),
    "progress": (ProgressRequest, ProgressResponse, do_progress),
}


def dispatch(op: str, payload: dict) -> Response:
    req_t, _, handler = OPERATIONS[op]
    return handler(req_t.model_validate(payload))


# ---------------------------------------------------------------------------
# Schemas

SCHEMA_MODELS: dict[str, type[BaseModel]] = {
    "trace": Trace,
    "correspondence-report": CorrespondenceReport,
    **{f"{op}-response": resp_t for op, (_, resp_t, _) in OPERATIONS.items()},
}


def json_schemas() -> dict[str, dict]:
    return {name: model.model_json_schema() for name, model in SCHEMA_MODELS.items()}


def write_schemas(directory) -> None:
    import json
    from pathlib import Path

    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    for name, schema in json_schemas().items():
        text = json.dumps(schema, indent=2, ensure_ascii=False, sort_keys=True)
        (out / f"{name}.json").write_text(text + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# App


def _route(op: str, req_t, resp_t, handler):
    def endpoint(req):
        try:
            return handler(req)
        except UsageError as e:
            raise HTTPException(status_code=400, detail=str(e)) from e

    endpoint.__name__ = op.replace("-", "_")
    # Postponed annotations would reach FastAPI as unresolvable strings.
    endpoint.__annotations__ = {"req": req_t, "return": resp_t}
    return endpoint


def create_app() -> FastAPI:
    app = FastAPI(title="hgv", description="Hypersequent GV workbench")

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    for op, (req_t, resp_t, handler) in OPERATIONS.items():
        app.post(f"/{op}", response_model=resp_t)(_route(op, req_t, resp_t, handler))
    return app


app = create_app()
