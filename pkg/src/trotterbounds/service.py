"""HTTP front end over the experiment runner and the bound calculators."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from . import experiments
from . import hydrogen_model as hm
from .bessel_sim import ProjectionError, ZeroFindingError
from .formula_algebra import FormulaError, derive_bound
from .schemas import (
    KIND_HELP,
    BoundTermOut,
    DeriveRequest,
    DeriveResponse,
    ExperimentConfig,
    HydrogenBoundRequest,
    HydrogenBoundResponse,
)


class RunRequest(BaseModel):
    config: ExperimentConfig
    threads: int = 1


class RunResponse(BaseModel):
    green: bool
    summary: dict
    files: dict[str, str]


def run_experiment(req: RunRequest) -> RunResponse:
    """Execute a config and render its artifacts; shared by the HTTP route and the CLI."""
    result = experiments.execute(req.config, req.threads)
    files = experiments.render_files(req.config, result)
    return RunResponse(green=result.green, summary=experiments.summary(req.config, result), files=files)


app = FastAPI(title="trotterbounds")


@app.get("/health")
def health():
    return {"status": "ok"}


@app.get("/kinds")
def kinds():
    return {k.value: text for k, text in KIND_HELP.items()}


@app.post("/runs", response_model=RunResponse)
def runs(req: RunRequest):
    try:
        return run_experiment(req)
    except (ProjectionError, ZeroFindingError, FormulaError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from None


@app.post("/bounds", response_model=DeriveResponse)
def bounds(req: DeriveRequest):
    try:
        pf = experiments.make_formula(req.order, req.taus)
        be = derive_bound(pf, simplify_zero_eigenstate=req.simplify)
    except (FormulaError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from None
    doc = be.to_dict()
    return DeriveResponse(order=doc["order"], terms=[BoundTermOut(**t) for t in doc["terms"]],
                          global_factor=doc["global_factor"])


@app.post("/hydrogen/first-order", response_model=HydrogenBoundResponse)
def hydrogen_first_order(req: HydrogenBoundRequest):
    lev = hm.HydrogenLevel(req.level.n, req.level.l)
    terms = hm.first_order_terms(lev, printed=req.printed)
    values = [(N, sum(tm(req.t, N) for tm in terms)) for N in req.N]
    out = [{"coeff": tm.coeff, "N_power": str(tm.step_power), "t_power": str(tm.time_power)} for tm in terms]
    return HydrogenBoundResponse(level=req.level, terms=out, values=values)


def serve(argv=None) -> None:  # pragma: no cover - starts a server
    import argparse

    import uvicorn

    ap = argparse.ArgumentParser(description="Serve the Trotter bound API.")
    ap.add_argument("--host", default="127.0.0.1")
    ap.add_argument("--port", type=int, default=8000)
    args = ap.parse_args(argv)
    uvicorn.run(app, host=args.host, port=args.port)
