"""HTTP front end.  Input errors come back as 422 with ``{error, message}``."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__, service
from .errors import GroupError
from .schemas import (
    DecomposeRequest,
    DecomposeResponse,
    FactorResponse,
    GroupRequest,
    Health,
    ManifestRequest,
    ManifestResponse,
    MultiRequest,
    MultiResponse,
    RankResponse,
    SupersolubleResponse,
    VerifyRequest,
    VerifyResponse,
)

app = FastAPI(title="cycprod", version=__version__)


@app.exception_handler(GroupError)
async def group_error(request: Request, exc: GroupError) -> JSONResponse:
    return JSONResponse(status_code=422,
                        content={"error": type(exc).__name__, "message": str(exc)})


@app.get("/health", response_model=Health)
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/factor", response_model=FactorResponse)
def factor(req: GroupRequest) -> dict:
    return service.factor(req.text, req.max_order)


@app.post("/decompose", response_model=DecomposeResponse)
def decompose(req: DecomposeRequest) -> dict:
    return service.decomposition(req.text, req.factors, req.max_order)


@app.post("/rank", response_model=RankResponse)
def rank(req: GroupRequest) -> dict:
    return service.rank(req.text, req.max_order)


@app.post("/supersoluble", response_model=SupersolubleResponse)
def supersoluble(req: GroupRequest) -> dict:
    return service.supersoluble(req.text, req.max_order)


@app.post("/multi", response_model=MultiResponse, response_model_exclude_none=True)
def multi(req: MultiRequest) -> dict:
    return service.multi(req.text, req.generators, req.max_order)


@app.post("/gen", response_model=ManifestResponse)
def gen(req: ManifestRequest) -> dict:
    return service.corpus_manifest(req.max_order)


@app.post("/verify", response_model=VerifyResponse, response_model_by_alias=True)
def verify(req: VerifyRequest) -> dict:
    return service.verify(req.max_order, req.jobs, req.checks)
