"""Request and response models for the HTTP API."""

from __future__ import annotations

from pydantic import BaseModel, Field

from .group import DEFAULT_MAX_ORDER


class GroupRequest(BaseModel):
    text: str = Field(description="group file contents, Cayley or 'perm' format")
    max_order: int = Field(DEFAULT_MAX_ORDER, ge=1)


class DecomposeRequest(GroupRequest):
    factors: tuple[int, int] | None = Field(
        None, description="generators of A and B; default is the first factorization")


class MultiRequest(GroupRequest):
    generators: list[int] = Field(min_length=1)


class VerifyRequest(BaseModel):
    max_order: int | None = Field(None, ge=1)
    jobs: int = Field(1, ge=1)
    checks: list[str] | None = None


class ManifestRequest(BaseModel):
    max_order: int | None = Field(None, ge=1)


class FactorizationOut(BaseModel):
    A: list[int]
    B: list[int]
    orders: list[int]
    generators: list[int]


class FactorResponse(BaseModel):
    order: int
    count: int
    factorizations: list[FactorizationOut]


class DecomposeResponse(BaseModel):
    order: int
    factorization: FactorizationOut
    report: dict
    ok: bool
    failed: list[str]


class RankResponse(BaseModel):
    order: int
    rank: int


class SupersolubleResponse(BaseModel):
    order: int
    supersoluble: bool


class MultiResponse(BaseModel):
    order: int
    valid: bool
    ok: bool
    error: str | None = None
    message: str | None = None
    factors: dict | None = None
    largestPrime: dict | None = None
    supersoluble: bool | None = None


class ManifestResponse(BaseModel):
    maxOrder: int
    corpusHash: str
    count: int
    entries: list[dict]


class VerifySummary(BaseModel):
    model_config = {"extra": "allow"}

    pass_: int = Field(alias="pass")
    fail: int
    skipped: int
    entries: int


class VerifyResponse(BaseModel):
    model_config = {"extra": "allow"}

    schemaVersion: int
    toolVersion: str
    corpusHash: str
    checks: list[str]
    summary: VerifySummary
    entries: list[dict]


class ErrorResponse(BaseModel):
    error: str
    message: str


class Health(BaseModel):
    status: str
    version: str
