from typing import Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from dotenv import load_dotenv
load_dotenv()

from config import APP_NAME, VERSION, get_settings
from models.errors import PfKernelError, UnsupportedError
from models.measure import MeasureKind
from tools.measures import get_measure
from chains.correlation import correlation_asymmetric, correlation_bruteforce, correlation_hermitian
from chains.partition import BRUTEFORCE_MAX_N, build_moment_matrices, monomial_basis, z_bruteforce, z_pfaffian
from chains.skeworth import construct_family, invert_w, z_from_rs
from agents.validation_agent import get_validation_agent


app = FastAPI(title="pfkernel - Pfaffian kernel API", version=VERSION)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.exception_handler(PfKernelError)
async def library_error(request: Request, exc: PfKernelError):
    return JSONResponse(status_code=422, content={"kind": exc.kind, "message": str(exc)})


class EnsembleRequest(BaseModel):
    ensemble: MeasureKind = MeasureKind.HERMITIAN_BETA1
    n: int = Field(default=3, ge=1, description="Odd number of eigenvalues")
    nodes_real: Optional[int] = None
    nodes_complex: Optional[int] = None

    def measure(self):
        if self.ensemble is MeasureKind.CUSTOM:
            raise UnsupportedError("custom weights need a weight file; use the command line")
        return get_measure(self.ensemble.value, self.nodes_real, self.nodes_complex)


class PartitionRequest(EnsembleRequest):
    bruteforce: bool = True


class PartitionResponse(BaseModel):
    ensemble: str
    n: int
    z_pfaffian: float
    z_bruteforce: Optional[float] = None
    relative_gap: Optional[float] = None


class FamilyResponse(BaseModel):
    ensemble: str
    n: int
    coefficients: list[list[float]]
    r: list[float]
    s: list[float]
    z: float
    shadow_gap: float


class PairPoint(BaseModel):
    re: float
    im: float


class CorrelateRequest(EnsembleRequest):
    points: list[float] = Field(default_factory=list)
    complex_points: list[PairPoint] = Field(default_factory=list)
    oracle: bool = False


class CorrelateResponse(BaseModel):
    value: float
    oracle: Optional[float] = None
    relative_gap: Optional[float] = None


class ValidateRequest(BaseModel):
    seed: Optional[int] = None
    tolerance: Optional[float] = None


class SuiteResult(BaseModel):
    name: str
    cases: int
    failures: int
    max_error: float
    tolerance: float
    passed: bool


class ValidateResponse(BaseModel):
    passed: bool
    suites: list[SuiteResult]


@app.get("/health")
def health():
    return {"status": "ok", "tool": APP_NAME, "version": VERSION}


@app.post("/partition", response_model=PartitionResponse)
def partition(request: PartitionRequest):
    """Partition function from the Pfaffian of the bordered moment matrix."""
    m = request.measure()
    z_pf = z_pfaffian(build_moment_matrices(m, monomial_basis(request.n), request.n))
    response = PartitionResponse(ensemble=request.ensemble.value, n=request.n, z_pfaffian=z_pf)
    if request.bruteforce and request.n <= BRUTEFORCE_MAX_N:
        response.z_bruteforce = z_bruteforce(m, request.n)
        response.relative_gap = abs(z_pf - response.z_bruteforce) / abs(response.z_bruteforce)
    return response


@app.post("/family", response_model=FamilyResponse)
def family(request: EnsembleRequest):
    f = construct_family(request.measure(), request.n)
    c = invert_w(f)
    return FamilyResponse(
        ensemble=request.ensemble.value,
        n=f.n,
        coefficients=f.coeffs.tolist(),
        r=f.r.tolist(),
        s=f.s.tolist(),
        z=z_from_rs(f),
        shadow_gap=c.shadow_gap,
    )


@app.post("/correlate", response_model=CorrelateResponse)
def correlate(request: CorrelateRequest):
    """R_n for real-symmetric ensembles, R_{l,m} for the real asymmetric one."""
    m = request.measure()
    f = construct_family(m, request.n)
    c = invert_w(f)
    z = [complex(p.re, p.im) for p in request.complex_points]
    if request.ensemble is MeasureKind.REAL_ASYMMETRIC:
        value = correlation_asymmetric(f, c, m, request.points, z)
    else:
        value = correlation_hermitian(f, c, m, request.points + z)
    response = CorrelateResponse(value=value)
    if request.oracle:
        response.oracle = correlation_bruteforce(m, request.n, request.points, z)
        response.relative_gap = abs(value - response.oracle) / max(abs(response.oracle), 1e-300)
    return response


@app.post("/validate", response_model=ValidateResponse)
def validate(request: ValidateRequest):
    settings = get_settings()
    results = get_validation_agent(request.tolerance).run_all(
        request.seed if request.seed is not None else settings.seed
    )
    return ValidateResponse(
        passed=all(r.passed for r in results),
        suites=[SuiteResult(name=r.name, cases=r.cases, failures=r.failures, max_error=r.max_error,
                            tolerance=r.tolerance, passed=r.passed) for r in results],
    )


if __name__ == "__main__":
    import uvicorn
    settings = get_settings()
    uvicorn.run("api:app", host=settings.api_host, port=settings.api_port, reload=settings.api_reload)
