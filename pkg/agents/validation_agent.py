from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from config import get_settings
from models.skew_matrix import SkewMatrix, standard_symplectic
from tools.identities import check_det_commutation, check_rains
from tools.pfaffian import pf, pf_minor_expansion, pf_oracle
from tools.sampler import SeededStream
from utils.logger import get_logger


logger = get_logger(__name__)

ORACLE_TOL = 1e-10
MINOR_TOL = 1e-10


@dataclass(frozen=True)
class CheckResult:
    name: str
    cases: int
    failures: int
    max_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.failures == 0


def _relative(lhs: float, rhs: float) -> float:
    return abs(lhs - rhs) / max(1.0, abs(rhs))


def _random_skew(stream: SeededStream, dim: int, scale: float = 1.0) -> np.ndarray:
    g = stream.normal((dim, dim))
    return scale * (g - g.T)


def _well_conditioned_skew(stream: SeededStream, dim: int) -> SkewMatrix:
    # a dominant J keeps the inverse-transposes far from the condition guard
    return SkewMatrix.from_array(2.0 * standard_symplectic(dim // 2).entries + _random_skew(stream, dim, 0.15))


class ValidationAgent:
    """Seeded random-instance suites for the Pfaffian routines and identities."""

    def __init__(self, tolerance: Optional[float] = None):
        self._tolerance = tolerance or get_settings().tolerance

    def _run(self, name: str, cases: int, tolerance: float, case: Callable[[int], tuple[float, float]]) -> CheckResult:
        errors = np.array([_relative(*case(i)) for i in range(cases)])
        result = CheckResult(
            name=name,
            cases=cases,
            failures=int(np.sum(errors > tolerance)),
            max_error=float(errors.max()),
            tolerance=tolerance,
        )
        logger.info("suite=%s cases=%d failures=%d max_error=%.3e", name, cases, result.failures, result.max_error)
        return result

    def pfaffian_vs_oracle(self, stream: SeededStream, cases: int = 500) -> CheckResult:
        dims = (2, 4, 6, 8, 10)

        def case(i: int) -> tuple[float, float]:
            k = SkewMatrix.from_array(_random_skew(stream, dims[i % len(dims)]))
            return pf(k), pf_oracle(k)

        return self._run("pf_vs_oracle", cases, ORACLE_TOL, case)

    def pfaffian_squared(self, stream: SeededStream, cases: int = 300) -> CheckResult:
        dims = (2, 4, 6, 8, 10, 12)

        def case(i: int) -> tuple[float, float]:
            k = SkewMatrix.from_array(_random_skew(stream, dims[i % len(dims)]))
            return pf(k) ** 2, float(scipy.linalg.det(k.entries))

        return self._run("pf_squared_det", cases, self._tolerance, case)

    def det_commutation(self, stream: SeededStream, cases: int = 200) -> CheckResult:
        def case(i: int) -> tuple[float, float]:
            t, n = 1 + i % 4, 1 + (i // 4) % 5
            return check_det_commutation(0.5 * stream.normal((t, n)), 0.5 * stream.normal((n, t)))

        return self._run("det_commutation", cases, self._tolerance, case)

    def rains(self, stream: SeededStream, cases: int = 200) -> CheckResult:
        def case(i: int) -> tuple[float, float]:
            n, t = 1 + i % 3, 1 + (i // 3) % 3
            a = 0.5 * stream.normal((2 * n, 2 * t))
            b = _well_conditioned_skew(stream, 2 * t)
            c = _well_conditioned_skew(stream, 2 * n)
            return check_rains(a, b, c)

        return self._run("rains", cases, self._tolerance, case)

    def minor_expansion(self, stream: SeededStream, cases: int = 100) -> CheckResult:
        def case(i: int) -> tuple[float, float]:
            t = 1 + i % 4
            j = standard_symplectic(t)
            k = SkewMatrix.from_array(_random_skew(stream, 2 * t, 0.5))
            return pf_minor_expansion(j, k), pf(j + k)

        return self._run("minor_expansion", cases, MINOR_TOL, case)

    def run_all(self, seed: int) -> list[CheckResult]:
        """Every suite, each on its own child stream of SeedSequence(seed)."""
        suites = [
            self.pfaffian_vs_oracle,
            self.pfaffian_squared,
            self.det_commutation,
            self.rains,
            self.minor_expansion,
        ]
        streams = SeededStream(seed).spawn(len(suites))
        return [suite(stream) for suite, stream in zip(suites, streams)]


def get_validation_agent(tolerance: Optional[float] = None) -> ValidationAgent:
    return ValidationAgent(tolerance)
