"""
Resolution of the identity, reproducing kernels and projector reconstruction
"""

import math
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.fock.operators import Truncation
from src.kernel.errors import TruncationError
from src.kernel.jackson import jackson_derivative_poly
from src.kernel.params import DeformationParams, LogMagnitude
from src.kernel.quadrature import EvaluationBudget
from src.kernel.series import norm_series, q_shifted_log
from src.monitoring.logging_config import get_logger
from src.monitoring.tracing import get_tracer

from .radial import RadialMeasure, integrate_radial
from .states import Number, log_coefficients, overlap, require_domain

logger = get_logger(__name__)
tracer = get_tracer(__name__)


class ResolutionReport(BaseModel):
    """M − I for M = ∫ dμ |z⟩⟨z| on the first `rows` basis states"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    residuals: np.ndarray
    rows: int
    quadrature_error: float
    evaluations: int

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.residuals)))


class KernelValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    z: complex
    zeta: complex
    value: complex


class KernelReport(BaseModel):
    """Pointwise residuals of a kernel identity on a z-grid"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    points: List[complex]
    residuals: np.ndarray
    quadrature_error: float

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.residuals)))


def resolution_diagonal(
    p: DeformationParams, n_max: int, budget: Optional[EvaluationBudget] = None
) -> tuple:
    """c_n² ∫ xⁿ dm(x)/𝒩(x) for n ≤ n_max; angular averages leave only the diagonal"""
    log_c2 = 2.0 * log_coefficients(p, n_max)
    powers = np.arange(n_max + 1, dtype=float)

    def compute(measure: RadialMeasure) -> np.ndarray:
        return measure.moments(log_c2, powers)

    return integrate_radial(p, compute, budget=budget, name="identity-resolution")


def identity_resolution_check(
    p: DeformationParams, t: Truncation, budget: Optional[int] = None
) -> ResolutionReport:
    """Numerical ∫ dμ |z⟩⟨z| − I restricted to the trusted rows of the truncation"""
    counter = EvaluationBudget(budget, name="identity-resolution")
    with tracer.start_as_current_span("identity_resolution_check") as span:
        span.set_attribute("q", p.q)
        span.set_attribute("dim", t.dim)
        diagonal, error = resolution_diagonal(p, t.dim - 1, counter)
    rows = t.valid_rows
    residuals = np.diag(diagonal[:rows]) - np.eye(rows)
    report = ResolutionReport(residuals=residuals, rows=rows, quadrature_error=error, evaluations=counter.used)
    logger.info(
        "identity_resolution_checked",
        q=p.q,
        dim=t.dim,
        max_residual=report.max_residual,
        evaluations=counter.used,
    )
    return report


def _kernel_weight(p: DeformationParams, x: float) -> float:
    """Density of dμ with respect to d²ζ at |ζ|² = x"""
    if p.is_sub:
        return 1.0 / (math.pi * math.log(1.0 / p.q) * (p.eta + x))
    return 1.0 / (math.pi * (1.0 + x / p.eta))


def kernel_K(p: DeformationParams, z: Number, zeta: Number, symmetric: bool = False) -> KernelValue:
    """K(z, ζ) = ⟨ζ|z⟩ w(|ζ|²) with w the density of dμ against d²ζ.

    symmetric=True returns ⟨ζ|z⟩ √(w(|z|²) w(|ζ|²)), which is Hermitian off the circle |z| = |ζ|.
    """
    x_zeta = require_domain(p, zeta)
    x_z = require_domain(p, z)
    weight = _kernel_weight(p, x_zeta)
    if symmetric:
        weight = math.sqrt(weight * _kernel_weight(p, x_z))
    return KernelValue(z=complex(z), zeta=complex(zeta), value=overlap(p, zeta, z) * weight)


def kernel_idempotence_check(
    p: DeformationParams, points: Sequence[Number], t: Truncation, budget: Optional[int] = None
) -> KernelReport:
    """∫ d²ζ K(z, ζ) K(ζ, z′) − K(z, z′) for all pairs of `points`.

    The ζ-integral runs through the identity-resolution moments, so a truncation with
    t.dim basis states must resolve the overlap series at the chosen points.
    """
    counter = EvaluationBudget(budget, name="kernel-idempotence")
    diagonal, error = resolution_diagonal(p, t.dim - 1, counter)
    log_c2 = 2.0 * log_coefficients(p, t.dim - 1)
    residuals = np.zeros((len(points), len(points)), dtype=complex)
    for i, z in enumerate(points):
        for j, z_prime in enumerate(points):
            x, x_prime = require_domain(p, z), require_domain(p, z_prime)
            w = complex(z) * complex(z_prime).conjugate()
            n = np.arange(t.dim)
            series = np.sum(diagonal * np.exp(log_c2) * np.power(w, n))
            norms = norm_series(x, p).require().real * norm_series(x_prime, p).require().real
            integral = series / math.sqrt(norms) * _kernel_weight(p, x_prime)
            residuals[i, j] = integral - kernel_K(p, z, z_prime).value
    report = KernelReport(points=[complex(z) for z in points], residuals=residuals, quadrature_error=error)
    logger.info("kernel_idempotence_checked", q=p.q, points=len(points), max_residual=report.max_residual)
    return report


def projector_reconstruct(p: DeformationParams, n: int, m: int, t: Truncation) -> np.ndarray:
    """Recover |n⟩⟨m| from the angular filter of 𝒩(r²)|re^{iθ}⟩⟨re^{iθ}|.

    The angular average against e^{i(m−n)θ} keeps the entries (j, k) with k − j = m − n,
    each a monomial c_j c_k r^{j+k}; (n + m) Jackson derivatives at r = 0 then keep
    j + k = n + m, and the prefactor
    √(q^{C(n+m,2)+nm}/(γ^{n+m}(q^{1+n};q)_m(q^{1+m};q)_n)) normalizes the survivor.
    """
    if n < 0 or m < 0 or max(n, m) >= t.dim:
        raise TruncationError(f"|{n}⟩⟨{m}| does not fit a basis of dimension {t.dim}")
    log_c = log_coefficients(p, t.dim - 1)
    order = n + m
    shift = m - n
    result = np.zeros((t.dim, t.dim))
    for j in range(t.dim):
        k = j + shift
        if not 0 <= k < t.dim:
            continue
        degree = j + k
        if degree < order:
            continue
        poly = np.zeros(degree + 1)
        poly[degree] = math.exp(log_c[j] + log_c[k])
        for _ in range(order):
            poly = jackson_derivative_poly(poly, p)
        result[j, k] = poly[0].real if poly.size else 0.0

    q = p.q
    radicand = (
        LogMagnitude.from_value(q).ipow(order * (order - 1) // 2 + n * m)
        / (
            LogMagnitude.from_value(p.gamma).ipow(order)
            * q_shifted_log(q ** (1 + n), q, m)
            * q_shifted_log(q ** (1 + m), q, n)
        )
    )
    return radicand.power(0.5).real_value() * result
