"""
Orthogonality weights of the Hermite families and numerical Gram checks
"""

import math
from typing import Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import eval_hermite, gammaln

from config.settings import settings
from src.kernel.errors import DomainError
from src.kernel.params import DeformationParams
from src.kernel.quadrature import EvaluationBudget, gauss_legendre_panels, integrate_until_stable, tanh_sinh
from src.kernel.series import log_shifted_inf, q_shifted_inf
from src.monitoring.logging_config import get_logger
from src.monitoring.tracing import get_tracer

from .families import PolyFamily, momentum_table, position_table

logger = get_logger(__name__)
tracer = get_tracer(__name__)


class WeightSpec(BaseModel):
    """Integration variable, support and scale of a family's weight.

    Sub-unity weights live in u with x = s·b·sinh u, b = √(2/(1−q)); super-unity
    weights live in x on [−s·c, s·c], c = √(2/(q−1)); s = √|lsq q^λ|.
    """

    model_config = ConfigDict(frozen=True)

    family: PolyFamily
    variable: Literal["u", "x"]
    support: Tuple[float, float]
    scale: float

    def to_position(self, point: np.ndarray) -> np.ndarray:
        if self.variable == "u":
            b = math.sqrt(2.0 / (1.0 - self.family.params.q))
            return self.scale * b * np.sinh(point)
        return np.asarray(point, dtype=float)

    def density(self, point):
        return weight_density(self.family, point)


class QuadratureSpec(BaseModel):
    """Quadrature controls for Gram-matrix checks"""

    model_config = ConfigDict(frozen=True)

    nodes: int = Field(default_factory=lambda: settings.panel_nodes, ge=4)
    panel_width: float = Field(default_factory=lambda: settings.panel_width, gt=0)
    level: int = Field(default_factory=lambda: settings.tanh_sinh_levels, ge=3)
    start_cutoff: float = Field(4.0, gt=0)
    tolerance: float = Field(1e-12, gt=0)
    budget: int = Field(default_factory=lambda: settings.quadrature_budget, ge=1000)


class GramReport(BaseModel):
    """G − I for a family together with the quadrature diagnostics"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    family: PolyFamily
    residuals: np.ndarray
    quadrature_error: float
    evaluations: int

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.residuals)))


def weight_spec(fam: PolyFamily) -> WeightSpec:
    p = fam.params
    s = math.sqrt(abs(p.scale))
    if p.is_sub:
        return WeightSpec(family=fam, variable="u", support=(-math.inf, math.inf), scale=s)
    c = s * math.sqrt(2.0 / (p.q - 1.0))
    return WeightSpec(family=fam, variable="x", support=(-c, c), scale=s)


def _sub_density(u: np.ndarray, q: float) -> np.ndarray:
    """du/((q;q)_∞ ln q^{−1} ∏_{k≥1}(1 + 2cosh 2u q^k + q^{2k}))"""
    u = np.asarray(u, dtype=float)
    log_product = log_shifted_inf(q * np.exp(2.0 * u), q, sign=1.0) + log_shifted_inf(
        q * np.exp(-2.0 * u), q, sign=1.0
    )
    constant = q_shifted_inf(q, q).require().real * math.log(1.0 / q)
    return np.exp(-log_product) / constant


def _super_density_y(one_minus_y2: np.ndarray, q: float) -> np.ndarray:
    """Density in y = x/c on [−1, 1]: (p;p)_∞/(2π)·4√(1−y²)·∏_{k≥1}(1 − 2(2y²−1)p^k + p^{2k}), p = 1/q.

    The k = 0 factor 4(1 − y²) is merged with the 1/√(1 − y²) Jacobian.
    """
    base = 1.0 / q
    one_minus_y2 = np.clip(np.asarray(one_minus_y2, dtype=float), 0.0, 1.0)
    cos2 = 1.0 - 2.0 * one_minus_y2
    log_product = np.zeros_like(cos2)
    pk = base
    while pk > settings.series_tolerance * 1e-2:
        log_product += np.log1p(-2.0 * cos2 * pk + pk * pk)
        pk *= base
    constant = q_shifted_inf(base, base).require().real / (2.0 * math.pi)
    return constant * 4.0 * np.sqrt(one_minus_y2) * np.exp(log_product)


def weight_density(fam: PolyFamily, point):
    """Density of the family's orthogonality measure at `point` (u for q < 1, x for q > 1)"""
    spec = weight_spec(fam)
    p = fam.params
    if spec.variable == "u":
        density = _sub_density(point, p.q)
        return float(density) if density.ndim == 0 else density
    x = np.asarray(point, dtype=float)
    c = spec.support[1]
    if np.any(np.abs(x) > c):
        raise DomainError(f"point outside the support [−{c:.6g}, {c:.6g}]")
    y = np.abs(x) / c
    density = _super_density_y((1.0 - y) * (1.0 + y), p.q) / c
    return float(density) if density.ndim == 0 else density


def _coefficients(fam: PolyFamily, x: np.ndarray, n_max: int) -> np.ndarray:
    if fam.kind.is_momentum:
        return momentum_table(fam.params, x, n_max)
    return position_table(fam.params, x, n_max)


def _gram(coeffs: np.ndarray, weights: np.ndarray) -> np.ndarray:
    weighted = coeffs * np.sqrt(weights)[None, :]
    return weighted.conj() @ weighted.T


def orthonormality_check(fam: PolyFamily, n_max: int, quad: Optional[QuadratureSpec] = None) -> GramReport:
    """G_{mn} − δ_{mn} with G the Gram matrix of the Fock coefficients under the family's weight"""
    quad = quad or QuadratureSpec()
    spec = weight_spec(fam)
    budget = EvaluationBudget(quad.budget, name=f"gram-{fam.kind.value}")
    with tracer.start_as_current_span("orthonormality_check") as span:
        span.set_attribute("family", fam.kind.value)
        span.set_attribute("n_max", n_max)
        if spec.variable == "u":

            def compute(cutoff: float) -> np.ndarray:
                panels = max(1, int(math.ceil(2.0 * cutoff / quad.panel_width)))
                u, w = gauss_legendre_panels(-cutoff, cutoff, panels, quad.nodes)
                budget.charge(u.size)
                return _gram(_coefficients(fam, spec.to_position(u), n_max), w * spec.density(u))

            gram, cutoff, error = integrate_until_stable(
                compute, quad.start_cutoff, quad.tolerance, name=f"gram-{fam.kind.value}"
            )
            span.set_attribute("cutoff", cutoff)
        else:
            c = spec.support[1]

            def compute_level(level: int) -> np.ndarray:
                y, w, edge = tanh_sinh(-1.0, 1.0, level)
                budget.charge(y.size)
                one_minus_y2 = edge * (2.0 - edge)
                density = _super_density_y(one_minus_y2, fam.params.q)
                return _gram(_coefficients(fam, c * y, n_max), w * density)

            coarse = compute_level(quad.level - 1)
            gram = compute_level(quad.level)
            error = float(np.max(np.abs(gram - coarse)))
        span.set_attribute("quadrature_error", error)

    residuals = gram - np.eye(n_max + 1)
    if not fam.kind.is_momentum:
        residuals = residuals.real
    report = GramReport(family=fam, residuals=residuals, quadrature_error=error, evaluations=budget.used)
    logger.info(
        "orthonormality_checked",
        family=fam.kind.value,
        n_max=n_max,
        max_residual=report.max_residual,
        quadrature_error=error,
        evaluations=budget.used,
    )
    return report


def classical_hermite_deviation(p: DeformationParams, x: np.ndarray, n_max: int) -> np.ndarray:
    """|q_n(x) − H_n(x)/√(2ⁿ n!)| for n ≤ n_max; tends to zero as q → 1 with lsq = 1, λ = 0"""
    x = np.asarray(x, dtype=float)
    table = position_table(p, x, n_max)
    n = np.arange(n_max + 1)
    norms = np.exp(-0.5 * (n * math.log(2.0) + gammaln(n + 1)))
    classical = np.array([eval_hermite(k, x) for k in n]) * norms.reshape((-1,) + (1,) * x.ndim)
    return np.abs(table - classical)
