"""
Diagonal coherent-state representation of density matrices and its trace formulas
"""

import math
from typing import Callable, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.fock.elements import antinormal_element
from src.fock.operators import KerrParams, Truncation
from src.kernel.errors import ConvergenceError, RegimeError
from src.kernel.moments import mellin_moment
from src.kernel.params import DeformationParams, LogMagnitude
from src.kernel.quadrature import EvaluationBudget
from src.kernel.series import q_bessel_J0, q_shifted_inf, q_shifted_log, sum_ratio_series
from src.monitoring.logging_config import get_logger
from src.monitoring.tracing import get_tracer

from .radial import RadialMeasure, integrate_radial
from .resolution import KernelReport
from .states import Number, coherent_vector, log_coefficients

logger = get_logger(__name__)
tracer = get_tracer(__name__)

LogRadial = Callable[[np.ndarray, np.ndarray], np.ndarray]


class SeparableWeight(BaseModel):
    """φ(z) = φ₁(θ)·φ₂(|z|²); φ₂ is given as log φ₂(x, log 𝒩(x)), φ₁ = 1 when omitted"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    log_radial: LogRadial
    angular: Optional[Callable[[np.ndarray], np.ndarray]] = None
    label: str = "custom"
    angular_samples: int = Field(256, ge=8)

    @classmethod
    def from_radial(cls, radial: Callable[[np.ndarray], np.ndarray], **kwargs) -> "SeparableWeight":
        def log_radial(x: np.ndarray, log_norm: np.ndarray) -> np.ndarray:
            with np.errstate(divide="ignore"):
                return np.log(radial(x))

        return cls(log_radial=log_radial, **kwargs)

    @property
    def is_isotropic(self) -> bool:
        return self.angular is None

    def fourier(self, k: int) -> complex:
        """(1/2π)∫ φ₁(θ) e^{−ikθ} dθ"""
        if self.angular is None:
            return 1.0 if k == 0 else 0.0
        theta = 2.0 * np.pi * np.arange(self.angular_samples) / self.angular_samples
        coefficients = np.fft.fft(self.angular(theta)) / self.angular_samples
        return complex(coefficients[k % self.angular_samples])


def gaussian_weight() -> SeparableWeight:
    """φ₂(x) = 1/(π𝒩(x)), φ₁ = 1"""
    return SeparableWeight(log_radial=lambda x, log_norm: -math.log(math.pi) - log_norm, label="gaussian")


class DensityCoefficients(BaseModel):
    """ρ(n, m) on the truncated basis together with its trace"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rho: np.ndarray
    trace: float
    quadrature_error: float = 0.0

    def normalized(self) -> "DensityCoefficients":
        return DensityCoefficients(
            rho=self.rho / self.trace, trace=1.0, quadrature_error=self.quadrature_error / self.trace
        )

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    def expectation(self, operator: np.ndarray) -> complex:
        """tr(ρA) = Σ ρ(n, m)⟨m|A|n⟩"""
        return complex(np.trace(self.rho @ operator))


def _radial_rows(measure: RadialMeasure, weight: SeparableWeight, log_c: np.ndarray, powers: np.ndarray):
    """E[k, i] with E[k]E[k′] summed over i giving c c′ ∫ x^{(s+s′)/2} φ₂ dx/𝒩"""
    log_phi2 = weight.log_radial(measure.x, measure.log_norm)
    with np.errstate(invalid="ignore"):
        half = 0.5 * (measure.log_flat + log_phi2 - measure.log_norm)
    half = np.where(np.isnan(half), -np.inf, half)
    return np.exp(log_c[:, None] + 0.5 * powers[:, None] * measure.log_x[None, :] + half[None, :])


def density_from_weight(
    p: DeformationParams, weight: SeparableWeight, t: Truncation, budget: Optional[int] = None
) -> DensityCoefficients:
    """ρ(n, m) = c_n c_m ∫ d²z φ(z) zⁿ z̄ᵐ/𝒩(|z|²), d²z = ½ dx dθ (½ d_qx dθ for q > 1)"""
    counter = EvaluationBudget(budget, name="density")
    log_c = log_coefficients(p, t.dim - 1)
    powers = np.arange(t.dim, dtype=float)
    angular = np.array([[weight.fourier(m - n) for m in range(t.dim)] for n in range(t.dim)])

    def compute(measure: RadialMeasure) -> np.ndarray:
        rows = _radial_rows(measure, weight, log_c, powers)
        return math.pi * angular * (rows @ rows.T)

    with tracer.start_as_current_span("density_from_weight") as span:
        span.set_attribute("weight", weight.label)
        span.set_attribute("dim", t.dim)
        rho, error = integrate_radial(p, compute, budget=counter, name=f"density-{weight.label}")
    trace = float(np.trace(rho).real)
    if not math.isfinite(trace) or trace <= 0:
        raise ConvergenceError(f"weight {weight.label} does not give a normalizable density (trace {trace})")
    logger.info("density_built", weight=weight.label, dim=t.dim, trace=trace)
    return DensityCoefficients(rho=rho, trace=trace, quadrature_error=error)


def _gaussian_moment(p: DeformationParams, nu: float) -> float:
    """F(ν) = tr(ρ a†^ν a^ν) for the Gaussian analogue = ∫ x^ν/𝒩(x) dx (d_qx for q > 1)"""
    return mellin_moment(p, nu)


def trace_forms(
    p: DeformationParams,
    sigma: int,
    nu: int,
    weight: Optional[SeparableWeight] = None,
    budget: Optional[int] = None,
) -> complex:
    """tr(ρ a†^σ a^ν) = ∫ d²z φ(z) z̄^σ z^ν.

    The Gaussian analogue gives δ_{σν} times ln q^{−1} γ^{ν+1} q^{−C(ν+1,2)} (q;q)_ν for q < 1
    and (−γ)^ν q^{−1} (q^{−1};q^{−1})_ν for q > 1; other weights are integrated numerically.
    """
    if weight is None or weight.label == "gaussian":
        return _gaussian_moment(p, nu) if sigma == nu else 0.0
    return _defining_integral(p, weight, 0.5 * (sigma + nu), weight.fourier(sigma - nu), budget)


def _defining_integral(
    p: DeformationParams, weight: SeparableWeight, power: float, angular: complex, budget: Optional[int]
) -> complex:
    """π c_k(φ₁) ∫ x^power φ₂(x) dx, the isotropic reduction of ∫ d²z φ(z) |z|^{2·power} e^{ikθ}"""
    counter = EvaluationBudget(budget, name=f"trace-{weight.label}")

    def compute(measure: RadialMeasure) -> np.ndarray:
        log_phi2 = weight.log_radial(measure.x, measure.log_norm)
        exponent = measure.log_flat + log_phi2 + power * measure.log_x
        return np.array([np.sum(np.exp(exponent))])

    value, _ = integrate_radial(p, compute, budget=counter, name=f"trace-{weight.label}")
    return math.pi * angular * complex(value[0])


def antinormal_trace(
    p: DeformationParams,
    sigma: int,
    nu: int,
    weight: Optional[SeparableWeight] = None,
    t: Optional[Truncation] = None,
) -> complex:
    """tr(ρ a^ν a†^σ) = Σ_{r,s} ρ(r, s)⟨s|a^ν a†^σ|r⟩ from the defining integrals"""
    weight = weight or gaussian_weight()
    t = t or Truncation(dim=64)
    density = density_from_weight(p, weight, t)
    total = 0j
    for r in range(t.dim):
        s = r + sigma - nu
        if 0 <= s < t.dim:
            total += density.rho[r, s] * antinormal_element(p, s, nu, sigma, r)
    return complex(total)


def antinormal_trace_displayed(p: DeformationParams, nu: int) -> float:
    """q^{−C(ν,2)−1} γ^ν (q;q)_ν (q^{−1};q^{−1})_∞² 𝒪_∞(−q^{−ν}; q^{1+ν}|q) for q > 1, with
    𝒪_∞(x; q^{1+m}|q) = Σ q^{C(n,2)} (q^{1+m};q)_n/(q;q)_n² xⁿ J₀(2i q^{−(1+n)/2}; q^{−1})"""
    if p.is_sub:
        raise RegimeError("the 𝒪_∞ trace display is stated for q > 1 only")
    q = p.q
    base = 1.0 / q
    log_q = LogMagnitude.from_value(q)
    x = LogMagnitude.from_value(-(q ** -nu))

    def term(n: int) -> complex:
        bessel = q_bessel_J0(2j * q ** (-(1 + n) / 2.0), base).require()
        magnitude = (
            log_q.ipow(n * (n - 1) // 2)
            * q_shifted_log(q ** (1 + nu), q, n)
            / q_shifted_log(q, q, n).ipow(2)
            * x.ipow(n)
            * LogMagnitude.from_value(bessel)
        )
        return magnitude.value()

    first = term(0)
    observed = {0: first}

    def ratio(k: int) -> complex:
        current = observed[k]
        following = term(k + 1)
        observed[k + 1] = following
        return following / current

    series = sum_ratio_series(ratio, first=first, name="O-infinity").require()
    prefactor = (
        log_q.ipow(-(nu * (nu - 1) // 2) - 1)
        * LogMagnitude.from_value(p.gamma).ipow(nu)
        * q_shifted_log(q, q, nu)
    ).real_value()
    pp_inf = q_shifted_inf(base, base).require().real
    return float((prefactor * pp_inf ** 2 * series).real)


def kerr_expectation(p: DeformationParams, k: KerrParams, weight: Optional[SeparableWeight] = None) -> float:
    """tr(ρ(a†a + (χ/2)a†²a²)) = F(1) + (χ/2)F(2)"""
    first = trace_forms(p, 1, 1, weight).real
    second = trace_forms(p, 2, 2, weight).real
    return float(first + 0.5 * k.chi * second)


def hamiltonian_trace(p: DeformationParams, weight: Optional[SeparableWeight] = None) -> float:
    """tr(ρ(aa† + a†a)) = (1 + q^{−1})F(1) + lsq q^{λ−1} F(0)"""
    return float(
        (1.0 + 1.0 / p.q) * trace_forms(p, 1, 1, weight).real
        + p.scale / p.q * trace_forms(p, 0, 0, weight).real
    )


def position_trace(p: DeformationParams, weight: Optional[SeparableWeight] = None) -> float:
    """tr(ρQ) = √2 ∫ d²z φ(z) Re z with φ₁ = cos θ/√2 and φ₂ Gaussian unless given.

    For the Gaussian analogue this is ½ ∫ x^{1/2}/𝒩(x) dx; tr(ρP) with φ₁ = sin θ/√2 coincides.
    """
    if weight is None:
        return 0.5 * mellin_moment(p, 0.5)
    # Re z = √x (e^{iθ} + e^{−iθ})/2
    angular = 0.5 * (weight.fourier(1) + weight.fourier(-1))
    return float((math.sqrt(2.0) * _defining_integral(p, weight, 0.5, angular, None)).real)


def reproducing_check(
    p: DeformationParams,
    density: DensityCoefficients,
    points: Sequence[Number],
    budget: Optional[int] = None,
) -> KernelReport:
    """ρ(z′, z) − ∫ d²ζ K(z, ζ) ρ(z′, ζ) for all pairs of `points`.

    ρ(z′, z) = ⟨z′|ρ|z⟩ and K(z, ζ) d²ζ = ⟨ζ|z⟩ dμ(ζ). The ζ-integral is a direct product rule:
    the radial rule of the regime times 3·dim equally spaced angles, which is exact for the
    angular frequencies of ρ against the first 2·dim terms of the overlap series.
    """
    t = Truncation(dim=density.dim)
    counter = EvaluationBudget(budget, name="reproducing")
    terms = 2 * t.dim
    n_angles = 3 * t.dim
    theta = 2.0 * np.pi * np.arange(n_angles) / n_angles
    log_c = log_coefficients(p, terms - 1)
    n = np.arange(terms)
    m = n[: t.dim]
    forward = np.exp(1j * np.outer(m, theta))
    backward = np.exp(-1j * np.outer(n, theta))

    vectors = [coherent_vector(p, z, t) for z in points]
    # ⟨z′|ρ as a row, zⁿ/√𝒩(|z|²) as the overlap column
    rows = [np.conj(v.coeffs) @ density.rho for v in vectors]
    columns = [np.power(v.z, n) / math.sqrt(v.norm_sq) for v in vectors]

    def compute(measure: RadialMeasure) -> np.ndarray:
        # exp(log_cs) = π w(x) dx / 𝒩(x), split evenly between the two factors
        half_log_x = 0.5 * measure.log_x[:, None]
        half_weight = 0.5 * measure.log_cs[:, None]
        left = np.exp(log_c[None, : t.dim] + m[None, :] * half_log_x + half_weight)
        right = np.exp(2.0 * log_c[None, :] + n[None, :] * half_log_x + half_weight)
        kernels = [(right * column[None, :]) @ backward for column in columns]
        integrals = np.empty((len(points), len(points)), dtype=complex)
        for i, row in enumerate(rows):
            on_grid = (left * row[None, :]) @ forward
            for j, kernel in enumerate(kernels):
                integrals[i, j] = np.sum(on_grid * kernel) / n_angles
        return integrals

    with np.errstate(divide="ignore", under="ignore"):
        reproduced, error = integrate_radial(p, compute, budget=counter, name="reproducing")
    exact = np.array([[np.vdot(a.coeffs, density.rho @ b.coeffs) for b in vectors] for a in vectors])
    report = KernelReport(points=[complex(z) for z in points], residuals=reproduced - exact, quadrature_error=error)
    logger.info("reproducing_checked", q=p.q, points=len(points), max_residual=report.max_residual)
    return report
