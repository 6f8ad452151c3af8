"""
Coherent-state (anti-Wick) quantization f ↦ A_f = ∫ dμ(z) f(z) |z⟩⟨z|
"""

import math
from typing import Callable, Dict, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.special import logsumexp

from src.coherent.radial import RadialMeasure, integrate_radial, log_moment_ladder
from src.coherent.states import Number, coherent_vector, log_coefficients, require_domain
from src.fock.operators import Truncation
from src.kernel.errors import ParameterError, TruncationError
from src.kernel.jackson import log_phi_product
from src.kernel.params import DeformationParams
from src.kernel.quadrature import EvaluationBudget
from src.kernel.series import log_norm, q_shifted_log
from src.monitoring.logging_config import get_logger
from src.monitoring.tracing import get_tracer

logger = get_logger(__name__)
tracer = get_tracer(__name__)

Symbol = Callable[[np.ndarray], np.ndarray]


class QuantizedOperator(BaseModel):
    """Matrix of A_f on the truncated basis"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray
    source: str
    method: Literal["closed-form", "quadrature"]
    residual_vs_other_method: Optional[float] = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def hermiticity_residual(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def lowest_eigenvalue(self) -> float:
        """Smallest eigenvalue of the Hermitian part"""
        hermitian = 0.5 * (self.matrix + self.matrix.conj().T)
        return float(np.linalg.eigvalsh(hermitian)[0])


class FourierSpec(BaseModel):
    """Fourier coefficients c_k(F) = (1/2π)∫ F(θ) e^{−ikθ} dθ for |k| ≤ n_cut"""

    model_config = ConfigDict(frozen=True)

    coefficients: Dict[int, complex]
    label: str = "angle-function"

    @property
    def n_cut(self) -> int:
        return max((abs(k) for k in self.coefficients), default=0)

    def coefficient(self, k: int) -> complex:
        return self.coefficients.get(k, 0.0)

    @property
    def is_real(self) -> bool:
        """c_{−k} = conj c_k"""
        return all(
            abs(self.coefficient(-k) - complex(c).conjugate()) <= 1e-14 * max(1.0, abs(c))
            for k, c in self.coefficients.items()
        )

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray], np.ndarray], n_cut: int, samples: Optional[int] = None,
                      label: str = "angle-function") -> "FourierSpec":
        samples = samples or max(64, 4 * n_cut)
        if samples <= 2 * n_cut:
            raise ParameterError(f"{samples} samples cannot resolve |k| ≤ {n_cut}")
        theta = 2.0 * np.pi * np.arange(samples) / samples
        values = np.fft.fft(func(theta)) / samples
        return cls(coefficients={k: complex(values[k % samples]) for k in range(-n_cut, n_cut + 1)}, label=label)

    @classmethod
    def angle(cls, n_cut: int) -> "FourierSpec":
        """F(θ) = θ on [0, 2π): c₀ = π, c_k = i/k"""
        coefficients = {0: complex(math.pi)}
        for k in range(1, n_cut + 1):
            coefficients[k] = 1j / k
            coefficients[-k] = -1j / k
        return cls(coefficients=coefficients, label="theta")


class QuadraticOperators(BaseModel):
    """Quantized position, momentum and their quadratic combinations"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    position: QuantizedOperator
    momentum: QuantizedOperator
    position_sq: QuantizedOperator
    momentum_sq: QuantizedOperator
    harmonic: QuantizedOperator


def _angular_samples(dim: int) -> int:
    samples = 64
    while samples < 4 * dim:
        samples *= 2
    return samples


def quantize_general(
    p: DeformationParams,
    f: Symbol,
    t: Truncation,
    budget: Optional[int] = None,
    source: str = "f",
) -> QuantizedOperator:
    """(A_f)_{nn′} = c_n c_{n′} ∫ dm(x)/𝒩(x) x^{(n+n′)/2} (1/2π)∫ f(√x e^{iθ}) e^{i(n−n′)θ} dθ.

    The angular integral is an FFT on each radial node; `f` takes complex arrays.
    """
    counter = EvaluationBudget(budget, name=f"quantize-{source}")
    samples = _angular_samples(t.dim)
    theta = 2.0 * np.pi * np.arange(samples) / samples
    phases = np.exp(1j * theta)
    log_c = log_coefficients(p, t.dim - 1)
    n = np.arange(t.dim)
    shift_index = (n[None, :] - n[:, None]) % samples

    def compute(measure: RadialMeasure) -> np.ndarray:
        counter.charge(measure.size * (samples - 1))
        points = np.sqrt(measure.x)[:, None] * phases[None, :]
        fourier = np.fft.fft(f(points), axis=1) / samples
        rows = np.exp(log_c[:, None] + 0.5 * n[:, None] * measure.log_x[None, :] + 0.5 * measure.log_cs[None, :])
        result = np.zeros((t.dim, t.dim), dtype=complex)
        for row in range(t.dim):
            result[row] = np.einsum("i,ji,ij->j", rows[row], rows, fourier[:, shift_index[row]])
        return result

    with tracer.start_as_current_span("quantize_general") as span:
        span.set_attribute("source", source)
        span.set_attribute("dim", t.dim)
        matrix, error = integrate_radial(p, compute, budget=counter, tolerance=1e-11, name=f"quantize-{source}")
    logger.info("operator_quantized", source=source, method="quadrature", dim=t.dim, error=error)
    return QuantizedOperator(matrix=matrix, source=source, method="quadrature")


def quantize_radial(p: DeformationParams, g: Symbol, t: Truncation, source: str = "g(|z|²)") -> QuantizedOperator:
    """Diagonal c_n² ∫ xⁿ g(x) dm(x)/𝒩(x)"""
    log_c2 = 2.0 * log_coefficients(p, t.dim - 1)
    powers = np.arange(t.dim, dtype=float)

    def compute(measure: RadialMeasure) -> np.ndarray:
        return measure.moments(log_c2, powers, values=g(measure.x))

    diagonal, _ = integrate_radial(p, compute, tolerance=1e-11, name=f"quantize-{source}")
    return QuantizedOperator(matrix=np.diag(diagonal).astype(complex), source=source, method="quadrature")


def angle_factor(p: DeformationParams, n: int, m: int) -> float:
    """q^{(C(n,2) + C(m,2))/2 − C(s,2)} |(q;q)_s| / √|(q;q)_n (q;q)_m| for even n + m, s = (n + m)/2"""
    if (n + m) % 2:
        raise ParameterError("the q-factor form covers even n + m only")
    s = (n + m) // 2
    q = p.q
    exponent = (n * (n - 1) + m * (m - 1)) / 4.0 - s * (s - 1) / 2.0
    log_value = (
        exponent * p.log_q
        + q_shifted_log(q, q, s).log_abs
        - 0.5 * (q_shifted_log(q, q, n).log_abs + q_shifted_log(q, q, m).log_abs)
    )
    return math.exp(log_value)


def quantize_angle(p: DeformationParams, F: FourierSpec, t: Truncation) -> QuantizedOperator:
    """(A_F)_{nn′} = c_{n′−n}(F) c_n c_{n′} ∫ x^{(n+n′)/2} dm(x)/𝒩(x).

    Even n + n′ entries are compared against angle_factor; odd ones use the half-integer
    radial moment.
    """
    log_c = log_coefficients(p, t.dim - 1)
    ladders = {
        parity: log_moment_ladder(p, parity / 2.0, t.dim) for parity in (0, 1)
    }
    matrix = np.zeros((t.dim, t.dim), dtype=complex)
    gap = 0.0
    for n in range(t.dim):
        for m in range(t.dim):
            coefficient = F.coefficient(m - n)
            if coefficient == 0:
                continue
            total = n + m
            log_moment = ladders[total % 2][total // 2]
            factor = math.exp(log_c[n] + log_c[m] + log_moment)
            matrix[n, m] = coefficient * factor
            if total % 2 == 0:
                gap = max(gap, abs(factor - angle_factor(p, n, m)) / factor)
    return QuantizedOperator(
        matrix=matrix, source=F.label, method="closed-form", residual_vs_other_method=gap
    )


def quantize_monomial(p: DeformationParams, mu: int, nu: int, t: Truncation) -> QuantizedOperator:
    """f = z^μ z̄^ν: A_{n, n+μ−ν} = √(φ(1)⋯φ(n+μ−ν) φ(1)⋯φ(n))^{-1} φ(1)⋯φ(n+μ)"""
    if mu < 0 or nu < 0:
        raise ParameterError("monomial powers must be nonnegative")
    matrix = np.zeros((t.dim, t.dim), dtype=complex)
    for n in range(t.dim):
        m = n + mu - nu
        if not 0 <= m < t.dim:
            continue
        log_value = (
            -0.5 * log_phi_product(p, 1, n)
            - 0.5 * log_phi_product(p, 1, m)
            + log_phi_product(p, 1, n + mu)
        )
        matrix[n, m] = math.exp(log_value)
    return QuantizedOperator(matrix=matrix, source=f"z^{mu} zbar^{nu}", method="closed-form")


def quantize_quadratics(p: DeformationParams, t: Truncation) -> QuadraticOperators:
    """A_q, A_p, A_{q²}, A_{p²} and A_{(p²+q²)/2} from the monomial closed forms"""
    z = quantize_monomial(p, 1, 0, t).matrix
    zbar = quantize_monomial(p, 0, 1, t).matrix
    z2 = quantize_monomial(p, 2, 0, t).matrix
    zbar2 = quantize_monomial(p, 0, 2, t).matrix
    modulus = quantize_monomial(p, 1, 1, t).matrix
    root2 = math.sqrt(2.0)

    def operator(matrix: np.ndarray, source: str) -> QuantizedOperator:
        return QuantizedOperator(matrix=matrix, source=source, method="closed-form")

    return QuadraticOperators(
        position=operator((z + zbar) / root2, "q"),
        momentum=operator((z - zbar) / (1j * root2), "p"),
        position_sq=operator(0.5 * (z2 + zbar2 + 2.0 * modulus), "q^2"),
        momentum_sq=operator(0.5 * (2.0 * modulus - z2 - zbar2), "p^2"),
        harmonic=operator(modulus, "(p^2+q^2)/2"),
    )


def lower_symbol(p: DeformationParams, A: QuantizedOperator, z: Number) -> complex:
    """⟨z|A|z⟩ on the operator's own truncation"""
    vector = coherent_vector(p, z, Truncation(dim=A.dim)).coeffs
    return complex(np.vdot(vector, A.matrix @ vector))


def lower_symbol_angle_series(
    p: DeformationParams,
    F: FourierSpec,
    z: Number,
    terms: int = 400,
    parity: Literal["all", "even"] = "all",
) -> complex:
    """⟨z|A_F|z⟩ = c₀(F) + Σ_{k≠0} c_k(F) S_{|k|}(|z|²) z^k (z̄^{|k|} for k < 0), with
    S_k(x) = Σ_n c_n² c_{n+k}² ∫ y^{n+k/2} dm(y)/𝒩(y) · xⁿ / 𝒩(x).

    parity="even" keeps only even k.
    """
    x = require_domain(p, z)
    z = complex(z)
    total = F.coefficient(0)
    if F.n_cut == 0:
        return total
    if x == 0:
        return total
    log_c2 = 2.0 * log_coefficients(p, terms + F.n_cut)
    n = np.arange(terms)
    log_x_norm = float(log_norm(np.array([x]), p)[0])
    for k in range(1, F.n_cut + 1):
        if parity == "even" and k % 2:
            continue
        moments = log_moment_ladder(p, k / 2.0, terms)
        log_terms = log_c2[n] + log_c2[n + k] + moments + n * math.log(x)
        series = math.exp(logsumexp(log_terms) - log_x_norm)
        total += series * (F.coefficient(k) * z ** k + F.coefficient(-k) * z.conjugate() ** k)
    return complex(total)


def commutator_of_coordinates(p: DeformationParams, t: Truncation) -> np.ndarray:
    """[A_z, A_z̄] on rows below dim − 1"""
    z = quantize_monomial(p, 1, 0, t).matrix
    zbar = quantize_monomial(p, 0, 1, t).matrix
    window = t.dim - 1
    if window < 1:
        raise TruncationError("the commutator needs dim ≥ 2")
    return (z @ zbar - zbar @ z)[:window, :window]
