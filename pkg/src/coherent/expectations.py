"""
Coherent-state expectation values of ladder monomials and quadratures
"""

import math

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.fock.operators import Truncation, word_matrix
from src.kernel.errors import ParameterError
from src.kernel.params import DeformationParams, LogMagnitude
from src.kernel.series import norm_series, one_phi_one, q_shifted_log

from .states import Number, coherent_vector, require_domain


class QuadratureMoments(BaseModel):
    """First and second moments of Q = (a + a†)/√2 and P = (a − a†)/(i√2) in |z⟩"""

    model_config = ConfigDict(frozen=True)

    z: complex
    mean_q: float
    mean_p: float
    q_squared: float
    p_squared: float

    @property
    def var_q(self) -> float:
        return self.q_squared - self.mean_q ** 2

    @property
    def var_p(self) -> float:
        return self.p_squared - self.mean_p ** 2

    @property
    def uncertainty(self) -> float:
        """ΔQ·ΔP"""
        return math.sqrt(self.var_q * self.var_p)


def cs_expectation_normal(p: DeformationParams, z: Number, m: int, n: int) -> complex:
    """⟨z|a†ᵐaⁿ|z⟩ = z̄ᵐzⁿ"""
    if m < 0 or n < 0:
        raise ParameterError("powers must be nonnegative")
    require_domain(p, z)
    z = complex(z)
    return z.conjugate() ** m * z ** n


def cs_expectation_antinormal(p: DeformationParams, z: Number, n: int, m: int) -> complex:
    """⟨z|aⁿa†ᵐ|z⟩.

    For n ≤ m this is ∏_{j=m−n+1}^{m} φ(j) z̄^{m−n}/𝒩(|z|²) ₁φ₁(q^{1+m}; q^{1+m−n}; q; −|z|²q^{−n}/γ),
    where the φ-product is (q^{−m};q)_n(−γq)ⁿ; n > m is the complex conjugate of the swapped case.
    """
    if m < 0 or n < 0:
        raise ParameterError("powers must be nonnegative")
    p.require_positive()
    if n > m:
        return cs_expectation_antinormal(p, z, m, n).conjugate()
    x = require_domain(p, z)
    q = p.q
    lowering = LogMagnitude.from_value(-p.gamma * q).ipow(n) * q_shifted_log(q ** (-m), q, n)
    series = one_phi_one(q ** (1 + m), q ** (1 + m - n), q, -x * q ** (-n) / p.gamma).require()
    norm = norm_series(x, p).require().real
    return lowering.real_value() * complex(z).conjugate() ** (m - n) * series / norm


def cs_expectation_oracle(p: DeformationParams, z: Number, word: str, dim: int = 96) -> complex:
    """⟨z|word|z⟩ from the truncated coherent vector and explicit ladder matrices"""
    t = Truncation(dim=dim)
    vector = coherent_vector(p, z, t).coeffs
    return complex(np.vdot(vector, word_matrix(p, t, word).matrix @ vector))


def quadrature_moments(p: DeformationParams, z: Number) -> QuadratureMoments:
    """Moments from a a† = q^{−1}a†a + lsq q^{λ−1}: ⟨Q²⟩ = ((3 + q^{−1})Re²z + (q^{−1} − 1)Im²z + lsq q^{λ−1})/2"""
    p.require_positive()
    require_domain(p, z)
    z = complex(z)
    re, im = z.real, z.imag
    inv = 1.0 / p.q
    constant = p.scale * inv
    return QuadratureMoments(
        z=z,
        mean_q=math.sqrt(2.0) * re,
        mean_p=math.sqrt(2.0) * im,
        q_squared=0.5 * ((3.0 + inv) * re ** 2 + (inv - 1.0) * im ** 2 + constant),
        p_squared=0.5 * ((3.0 + inv) * im ** 2 + (inv - 1.0) * re ** 2 + constant),
    )
