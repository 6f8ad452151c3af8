"""
Deformed coherent states on a truncated Fock basis
"""

import cmath
import math
from typing import Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.fock.operators import Truncation
from src.kernel.errors import DomainError
from src.kernel.params import DeformationParams
from src.kernel.series import norm_series

Number = Union[float, complex]


class CoherentVector(BaseModel):
    """Normalized coefficients ⟨n|z⟩ for n < dim"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    z: complex
    coeffs: np.ndarray
    norm_sq: float = Field(..., gt=0)
    tail_error: float = Field(..., ge=0)

    @model_validator(mode="after")
    def _check(self) -> "CoherentVector":
        if self.coeffs.ndim != 1:
            raise ValueError("coefficients must be a vector")
        return self

    @property
    def dim(self) -> int:
        return self.coeffs.size


def require_domain(p: DeformationParams, z: Number) -> float:
    """|z|² for z inside the coherent-state disk"""
    x = abs(z) ** 2
    if not p.is_sub and x >= p.radius:
        raise DomainError(f"|z|² = {x:.6g} outside the disk |z|² < R = {p.radius:.6g}")
    return x


def log_coefficients(p: DeformationParams, n_max: int) -> np.ndarray:
    """log of q^{n(n−1)/4}/√(γⁿ(q;q)_n) = −½ log φ(1)⋯φ(n) for n ≤ n_max"""
    p.require_positive()
    n = np.arange(1, n_max + 1, dtype=float)
    phi = p.scale * (-np.expm1(-n * p.log_q)) / (p.q - 1.0)
    return np.concatenate(([0.0], -0.5 * np.cumsum(np.log(phi))))


def coherent_vector(p: DeformationParams, z: Number, t: Truncation) -> CoherentVector:
    """|z⟩ = 𝒩(|z|²)^{−1/2} Σ q^{n(n−1)/4} zⁿ/√(γⁿ(q;q)_n) |n⟩, cut at t.dim"""
    x = require_domain(p, z)
    norm = norm_series(x, p)
    norm_sq = norm.require().real
    log_c = log_coefficients(p, t.dim - 1)
    n = np.arange(t.dim)
    if z == 0:
        coeffs = np.zeros(t.dim, dtype=complex)
        coeffs[0] = 1.0
        return CoherentVector(z=0j, coeffs=coeffs, norm_sq=1.0, tail_error=0.0)
    phase = complex(z) / abs(z)
    magnitude = np.exp(log_c + n * math.log(abs(z)) - 0.5 * math.log(norm_sq))
    coeffs = magnitude * np.power(phase, n)
    kept = float(np.sum(magnitude ** 2))
    tail = abs(1.0 - kept) + norm.tail_bound / norm_sq
    return CoherentVector(z=complex(z), coeffs=coeffs, norm_sq=norm_sq, tail_error=tail)


def overlap(p: DeformationParams, z1: Number, z2: Number) -> complex:
    """⟨z1|z2⟩ = 𝒩(z̄₁z₂)/√(𝒩(|z1|²)𝒩(|z2|²))"""
    x1 = require_domain(p, z1)
    x2 = require_domain(p, z2)
    cross = norm_series(complex(z1).conjugate() * complex(z2), p).require()
    denominator = norm_series(x1, p).require().real * norm_series(x2, p).require().real
    return complex(cross / cmath.sqrt(denominator))
