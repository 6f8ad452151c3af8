"""
The four deformed Hermite families and their Fock-basis coefficient maps
"""

import cmath
import math
from enum import Enum
from typing import List, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from src.kernel.params import DeformationParams, Regime
from src.kernel.series import q_binomial, q_shifted_log

ArrayLike = Union[float, np.ndarray]


class FamilyKind(str, Enum):
    """Position/momentum representation × q regime"""
    POS_SUB = "pos-sub"
    POS_SUPER = "pos-super"
    MOM_SUB = "mom-sub"
    MOM_SUPER = "mom-super"

    @property
    def regime(self) -> Regime:
        return Regime.SUB_ONE if self in (FamilyKind.POS_SUB, FamilyKind.MOM_SUB) else Regime.SUPER_ONE

    @property
    def is_momentum(self) -> bool:
        return self in (FamilyKind.MOM_SUB, FamilyKind.MOM_SUPER)


class PolyFamily(BaseModel):
    """A deformed Hermite family bound to its parameters"""

    model_config = ConfigDict(frozen=True)

    kind: FamilyKind
    params: DeformationParams

    @model_validator(mode="after")
    def _check_regime(self) -> "PolyFamily":
        if self.params.regime != self.kind.regime:
            raise ValueError(
                f"family {self.kind.value} needs the {self.kind.regime.value}-unity regime, got q={self.params.q}"
            )
        return self

    def recursion_coefficients(self, n_max: int) -> np.ndarray:
        """α_n in 2y P_n = P_{n+1} + α_n P_{n−1}: lsq q^λ(q^{−n} − 1) or lsq q^λ(1 − q^{−n})"""
        p = self.params
        n = np.arange(n_max + 1, dtype=float)
        alpha = p.scale * np.expm1(-n * p.log_q)
        return alpha if p.is_sub else -alpha

    def argument(self, x: ArrayLike) -> ArrayLike:
        """Polynomial argument y = √(|1 − q|/2)·x"""
        return math.sqrt(abs(1.0 - self.params.q) / 2.0) * x


class PolySequence(BaseModel):
    """Values P_0(x) … P_{n_max}(x)"""

    model_config = ConfigDict(frozen=True)

    family: PolyFamily
    x: float
    values: List[float]

    def recursion_residual(self) -> float:
        """Largest relative violation of the three-term recursion"""
        alpha = self.family.recursion_coefficients(len(self.values))
        v = self.values
        worst = 0.0
        for n in range(len(v) - 1):
            previous = v[n - 1] if n > 0 else 0.0
            lhs = 2.0 * self.x * v[n]
            rhs = v[n + 1] + alpha[n] * previous
            scale = max(abs(lhs), abs(v[n + 1]), abs(alpha[n] * previous), 1e-300)
            worst = max(worst, abs(lhs - rhs) / scale)
        return worst


def recurrence_table(alpha: np.ndarray, y: ArrayLike, n_max: int) -> np.ndarray:
    """Forward recursion with P_{−1} = 0, P_0 = 1; shape (n_max + 1,) + shape(y)"""
    y = np.asarray(y, dtype=float)
    table = np.empty((n_max + 1,) + y.shape)
    table[0] = 1.0
    if n_max >= 1:
        table[1] = 2.0 * y
    for n in range(1, n_max):
        table[n + 1] = 2.0 * y * table[n] - alpha[n] * table[n - 1]
    return table


def poly_eval(fam: PolyFamily, x: float, n_max: int) -> PolySequence:
    """Evaluate P_0 … P_{n_max} of the family at x"""
    if n_max < 0:
        raise ValueError(f"n_max must be nonnegative, got {n_max}")
    table = recurrence_table(fam.recursion_coefficients(n_max), x, n_max)
    return PolySequence(family=fam, x=x, values=[float(v) for v in table])


def _log_normalizers(p: DeformationParams, n_max: int) -> np.ndarray:
    """log of q^{n(n+1)/4}(q;q)_n^{−1/2} (q < 1) or (q^{−1};q^{−1})_n^{−1/2} (q > 1)"""
    out = np.empty(n_max + 1)
    for n in range(n_max + 1):
        if p.is_sub:
            out[n] = n * (n + 1) / 4.0 * p.log_q - 0.5 * q_shifted_log(p.q, p.q, n).log_abs
        else:
            base = 1.0 / p.q
            out[n] = -0.5 * q_shifted_log(base, base, n).log_abs
    return out


def position_table(p: DeformationParams, x: ArrayLike, n_max: int) -> np.ndarray:
    """q_n(x) for n = 0 … n_max, vectorized over x"""
    p.require_positive()
    kind = FamilyKind.POS_SUB if p.is_sub else FamilyKind.POS_SUPER
    fam = PolyFamily(kind=kind, params=p)
    h = recurrence_table(fam.recursion_coefficients(n_max), fam.argument(np.asarray(x, dtype=float)), n_max)
    n = np.arange(n_max + 1)
    log_prefactor = _log_normalizers(p, n_max) - 0.5 * n * math.log(p.scale)
    return h * np.exp(log_prefactor).reshape((-1,) + (1,) * (h.ndim - 1))


def momentum_table(p: DeformationParams, x: ArrayLike, n_max: int) -> np.ndarray:
    """p_n(x) = (−i l q^{λ/2})^{−n} B_n χ_n(y), l the principal root of lsq; complex"""
    kind = FamilyKind.MOM_SUB if p.is_sub else FamilyKind.MOM_SUPER
    fam = PolyFamily(kind=kind, params=p)
    chi = recurrence_table(fam.recursion_coefficients(n_max), fam.argument(np.asarray(x, dtype=float)), n_max)
    kappa = -1j * cmath.sqrt(p.lsq) * p.q ** (p.lam / 2.0)
    n = np.arange(n_max + 1)
    prefactor = np.exp(_log_normalizers(p, n_max)) * kappa ** (-n.astype(float))
    return chi * prefactor.reshape((-1,) + (1,) * (chi.ndim - 1))


def coeff_position(p: DeformationParams, x: float, n: int) -> float:
    """q_n(x) = (lsq q^λ)^{−n/2} q^{n(n+1)/4} (q;q)_n^{−1/2} h_n(√((1−q)/2) x) for q < 1,
    (lsq q^λ)^{−n/2} (q^{−1};q^{−1})_n^{−1/2} ĥ_n(√((q−1)/2) x) for q > 1"""
    return float(position_table(p, x, n)[n])


def coeff_momentum(p: DeformationParams, x: float, n: int) -> complex:
    """Momentum-representation coefficient p_n(x); real for lsq < 0"""
    return complex(momentum_table(p, x, n)[n])


def explicit_h_sinh(u: float, q: float, n: int) -> float:
    """h_n(sinh u|q) = Σ_k (−1)^k q^{k(k−n)} [n k]_q e^{(n−2k)u}"""
    return math.fsum(
        (-1) ** k * q ** (k * (k - n)) * q_binomial(n, k, q) * math.exp((n - 2 * k) * u)
        for k in range(n + 1)
    )
