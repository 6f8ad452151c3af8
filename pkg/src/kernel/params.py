"""
Core value models: deformation parameters, series results and log-magnitudes
"""

import cmath
import math
from enum import Enum
from typing import Any, Dict

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import ConvergenceError, ParameterError, RegimeError

# exp() overflows above this
_LOG_MAX = math.log(1.7976931348623157e308)


class Regime(str, Enum):
    """Deformation regime"""
    SUB_ONE = "sub"
    SUPER_ONE = "super"


class DeformationParams(BaseModel):
    """The triple (q, l², λ) and the constants derived from it"""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    q: float = Field(..., gt=0)
    lsq: float
    lam: float = Field(0.0, alias="lambda")

    @model_validator(mode="after")
    def _check(self) -> "DeformationParams":
        if not (math.isfinite(self.q) and math.isfinite(self.lsq) and math.isfinite(self.lam)):
            raise ValueError("q, lsq and lambda must be finite")
        if self.q == 1.0:
            raise ValueError("q = 1 is excluded; use q = 1 ± ε for classical limits")
        if self.lsq == 0.0:
            raise ValueError("lsq must be nonzero")
        return self

    @property
    def regime(self) -> Regime:
        return Regime.SUB_ONE if self.q < 1.0 else Regime.SUPER_ONE

    @property
    def is_sub(self) -> bool:
        return self.q < 1.0

    @property
    def scale(self) -> float:
        """lsq·q^λ, the common factor of every structure constant"""
        return self.lsq * self.q ** self.lam

    @property
    def gamma(self) -> float:
        return self.lsq * self.q ** (self.lam - 1.0) / (1.0 - self.q)

    @property
    def eta(self) -> float:
        return self.scale / (1.0 - self.q)

    @property
    def radius(self) -> float:
        """Convergence radius R of the normalization series in t = |z|²"""
        if self.is_sub:
            return math.inf
        return self.scale / (self.q - 1.0)

    @property
    def log_q(self) -> float:
        return math.log(self.q)

    def require_positive(self) -> None:
        """Fock and coherent-state constructions need φ(n) ≥ 0"""
        if self.lsq <= 0:
            raise ParameterError(f"lsq must be positive here, got {self.lsq}")

    def require_regime(self, regime: Regime) -> None:
        if self.regime != regime:
            raise RegimeError(f"operation requires the {regime.value}-unity regime, got q={self.q}")

    def describe(self) -> Dict[str, Any]:
        """Parameters plus derived constants, JSON friendly"""
        return {
            "q": self.q,
            "lsq": self.lsq,
            "lambda": self.lam,
            "gamma": self.gamma,
            "eta": self.eta,
            "R": None if self.is_sub else self.radius,
            "regime": self.regime.value,
        }


class SeriesValue(BaseModel):
    """Result of a truncated series or product evaluation"""

    model_config = ConfigDict(frozen=True)

    value: complex
    terms_used: int = Field(..., ge=1)
    tail_bound: float = Field(..., ge=0)
    converged: bool

    @model_validator(mode="after")
    def _check(self) -> "SeriesValue":
        if self.converged and not math.isfinite(self.tail_bound):
            raise ValueError("a converged series needs a finite tail bound")
        return self

    @property
    def real(self) -> float:
        return self.value.real

    def require(self) -> complex:
        """Return the value, raising if the series did not converge"""
        if not self.converged:
            raise ConvergenceError(
                f"series did not converge after {self.terms_used} terms (tail {self.tail_bound:.3g})"
            )
        return self.value


class LogMagnitude(BaseModel):
    """A number stored as log|x| and a unit phase (±1 in the real case, 0 for zero)"""

    model_config = ConfigDict(frozen=True)

    log_abs: float
    phase: complex = 1.0

    @classmethod
    def from_value(cls, x: complex) -> "LogMagnitude":
        if x == 0:
            return cls(log_abs=-math.inf, phase=0.0)
        return cls(log_abs=math.log(abs(x)), phase=x / abs(x))

    @classmethod
    def zero(cls) -> "LogMagnitude":
        return cls(log_abs=-math.inf, phase=0.0)

    @property
    def is_zero(self) -> bool:
        return self.phase == 0

    @property
    def sign(self) -> int:
        """Sign of a real-valued magnitude"""
        if self.is_zero:
            return 0
        return 1 if self.phase.real > 0 else -1

    def __mul__(self, other: "LogMagnitude") -> "LogMagnitude":
        if self.is_zero or other.is_zero:
            return LogMagnitude.zero()
        return LogMagnitude(log_abs=self.log_abs + other.log_abs, phase=self.phase * other.phase)

    def __truediv__(self, other: "LogMagnitude") -> "LogMagnitude":
        if other.is_zero:
            raise ZeroDivisionError("division by a zero LogMagnitude")
        if self.is_zero:
            return LogMagnitude.zero()
        return LogMagnitude(log_abs=self.log_abs - other.log_abs, phase=self.phase / other.phase)

    def ipow(self, n: int) -> "LogMagnitude":
        """Exact integer power"""
        if n == 0:
            return LogMagnitude(log_abs=0.0)
        if self.is_zero:
            return LogMagnitude.zero()
        return LogMagnitude(log_abs=self.log_abs * n, phase=self.phase ** n)

    def power(self, exponent: float) -> "LogMagnitude":
        """Principal power; the phase is raised by its argument"""
        if self.is_zero:
            return LogMagnitude.zero() if exponent > 0 else LogMagnitude(log_abs=0.0)
        return LogMagnitude(
            log_abs=self.log_abs * exponent,
            phase=cmath.exp(1j * cmath.phase(self.phase) * exponent),
        )

    def value(self) -> complex:
        if self.is_zero:
            return 0.0
        if self.log_abs > _LOG_MAX:
            raise OverflowError(f"magnitude e^{self.log_abs:.1f} is not representable")
        return math.exp(self.log_abs) * self.phase

    def real_value(self) -> float:
        if self.is_zero:
            return 0.0
        if self.log_abs > _LOG_MAX:
            raise OverflowError(f"magnitude e^{self.log_abs:.1f} is not representable")
        return math.exp(self.log_abs) * self.sign
