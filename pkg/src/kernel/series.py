"""
q-series kernel: shifted factorials, the normalization series, ₁φ₁ and the q-Bessel J₀
"""

import cmath
import math
from typing import Callable, Optional, Union

import numpy as np

from config.settings import settings
from src.monitoring.logging_config import get_logger

from .errors import DomainError, PoleError, RegimeError
from .params import DeformationParams, LogMagnitude, SeriesValue

logger = get_logger(__name__)

Number = Union[float, complex]

# log|w| above which 1 − w is evaluated as −w(1 − 1/w)
_LARGE_LOG = 30.0


def sum_ratio_series(
    ratio: Callable[[int], complex],
    first: complex = 1.0,
    max_terms: Optional[int] = None,
    tolerance: Optional[float] = None,
    name: str = "series",
) -> SeriesValue:
    """Sum Σ t_k with t_{k+1} = ratio(k)·t_k.

    Stops once `quiet_terms` consecutive terms satisfy |t_k| ≤ tolerance·|partial|.
    The tail bound is the geometric remainder of the last two terms.
    """
    max_terms = max_terms or settings.max_terms
    tolerance = settings.series_tolerance if tolerance is None else tolerance

    term = complex(first)
    total = term
    quiet = 0
    previous = term
    k = 0
    while k + 1 < max_terms:
        previous = term
        term = term * ratio(k)
        k += 1
        if not cmath.isfinite(term):
            logger.warning("series_term_not_finite", series=name, index=k)
            return SeriesValue(value=total, terms_used=k, tail_bound=math.inf, converged=False)
        total += term
        if abs(term) <= tolerance * abs(total):
            quiet += 1
            if quiet >= settings.quiet_terms:
                break
        else:
            quiet = 0
    else:
        logger.warning("series_term_cap_reached", series=name, terms=max_terms)
        return SeriesValue(value=total, terms_used=max(k + 1, 1), tail_bound=math.inf, converged=False)

    rho = abs(term) / abs(previous) if previous != 0 else 0.0
    if rho >= 1.0:
        logger.warning("series_ratio_not_contracting", series=name, ratio=rho)
        return SeriesValue(value=total, terms_used=k + 1, tail_bound=math.inf, converged=False)
    tail = abs(term) * rho / (1.0 - rho)
    return SeriesValue(value=total, terms_used=k + 1, tail_bound=tail, converged=True)


def _log_one_minus(w_log_abs: float, w_phase: complex) -> LogMagnitude:
    """log-magnitude of 1 − w for w = e^{w_log_abs}·w_phase"""
    if w_log_abs > _LARGE_LOG:
        inv = math.exp(-w_log_abs) * w_phase.conjugate()
        rest = 1.0 - inv
        return LogMagnitude(
            log_abs=w_log_abs + math.log(abs(rest)),
            phase=-w_phase * rest / abs(rest),
        )
    w = math.exp(w_log_abs) * w_phase
    return LogMagnitude.from_value(1.0 - w)


def q_shifted_log(z: Number, q: float, n: int) -> LogMagnitude:
    """(z;q)_n as log-magnitude plus phase, safe for q > 1 and large n"""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    result = LogMagnitude(log_abs=0.0)
    if z == 0 or n == 0:
        return result
    z_log = math.log(abs(z))
    z_phase = complex(z) / abs(z)
    log_q = math.log(q)
    for k in range(n):
        factor = _log_one_minus(z_log + k * log_q, z_phase)
        if factor.is_zero:
            return LogMagnitude.zero()
        result = result * factor
    return result


def q_shifted(z: Number, q: float, n: int) -> Number:
    """(z;q)_n = ∏_{k<n} (1 − z q^k)"""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    value: Number = 1.0
    qk = 1.0
    for _ in range(n):
        value *= 1.0 - z * qk
        qk *= q
    return value


def q_binomial(n: int, k: int, q: float) -> float:
    """Gaussian binomial coefficient [n k]_q"""
    if k < 0 or k > n:
        return 0.0
    ratio = q_shifted_log(q, q, n) / (q_shifted_log(q, q, k) * q_shifted_log(q, q, n - k))
    return ratio.real_value()


def q_shifted_inf(z: Number, q: float) -> SeriesValue:
    """(z;q)_∞ for 0 < q < 1, truncated once |z q^k| drops below tolerance·|partial|"""
    if not 0.0 < q < 1.0:
        raise RegimeError(f"(z;q)_∞ needs 0 < q < 1, got q={q}")
    tolerance = settings.series_tolerance
    value = complex(1.0)
    zk = complex(z)
    k = 0
    while k < settings.max_terms:
        if abs(zk) <= tolerance * abs(value) or zk == 0:
            break
        value *= 1.0 - zk
        if value == 0:
            return SeriesValue(value=0.0, terms_used=k + 1, tail_bound=0.0, converged=True)
        zk *= q
        k += 1
    else:
        logger.warning("product_term_cap_reached", z=str(z), q=q)
        return SeriesValue(value=value, terms_used=k, tail_bound=math.inf, converged=False)
    rest = abs(zk) / (1.0 - q)
    tail = abs(value) * math.expm1(rest)
    return SeriesValue(value=value, terms_used=max(k, 1), tail_bound=tail, converged=True)


def log_shifted_inf(y: np.ndarray, q: float, sign: float = -1.0) -> np.ndarray:
    """Σ_k log|1 + sign·y q^k| for real arrays y ≥ 0, 0 < q < 1 (vectorized product)"""
    if not 0.0 < q < 1.0:
        raise RegimeError(f"infinite products need 0 < q < 1, got q={q}")
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    peak = float(np.max(np.abs(y))) if y.size else 0.0
    if peak == 0.0:
        return out
    terms = int(math.ceil((math.log(settings.series_tolerance) - math.log(peak)) / math.log(q))) + 2
    terms = min(max(terms, 1), settings.max_terms)
    qk = 1.0
    with np.errstate(divide="ignore"):
        for _ in range(terms):
            out += np.log(np.abs(1.0 + sign * y * qk)) if sign < 0 else np.log1p(y * qk)
            qk *= q
    return out


def _norm_ratio(p: DeformationParams, t: Number) -> Callable[[int], complex]:
    gamma = p.gamma
    q = p.q
    if p.is_sub:
        return lambda n: q ** n * t / (gamma * (1.0 - q ** (n + 1)))
    return lambda n: t / (gamma * (q ** (-n) - q))


def norm_series(
    t: Number,
    p: DeformationParams,
    max_terms: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> SeriesValue:
    """𝒩(t) = Σ q^{n(n−1)/2} tⁿ / (γⁿ (q;q)_n), summed through its coefficient ratio"""
    if not p.is_sub and abs(t) >= p.radius:
        raise DomainError(f"|t| = {abs(t):.6g} outside the convergence disk |t| < R = {p.radius:.6g}")
    return sum_ratio_series(_norm_ratio(p, t), max_terms=max_terms, tolerance=tolerance, name="norm")


def norm_coefficient_ratio(p: DeformationParams, n: int) -> float:
    """c_{n+1}/c_n of the normalization series (t = 1)"""
    return _norm_ratio(p, 1.0)(n).real


def norm_closed_form(t: float, p: DeformationParams) -> float:
    """Product form: (−t/γ;q)_∞ for q < 1 and 1/(t/R;q^{−1})_∞ for q > 1"""
    if p.is_sub:
        return q_shifted_inf(-t / p.gamma, p.q).require().real
    if t >= p.radius:
        raise DomainError(f"t = {t:.6g} outside [0, R = {p.radius:.6g})")
    return 1.0 / q_shifted_inf(t / p.radius, 1.0 / p.q).require().real


def log_norm(x: np.ndarray, p: DeformationParams) -> np.ndarray:
    """log 𝒩(x) for x ≥ 0 from the product forms; +inf at x = R when q > 1"""
    x = np.asarray(x, dtype=float)
    if p.is_sub:
        return log_shifted_inf(x / p.gamma, p.q, sign=1.0)
    return -log_shifted_inf(x / p.radius, 1.0 / p.q, sign=-1.0)


def one_phi_one(
    A: Number,
    B: Number,
    q: float,
    t: Number,
    max_terms: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> SeriesValue:
    """₁φ₁(A; B; q; t) = Σ (−1)ⁿ q^{n(n−1)/2} (A;q)_n / ((B;q)_n (q;q)_n) tⁿ"""

    def ratio(k: int) -> complex:
        if q < 1.0:
            qk = q ** k
            den = 1.0 - B * qk
            if abs(den) < 1e-300:
                raise PoleError(f"(B;q)_n vanishes at factor k={k} (B={B})")
            return -qk * (1.0 - A * qk) / (den * (1.0 - qk * q)) * t
        qmk = q ** (-k)
        den = qmk - B
        if abs(den) < 1e-300 * max(1.0, abs(B)):
            raise PoleError(f"(B;q)_n vanishes at factor k={k} (B={B})")
        return -(qmk - A) / (q * den * (qmk / q - 1.0)) * t

    return sum_ratio_series(ratio, max_terms=max_terms, tolerance=tolerance, name="1phi1")


def q_bessel_J0(
    z: Number, q: float, max_terms: Optional[int] = None, tolerance: Optional[float] = None
) -> SeriesValue:
    """J₀(z;q) = Σ (−1)ⁿ (z/2)^{2n} / (q;q)_n²"""
    half_sq = (z / 2.0) ** 2

    def ratio(k: int) -> complex:
        if q > 1.0:
            qm = q ** (-(k + 1))
            return -half_sq * qm * qm / ((qm - 1.0) ** 2)
        return -half_sq / ((1.0 - q ** (k + 1)) ** 2)

    return sum_ratio_series(ratio, max_terms=max_terms, tolerance=tolerance, name="qbessel")
