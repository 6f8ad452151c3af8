"""
Structure function and Jackson calculus
"""

import math
from typing import Callable, Sequence, Union

import numpy as np

from config.settings import settings

from .errors import DomainError
from .params import DeformationParams, Regime, SeriesValue

ArrayLike = Union[int, float, np.ndarray]


def structure_phi(p: DeformationParams, n: ArrayLike) -> ArrayLike:
    """φ(n) = lsq·q^λ (1 − q^{−n})/(q − 1); accepts integers or arrays"""
    n_arr = np.asarray(n, dtype=float)
    value = p.scale * (-np.expm1(-n_arr * p.log_q)) / (p.q - 1.0)
    if np.ndim(value) == 0:
        return float(value)
    return value


def phi_product(p: DeformationParams, start: int, stop: int) -> float:
    """∏_{k=start}^{stop} φ(k); empty product is 1"""
    if stop < start:
        return 1.0
    return float(np.prod(structure_phi(p, np.arange(start, stop + 1))))


def log_phi_product(p: DeformationParams, start: int, stop: int) -> float:
    """log ∏_{k=start}^{stop} φ(k) for lsq > 0; -inf when a factor vanishes"""
    if stop < start:
        return 0.0
    values = structure_phi(p, np.arange(start, stop + 1))
    if np.any(values <= 0):
        return -math.inf
    return float(np.sum(np.log(values)))


def jackson_derivative(f: Callable[[float], float], y: float, p: DeformationParams) -> float:
    """lsq·q^λ (f(y) − f(y/q)) / ((q − 1) y)"""
    if y == 0:
        raise DomainError("the Jackson derivative is not defined at y = 0; use jackson_derivative_poly")
    return p.scale * (f(y) - f(y / p.q)) / ((p.q - 1.0) * y)


def jackson_derivative_poly(coeffs: Sequence[complex], p: DeformationParams) -> np.ndarray:
    """Exact action on coefficient vectors: c_n yⁿ ↦ φ(n) c_n y^{n−1}"""
    coeffs = np.asarray(coeffs)
    if coeffs.size <= 1:
        return coeffs[:0]
    degrees = np.arange(1, coeffs.size)
    return structure_phi(p, degrees) * coeffs[1:]


def jackson_integral(
    f: Callable[[float], float],
    b: float,
    p: DeformationParams,
) -> SeriesValue:
    """Right inverse of jackson_derivative on (0, b], q > 1.

    q^{1−λ}/lsq · b(1 − q^{−1}) Σ_k q^{−k} f(b q^{−k})
    """
    p.require_regime(Regime.SUPER_ONE)
    if not 0.0 < b <= p.radius:
        raise DomainError(f"upper limit b = {b:.6g} must lie in (0, R = {p.radius:.6g}]")
    base = 1.0 / p.q
    prefactor = p.q ** (1.0 - p.lam) / p.lsq * b * (1.0 - base)

    # the ratio form breaks down when f vanishes at a lattice point, so sum directly
    total = 0.0 + 0.0j
    quiet = 0
    last = []
    k = 0
    while k < settings.max_terms:
        term = base ** k * f(b * base ** k)
        total += term
        last = (last + [abs(term)])[-2:]
        if abs(term) <= settings.series_tolerance * abs(total):
            quiet += 1
            if quiet >= settings.quiet_terms:
                break
        else:
            quiet = 0
        k += 1
    else:
        return SeriesValue(
            value=prefactor * total, terms_used=k, tail_bound=math.inf, converged=False
        )
    # f bounded near 0: remaining terms are dominated by the last magnitude times base^j
    bound = max(last) if last else 0.0
    tail = abs(prefactor) * bound * base / (1.0 - base)
    return SeriesValue(value=prefactor * total, terms_used=k + 1, tail_bound=tail, converged=True)


def jackson_lattice(p: DeformationParams, b: float, power: float = 0.0):
    """Nodes b q^{−k} and weights of the Jackson sum, truncated for x^power integrands.

    Returns (nodes, weights) with Σ weights·g(nodes) ≈ ∫₀^b g d_qx.
    """
    p.require_regime(Regime.SUPER_ONE)
    base = 1.0 / p.q
    decay = (power + 1.0) * math.log(p.q)
    terms = int(math.ceil(-math.log(settings.series_tolerance * 1e-2) / decay)) + 1
    terms = min(max(terms, 2), settings.max_terms)
    k = np.arange(terms)
    nodes = b * base ** k
    weights = p.q ** (1.0 - p.lam) / p.lsq * b * (1.0 - base) * base ** k
    return nodes, weights
