"""
Radial measures on x = |z|²

Every coherent-state integral splits into an angular average, done analytically or by FFT,
and a radial integral over x. Sub-unity integrals use Gauss-Legendre panels in u = ln x
with a doubling cutoff; super-unity integrals are Jackson sums over x_k = R q^{−k}.
"""

import math
from typing import Callable, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from config.settings import settings
from src.kernel.jackson import jackson_lattice, structure_phi
from src.kernel.moments import mellin_moment
from src.kernel.params import DeformationParams
from src.kernel.quadrature import EvaluationBudget, gauss_legendre_panels, integrate_until_stable
from src.kernel.series import log_norm, log_shifted_inf
from src.monitoring.logging_config import get_logger
from src.monitoring.tracing import get_tracer

logger = get_logger(__name__)
tracer = get_tracer(__name__)


class RadialMeasure(BaseModel):
    """Nodes x_i with log-weights for three radial measures.

    log_flat:  dx (sub-unity) or the Jackson measure d_qx (super-unity)
    log_norm:  log 𝒩(x_i)
    log_cs:    log of dm(x)/𝒩(x), where dm is the radial part of the resolution measure
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    params: DeformationParams
    x: np.ndarray
    log_x: np.ndarray
    log_flat: np.ndarray
    log_norm: np.ndarray
    log_cs: np.ndarray
    cutoff: Optional[float] = None

    @property
    def size(self) -> int:
        return self.x.size

    def moments(self, log_prefactors: np.ndarray, powers: np.ndarray, values: Optional[np.ndarray] = None):
        """Σ_i exp(log_prefactor_k + power_k·log x_i + log_cs_i)·values_i for each k"""
        exponent = log_prefactors[:, None] + powers[:, None] * self.log_x[None, :] + self.log_cs[None, :]
        weights = np.exp(exponent)
        if values is None:
            return weights.sum(axis=1)
        return weights @ values


def radial_measure(p: DeformationParams, cutoff: Optional[float] = None) -> RadialMeasure:
    """Build the regime's radial rule; `cutoff` bounds |ln x| for q < 1"""
    p.require_positive()
    if p.is_sub:
        cutoff = cutoff or 4.0
        panels = max(1, int(math.ceil(2.0 * cutoff / settings.panel_width)))
        u, w = gauss_legendre_panels(-cutoff, cutoff, panels, settings.panel_nodes)
        x = np.exp(u)
        lnorm = log_norm(x, p)
        log_flat = np.log(w) + u
        # 𝒩(x)/𝒩(x/q) = η/(η + x)
        log_cs = log_flat - math.log(math.log(1.0 / p.q)) - np.log(p.eta + x) - lnorm
        return RadialMeasure(
            params=p, x=x, log_x=u, log_flat=log_flat, log_norm=lnorm, log_cs=log_cs, cutoff=cutoff
        )

    base = 1.0 / p.q
    x, w = jackson_lattice(p, p.radius, power=0.0)
    k = np.arange(x.size)
    log_x = math.log(p.radius) + k * math.log(base)
    with np.errstate(divide="ignore"):
        log_flat = np.log(w)
        lnorm = log_norm(x, p)
    # (1 + x/η)^{−1}/𝒩(x) = (x/(qR); q^{−1})_∞
    log_cs = log_flat + log_shifted_inf(x * base / p.radius, base, sign=-1.0)
    return RadialMeasure(params=p, x=x, log_x=log_x, log_flat=log_flat, log_norm=lnorm, log_cs=log_cs)


def integrate_radial(
    p: DeformationParams,
    compute: Callable[[RadialMeasure], np.ndarray],
    budget: Optional[EvaluationBudget] = None,
    tolerance: float = 1e-12,
    name: str = "radial",
) -> Tuple[np.ndarray, float]:
    """Evaluate compute(measure) until the radial cutoff is stable.

    Returns (result, error estimate). Super-unity sums are exact up to the lattice
    tail q^{−K}; sub-unity results report the last cutoff-doubling change.
    """
    budget = budget or EvaluationBudget(name=name)
    with tracer.start_as_current_span(f"radial:{name}") as span:
        span.set_attribute("q", p.q)
        if not p.is_sub:
            measure = radial_measure(p)
            budget.charge(measure.size)
            span.set_attribute("nodes", measure.size)
            result = compute(measure)
            return result, float(measure.x[-1] / p.radius)

        def evaluate(cutoff: float) -> np.ndarray:
            measure = radial_measure(p, cutoff)
            budget.charge(measure.size)
            return compute(measure)

        result, cutoff, change = integrate_until_stable(evaluate, 4.0, tolerance, name=name)
        span.set_attribute("cutoff", cutoff)
        logger.debug("radial_integral_converged", integral=name, cutoff=cutoff, change=change)
        return result, change


def cs_radial_moment(p: DeformationParams, s: float) -> float:
    """∫ x^s dm(x)/𝒩(x) in closed form; equals 1/c_s² at integer s"""
    moment = p.q ** (s + 1.0) * mellin_moment(p, s)
    if p.is_sub:
        return moment / (math.log(1.0 / p.q) * p.eta)
    return moment


def log_moment_ladder(p: DeformationParams, s: float, count: int) -> np.ndarray:
    """log ∫ x^{s+j} dm(x)/𝒩(x) for j < count, stepped up by M(s) = φ(s) M(s − 1)"""
    if s < 0 or count < 1:
        raise ValueError(f"need s ≥ 0 and count ≥ 1, got s={s}, count={count}")
    whole = int(math.floor(s + 1e-12))
    base = max(s - whole, 0.0)
    steps = base + np.arange(1, whole + count, dtype=float)
    ladder = np.concatenate(([math.log(cs_radial_moment(p, base))], np.log(structure_phi(p, steps))))
    return np.cumsum(ladder)[whole : whole + count]
