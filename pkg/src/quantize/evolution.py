"""
Time evolution of the quantized oscillator seen through coherent states
"""

import cmath
import math
from typing import List, Optional, Sequence

from pydantic import BaseModel, ConfigDict

from src.coherent.states import Number, require_domain
from src.kernel.params import DeformationParams
from src.kernel.series import norm_coefficient_ratio, norm_series, sum_ratio_series
from src.monitoring.logging_config import get_logger
from src.monitoring.tracing import get_tracer

logger = get_logger(__name__)
tracer = get_tracer(__name__)


class EvolutionPoint(BaseModel):
    """ž(t) for a trajectory point, or ρ_{z0}(z, t) with `z` set"""

    model_config = ConfigDict(frozen=True)

    t: float
    z0: complex
    value: complex
    z: Optional[complex] = None


def time_evolution(p: DeformationParams, z0: Number, t: float) -> complex:
    """ž(t) = z0/𝒩(|z0|²) Σ q^{C(n,2)} |z0|^{2n}/((q;q)_n γⁿ) exp(i t lsq q^{λ−2−n}(1 + q))"""
    x = require_domain(p, z0)
    if z0 == 0:
        return 0j
    omega = p.scale * (1.0 + p.q) / p.q ** 2
    q = p.q

    def ratio(n: int) -> complex:
        # phase of term n is exp(i t ω q^{−n})
        phase = cmath.exp(1j * t * omega * (q ** (-n - 1) - q ** (-n)))
        return norm_coefficient_ratio(p, n) * x * phase

    series = sum_ratio_series(ratio, first=cmath.exp(1j * t * omega), name="evolution").require()
    return complex(z0) * series / norm_series(x, p).require().real


def prob_density(p: DeformationParams, z0: Number, z: Number, t: float = 0.0) -> float:
    """ρ_{z0}(z, t) = |𝒩_t(z̄ z0)|²/(𝒩(|z|²) 𝒩(|z0|²)) with coefficient phases e^{−itφ(n+1)}"""
    x0 = require_domain(p, z0)
    x = require_domain(p, z)
    w = complex(z).conjugate() * complex(z0)
    if t == 0:
        evolved = norm_series(w, p).require()
    else:

        def ratio(n: int) -> complex:
            # φ(n + 2) − φ(n + 1) = lsq q^{λ−n−2}
            return norm_coefficient_ratio(p, n) * w * cmath.exp(-1j * t * p.scale * p.q ** (-n - 2))

        first = cmath.exp(-1j * t * p.scale / p.q)
        evolved = sum_ratio_series(ratio, first=first, name="evolved-norm").require()
    denominator = norm_series(x, p).require().real * norm_series(x0, p).require().real
    return float(abs(evolved) ** 2 / denominator)


def evolution_series(p: DeformationParams, z0: Number, times: Sequence[float]) -> List[EvolutionPoint]:
    """ž(t) on a time grid"""
    with tracer.start_as_current_span("evolution_series") as span:
        span.set_attribute("points", len(times))
        points = [EvolutionPoint(t=t, z0=complex(z0), value=time_evolution(p, z0, t)) for t in times]
    logger.info("evolution_computed", z0=str(complex(z0)), points=len(points))
    return points


def density_grid(p: DeformationParams, z0: Number, grid: Sequence[Number], t: float = 0.0) -> List[EvolutionPoint]:
    """ρ_{z0}(z, t) on a z-grid"""
    with tracer.start_as_current_span("density_grid") as span:
        span.set_attribute("points", len(grid))
        points = [
            EvolutionPoint(t=t, z0=complex(z0), z=complex(z), value=prob_density(p, z0, z, t)) for z in grid
        ]
    peak = max((point.value.real for point in points), default=math.nan)
    logger.info("density_grid_computed", z0=str(complex(z0)), points=len(points), peak=peak)
    return points
