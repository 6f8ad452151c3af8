"""
Quadrature rules and the adaptive cutoff loop shared by the radial and Hermite integrals
"""

import math
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.special import roots_legendre
from tenacity import RetryError, Retrying, retry_if_exception_type, stop_after_attempt

from config.settings import settings
from src.monitoring.logging_config import get_logger

from .errors import ConvergenceError, NotStableYet, QuadratureBudgetError

logger = get_logger(__name__)

# tanh-sinh nodes beyond this |t| carry weights below 1e-37
_TANH_SINH_T_MAX = 4.0


class EvaluationBudget:
    """Counts integrand evaluations against settings.quadrature_budget"""

    def __init__(self, limit: Optional[int] = None, name: str = "quadrature"):
        self.limit = limit or settings.quadrature_budget
        self.used = 0
        self.name = name

    def charge(self, evaluations: int) -> None:
        self.used += int(evaluations)
        if self.used > self.limit:
            raise QuadratureBudgetError(
                f"{self.name}: {self.used} integrand evaluations exceed the budget of {self.limit}"
            )


def gauss_legendre_panels(a: float, b: float, panels: int, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule: `panels` equal panels with `nodes` points each"""
    if panels < 1 or nodes < 1:
        raise ValueError("panels and nodes must be positive")
    x, w = roots_legendre(nodes)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    points = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return points, weights


def tanh_sinh(a: float, b: float, level: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Double-exponential rule on [a, b] with step 4·2^{−level}.

    Returns (points, weights, edge_distance), where edge_distance is the distance of
    each point to the nearer endpoint computed without cancellation.
    """
    h = 4.0 / 2 ** level
    k_max = int(math.ceil(_TANH_SINH_T_MAX / h))
    t = h * np.arange(-k_max, k_max + 1)
    arg = 0.5 * np.pi * np.sinh(t)
    x = np.tanh(arg)
    # 1 − |tanh(arg)| = 2/(e^{2|arg|} + 1)
    complement = 2.0 / (np.exp(2.0 * np.abs(arg)) + 1.0)
    dx = 0.5 * np.pi * np.cosh(t) / np.cosh(arg) ** 2
    half = 0.5 * (b - a)
    points = 0.5 * (a + b) + half * x
    weights = h * dx * half
    return points, weights, half * complement


def integrate_until_stable(
    compute: Callable[[float], np.ndarray],
    start: float,
    tolerance: float,
    name: str = "quadrature",
) -> Tuple[np.ndarray, float, float]:
    """Double the integration cutoff until two successive results agree.

    `compute(cutoff)` returns an array; agreement is measured relative to max(1, |result|).
    Returns (result, cutoff, last change).
    """
    state = {"cutoff": start, "previous": compute(start)}

    def refine() -> Tuple[np.ndarray, float, float]:
        cutoff = 2.0 * state["cutoff"]
        current = compute(cutoff)
        change = float(np.max(np.abs(current - state["previous"])))
        scale = max(1.0, float(np.max(np.abs(current))))
        state["cutoff"], state["previous"] = cutoff, current
        if change > tolerance * scale:
            logger.debug("quadrature_cutoff_doubled", quadrature=name, cutoff=cutoff, change=change)
            raise NotStableYet(f"{name}: change {change:.3g} at cutoff {cutoff:.6g}")
        return current, cutoff, change

    try:
        for attempt in Retrying(
            stop=stop_after_attempt(settings.max_doublings),
            retry=retry_if_exception_type(NotStableYet),
        ):
            with attempt:
                result = refine()
    except RetryError as exc:
        raise ConvergenceError(
            f"{name} did not stabilize after {settings.max_doublings} cutoff doublings "
            f"(last cutoff {state['cutoff']:.6g})"
        ) from exc
    return result
