"""
Closed-form radial moments ∫ x^s / 𝒩(x) dm(x)
"""

import math

from .errors import DomainError
from .params import DeformationParams
from .series import q_shifted, q_shifted_inf


def _is_integer(s: float) -> bool:
    return abs(s - round(s)) < 1e-12


def mellin_moment(p: DeformationParams, s: float) -> float:
    """∫ x^s / 𝒩(x) dm(x), dm = dx on (0, ∞) for q < 1 and the Jackson measure on (0, R] for q > 1.

    q < 1:  γ^{s+1} π/sin(π(s+1)) (q^{−s};q)_∞/(q;q)_∞, with the integer-order limit
            ln(1/q) γ^{s+1} q^{−s(s+1)/2} (q;q)_s.
    q > 1:  R^s q^{−s−1} (q^{−1};q^{−1})_∞ / (q^{−s−1};q^{−1})_∞.
    """
    if s <= -1:
        raise DomainError(f"moment order must exceed −1, got {s}")
    p.require_positive()
    q = p.q
    if p.is_sub:
        gamma = p.gamma
        if _is_integer(s):
            n = int(round(s))
            return (
                math.log(1.0 / q)
                * gamma ** (n + 1)
                * q ** (-n * (n + 1) / 2.0)
                * q_shifted(q, q, n)
            )
        numerator = q_shifted_inf(q ** (-s), q).require().real
        denominator = q_shifted_inf(q, q).require().real
        return gamma ** (s + 1) * math.pi / math.sin(math.pi * (s + 1)) * numerator / denominator

    base = 1.0 / q
    R = p.radius
    numerator = q_shifted_inf(base, base).require().real
    denominator = q_shifted_inf(base ** (s + 1), base).require().real
    return R ** s * base ** (s + 1) * numerator / denominator
