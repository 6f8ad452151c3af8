"""
Closed-form matrix elements of normal and anti-normal ladder monomials
"""

from typing import Optional

from src.kernel.params import DeformationParams, LogMagnitude
from src.kernel.series import q_shifted_log


def _binom2(k: int) -> float:
    return k * (k - 1) / 2.0


def _raise_factor(p: DeformationParams, s: int, k: int) -> LogMagnitude:
    """q^{−(k choose 2)/2 − sk/2} √(γ^k (q^{1+s};q)_k), the norm of a†ᵏ|s⟩"""
    if k == 0:
        return LogMagnitude(log_abs=0.0)
    radicand = LogMagnitude.from_value(p.gamma).ipow(k) * q_shifted_log(p.q ** (1 + s), p.q, k)
    power = LogMagnitude(log_abs=(-_binom2(k) / 2.0 - s * k / 2.0) * p.log_q)
    return power * radicand.power(0.5)


def _lowering_factor(p: DeformationParams, s: int, k: int) -> LogMagnitude:
    """(−γq)^k (q^{−s};q)_k = ∏_{j=s−k+1}^{s} φ(j); zero once k > s"""
    if k > s:
        return LogMagnitude.zero()
    return LogMagnitude.from_value(-p.gamma * p.q).ipow(k) * q_shifted_log(p.q ** (-s), p.q, k)


def _normal_creation_heavy(p: DeformationParams, s: int, m: int, n: int) -> LogMagnitude:
    # n ≤ m, r = s + m − n
    return _lowering_factor(p, s, n) * _raise_factor(p, s, m - n)


def _normal_annihilation_heavy(p: DeformationParams, r: int, m: int, n: int) -> LogMagnitude:
    # n ≥ m, s = r + n − m
    return _lowering_factor(p, r, m) * _raise_factor(p, r, n - m)


def normal_element(
    p: DeformationParams, r: int, m: int, n: int, s: int, branch: Optional[str] = None
) -> complex:
    """⟨r|a†ᵐaⁿ|s⟩.

    The n ≤ m branch is the default at n = m; ``branch="annihilation"`` forces the
    n ≥ m form so both can be compared on the diagonal.
    """
    if min(r, m, n, s) < 0:
        raise ValueError("indices must be nonnegative")
    if r != s + m - n or n > s:
        return 0.0
    use_creation = n <= m if branch is None else branch == "creation"
    if use_creation and n > m:
        raise ValueError("the creation-heavy form needs n ≤ m")
    if not use_creation and n < m:
        raise ValueError("the annihilation-heavy form needs n ≥ m")
    if use_creation:
        element = _normal_creation_heavy(p, s, m, n)
    else:
        element = _normal_annihilation_heavy(p, r, m, n)
    return element.value()


def antinormal_element(p: DeformationParams, r: int, n: int, m: int, s: int) -> complex:
    """⟨r|aⁿa†ᵐ|s⟩ = δ_{r+n, s+m} q^{−((n choose 2) + (m choose 2))/2 − (rn + sm)/2} √(γ^{n+m}(q^{1+r};q)_n(q^{1+s};q)_m)"""
    if min(r, m, n, s) < 0:
        raise ValueError("indices must be nonnegative")
    if r + n != s + m:
        return 0.0
    return (_raise_factor(p, r, n) * _raise_factor(p, s, m)).value()

