"""
One-shot invariant suite behind `main.py verify`
"""

import itertools
import math
from functools import partial
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.coherent.density import (
    antinormal_trace,
    antinormal_trace_displayed,
    density_from_weight,
    gaussian_weight,
    hamiltonian_trace,
    kerr_expectation,
    trace_forms,
)
from src.coherent.expectations import (
    cs_expectation_antinormal,
    cs_expectation_normal,
    cs_expectation_oracle,
    quadrature_moments,
)
from src.coherent.resolution import identity_resolution_check, kernel_idempotence_check, projector_reconstruct
from src.fock.elements import antinormal_element, normal_element
from src.fock.operators import KerrParams, Truncation, build_ladder, commutator_check, kerr_hamiltonian, word_matrix
from src.hermite.families import FamilyKind, PolyFamily, explicit_h_sinh, poly_eval
from src.hermite.weights import orthonormality_check
from src.hopf.structure import verify_axioms
from src.kernel.jackson import structure_phi
from src.kernel.params import DeformationParams
from src.kernel.series import norm_series, one_phi_one, q_bessel_J0, q_binomial
from src.monitoring.logging_config import get_logger
from src.monitoring.tracing import trace_function
from src.quantize.berezin import (
    FourierSpec,
    commutator_of_coordinates,
    lower_symbol,
    lower_symbol_angle_series,
    quantize_angle,
    quantize_general,
    quantize_quadratics,
)
from src.quantize.evolution import time_evolution
from src.utils.grids import complex_grid
from src.utils.reports import CheckResult

logger = get_logger(__name__)

GROUPS = (
    "lemma",
    "commutator",
    "resolution",
    "kernel",
    "projector",
    "hermite",
    "expectations",
    "traces",
    "quantization",
    "hopf",
    "series",
    "classical",
)


def default_grid() -> List[DeformationParams]:
    """q ∈ {0.5, 2}, lsq = 1, λ ∈ {0, 1}"""
    return [DeformationParams(q=q, lsq=1.0, lam=lam) for q in (0.5, 2.0) for lam in (0.0, 1.0)]


class SuiteConfig(BaseModel):
    """What `verify` runs"""

    model_config = ConfigDict(frozen=True)

    grid: List[DeformationParams] = Field(default_factory=default_grid)
    dim: int = Field(64, ge=16)
    seed: int = 0
    hopf_dim: int = Field(8, ge=2, le=16)
    c13: float = 0.0
    groups: Sequence[str] = GROUPS


def _relative(values: np.ndarray, reference: np.ndarray, floor: float = 1e-300) -> float:
    values, reference = np.atleast_1d(values), np.atleast_1d(reference)
    diff = np.abs(values - reference)
    scale = np.maximum(np.abs(reference), floor)
    mask = diff > 0
    return float(np.max(diff[mask] / scale[mask], initial=0.0))


def _scaled(values: np.ndarray, reference: np.ndarray) -> float:
    """max |A − B| / max(1, max |B|)"""
    reference = np.asarray(reference)
    return float(np.max(np.abs(np.asarray(values) - reference)) / max(1.0, float(np.max(np.abs(reference)))))


class _Recorder:
    def __init__(self, p: Optional[DeformationParams], extra: Optional[Dict] = None):
        self.base = {**(p.describe() if p is not None else {}), **(extra or {})}
        self.results: List[CheckResult] = []

    def __call__(self, check: str, reference: str, residual: float, tolerance: float, asserted: bool = True, **extra):
        self.results.append(
            CheckResult.evaluate(
                check, reference, residual, tolerance, params={**self.base, **extra}, asserted=asserted
            )
        )


def _word(left: str, left_count: int, right: str, right_count: int) -> str:
    return " ".join([left] * left_count + [right] * right_count) or "I"


@trace_function("verify.lemma")
def check_lemma(p: DeformationParams, config: SuiteConfig, rng: np.random.Generator) -> List[CheckResult]:
    """Normal and anti-normal matrix elements against explicit matrix products"""
    record = _Recorder(p, {"dim": 32})
    t = Truncation(dim=32)
    worst_normal = worst_anti = 0.0
    for m, n in itertools.product(range(6), repeat=2):
        normal = word_matrix(p, t, _word("ad", m, "a", n)).matrix.real
        anti = word_matrix(p, t, _word("a", n, "ad", m)).matrix.real
        for r, s in itertools.product(range(11), repeat=2):
            worst_normal = max(worst_normal, _relative(normal_element(p, r, m, n, s).real, normal[r, s]))
            worst_anti = max(worst_anti, _relative(antinormal_element(p, r, n, m, s).real, anti[r, s]))
    record("fock.lemma.normal", "⟨r|a†ᵐaⁿ|s⟩ closed form", worst_normal, 1e-10)
    record("fock.lemma.antinormal", "⟨r|aⁿa†ᵐ|s⟩ closed form", worst_anti, 1e-10)
    return record.results


@trace_function("verify.commutator")
def check_commutator(p: DeformationParams, config: SuiteConfig, rng: np.random.Generator) -> List[CheckResult]:
    record = _Recorder(p, {"dim": config.dim})
    t = Truncation(dim=config.dim)
    for alpha, name in ((1.0, "plain"), (1.0 / p.q, "deformed")):
        record(
            f"fock.commutator.{name}",
            "aa† − αa†a = lsq q^λ/(q−1)(1 − α − q^{−1}(1 − qα)q^{−N})",
            commutator_check(p, t, alpha),
            1e-12,
            alpha=alpha,
        )
    return record.results


@trace_function("verify.resolution")
def check_resolution(p: DeformationParams, config: SuiteConfig, rng: np.random.Generator) -> List[CheckResult]:
    record = _Recorder(p, {"dim": config.dim, "rows": config.dim // 2})
    report = identity_resolution_check(p, Truncation(dim=config.dim, valid_rows=config.dim // 2))
    record("coherent.identity_resolution", "∫ dμ(z) |z⟩⟨z| = I", report.max_residual, 1e-6)
    return record.results


def _random_points(p: DeformationParams, rng: np.random.Generator, count: int = 4) -> List[complex]:
    radius = 0.7 * math.sqrt(min(p.radius, 1.0))
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, count))
    theta = rng.uniform(0.0, 2.0 * math.pi, count)
    return [complex(x) for x in r * np.exp(1j * theta)]


@trace_function("verify.kernel")
def check_kernel(p: DeformationParams, config: SuiteConfig, rng: np.random.Generator) -> List[CheckResult]:
    points = _random_points(p, rng)
    record = _Recorder(p, {"dim": config.dim, "seed": config.seed, "points": [str(z) for z in points]})
    report = kernel_idempotence_check(p, points, Truncation(dim=config.dim))
    record("coherent.kernel_idempotence", "∫ d²ζ K(z, ζ)K(ζ, z′) = K(z, z′)", report.max_residual, 1e-8)
    return record.results


@trace_function("verify.projector")
def check_projector(p: DeformationParams, config: SuiteConfig, rng: np.random.Generator) -> List[CheckResult]:
    record = _Recorder(p, {"dim": 12})
    t = Truncation(dim=12)
    worst = 0.0
    for n, m in itertools.product(range(6), repeat=2):
        expected = np.zeros((12, 12))
        expected[n, m] = 1.0
        worst = max(worst, float(np.max(np.abs(projector_reconstruct(p, n, m, t) - expected))))
    record("coherent.projector", "angular filter and Jackson derivatives give |n⟩⟨m|", worst, 1e-9)
    return record.results


@trace_function("verify.hermite")
def check_hermite(p: DeformationParams, config: SuiteConfig, rng: np.random.Generator) -> List[CheckResult]:
    """Gram matrices of both representations; the explicit sinh sum in the q < 1 regime"""
    record = _Recorder(p, {"n_max": 10})
    kinds = (FamilyKind.POS_SUB, FamilyKind.MOM_SUB) if p.is_sub else (FamilyKind.POS_SUPER, FamilyKind.MOM_SUPER)
    if p.lam == 0.0:
        for kind in kinds:
            report = orthonormality_check(PolyFamily(kind=kind, params=p), 10)
            record(f"hermite.orthonormality.{kind.value}", "Gram matrix = I", report.max_residual, 1e-6)

    if p.is_sub and p.lam == 0.0:
        q = p.q
        fam = PolyFamily(kind=FamilyKind.POS_SUB, params=DeformationParams(q=q, lsq=1.0))
        worst = 0.0
        for u in np.linspace(-1.5, 1.5, 7):
            recursion = poly_eval(fam, math.sinh(u), 12).values
            for n in range(13):
                magnitude = math.fsum(
                    q ** (k * (k - n)) * abs(q_binomial(n, k, q)) * math.exp((n - 2 * k) * u) for k in range(n + 1)
                )
                worst = max(worst, abs(explicit_h_sinh(u, q, n) - recursion[n]) / magnitude)
        record("hermite.explicit_sum", "h_n(sinh u|q) finite sum = recursion", worst, 1e-9, n_max=12)
    return record.results


@trace_function("verify.expectations")
def check_expectations(p: DeformationParams, config: SuiteConfig, rng: np.random.Generator) -> List[CheckResult]:
    """Closed-form coherent-state expectations against the vector sandwich on a 5×5 grid"""
    axis = np.linspace(-0.4, 0.4, 5)
    grid = complex_grid(axis, axis)
    record = _Recorder(p, {"grid": "[-0.4, 0.4]² 5×5"})
    worst: Dict[str, float] = {"a": 0.0, "ad a": 0.0, "a ad": 0.0, "quadratures": 0.0, "variance": 0.0}
    for z in grid:
        oracle = {word: cs_expectation_oracle(p, z, word) for word in ("a", "ad", "a a", "ad ad", "ad a", "a ad")}
        worst["a"] = max(worst["a"], abs(cs_expectation_normal(p, z, 0, 1) - oracle["a"]) / max(1.0, abs(z)))
        worst["ad a"] = max(worst["ad a"], abs(cs_expectation_normal(p, z, 1, 1) - oracle["ad a"]) / max(1.0, abs(oracle["ad a"])))
        worst["a ad"] = max(
            worst["a ad"], abs(cs_expectation_antinormal(p, z, 1, 1) - oracle["a ad"]) / max(1.0, abs(oracle["a ad"]))
        )
        moments = quadrature_moments(p, z)
        mixed = oracle["a ad"] + oracle["ad a"]
        q_sq = (0.5 * (oracle["a a"] + oracle["ad ad"] + mixed)).real
        p_sq = (-0.5 * (oracle["a a"] + oracle["ad ad"] - mixed)).real
        worst["quadratures"] = max(
            worst["quadratures"], abs(moments.q_squared - q_sq) / max(1.0, q_sq), abs(moments.p_squared - p_sq) / max(1.0, p_sq)
        )
        x = abs(z) ** 2
        display = 0.5 * ((1.0 / p.q - 1.0) * x + p.scale / p.q)
        worst["variance"] = max(worst["variance"], abs(moments.var_q - display), abs(moments.var_p - display))

    record("coherent.expectation.a", "⟨z|a|z⟩ = z", worst["a"], 1e-9)
    record("coherent.expectation.ad_a", "⟨z|a†a|z⟩ = |z|²", worst["ad a"], 1e-9)
    record("coherent.expectation.a_ad", "⟨z|aa†|z⟩ = lsq q^{λ−1} + q^{−1}|z|²", worst["a ad"], 1e-9)
    record("coherent.expectation.quadratures", "⟨Q²⟩, ⟨P²⟩ closed forms", worst["quadratures"], 1e-9)
    record("coherent.expectation.variance", "ΔQ² = ΔP² = ((q^{−1} − 1)|z|² + lsq q^{λ−1})/2", worst["variance"], 1e-12)
    return record.results


@trace_function("verify.traces")
def check_traces(p: DeformationParams, config: SuiteConfig, rng: np.random.Generator) -> List[CheckResult]:
    """Trace formulas of the Gaussian-analogue density against spectral sums"""
    t = Truncation(dim=config.dim)
    record = _Recorder(p, {"dim": config.dim, "weight": "gaussian"})
    density = density_from_weight(p, gaussian_weight(), t)

    number = density.expectation(word_matrix(p, t, "ad a").matrix).real
    record("coherent.trace.number", "tr(ρa†a) closed form", _relative(trace_forms(p, 1, 1), number), 1e-8)
    if not p.is_sub:
        display = p.lsq * p.q ** (p.lam - 3.0)
        record("coherent.trace.number_display", "tr(ρa†a) = lsq q^{λ−3}", _relative(trace_forms(p, 1, 1), display), 1e-12)

    kerr = KerrParams(chi=0.3)
    spectral = density.expectation(kerr_hamiltonian(p, t, kerr).matrix).real
    record("coherent.trace.kerr", "tr(ρ(a†a + χ/2 a†²a²))", _relative(kerr_expectation(p, kerr), spectral), 1e-8, chi=kerr.chi)

    operator = word_matrix(p, t, "a ad").matrix + word_matrix(p, t, "ad a").matrix
    spectral = density.expectation(operator).real
    record("coherent.trace.hamiltonian", "tr(ρ(aa† + a†a))", _relative(hamiltonian_trace(p), spectral), 1e-8)

    if not p.is_sub:
        defining = antinormal_trace(p, 1, 1, t=t).real
        record(
            "coherent.trace.antinormal_display",
            "tr(ρaa†) through the 𝒪_∞ series",
            _relative(antinormal_trace_displayed(p, 1), defining),
            1e-8,
            asserted=False,
        )
    return record.results


@trace_function("verify.quantization")
def check_quantization(p: DeformationParams, config: SuiteConfig, rng: np.random.Generator) -> List[CheckResult]:
    """Anti-Wick quantization: closed forms against the quadrature path"""
    dim = 10
    t = Truncation(dim=dim)
    record = _Recorder(p, {"dim": dim})
    a, adag, _ = build_ladder(p, t)

    numeric_z = quantize_general(p, lambda z: z, t, source="z")
    record("quantize.z", "A_z = a", _scaled(numeric_z.matrix, a.matrix), 1e-6)
    numeric_zbar = quantize_general(p, lambda z: np.conj(z), t, source="z̄")
    record("quantize.zbar", "A_z̄ = a†", _scaled(numeric_zbar.matrix, adag.matrix), 1e-6)

    phi_next = structure_phi(p, np.arange(1, dim + 1))
    modulus = quantize_general(p, lambda z: np.abs(z) ** 2, t, source="|z|²")
    spectrum = np.linalg.eigvalsh(0.5 * (modulus.matrix + modulus.matrix.conj().T))
    record("quantize.modulus_spectrum", "spec A_{|z|²} = {φ(n + 1)}", _scaled(spectrum, np.sort(phi_next)), 1e-6)

    commutator = commutator_of_coordinates(p, t)
    n = np.arange(dim - 1)
    record(
        "quantize.coordinate_commutator",
        "[A_z, A_z̄] = lsq q^{λ−1−N}",
        _scaled(commutator, np.diag(p.lsq * p.q ** (p.lam - 1.0 - n))),
        1e-10,
    )

    ops = quantize_quadratics(p, t)
    numeric_sq = quantize_general(p, lambda z: 2.0 * z.real ** 2, t, source="q²")
    record("quantize.position_squared", "A_{q²} two paths", _scaled(numeric_sq.matrix, ops.position_sq.matrix), 1e-6)
    Q = ops.position.matrix
    gap = np.diag(0.5 * (structure_phi(p, np.arange(1, dim + 1)) - structure_phi(p, np.arange(dim))))
    w = dim - 1
    record(
        "quantize.position_squared_display",
        "A_{q²} = Q² + (φ(N + 1) − φ(N))/2",
        _scaled((ops.position_sq.matrix - Q @ Q)[:w, :w], gap[:w, :w]),
        1e-10,
    )

    spec = FourierSpec.angle(11)
    angle_op = quantize_angle(p, spec, Truncation(dim=12))
    record("quantize.angle_even_entries", "angle q-factor on even n + n′", angle_op.residual_vs_other_method, 1e-12)
    record("quantize.angle_hermitian", "A_θ Hermitian", angle_op.hermiticity_residual, 1e-12)

    z = 0.3 + 0.2j
    sandwich = lower_symbol(p, quantize_angle(p, spec, Truncation(dim=64)), z)
    even_only = lower_symbol_angle_series(p, spec, z, parity="even")
    record(
        "quantize.angle_lower_symbol_even",
        "lower symbol of A_θ from even k only",
        abs(even_only - sandwich) / abs(sandwich),
        1e-9,
        asserted=False,
    )
    return record.results


@trace_function("verify.hopf")
def check_hopf(p: DeformationParams, config: SuiteConfig, rng: np.random.Generator) -> List[CheckResult]:
    return verify_axioms(p, Truncation(dim=max(8, min(config.dim, 24))), c13=config.c13, triple_dim=config.hopf_dim)


@trace_function("verify.series")
def check_series(p: DeformationParams, config: SuiteConfig, rng: np.random.Generator) -> List[CheckResult]:
    """Reported tail bounds against a fourfold-longer sum; φ monotone on 0..200"""
    record = _Recorder(p)
    sub = p.is_sub
    cases = {
        "norm": partial(norm_series, 5.0 if sub else 0.99 * p.radius, p),
        "1phi1": partial(one_phi_one, 0.3, 0.2, p.q, 0.7) if sub else partial(one_phi_one, 0.9, 0.7, p.q, 0.7 * p.q),
        "qbessel": partial(q_bessel_J0, 1.99 if sub else 3.0, p.q),
    }
    eps = float(np.finfo(float).eps)
    for name, evaluate in cases.items():
        value = evaluate()
        truth = evaluate(max_terms=4 * value.terms_used, tolerance=0.0).value
        record(
            f"kernel.tail_bound.{name}",
            "|true − returned| ≤ tail_bound, truth at 4× terms",
            abs(truth - value.value),
            value.tail_bound + 64 * eps * abs(truth),
            terms_used=value.terms_used,
        )

    n = np.arange(201)
    steps = np.diff(structure_phi(p, n))
    resolvable = p.q ** (-n[:-1].astype(float)) > 1e-12 if not p.is_sub else np.ones(steps.shape, dtype=bool)
    record("kernel.phi_monotone", "φ(n+1) ≥ φ(n) for n ≤ 200", float(max(0.0, -steps.min())), 0.0)
    record(
        "kernel.phi_strict",
        "φ(n+1) > φ(n) while q^{−n} > 1e-12",
        float(np.count_nonzero(steps[resolvable] <= 0.0)),
        0.0,
    )
    return record.results


@trace_function("verify.classical")
def check_classical(config: SuiteConfig) -> List[CheckResult]:
    """q = 1 ± 1e-4 limits"""
    record = _Recorder(None)
    for q in (1.0 - 1e-4, 1.0 + 1e-4):
        unit = DeformationParams(q=q, lsq=1.0, lam=0.0)
        n = np.arange(1, 6)
        record("classical.phi", "φ(n) → n", float(np.max(np.abs(structure_phi(unit, n) - n) / n)), 1e-3, q=q)

        half = DeformationParams(q=q, lsq=0.5, lam=0.0)
        drift = max(abs(time_evolution(half, 0.5, t) - 0.5 * np.exp(1j * t)) for t in (0.5, 1.0, 2.0))
        record("classical.evolution", "ž(t) → z0 e^{it}", drift, 1e-3, q=q, lsq=0.5)

        record(
            "classical.uncertainty",
            "ΔQΔP → 1/2",
            abs(quadrature_moments(unit, 0.3 + 0.1j).uncertainty - 0.5),
            1e-3,
            q=q,
        )
    return record.results


CHECKS: Dict[str, Callable[[DeformationParams, SuiteConfig, np.random.Generator], List[CheckResult]]] = {
    "lemma": check_lemma,
    "commutator": check_commutator,
    "resolution": check_resolution,
    "kernel": check_kernel,
    "projector": check_projector,
    "hermite": check_hermite,
    "expectations": check_expectations,
    "traces": check_traces,
    "quantization": check_quantization,
    "hopf": check_hopf,
    "series": check_series,
}


def run_suite(config: Optional[SuiteConfig] = None) -> List[CheckResult]:
    """Run every selected group on every parameter set, in a fixed order"""
    config = config or SuiteConfig()
    unknown = [g for g in config.groups if g not in GROUPS]
    if unknown:
        raise ValueError(f"unknown check group(s) {unknown}; choose from {', '.join(GROUPS)}")
    results: List[CheckResult] = []
    for index, p in enumerate(config.grid):
        p.require_positive()
        for group in GROUPS:
            if group in config.groups and group in CHECKS:
                rng = np.random.default_rng([config.seed, index, GROUPS.index(group)])
                results.extend(CHECKS[group](p, config, rng))
    if "classical" in config.groups:
        results.extend(check_classical(config))

    failed = [r.check for r in results if r.failed]
    logger.info("suite_completed", checks=len(results), failed=len(failed), parameter_sets=len(config.grid))
    return results
