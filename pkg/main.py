"""
Main entry point for QOsc
"""

import functools
import math
import sys
from pathlib import Path
from typing import Callable, List, Optional

import click
import numpy as np
from dotenv import load_dotenv
from pydantic import ValidationError

load_dotenv()

from config.settings import settings  # noqa: E402
from src.coherent.density import (  # noqa: E402
    SeparableWeight,
    antinormal_trace_displayed,
    density_from_weight,
    gaussian_weight,
    hamiltonian_trace,
    kerr_expectation,
    position_trace,
    trace_forms,
)
from src.coherent.resolution import kernel_K  # noqa: E402
from src.coherent.states import overlap  # noqa: E402
from src.fock.operators import KerrParams, Truncation  # noqa: E402
from src.hermite.families import FamilyKind, PolyFamily, momentum_table, poly_eval, position_table  # noqa: E402
from src.hopf.structure import verify_axioms  # noqa: E402
from src.kernel.errors import QOscError  # noqa: E402
from src.kernel.params import DeformationParams  # noqa: E402
from src.monitoring.logging_config import configure_logging, get_logger  # noqa: E402
from src.monitoring.tracing import initialize_tracing  # noqa: E402
from src.quantize.berezin import (  # noqa: E402
    FourierSpec,
    QuantizedOperator,
    quantize_angle,
    quantize_general,
    quantize_monomial,
    quantize_quadratics,
)
from src.quantize.evolution import density_grid, evolution_series  # noqa: E402
from src.utils.grids import complex_grid, parse_complex, parse_range  # noqa: E402
from src.utils.reports import CheckResult, matrix_rows, render_report, render_table, write_output  # noqa: E402
from src.utils.verify_suite import GROUPS, SuiteConfig, run_suite  # noqa: E402

logger = get_logger(__name__)

QUADRATURE_SYMBOLS = {
    "monomial": None,
    "modulus": lambda z: np.abs(z) ** 2,
    "position": lambda z: math.sqrt(2.0) * z.real,
    "momentum": lambda z: math.sqrt(2.0) * z.imag,
    "position-sq": lambda z: 2.0 * z.real ** 2,
    "momentum-sq": lambda z: 2.0 * z.imag ** 2,
    "harmonic": lambda z: np.abs(z) ** 2,
}


def common_options(dim_default: int = 32) -> Callable:
    """--q --lsq --lambda --dim --out --output --seed"""
    options = [
        click.option("--q", "q", type=float, default=None, help="Deformation parameter q > 0, q ≠ 1 (default 0.5)"),
        click.option("--lsq", type=float, default=1.0, show_default=True, help="Length scale l²"),
        click.option("--lambda", "lam", type=float, default=0.0, show_default=True, help="Exponent λ"),
        click.option("--dim", type=int, default=dim_default, show_default=True, help="Truncated Fock dimension"),
        click.option("--out", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True),
        click.option("--output", type=click.Path(dir_okay=False, path_type=Path), default=None,
                     help="Write to this file instead of stdout"),
        click.option("--seed", type=int, default=0, show_default=True, help="Seed for randomized spot checks"),
    ]

    def decorator(func: Callable) -> Callable:
        for option in reversed(options):
            func = option(func)
        return func

    return decorator


def handle_errors(func: Callable) -> Callable:
    """Library and validation errors become click usage errors (exit 2)"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (QOscError, ValidationError, ValueError) as e:
            logger.error("command_failed", command=func.__name__, error=str(e))
            raise click.UsageError(str(e)) from e

    return wrapper


def _params(q: Optional[float], lsq: float, lam: float) -> DeformationParams:
    return DeformationParams(q=0.5 if q is None else q, lsq=lsq, lam=lam)


def _emit_checks(results: List[CheckResult], output: Optional[Path]) -> None:
    write_output(render_report(results), output)
    failed = [r.check for r in results if r.failed]
    if failed:
        logger.warning("checks_failed", failed=failed)
        sys.exit(1)


@click.group()
@click.option("--log-level", default=None, help="Logging level (default from QOSC_LOG_LEVEL)")
@click.option("--log-format", type=click.Choice(["console", "json"]), default=None)
def cli(log_level, log_format):
    """QOsc: numerics for the (q; l, λ)-deformed Heisenberg algebra"""
    configure_logging(log_level, log_format)
    initialize_tracing()


@cli.command("hermite-table")
@common_options()
@click.option("--family", type=click.Choice([kind.value for kind in FamilyKind]), required=True)
@click.option("--nmax", type=int, default=10, show_default=True)
@click.option("--grid", "grid_spec", default="-2:2:0.5", show_default=True, help="x grid start:stop:step")
@click.option("--normalized", is_flag=True, help="Emit the Fock-basis coefficients q_n / p_n instead of raw values")
@handle_errors
def hermite_table(q, lsq, lam, dim, fmt, output, seed, family, nmax, grid_spec, normalized):
    """Deformed Hermite families on an x grid: three-term recursion values, or the
    normalized position/momentum coefficients of the number states.

    Exercises: the three-term recursions and the Fock-basis coefficients of the
    position and momentum eigenvectors.
    """
    kind = FamilyKind(family)
    if q is None:
        q = 0.5 if kind.regime.value == "sub" else 2.0
    p = _params(q, lsq, lam)
    fam = PolyFamily(kind=kind, params=p)
    xs = parse_range(grid_spec)
    rows = []
    for x in xs:
        if normalized:
            table = momentum_table(p, x, nmax) if kind.is_momentum else position_table(p, x, nmax)
            values = [complex(v) if kind.is_momentum else float(v) for v in table]
        else:
            values = poly_eval(fam, x, nmax).values
        rows.append({"x": x, **{f"values[{n}]": value for n, value in enumerate(values)}})
    write_output(render_table(rows, fmt), output)


@cli.command("cs-overlap")
@common_options()
@click.option("--z", "points", multiple=True, default=("0", "0.3+0.2i", "-0.4i"), show_default=True,
              help="Coherent-state label, repeatable")
@handle_errors
def cs_overlap(q, lsq, lam, dim, fmt, output, seed, points):
    """Overlaps ⟨z1|z2⟩ of normalized deformed coherent states for every pair of --z values.

    Exercises: the normalization series 𝒩 and the coherent-state overlap formula.
    """
    p = _params(q, lsq, lam)
    zs = [parse_complex(text) for text in points]
    rows = [{"z1": z1, "z2": z2, "overlap": overlap(p, z1, z2)} for z1 in zs for z2 in zs]
    write_output(render_table(rows, fmt), output)


@cli.command("kernel-grid")
@common_options()
@click.option("--zeta", default="0.2", show_default=True, help="Second kernel argument")
@click.option("--re", "re_spec", default="-0.5:0.5:0.25", show_default=True)
@click.option("--im", "im_spec", default="-0.5:0.5:0.25", show_default=True)
@click.option("--symmetric", is_flag=True, help="Use the symmetric weight √(w(|z|²)w(|ζ|²))")
@handle_errors
def kernel_grid(q, lsq, lam, dim, fmt, output, seed, zeta, re_spec, im_spec, symmetric):
    """Reproducing kernel K(z, ζ) on a rectangular z grid.

    Exercises: the resolution of the identity and the reproducing kernel of the
    coherent-state space.
    """
    p = _params(q, lsq, lam)
    zeta_value = parse_complex(zeta)
    rows = []
    for z in complex_grid(parse_range(re_spec), parse_range(im_spec)):
        value = kernel_K(p, z, zeta_value, symmetric=symmetric)
        rows.append({"z": value.z, "zeta": value.zeta, "K": value.value})
    write_output(render_table(rows, fmt), output)


def _weight(name: str) -> SeparableWeight:
    if name == "gaussian":
        return gaussian_weight()
    return SeparableWeight.from_radial(lambda x: np.exp(-x), label="exponential")


@cli.command()
@common_options()
@click.option("--weight", type=click.Choice(["gaussian", "exponential"]), default="gaussian", show_default=True)
@click.option("--normalize", is_flag=True, help="Divide by the trace")
@handle_errors
def density(q, lsq, lam, dim, fmt, output, seed, weight, normalize):
    """Number-basis matrix of a density operator given by its diagonal (P-) representation.

    Exercises: the diagonal representation of density operators through radial
    quadrature and the angular Fourier coefficients of the weight.
    """
    p = _params(q, lsq, lam)
    result = density_from_weight(p, _weight(weight), Truncation(dim=dim))
    if normalize:
        result = result.normalized()
    write_output(render_table(matrix_rows(result.rho, "rho"), fmt), output)


@cli.command()
@common_options()
@click.option("--chi", type=float, default=0.3, show_default=True, help="Kerr strength χ")
@handle_errors
def traces(q, lsq, lam, dim, fmt, output, seed, chi):
    """Closed-form traces of the Gaussian-analogue density: tr ρ, tr(ρa†a), Kerr energy,
    tr(ρ(aa† + a†a)), tr(ρQ), and for q > 1 the 𝒪_∞ form of tr(ρaa†).

    Exercises: the closed-form thermal-analogue expectation values.
    """
    p = _params(q, lsq, lam)
    rows = [
        {"quantity": "trace", "value": trace_forms(p, 0, 0)},
        {"quantity": "number", "value": trace_forms(p, 1, 1)},
        {"quantity": "kerr", "value": kerr_expectation(p, KerrParams(chi=chi))},
        {"quantity": "hamiltonian", "value": hamiltonian_trace(p)},
        {"quantity": "position", "value": position_trace(p)},
    ]
    if not p.is_sub:
        rows.append({"quantity": "antinormal_displayed", "value": antinormal_trace_displayed(p, 1)})
    write_output(render_table(rows, fmt), output)


@cli.command()
@common_options()
@click.option("--f", "symbol", type=click.Choice(["angle", *QUADRATURE_SYMBOLS]), default="monomial",
              show_default=True)
@click.option("--mu", type=int, default=1, show_default=True, help="Power of z for --f monomial")
@click.option("--nu", type=int, default=0, show_default=True, help="Power of z̄ for --f monomial")
@click.option("--method", type=click.Choice(["closed-form", "quadrature"]), default="closed-form",
              show_default=True)
@click.option("--ncut", type=int, default=16, show_default=True, help="Fourier cutoff for --f angle")
@handle_errors
def quantize(q, lsq, lam, dim, fmt, output, seed, symbol, mu, nu, method, ncut):
    """Anti-Wick (coherent-state) quantization A_f of a phase-space symbol f.

    Exercises: coherent-state quantization of monomials, quadratic symbols and the
    angle function.
    """
    p = _params(q, lsq, lam)
    t = Truncation(dim=dim)
    op: QuantizedOperator
    if symbol == "angle":
        op = quantize_angle(p, FourierSpec.angle(ncut), t)
    elif method == "quadrature":
        func = QUADRATURE_SYMBOLS[symbol] or (lambda z: z ** mu * np.conj(z) ** nu)
        op = quantize_general(p, func, t, source=symbol)
    elif symbol == "monomial":
        op = quantize_monomial(p, mu, nu, t)
    elif symbol == "modulus":
        op = quantize_monomial(p, 1, 1, t)
    else:
        ops = quantize_quadratics(p, t)
        op = {
            "position": ops.position,
            "momentum": ops.momentum,
            "position-sq": ops.position_sq,
            "momentum-sq": ops.momentum_sq,
            "harmonic": ops.harmonic,
        }[symbol]
    write_output(render_table(matrix_rows(op.matrix, "A"), fmt), output)


@cli.command()
@common_options()
@click.option("--z0", default="0.3", show_default=True, help="Initial coherent-state label")
@click.option("--times", "times_spec", default="0:6:0.5", show_default=True)
@click.option("--density-grid", "grid_mode", is_flag=True, help="Emit ρ_{z0}(z, t) on a z grid instead")
@click.option("--t", "at_time", type=float, default=0.0, show_default=True, help="Time for --density-grid")
@click.option("--re", "re_spec", default="-0.5:0.5:0.25", show_default=True)
@click.option("--im", "im_spec", default="-0.5:0.5:0.25", show_default=True)
@handle_errors
def evolve(q, lsq, lam, dim, fmt, output, seed, z0, times_spec, grid_mode, at_time, re_spec, im_spec):
    """Coherent-state trajectory ž(t) under the quantized oscillator, or the evolved
    probability density ρ_{z0}(z, t).

    Exercises: time evolution of coherent states under the quantized oscillator.
    """
    p = _params(q, lsq, lam)
    start = parse_complex(z0)
    if grid_mode:
        points = density_grid(p, start, complex_grid(parse_range(re_spec), parse_range(im_spec)), at_time)
        rows = [{"t": pt.t, "z0": pt.z0, "z": pt.z, "density": pt.value.real} for pt in points]
    else:
        points = evolution_series(p, start, parse_range(times_spec))
        rows = [{"t": pt.t, "z0": pt.z0, "z": pt.value} for pt in points]
    write_output(render_table(rows, fmt), output)


@cli.command("hopf-verify")
@common_options()
@click.option("--c13", type=float, default=0.0, show_default=True, help="Free antipode constant")
@click.option("--triple-dim", type=click.IntRange(2, 16), default=8, show_default=True)
@handle_errors
def hopf_verify(q, lsq, lam, dim, fmt, output, seed, c13, triple_dim):
    """Coproduct, counit and antipode checks on truncated tensor spaces (JSON report).

    Exercises: the Hopf structure of the deformed algebra, with dimension-doubling
    stability of every residual.
    """
    p = _params(q, lsq, lam)
    _emit_checks(verify_axioms(p, Truncation(dim=dim), c13=c13, triple_dim=triple_dim), output)


@cli.command()
@common_options(dim_default=64)
@click.option("--group", "groups", multiple=True, type=click.Choice(GROUPS),
              help="Restrict to these check groups (repeatable)")
@click.option("--c13", type=float, default=0.0, show_default=True)
@handle_errors
def verify(q, lsq, lam, dim, fmt, output, seed, groups, c13):
    """Full invariant suite. Without --q it runs the default grid q ∈ {0.5, 2}, lsq = 1,
    λ ∈ {0, 1}; exit status 1 when any asserted check fails.

    Exercises: every identity above across both regimes.
    """
    fields = {"dim": max(dim, 16), "seed": seed, "c13": c13}
    if q is not None:
        fields["grid"] = [_params(q, lsq, lam)]
    if groups:
        fields["groups"] = tuple(groups)
    config = SuiteConfig(**fields)
    logger.info("verify_started", dim=config.dim, parameter_sets=len(config.grid), max_terms=settings.max_terms)
    _emit_checks(run_suite(config), output)


if __name__ == "__main__":
    cli()
