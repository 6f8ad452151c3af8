"""
Test suite for deformed coherent states, their resolution of unity and trace formulas
"""

import math

import numpy as np
import pytest

from src.coherent.density import (
    SeparableWeight,
    antinormal_trace,
    antinormal_trace_displayed,
    density_from_weight,
    gaussian_weight,
    hamiltonian_trace,
    kerr_expectation,
    position_trace,
    reproducing_check,
    trace_forms,
)
from src.coherent.expectations import (
    cs_expectation_antinormal,
    cs_expectation_normal,
    cs_expectation_oracle,
    quadrature_moments,
)
from src.coherent.radial import cs_radial_moment, integrate_radial
from src.coherent.resolution import (
    identity_resolution_check,
    kernel_idempotence_check,
    kernel_K,
    projector_reconstruct,
)
from src.coherent.states import coherent_vector, log_coefficients, overlap
from src.fock.operators import KerrParams, Truncation, build_ladder, kerr_hamiltonian, word_matrix
from src.kernel.errors import DomainError, RegimeError, TruncationError
from src.kernel.jackson import log_phi_product
from src.kernel.moments import mellin_moment
from src.kernel.params import DeformationParams
from src.kernel.series import q_shifted_inf

SUB = DeformationParams(q=0.5, lsq=1.0, lam=1.0)
# R = 2, γ = −1
SUPER = DeformationParams(q=2.0, lsq=1.0, lam=1.0)

SUB_POINTS = [0.3, 0.5 + 0.4j, -0.7j, 1.0]
SUPER_POINTS = [0.2, 0.3 - 0.4j, -0.6j, 0.5 + 0.5j]


@pytest.fixture(params=[SUB, SUPER], ids=["sub", "super"])
def params(request):
    """One parameter set per regime"""
    return request.param


def _points(p: DeformationParams):
    return SUB_POINTS if p.is_sub else SUPER_POINTS


@pytest.fixture(scope="module")
def gaussian_densities():
    """Gaussian-analogue densities, computed once per regime"""
    return {p.is_sub: density_from_weight(p, gaussian_weight(), Truncation(dim=64)) for p in (SUB, SUPER)}


class TestCoherentVector:
    """Test cases for truncated coherent vectors"""

    def test_log_coefficients(self, params):
        """c_n² = 1/(φ(1)⋯φ(n))"""
        log_c = log_coefficients(params, 10)
        for n in range(11):
            assert 2.0 * log_c[n] == pytest.approx(-log_phi_product(params, 1, n), abs=1e-12)

    def test_normalized(self, params):
        """Truncated coefficients carry the whole norm"""
        for z in _points(params):
            vector = coherent_vector(params, z, Truncation(dim=80))
            assert np.sum(np.abs(vector.coeffs) ** 2) == pytest.approx(1.0, abs=1e-12)
            assert vector.tail_error < 1e-10

    def test_eigenvector(self, params):
        """a|z⟩ = z|z⟩ away from the truncated row"""
        t = Truncation(dim=80)
        a, _, _ = build_ladder(params, t)
        for z in _points(params):
            v = coherent_vector(params, z, t).coeffs
            residual = (a.matrix @ v - z * v)[: t.dim - 1]
            assert np.max(np.abs(residual)) < 1e-12

    def test_vacuum(self, params):
        """|0⟩ is the Fock vacuum"""
        vector = coherent_vector(params, 0.0, Truncation(dim=6))
        assert vector.coeffs[0] == 1.0
        assert np.all(vector.coeffs[1:] == 0)

    def test_overlap_matches_vectors(self, params):
        """⟨z1|z2⟩ from the normalization series agrees with the coefficient sum"""
        t = Truncation(dim=80)
        points = _points(params)
        for z1 in points:
            for z2 in points:
                expected = np.vdot(coherent_vector(params, z1, t).coeffs, coherent_vector(params, z2, t).coeffs)
                assert overlap(params, z1, z2) == pytest.approx(expected, abs=1e-12)

    def test_self_overlap(self, params):
        """⟨z|z⟩ = 1"""
        for z in _points(params):
            assert overlap(params, z, z) == pytest.approx(1.0, abs=1e-13)

    def test_outside_disk(self):
        """|z|² ≥ R has no coherent state for q > 1"""
        with pytest.raises(DomainError):
            coherent_vector(SUPER, math.sqrt(2.0), Truncation(dim=8))


class TestResolution:
    """Test cases for the resolution of unity and the reproducing kernel"""

    def test_identity_resolution(self, params):
        """∫ dμ |z⟩⟨z| = I on the first half of a 64-state basis"""
        report = identity_resolution_check(params, Truncation(dim=64, valid_rows=32))
        assert report.rows == 32
        assert report.max_residual < 1e-6
        assert report.evaluations > 0

    @pytest.mark.parametrize("s", [0.0, 1.0, 2.5, 4.0])
    def test_radial_moment_closed_form(self, params, s):
        """The closed-form radial moment matches the numerical measure"""

        def compute(measure):
            return measure.moments(np.zeros(1), np.array([s]))

        numeric, _ = integrate_radial(params, compute)
        assert numeric[0] == pytest.approx(cs_radial_moment(params, s), rel=1e-9)

    def test_radial_moment_integer_order(self, params):
        """At integer order the moment is 1/c_n²"""
        for n in range(6):
            assert cs_radial_moment(params, n) == pytest.approx(
                math.exp(log_phi_product(params, 1, n)), rel=1e-10
            )

    def test_kernel_diagonal(self, params):
        """K(z, z) is the density of the resolution measure"""
        for z in _points(params):
            x = abs(z) ** 2
            if params.is_sub:
                expected = 1.0 / (math.pi * math.log(2.0) * (params.eta + x))
            else:
                expected = 1.0 / (math.pi * (1.0 - x / params.radius))
            assert kernel_K(params, z, z).value == pytest.approx(expected, rel=1e-12)

    def test_kernel_hermitian_on_circles(self, params):
        """K(z, ζ) = conj K(ζ, z) when |z| = |ζ|"""
        z, zeta = 0.4 + 0.3j, 0.3 - 0.4j
        assert kernel_K(params, z, zeta).value == pytest.approx(
            kernel_K(params, zeta, z).value.conjugate(), rel=1e-12
        )

    def test_symmetric_kernel_hermitian(self, params):
        """The symmetrized kernel is Hermitian everywhere"""
        points = _points(params)
        for z in points:
            for zeta in points:
                forward = kernel_K(params, z, zeta, symmetric=True).value
                backward = kernel_K(params, zeta, z, symmetric=True).value
                assert forward == pytest.approx(backward.conjugate(), rel=1e-12, abs=1e-15)

    def test_kernel_idempotent(self, params):
        """∫ d²ζ K(z, ζ) K(ζ, z′) = K(z, z′)"""
        report = kernel_idempotence_check(params, _points(params), Truncation(dim=64))
        assert report.max_residual < 1e-8

    def test_reproducing_kernel_off_diagonal(self):
        """An angular profile fills the off-diagonals, which the angular rule must carry"""
        weight = SeparableWeight(
            log_radial=gaussian_weight().log_radial,
            angular=lambda theta: 1.0 + np.cos(theta),
            label="cardioid",
        )
        density = density_from_weight(SUB, weight, Truncation(dim=16)).normalized()
        report = reproducing_check(SUB, density, SUB_POINTS[:3])
        assert report.max_residual < 1e-8
        assert report.residuals.shape == (3, 3)

    @pytest.mark.parametrize("n", range(6))
    @pytest.mark.parametrize("m", range(6))
    def test_projector_reconstruction(self, params, n, m):
        """Angular filter plus Jackson derivatives recovers |n⟩⟨m|"""
        result = projector_reconstruct(params, n, m, Truncation(dim=12))
        expected = np.zeros((12, 12))
        expected[n, m] = 1.0
        np.testing.assert_allclose(result, expected, atol=1e-9)

    def test_projector_outside_basis(self, params):
        """Projectors must fit the truncation"""
        with pytest.raises(TruncationError):
            projector_reconstruct(params, 3, 12, Truncation(dim=12))


class TestDensity:
    """Test cases for P-representations and their traces"""

    def test_gaussian_raw_trace(self, gaussian_densities):
        """tr ρ = ln(1/q)γ for q < 1 and 1/q for q > 1"""
        assert gaussian_densities[True].trace == pytest.approx(math.log(2.0) * SUB.gamma, rel=1e-10)
        assert gaussian_densities[False].trace == pytest.approx(0.5, rel=1e-10)

    def test_gaussian_is_diagonal(self, gaussian_densities):
        """An isotropic weight gives a diagonal density matrix"""
        for density in gaussian_densities.values():
            assert np.max(np.abs(density.rho - np.diag(np.diag(density.rho)))) == 0.0

    def test_normalized(self, gaussian_densities):
        """normalized() rescales to unit trace"""
        for density in gaussian_densities.values():
            assert np.trace(density.normalized().rho).real == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("nu", [0, 1, 2, 3])
    def test_trace_forms_against_spectral_sum(self, params, gaussian_densities, nu):
        """tr(ρ a†^ν a^ν) in closed form equals Σ ρ(n, n)⟨n|a†^ν a^ν|n⟩"""
        density = gaussian_densities[params.is_sub]
        word = " ".join(["ad"] * nu + ["a"] * nu)
        numeric = density.expectation(word_matrix(params, Truncation(dim=64), word).matrix)
        assert numeric.real == pytest.approx(trace_forms(params, nu, nu), rel=1e-8)

    def test_trace_forms_off_diagonal(self, params):
        """The Gaussian analogue has no coherences"""
        assert trace_forms(params, 2, 1) == 0.0

    def test_trace_forms_closed_form_sub(self):
        """F(ν) = ln q^{−1} γ^{ν+1} q^{−C(ν+1,2)} (q;q)_ν"""
        q, gamma = SUB.q, SUB.gamma
        expected = math.log(2.0) * gamma ** 3 * q ** -3 * (1 - q) * (1 - q ** 2)
        assert trace_forms(SUB, 2, 2) == pytest.approx(expected, rel=1e-12)

    def test_trace_forms_closed_form_super(self):
        """F(ν) = (−γ)^ν q^{−1} (q^{−1};q^{−1})_ν"""
        expected = (-SUPER.gamma) ** 2 * 0.5 * (1 - 0.5) * (1 - 0.25)
        assert trace_forms(SUPER, 2, 2) == pytest.approx(expected, rel=1e-12)

    def test_kerr_expectation(self, params, gaussian_densities):
        """Kerr energy from the trace formula equals the spectral sum"""
        kerr = KerrParams(chi=0.3)
        density = gaussian_densities[params.is_sub]
        numeric = density.expectation(kerr_hamiltonian(params, Truncation(dim=64), kerr).matrix)
        assert kerr_expectation(params, kerr) == pytest.approx(numeric.real, rel=1e-8)

    def test_hamiltonian_trace(self, params, gaussian_densities):
        """tr(ρ(aa† + a†a)) matches the explicit operator"""
        density = gaussian_densities[params.is_sub]
        t = Truncation(dim=64)
        operator = word_matrix(params, t, "a ad").matrix + word_matrix(params, t, "ad a").matrix
        assert hamiltonian_trace(params) == pytest.approx(density.expectation(operator).real, rel=1e-8)

    def test_antinormal_trace(self, params):
        """tr(ρ a a†) = (F(1) + lsq q^λ F(0))/q"""
        expected = (trace_forms(params, 1, 1) + params.scale * trace_forms(params, 0, 0)) / params.q
        value = antinormal_trace(params, 1, 1, t=Truncation(dim=64))
        assert value.real == pytest.approx(expected, rel=1e-8)
        assert abs(value.imag) < 1e-12

    def test_antinormal_display_regime(self):
        """The 𝒪_∞ display is a q > 1 formula"""
        with pytest.raises(RegimeError):
            antinormal_trace_displayed(SUB, 1)

    def test_antinormal_display_finite(self):
        """The 𝒪_∞ series converges for q > 1"""
        assert math.isfinite(antinormal_trace_displayed(SUPER, 1))

    def test_position_trace_closed_form_sub(self):
        """½γ^{3/2}π(q^{−1/2} − 1)(q^{1/2};q)_∞/(q;q)_∞"""
        q, gamma = SUB.q, SUB.gamma
        expected = (
            0.5
            * gamma ** 1.5
            * math.pi
            * (q ** -0.5 - 1.0)
            * q_shifted_inf(q ** 0.5, q).require().real
            / q_shifted_inf(q, q).require().real
        )
        assert position_trace(SUB) == pytest.approx(expected, rel=1e-10)

    def test_position_trace_numeric(self, params):
        """Closed form agrees with quadrature of the defining integral"""
        weight = SeparableWeight(
            log_radial=gaussian_weight().log_radial,
            angular=lambda theta: np.cos(theta) / math.sqrt(2.0),
            label="cosine",
        )
        assert position_trace(params, weight) == pytest.approx(position_trace(params), rel=1e-8)
        assert position_trace(params) == pytest.approx(0.5 * mellin_moment(params, 0.5), rel=1e-14)

    def test_custom_radial_weight(self):
        """φ₂ = e^{−x} gives tr ρ = π∫e^{−x}dx = π"""
        weight = SeparableWeight.from_radial(lambda x: np.exp(-x), label="exponential")
        density = density_from_weight(SUB, weight, Truncation(dim=64))
        assert density.trace == pytest.approx(math.pi, rel=1e-8)
        assert trace_forms(SUB, 0, 0, weight).real == pytest.approx(math.pi, rel=1e-8)

    def test_angular_weight_hermitian(self):
        """A real even angular profile gives a real symmetric density"""
        weight = SeparableWeight(
            log_radial=gaussian_weight().log_radial,
            angular=lambda theta: 1.0 + np.cos(theta),
            label="cardioid",
        )
        density = density_from_weight(SUB, weight, Truncation(dim=16))
        assert abs(density.rho[0, 1]) > 0
        np.testing.assert_allclose(density.rho, density.rho.conj().T, atol=1e-14)

    def test_reproducing_kernel(self, params):
        """ρ(z′, z) = ∫ d²ζ K(z, ζ) ρ(z′, ζ)"""
        density = density_from_weight(params, gaussian_weight(), Truncation(dim=32)).normalized()
        report = reproducing_check(params, density, _points(params))
        assert report.max_residual < 1e-8


class TestExpectations:
    """Test cases for coherent-state expectation values"""

    @pytest.mark.parametrize("m,n", [(0, 0), (1, 0), (2, 1), (1, 3), (3, 3)])
    def test_normal_ordered(self, params, m, n):
        """⟨z|a†ᵐaⁿ|z⟩ = z̄ᵐzⁿ"""
        word = " ".join(["ad"] * m + ["a"] * n) or "I"
        for z in _points(params):
            assert cs_expectation_normal(params, z, m, n) == pytest.approx(
                cs_expectation_oracle(params, z, word), rel=1e-9, abs=1e-14
            )

    @pytest.mark.parametrize("n,m", [(0, 0), (1, 1), (0, 2), (2, 3), (3, 1), (2, 2), (1, 4)])
    def test_antinormal_ordered(self, params, n, m):
        """₁φ₁ closed form matches the truncated matrix product"""
        word = " ".join(["a"] * n + ["ad"] * m) or "I"
        for z in _points(params):
            assert cs_expectation_antinormal(params, z, n, m) == pytest.approx(
                cs_expectation_oracle(params, z, word), rel=1e-9, abs=1e-14
            )

    def test_antinormal_conjugate_symmetry(self, params):
        """⟨z|aⁿa†ᵐ|z⟩ = conj ⟨z|aᵐa†ⁿ|z⟩"""
        z = _points(params)[1]
        assert cs_expectation_antinormal(params, z, 3, 1) == pytest.approx(
            cs_expectation_antinormal(params, z, 1, 3).conjugate()
        )

    def test_quadrature_second_moments(self, params):
        """⟨Q²⟩ and ⟨P²⟩ agree with the ladder-operator oracle"""
        for z in _points(params):
            moments = quadrature_moments(params, z)
            a2 = cs_expectation_oracle(params, z, "a a")
            ad2 = cs_expectation_oracle(params, z, "ad ad")
            mixed = cs_expectation_oracle(params, z, "a ad") + cs_expectation_oracle(params, z, "ad a")
            assert moments.q_squared == pytest.approx((0.5 * (a2 + ad2 + mixed)).real, rel=1e-9)
            assert moments.p_squared == pytest.approx((-0.5 * (a2 + ad2 - mixed)).real, rel=1e-9)

    def test_variance_positive(self, params):
        """ΔQ² = ΔP² = ((q^{−1} − 1)|z|² + lsq q^{λ−1})/2 > 0 on the whole domain"""
        for z in _points(params) + [0.0]:
            moments = quadrature_moments(params, z)
            assert moments.var_q > 0
            assert moments.var_q == pytest.approx(moments.var_p)

    def test_classical_limit(self):
        """ΔQΔP → 1/2 as q → 1 with lsq = 1, λ = 0"""
        for q in (0.999, 1.001):
            p = DeformationParams(q=q, lsq=1.0, lam=0.0)
            assert quadrature_moments(p, 0.3 + 0.1j).uncertainty == pytest.approx(0.5, abs=1e-3)


if __name__ == "__main__":
    pytest.main([__file__])
