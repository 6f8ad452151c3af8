"""
Test suite for the truncated Fock representation
"""

import itertools

import numpy as np
import pytest
from pydantic import ValidationError

from src.fock.elements import antinormal_element, normal_element
from src.fock.operators import (
    FockOperator,
    KerrParams,
    Truncation,
    build_ladder,
    commutator_check,
    kerr_hamiltonian,
    oracle_element,
    parse_word,
    word_matrix,
)
from src.kernel.errors import ParameterError, TruncationError
from src.kernel.jackson import structure_phi
from src.kernel.params import DeformationParams

PARAM_GRID = [
    DeformationParams(q=q, lsq=lsq, lam=lam)
    for q, lsq, lam in itertools.product([0.5, 2.0], [1.0, 0.3], [0.0, 1.0])
]


@pytest.fixture(params=[0.5, 2.0], ids=["sub", "super"])
def params(request):
    """One parameter set per regime"""
    return DeformationParams(q=request.param, lsq=1.0, lam=1.0)


def _normal_word(m: int, n: int) -> str:
    return " ".join(["ad"] * m + ["a"] * n)


def _antinormal_word(n: int, m: int) -> str:
    return " ".join(["a"] * n + ["ad"] * m)


class TestTruncation:
    """Test cases for truncation metadata"""

    def test_valid_rows_default(self):
        """valid_rows defaults to dim"""
        assert Truncation(dim=8).valid_rows == 8

    def test_valid_rows_bounds(self):
        """valid_rows must lie in [1, dim]"""
        with pytest.raises(ValidationError):
            Truncation(dim=4, valid_rows=5)

    def test_creation_window(self):
        """Each creation operator removes one trusted row"""
        assert Truncation(dim=10).for_creations(3).valid_rows == 7

    def test_operator_shape_checked(self):
        """Matrix shape must match the truncation"""
        with pytest.raises(ValidationError):
            FockOperator(matrix=np.zeros((3, 3)), trunc=Truncation(dim=4))


class TestLadder:
    """Test cases for the ladder operators"""

    def test_vacuum_annihilation(self, params):
        """a|0⟩ = 0"""
        a, _, _ = build_ladder(params, Truncation(dim=12))
        assert np.all(a.matrix[:, 0] == 0)

    def test_single_off_diagonal(self, params):
        """a and a† live on one off-diagonal each"""
        a, adag, _ = build_ladder(params, Truncation(dim=12))
        assert np.count_nonzero(a.matrix - np.diag(np.diag(a.matrix, 1), 1)) == 0
        assert np.count_nonzero(adag.matrix - np.diag(np.diag(adag.matrix, -1), -1)) == 0

    def test_number_of_quanta(self, params):
        """a†a|n⟩ = φ(n)|n⟩"""
        a, adag, _ = build_ladder(params, Truncation(dim=12))
        diagonal = np.diag(adag.matrix @ a.matrix).real
        assert np.allclose(diagonal, structure_phi(params, np.arange(12)), rtol=1e-13)

    @pytest.mark.parametrize("p", PARAM_GRID, ids=lambda p: f"q{p.q}-l{p.lsq}-lam{p.lam}")
    def test_commutator(self, p):
        """aa† − a†a = lsq q^{λ−N−1} below the truncation edge"""
        assert commutator_check(p, Truncation(dim=16)) < 1e-12

    @pytest.mark.parametrize("p", PARAM_GRID, ids=lambda p: f"q{p.q}-l{p.lsq}-lam{p.lam}")
    def test_deformed_commutator(self, p):
        """aa† − q^{−1}a†a = lsq q^{λ−1}"""
        assert commutator_check(p, Truncation(dim=16), alpha=1.0 / p.q) < 1e-12

    def test_number_commutators(self, params):
        """[N, a†] = a† and [N, a] = −a"""
        t = Truncation(dim=12)
        a, adag, number = build_ladder(params, t)
        window = t.dim - 1
        raising = number.matrix @ adag.matrix - adag.matrix @ number.matrix
        lowering = number.matrix @ a.matrix - a.matrix @ number.matrix
        assert np.allclose(raising[:window, :window], adag.matrix[:window, :window], atol=1e-12)
        assert np.allclose(lowering[:window, :window], -a.matrix[:window, :window], atol=1e-12)

    def test_negative_lsq_rejected(self):
        """The Fock representation needs lsq > 0"""
        with pytest.raises(ParameterError):
            build_ladder(DeformationParams(q=0.5, lsq=-1.0), Truncation(dim=4))


class TestWords:
    """Test cases for operator words and the matrix oracle"""

    def test_parse_word_aliases(self):
        """Creation operator spellings are normalized"""
        assert parse_word("a+ adag a† a N I") == ("ad", "ad", "ad", "a", "N", "I")

    def test_parse_word_rejects_unknown(self):
        """Unknown tokens are rejected"""
        with pytest.raises(ValueError):
            parse_word("a b")

    def test_identity_word(self, params):
        """I → δ_{r,s}"""
        t = Truncation(dim=10)
        assert oracle_element(params, t, "I", 3, 3) == 1.0
        assert oracle_element(params, t, "I", 3, 2) == 0.0

    def test_number_word(self, params):
        """a†a on |k⟩ gives φ(k)"""
        t = Truncation(dim=16)
        for k in range(6):
            assert oracle_element(params, t, "ad a", k, k).real == pytest.approx(structure_phi(params, k))

    def test_truncation_guard(self, params):
        """Too small a basis is rejected"""
        with pytest.raises(TruncationError):
            oracle_element(params, Truncation(dim=5), "ad a", 2, 2)

    def test_word_valid_rows(self, params):
        """Words record the rows unaffected by truncation"""
        op = word_matrix(params, Truncation(dim=10), "ad ad a")
        assert op.trunc.valid_rows == 8
        assert op.word == "ad ad a"


class TestLemma:
    """Test cases for closed-form normal and anti-normal matrix elements"""

    def test_delta_selection(self, params):
        """Entries off the selection rule vanish"""
        assert normal_element(params, 3, 2, 1, 3) == 0.0
        assert antinormal_element(params, 3, 2, 1, 3) == 0.0

    def test_number_operator(self, params):
        """⟨s|a†a|s⟩ = φ(s) and ⟨s|aa†|s⟩ = φ(s + 1)"""
        for s in range(8):
            assert normal_element(params, s, 1, 1, s) == pytest.approx(structure_phi(params, s))
            assert antinormal_element(params, s, 1, 1, s) == pytest.approx(structure_phi(params, s + 1))

    @pytest.mark.parametrize("p", PARAM_GRID, ids=lambda p: f"q{p.q}-l{p.lsq}-lam{p.lam}")
    def test_normal_matches_oracle(self, p):
        """⟨r|a†ᵐaⁿ|s⟩ agrees with the explicit matrix product"""
        t = Truncation(dim=32)
        for m, n in itertools.product(range(6), repeat=2):
            matrix = word_matrix(p, t, _normal_word(m, n)).matrix
            for r, s in itertools.product(range(11), repeat=2):
                expected = matrix[r, s].real
                assert normal_element(p, r, m, n, s) == pytest.approx(expected, rel=1e-10, abs=0.0)

    @pytest.mark.parametrize("p", PARAM_GRID, ids=lambda p: f"q{p.q}-l{p.lsq}-lam{p.lam}")
    def test_antinormal_matches_oracle(self, p):
        """⟨r|aⁿa†ᵐ|s⟩ agrees with the explicit matrix product"""
        t = Truncation(dim=32)
        for n, m in itertools.product(range(6), repeat=2):
            matrix = word_matrix(p, t, _antinormal_word(n, m)).matrix
            for r, s in itertools.product(range(11), repeat=2):
                expected = matrix[r, s].real
                assert antinormal_element(p, r, n, m, s) == pytest.approx(expected, rel=1e-10, abs=0.0)

    def test_oracle_single_element(self, params):
        """oracle_element reads the same entry as the closed form"""
        t = Truncation(dim=16)
        for s in range(4):
            r = s + 2
            expected = antinormal_element(params, r, 1, 3, s)
            assert oracle_element(params, t, "a ad ad ad", r, s).real == pytest.approx(expected, rel=1e-10)

    def test_diagonal_branches_agree(self, params):
        """Both normal-form branches coincide at n = m"""
        for n, s in itertools.product(range(5), range(9)):
            creation = normal_element(params, s, n, n, s)
            annihilation = normal_element(params, s, n, n, s, branch="annihilation")
            assert creation == pytest.approx(annihilation, rel=1e-12, abs=0.0)

    def test_wrong_branch_rejected(self, params):
        """Branches are only defined on their side of n = m"""
        with pytest.raises(ValueError):
            normal_element(params, 3, 1, 2, 4, branch="creation")

    def test_hermiticity(self, params):
        """⟨r|aⁿa†ᵐ|s⟩ = conj ⟨s|aᵐa†ⁿ|r⟩"""
        for r, n, m, s in itertools.product(range(6), range(4), range(4), range(6)):
            left = antinormal_element(params, r, n, m, s)
            right = np.conj(antinormal_element(params, s, m, n, r))
            assert left == pytest.approx(right, rel=1e-12, abs=0.0)


class TestKerr:
    """Test cases for the Kerr Hamiltonian"""

    def test_chi_zero_is_number_operator(self, params):
        """χ = 0 reduces to a†a"""
        op = kerr_hamiltonian(params, Truncation(dim=10), KerrParams(chi=0.0))
        assert np.allclose(np.diag(op.matrix).real, structure_phi(params, np.arange(10)))

    def test_vacuum_entry(self, params):
        """⟨0|H|0⟩ = 0"""
        op = kerr_hamiltonian(params, Truncation(dim=10), KerrParams(chi=0.7))
        assert op.matrix[0, 0] == 0.0

    def test_matches_word_oracle(self, params):
        """Diagonal equals a†a + (χ/2)a†²a²"""
        t = Truncation(dim=14)
        chi = 0.7
        op = kerr_hamiltonian(params, t, KerrParams(chi=chi))
        oracle = word_matrix(params, t, "ad a").matrix + 0.5 * chi * word_matrix(params, t, "ad ad a a").matrix
        assert np.allclose(op.matrix, oracle, rtol=1e-12, atol=1e-12)

    def test_negative_chi_rejected(self):
        """χ ≥ 0"""
        with pytest.raises(ValidationError):
            KerrParams(chi=-1.0)


if __name__ == "__main__":
    pytest.main([__file__])
