"""
Truncated Fock-space representation of the deformed Heisenberg algebra
"""

from typing import Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.kernel.errors import TruncationError
from src.kernel.jackson import structure_phi
from src.kernel.params import DeformationParams

# accepted spellings of the word tokens
TOKENS: Dict[str, str] = {
    "a": "a",
    "ad": "ad",
    "a+": "ad",
    "adag": "ad",
    "a†": "ad",
    "N": "N",
    "I": "I",
}


class Truncation(BaseModel):
    """Basis |0⟩…|dim−1⟩ and the number of rows unaffected by truncation"""

    model_config = ConfigDict(frozen=True)

    dim: int = Field(..., ge=1)
    valid_rows: Optional[int] = None

    @model_validator(mode="after")
    def _check(self) -> "Truncation":
        if self.valid_rows is None:
            object.__setattr__(self, "valid_rows", self.dim)
        if not 1 <= self.valid_rows <= self.dim:
            raise ValueError(f"valid_rows must lie in [1, {self.dim}], got {self.valid_rows}")
        return self

    def for_creations(self, creations: int) -> "Truncation":
        """Window left intact by a word with this many creation operators"""
        return Truncation(dim=self.dim, valid_rows=max(1, self.dim - creations))


class KerrParams(BaseModel):
    """Kerr interaction strength (ħ = ω = 1)"""

    model_config = ConfigDict(frozen=True)

    chi: float = Field(0.0, ge=0)


class FockOperator(BaseModel):
    """Dense matrix on the truncated Fock space"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray
    trunc: Truncation
    word: str = ""

    @model_validator(mode="after")
    def _check(self) -> "FockOperator":
        if self.matrix.shape != (self.trunc.dim, self.trunc.dim):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match dim {self.trunc.dim}")
        if not np.all(np.isfinite(self.matrix)):
            raise ValueError("operator matrix has non-finite entries")
        return self

    @property
    def dim(self) -> int:
        return self.trunc.dim

    def valid_block(self) -> np.ndarray:
        """Top-left block on which truncation has no effect"""
        v = self.trunc.valid_rows
        return self.matrix[:v, :v]


def parse_word(word: str) -> Tuple[str, ...]:
    """Split an operator word such as "ad ad a" into canonical tokens"""
    tokens = []
    for raw in word.replace("*", " ").split():
        if raw not in TOKENS:
            raise ValueError(f"unknown operator token {raw!r}; use a, ad, N or I")
        tokens.append(TOKENS[raw])
    return tuple(tokens)


def build_ladder(p: DeformationParams, t: Truncation) -> Tuple[FockOperator, FockOperator, FockOperator]:
    """a|n⟩ = √φ(n)|n−1⟩, a†|n⟩ = √φ(n+1)|n+1⟩, N|n⟩ = n|n⟩"""
    p.require_positive()
    n = np.arange(1, t.dim)
    lower = np.zeros((t.dim, t.dim), dtype=complex)
    lower[n - 1, n] = np.sqrt(structure_phi(p, n))
    a = FockOperator(matrix=lower, trunc=t, word="a")
    adag = FockOperator(matrix=lower.T.copy(), trunc=t.for_creations(1), word="ad")
    number = FockOperator(matrix=np.diag(np.arange(t.dim)).astype(complex), trunc=t, word="N")
    return a, adag, number


def word_matrix(p: DeformationParams, t: Truncation, word: str) -> FockOperator:
    """Explicit product of ladder matrices, left to right as written"""
    tokens = parse_word(word)
    a, adag, number = build_ladder(p, t)
    lookup = {"a": a.matrix, "ad": adag.matrix, "N": number.matrix, "I": np.eye(t.dim, dtype=complex)}
    result = np.eye(t.dim, dtype=complex)
    for token in tokens:
        result = result @ lookup[token]
    creations = sum(1 for token in tokens if token == "ad")
    return FockOperator(matrix=result, trunc=t.for_creations(creations), word=" ".join(tokens))


def oracle_element(p: DeformationParams, t: Truncation, word: str, r: int, s: int) -> complex:
    """⟨r|word|s⟩ read off the explicit matrix product"""
    length = len(parse_word(word))
    if t.dim < r + s + length + 2:
        raise TruncationError(
            f"dim {t.dim} too small for ⟨{r}|{word}|{s}⟩; need at least {r + s + length + 2}"
        )
    return complex(word_matrix(p, t, word).matrix[r, s])


def commutator_check(p: DeformationParams, t: Truncation, alpha: float = 1.0) -> float:
    """Largest relative deviation of aa† − α a†a from lsq q^λ/(q−1)·(1 − α − q^{−1}(1 − qα) q^{−N}).

    Rows and columns below dim − 1 only; the last row of aa† is cut by truncation.
    """
    a, adag, _ = build_ladder(p, t)
    lhs = a.matrix @ adag.matrix - alpha * adag.matrix @ a.matrix
    n = np.arange(t.dim)
    expected = p.scale / (p.q - 1.0) * (1.0 - alpha - (1.0 - p.q * alpha) * p.q ** (-n - 1.0))
    window = t.dim - 1
    diff = np.abs(lhs - np.diag(expected))[:window, :window]
    scale = np.maximum(1.0, np.abs(expected[:window]))[:, None]
    return float(np.max(diff / scale))


def kerr_hamiltonian(p: DeformationParams, t: Truncation, k: KerrParams) -> FockOperator:
    """H_d = a†a + (χ/2) a†²a², diagonal φ(s)(1 + (χ/2)φ(s−1))"""
    p.require_positive()
    s = np.arange(t.dim)
    phi = structure_phi(p, s)
    phi_prev = structure_phi(p, np.maximum(s - 1, 0))
    diagonal = phi * (1.0 + 0.5 * k.chi * phi_prev)
    return FockOperator(
        matrix=np.diag(diagonal).astype(complex),
        trunc=t,
        word=f"ad a + {k.chi}/2 ad ad a a",
    )
