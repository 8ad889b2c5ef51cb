"""
Modelos para perfis de sensor H_1, …, H_C.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from app.core.errors import InvalidArgumentError
from app.core.numerics import circulant_apply, circulant_eigenvalues, dense_circulant


class SamplingMode(str, Enum):
    DISTINCT = "distinct"
    IDENTICAL = "identical"


class ProfileKind(str, Enum):
    DIAGONAL = "diagonal"
    CIRCULANT = "circulant"
    DENSE = "dense"


class ProfileFamily(str, Enum):
    IDENTITY = "identity"
    NONOVERLAPPING = "nonoverlapping"
    ALMOST_IDENTICAL = "almost_identical"
    COMPLEX_UNIT = "complex_unit"
    PIECEWISE_CONSTANT = "piecewise_constant"
    BANDED_COSINE = "banded_cosine"
    CIRCULANT_FILTER = "circulant_filter"
    CIRCULANT_UNIT_EIGEN = "circulant_unit_eigen"
    DFT_LIKE = "dft_like"
    CUSTOM = "custom"


@dataclass(frozen=True, eq=False)
class SensorProfile:
    """
    Perfis H_c de C sensores.

    `data` tem forma (C, N) para perfis diagonais (diagonais) e circulantes
    (filtros, primeira coluna), e (C, N, N) para perfis densos.
    """
    kind: ProfileKind
    data: np.ndarray
    family: ProfileFamily = ProfileFamily.CUSTOM
    mode: Optional[SamplingMode] = None

    def __post_init__(self):
        data = np.array(self.data, dtype=complex)
        expected_ndim = 3 if self.kind == ProfileKind.DENSE else 2
        if data.ndim != expected_ndim:
            raise InvalidArgumentError(
                f"Perfil {self.kind.value} exige dados com {expected_ndim} dimensões, recebido {data.ndim}"
            )
        if self.kind == ProfileKind.DENSE and data.shape[1] != data.shape[2]:
            raise InvalidArgumentError("Perfis densos devem ser matrizes N×N")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def num_sensors(self) -> int:
        return int(self.data.shape[0])

    @property
    def n(self) -> int:
        return int(self.data.shape[1])

    def matrix(self, c: int) -> np.ndarray:
        """Matriz densa H_c."""
        if self.kind == ProfileKind.DIAGONAL:
            return np.diag(self.data[c])
        if self.kind == ProfileKind.CIRCULANT:
            return dense_circulant(self.data[c])
        return np.array(self.data[c])

    def dense(self) -> np.ndarray:
        """Pilha (C, N, N) das matrizes H_c."""
        return np.stack([self.matrix(c) for c in range(self.num_sensors)])

    def _diagonal(self, c: int, v: np.ndarray) -> np.ndarray:
        d = self.data[c]
        return d if np.ndim(v) == 1 else d[:, None]

    def apply(self, c: int, v: np.ndarray) -> np.ndarray:
        """H_c v (v vetor ou matriz de colunas)."""
        if self.kind == ProfileKind.DIAGONAL:
            return self._diagonal(c, v) * v
        if self.kind == ProfileKind.CIRCULANT:
            return circulant_apply(self.data[c], v)
        return self.data[c] @ v

    def adjoint_apply(self, c: int, v: np.ndarray) -> np.ndarray:
        """H_c* v (v vetor ou matriz de colunas)."""
        if self.kind == ProfileKind.DIAGONAL:
            return np.conj(self._diagonal(c, v)) * v
        if self.kind == ProfileKind.CIRCULANT:
            # H* é circulante com filtro conj(h[-k mod N])
            return circulant_apply(np.conj(np.roll(self.data[c][::-1], 1)), v)
        return self.data[c].conj().T @ v

    def right_multiply(self, c: int, rows: np.ndarray) -> np.ndarray:
        """rows · H_c para um bloco de linhas (k×N)."""
        rows = np.asarray(rows, dtype=complex)
        if self.kind == ProfileKind.DIAGONAL:
            return rows * self.data[c][None, :]
        return rows @ self.matrix(c)

    def eigenvalues(self, c: int) -> np.ndarray:
        """Autovalores Λ_c de um perfil circulante (ou a diagonal de um perfil diagonal)."""
        if self.kind == ProfileKind.CIRCULANT:
            return circulant_eigenvalues(self.data[c])
        if self.kind == ProfileKind.DIAGONAL:
            return np.array(self.data[c])
        raise InvalidArgumentError("Autovalores só são definidos para perfis diagonais ou circulantes")

    def with_mode(self, mode: SamplingMode) -> "SensorProfile":
        return SensorProfile(kind=self.kind, data=self.data, family=self.family, mode=mode)

    def __repr__(self):
        return (
            f"<SensorProfile(kind={self.kind.value}, family={self.family.value}, "
            f"C={self.num_sensors}, N={self.n})>"
        )
