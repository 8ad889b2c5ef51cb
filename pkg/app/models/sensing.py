"""
Modelos para ensembles de linhas, sistemas paralelos e medições.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from app.core.errors import InvalidArgumentError
from app.core.numerics import dft_matrix
from app.models.profile import SamplingMode, SensorProfile


class EnsembleKind(str, Enum):
    SUBSAMPLED_DFT = "subsampled_dft"
    GAUSSIAN = "gaussian"
    EXPLICIT_ATOMS = "explicit_atoms"


class DftGrid(str, Enum):
    FULL = "full"
    DECIMATED = "decimated"


@dataclass(frozen=True, eq=False)
class Ensemble:
    """
    Distribuição das linhas de amostragem a*.

    subsampled_dft: átomos a_k = √N·conj(linha k de Φ), k na grade completa
    ou na grade decimada {0, C, 2C, …}; gaussian: entradas reais N(0,1);
    explicit_atoms: lista de átomos (linhas de `atoms`) com probabilidades.
    """
    kind: EnsembleKind
    n: int
    grid: DftGrid = DftGrid.FULL
    decimation: int = 1
    atoms: Optional[np.ndarray] = None
    probabilities: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.n < 1:
            raise InvalidArgumentError(f"Dimensão do ensemble deve ser positiva: {self.n}")
        if self.kind == EnsembleKind.SUBSAMPLED_DFT and self.grid == DftGrid.DECIMATED:
            if self.decimation < 1 or self.n % self.decimation != 0:
                raise InvalidArgumentError(
                    f"Fator de decimação {self.decimation} deve dividir N={self.n}"
                )
        if self.kind == EnsembleKind.EXPLICIT_ATOMS:
            atoms = np.atleast_2d(np.array(self.atoms, dtype=complex))
            if atoms.shape[1] != self.n:
                raise InvalidArgumentError(f"Átomos devem ter comprimento {self.n}")
            if self.probabilities is None:
                probs = np.full(atoms.shape[0], 1.0 / atoms.shape[0])
            else:
                probs = np.asarray(self.probabilities, dtype=float)
            if probs.shape != (atoms.shape[0],) or np.any(probs < 0):
                raise InvalidArgumentError("Probabilidades devem ser não negativas, uma por átomo")
            if abs(probs.sum() - 1.0) > 1e-12:
                raise InvalidArgumentError(f"Probabilidades somam {probs.sum()}, esperado 1")
            atoms.setflags(write=False)
            object.__setattr__(self, "atoms", atoms)
            object.__setattr__(self, "probabilities", probs)

    @property
    def is_finite(self) -> bool:
        return self.kind != EnsembleKind.GAUSSIAN

    def grid_indices(self) -> np.ndarray:
        """Frequências disponíveis para o ensemble DFT."""
        if self.grid == DftGrid.DECIMATED:
            return np.arange(0, self.n, self.decimation)
        return np.arange(self.n)

    @property
    def num_atoms(self) -> Optional[int]:
        if self.kind == EnsembleKind.SUBSAMPLED_DFT:
            return int(self.grid_indices().size)
        if self.kind == EnsembleKind.EXPLICIT_ATOMS:
            return int(self.atoms.shape[0])
        return None

    def atom_matrix(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Átomos (K×N, um por linha) e suas probabilidades.

        Raises:
            InvalidArgumentError: Para ensembles sem átomos finitos
        """
        if self.kind == EnsembleKind.SUBSAMPLED_DFT:
            rows = np.sqrt(self.n) * dft_matrix(self.n)[self.grid_indices()]
            k = rows.shape[0]
            return np.conj(rows), np.full(k, 1.0 / k)
        if self.kind == EnsembleKind.EXPLICIT_ATOMS:
            return np.array(self.atoms), np.array(self.probabilities)
        raise InvalidArgumentError("Ensemble gaussiano não possui conjunto finito de átomos")

    def second_moment(self) -> np.ndarray:
        """E(aa*) exato para ensembles finitos; identidade para o gaussiano."""
        if self.kind == EnsembleKind.GAUSSIAN:
            return np.eye(self.n, dtype=complex)
        atoms, probs = self.atom_matrix()
        return (atoms.T * probs) @ atoms.conj()

    def __repr__(self):
        return f"<Ensemble(kind={self.kind.value}, n={self.n}, grid={self.grid.value})>"


@dataclass(frozen=True, eq=False)
class ParallelSystem:
    """
    Sistema A = [A_1; …; A_C] já normalizado por 1/√p.

    distinct: `draws[c]` são as m_c linhas brutas do sensor c, p = m;
    identical: `draws[0]` são as m/C linhas brutas compartilhadas, p = m/C.
    """
    mode: SamplingMode
    profile: SensorProfile
    ensembles: Tuple[Ensemble, ...]
    row_counts: Tuple[int, ...]
    matrix: np.ndarray
    draws: Tuple[np.ndarray, ...]

    def __post_init__(self):
        self.matrix.setflags(write=False)

    @property
    def m(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def n(self) -> int:
        return int(self.matrix.shape[1])

    @property
    def num_sensors(self) -> int:
        return self.profile.num_sensors

    @property
    def num_draws(self) -> int:
        """p: número de sorteios independentes."""
        if self.mode == SamplingMode.IDENTICAL:
            return int(self.draws[0].shape[0])
        return self.m

    @property
    def block_size(self) -> int:
        """D: linhas de A produzidas por sorteio."""
        return self.num_sensors if self.mode == SamplingMode.IDENTICAL else 1

    def row_blocks(self) -> Tuple[slice, ...]:
        """Faixas de linhas de A correspondentes a cada sensor."""
        bounds = np.concatenate([[0], np.cumsum(self.row_counts)])
        return tuple(slice(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]))

    def draw_rows(self, k: int) -> np.ndarray:
        """Linhas de A geradas pelo sorteio k."""
        if self.mode == SamplingMode.IDENTICAL:
            p = self.num_draws
            return np.arange(self.num_sensors) * p + k
        return np.array([k])

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return self.matrix @ x

    def rmatvec(self, y: np.ndarray) -> np.ndarray:
        return self.matrix.conj().T @ y

    def __repr__(self):
        return (
            f"<ParallelSystem(mode={self.mode.value}, C={self.num_sensors}, "
            f"m={self.m}, N={self.n})>"
        )


@dataclass(frozen=True, eq=False)
class MeasurementSet:
    """Medições y = Ax + e com limite de ruído eta ≥ 0."""
    y: np.ndarray
    eta: float = 0.0
    noise: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.eta < 0:
            raise InvalidArgumentError(f"Limite de ruído negativo: {self.eta}")
