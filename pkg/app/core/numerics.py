"""
Álgebra linear complexa, DFT unitária, aplicação de circulantes e
aleatoriedade determinística por subfluxos.
"""

import logging
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import circulant

from app.core.errors import InvalidArgumentError

logger = logging.getLogger(__name__)


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@lru_cache(maxsize=32)
def _cached_dft_matrix(n: int) -> np.ndarray:
    idx = np.arange(n)
    matrix = np.exp(-2j * np.pi * np.outer(idx, idx) / n) / np.sqrt(n)
    matrix.setflags(write=False)
    return matrix


def dft_matrix(n: int) -> np.ndarray:
    """
    Matriz da DFT unitária Φ, com entradas exp(-2πi jk/N)/√N.

    Args:
        n: Dimensão (N ≥ 1)

    Returns:
        np.ndarray: Matriz N×N somente leitura
    """
    if n < 1:
        raise InvalidArgumentError(f"Dimensão da DFT deve ser positiva, recebido {n}")
    return _cached_dft_matrix(int(n))


def unitary_dft(v: np.ndarray) -> np.ndarray:
    """
    Aplica a DFT unitária Φ a um vetor (ou às colunas de uma matriz).

    Usa FFT quando N é potência de dois e a matriz densa nos demais casos.
    """
    v = np.asarray(v, dtype=complex)
    n = v.shape[0]
    if _is_power_of_two(n):
        return np.fft.fft(v, axis=0, norm="ortho")
    return dft_matrix(n) @ v


def inverse_unitary_dft(v: np.ndarray) -> np.ndarray:
    """Aplica Φ* (inversa da DFT unitária)."""
    v = np.asarray(v, dtype=complex)
    n = v.shape[0]
    if _is_power_of_two(n):
        return np.fft.ifft(v, axis=0, norm="ortho")
    return dft_matrix(n).conj().T @ v


def circulant_eigenvalues(filter_vector: np.ndarray) -> np.ndarray:
    """Autovalores da circulante com primeira coluna `filter_vector`: √N·Φh."""
    h = np.asarray(filter_vector, dtype=complex)
    return np.sqrt(h.shape[0]) * unitary_dft(h)


def circulant_apply(filter_vector: np.ndarray, v: np.ndarray) -> np.ndarray:
    """
    Calcula Hv para H circulante com primeira coluna `filter_vector`,
    via diagonalização H = Φ* Λ Φ.

    Args:
        filter_vector: Primeira coluna de H (comprimento N)
        v: Vetor de comprimento N

    Returns:
        np.ndarray: Produto Hv

    Raises:
        InvalidArgumentError: Se os comprimentos forem diferentes
    """
    h = np.asarray(filter_vector, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if h.ndim != 1 or v.shape[0] != h.shape[0]:
        raise InvalidArgumentError(
            f"Filtro e vetor devem ter o mesmo comprimento: {h.shape[0]} != {v.shape[0]}"
        )
    eig = circulant_eigenvalues(h)
    if v.ndim == 2:
        eig = eig[:, None]
    return inverse_unitary_dft(eig * unitary_dft(v))


def dense_circulant(filter_vector: np.ndarray) -> np.ndarray:
    """Matriz circulante densa (primeira coluna igual ao filtro)."""
    return circulant(np.asarray(filter_vector, dtype=complex))


def induced_inf_norm(matrix: np.ndarray) -> float:
    """Norma induzida ‖·‖∞: máxima soma absoluta por linha."""
    matrix = np.atleast_2d(matrix)
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(matrix), axis=1)))


def complex_sign(v: np.ndarray) -> np.ndarray:
    """Sinal complexo v/|v| com sgn(0) = 0."""
    v = np.asarray(v, dtype=complex)
    magnitude = np.abs(v)
    out = np.zeros_like(v)
    nonzero = magnitude > 0
    out[nonzero] = v[nonzero] / magnitude[nonzero]
    return out


class RngStream:
    """
    Fluxo aleatório identificado por (master_seed, path).

    A derivação de subfluxos é funcional: depende apenas da semente mestre
    e do caminho, nunca do estado já consumido. Fluxos com o mesmo par
    produzem sequências idênticas.
    """

    def __init__(self, master_seed: int, path: Sequence[int] = ()):
        if master_seed < 0 or master_seed >= 2 ** 64:
            raise InvalidArgumentError(f"Semente mestre fora de 64 bits: {master_seed}")
        if any(int(i) < 0 for i in path):
            raise InvalidArgumentError(f"Índices de caminho devem ser não negativos: {tuple(path)}")
        self._master_seed = int(master_seed)
        self._path: Tuple[int, ...] = tuple(int(i) for i in path)
        self._generator: Optional[np.random.Generator] = None

    @property
    def master_seed(self) -> int:
        return self._master_seed

    @property
    def path(self) -> Tuple[int, ...]:
        return self._path

    @property
    def generator(self) -> np.random.Generator:
        if self._generator is None:
            sequence = np.random.SeedSequence(entropy=self._master_seed, spawn_key=self._path)
            self._generator = np.random.default_rng(sequence)
        return self._generator

    def substream(self, *indices: int) -> "RngStream":
        """Deriva o subfluxo (master_seed, path + indices)."""
        return RngStream(self._master_seed, self._path + tuple(int(i) for i in indices))

    def gaussian(self, m: int, n: int) -> np.ndarray:
        """Matriz m×n real com entradas N(0, 1) i.i.d."""
        return self.generator.standard_normal((m, n))

    def complex_gaussian(self, k: int) -> np.ndarray:
        """Vetor complexo circular com E|z|² = 1 por entrada."""
        g = self.generator.standard_normal((2, k))
        return (g[0] + 1j * g[1]) / np.sqrt(2.0)

    def unit_circle(self, k: int) -> np.ndarray:
        """k valores uniformes no círculo unitário."""
        return np.exp(2j * np.pi * self.generator.random(k))

    def uniform(self, k: int) -> np.ndarray:
        return self.generator.random(k)

    def integer(self, low: int, high: int) -> int:
        """Inteiro uniforme em {low, …, high}."""
        return int(self.generator.integers(low, high + 1))

    def subset_without_replacement(self, n: int, k: int) -> np.ndarray:
        """
        k índices distintos de {0, …, n-1}, na ordem sorteada.

        Raises:
            InvalidArgumentError: Se k > n ou k < 0
        """
        if k < 0 or k > n:
            raise InvalidArgumentError(f"Não é possível sortear {k} índices distintos de {n}")
        return self.generator.choice(n, size=k, replace=False)

    def choice(self, n: int, k: int, probabilities: Optional[np.ndarray] = None) -> np.ndarray:
        """k índices de {0, …, n-1} com reposição, segundo `probabilities`."""
        return self.generator.choice(n, size=k, replace=True, p=probabilities)

    def __repr__(self):
        return f"<RngStream(master_seed={self._master_seed}, path={self._path})>"
