"""
Geração de sinais esparsos, partições e erros de melhor aproximação.
"""

import logging
import math
from typing import Union

import numpy as np

from app.core.errors import InfeasibleSpecError, InvalidArgumentError
from app.core.numerics import RngStream
from app.models.signal import LevelScheme, Partition, SignalModel, SignalSpec

logger = logging.getLogger(__name__)

_COUNT_SLACK = 1e-9


def interleaved_partition(n: int, c: int) -> Partition:
    """
    Partição intercalada I_c = {c, c+C, c+2C, …}.

    Raises:
        InvalidArgumentError: Se C não divide N
    """
    if c < 1 or n % c != 0:
        raise InvalidArgumentError(f"C={c} deve dividir N={n} na partição intercalada")
    return Partition(n=n, sets=tuple(np.arange(level, n, c) for level in range(c)))


def block_partition(n: int, c: int) -> Partition:
    """Partição em blocos contíguos de tamanho N/C."""
    if c < 1 or n % c != 0:
        raise InvalidArgumentError(f"C={c} deve dividir N={n} na partição em blocos")
    width = n // c
    return Partition(n=n, sets=tuple(np.arange(level * width, (level + 1) * width) for level in range(c)))


def single_level_partition(n: int) -> Partition:
    return Partition(n=n, sets=(np.arange(n),))


def support_of(x: np.ndarray) -> np.ndarray:
    return np.flatnonzero(np.asarray(x) != 0)


def level_counts(x: np.ndarray, partition: Partition) -> np.ndarray:
    """Número de entradas não nulas de x em cada nível."""
    nonzero = np.asarray(x) != 0
    return np.array([int(np.count_nonzero(nonzero[s])) for s in partition.sets])


def equidistribution_check(x: np.ndarray, partition: Partition, s: int, lam: float) -> bool:
    """Verdadeiro se toda contagem por nível é ≤ λs/C."""
    limit = lam * s / partition.num_levels
    return bool(np.all(level_counts(x, partition) <= limit + _COUNT_SLACK))


def _validate(spec: SignalSpec) -> None:
    if spec.model == SignalModel.SPARSE:
        if spec.s is None or not 1 <= spec.s <= spec.n:
            raise InfeasibleSpecError(f"Esparsidade s={spec.s} fora de [1, {spec.n}]")
    elif spec.model == SignalModel.SPARSE_IN_LEVELS:
        if spec.levels is None or spec.levels.partition.n != spec.n:
            raise InfeasibleSpecError("Modelo por níveis exige esquema compatível com N")
    elif spec.model == SignalModel.CLUSTERED:
        if spec.s is None or spec.lam is None or spec.start is None:
            raise InfeasibleSpecError("Modelo agrupado exige s, λ e início da faixa")
        width = spec.band_width
        if spec.s < 1 or width < spec.s:
            raise InfeasibleSpecError(f"Faixa de largura {width} não comporta s={spec.s}")
        if spec.start < 0 or spec.start + width > spec.n:
            raise InfeasibleSpecError(
                f"Faixa {{{spec.start}, …, {spec.start + width - 1}}} excede N={spec.n}"
            )
    elif spec.model == SignalModel.EQUIDISTRIBUTED:
        if spec.s is None or spec.lam is None or spec.partition is None:
            raise InfeasibleSpecError("Modelo equidistribuído exige s, λ e partição")
        levels = spec.partition.num_levels
        per_level = math.ceil(spec.s / levels)
        if per_level > spec.lam * spec.s / levels + _COUNT_SLACK:
            raise InfeasibleSpecError(f"λ={spec.lam} não permite distribuir s={spec.s} em {levels} níveis")
        if per_level > min(spec.partition.sizes):
            raise InfeasibleSpecError(f"s={spec.s} excede a capacidade dos níveis")


def _support(spec: SignalSpec, rng: RngStream) -> np.ndarray:
    if spec.model == SignalModel.SPARSE:
        return rng.subset_without_replacement(spec.n, spec.s)

    if spec.model == SignalModel.SPARSE_IN_LEVELS:
        parts = []
        for level, s_c in zip(spec.levels.partition.sets, spec.levels.local_sparsities):
            picked = rng.subset_without_replacement(level.size, s_c)
            parts.append(level[picked])
        return np.concatenate(parts) if parts else np.array([], dtype=int)

    if spec.model == SignalModel.CLUSTERED:
        offsets = rng.subset_without_replacement(spec.band_width, spec.s)
        return spec.start + offsets

    levels = spec.partition.num_levels
    base, extra = divmod(spec.s, levels)
    counts = np.full(levels, base)
    counts[rng.subset_without_replacement(levels, extra)] += 1
    scheme = LevelScheme(partition=spec.partition, local_sparsities=tuple(counts))
    return _support(SignalSpec(model=SignalModel.SPARSE_IN_LEVELS, n=spec.n, levels=scheme), rng)


def gen_signal(spec: SignalSpec, rng: RngStream) -> np.ndarray:
    """
    Gera um sinal com suporte sorteado conforme o modelo e entradas
    não nulas uniformes no círculo unitário.

    Args:
        spec: Especificação do sinal
        rng: Fluxo aleatório

    Returns:
        np.ndarray: Vetor complexo de comprimento N

    Raises:
        InfeasibleSpecError: Se a especificação for inviável
    """
    _validate(spec)
    support = np.sort(_support(spec, rng))
    x = np.zeros(spec.n, dtype=complex)
    x[support] = rng.unit_circle(support.size)
    return x


def _greedy_residual(magnitudes: np.ndarray, keep: int) -> float:
    if keep >= magnitudes.size:
        return 0.0
    # empates resolvidos pelo menor índice (ordenação estável)
    order = np.argsort(-magnitudes, kind="stable")
    return float(np.sum(magnitudes[order[keep:]]))


def best_approx_error(x: np.ndarray, model: Union[int, LevelScheme]) -> float:
    """
    Erro ℓ1 da melhor aproximação s-esparsa (modelo inteiro) ou
    esparsa por níveis (LevelScheme).
    """
    magnitudes = np.abs(np.asarray(x, dtype=complex))
    if isinstance(model, LevelScheme):
        if model.partition.n != magnitudes.size:
            raise InvalidArgumentError("Esquema de níveis incompatível com o comprimento de x")
        return float(sum(
            _greedy_residual(magnitudes[level], s_c)
            for level, s_c in zip(model.partition.sets, model.local_sparsities)
        ))
    if model < 0:
        raise InvalidArgumentError(f"Esparsidade negativa: {model}")
    return _greedy_residual(magnitudes, int(model))
