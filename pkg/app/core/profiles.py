"""
Construção, validação e normalização dos perfis de sensor H_1, …, H_C.

Modo distinct exige (1/C) Σ H_c* H_c = I; modo identical exige Σ H_c* H_c = I.
"""

import logging
from typing import Optional, Sequence

import numpy as np

from app.core.errors import InvalidArgumentError, IsometryError
from app.core.numerics import (
    RngStream,
    circulant_eigenvalues,
    dft_matrix,
    induced_inf_norm,
    inverse_unitary_dft,
)
from app.core.signals import block_partition, interleaved_partition
from app.models.profile import ProfileFamily, ProfileKind, SamplingMode, SensorProfile
from app.models.signal import Partition
from app.schemas.profile import IsometryReport, MixingKind, PartitionKind, ProfileNorms, ProfileSpec

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-10


def _mode_scale(mode: SamplingMode, num_sensors: int) -> float:
    """Fator que multiplica Σ H_c* H_c para formar M."""
    return 1.0 / num_sensors if mode == SamplingMode.DISTINCT else 1.0


def _amplitude(mode: SamplingMode, num_sensors: int) -> float:
    """Amplitude de perfis cujas energias por coordenada somam 1."""
    return np.sqrt(num_sensors) if mode == SamplingMode.DISTINCT else 1.0


# Matrizes de mistura

def dft_mixing(num_sensors: int) -> np.ndarray:
    """DFT unitária C×C."""
    return np.array(dft_matrix(num_sensors))


def identity_mixing(num_sensors: int) -> np.ndarray:
    return np.eye(num_sensors, dtype=complex)


def banded_mixing(row: Sequence[float]) -> np.ndarray:
    """Mistura circulante V_{c,d} = w_{(c-d) mod C}."""
    w = np.asarray(row, dtype=complex)
    c = w.size
    idx = (np.arange(c)[:, None] - np.arange(c)[None, :]) % c
    return w[idx]


def check_mixing(mixing: np.ndarray, mode: SamplingMode) -> float:
    """
    Desvio da matriz de mistura em relação à condição do modo.

    distinct: colunas com norma ℓ2 unitária; identical: V*V = I.
    """
    mixing = np.asarray(mixing, dtype=complex)
    if mode == SamplingMode.DISTINCT:
        return float(np.max(np.abs(np.sum(np.abs(mixing) ** 2, axis=0) - 1.0)))
    gram = mixing.conj().T @ mixing
    return float(np.max(np.abs(gram - np.eye(mixing.shape[1]))))


# Famílias

def identity_profile(n: int) -> SensorProfile:
    """Perfil de sensor único H_1 = I."""
    return SensorProfile(
        kind=ProfileKind.DIAGONAL, data=np.ones((1, n)), family=ProfileFamily.IDENTITY,
        mode=SamplingMode.IDENTICAL,
    )


def nonoverlapping(partition: Partition, mode: SamplingMode) -> SensorProfile:
    """H_c = √C P_{I_c} (distinct) ou H_c = P_{I_c} (identical)."""
    c = partition.num_levels
    data = np.zeros((c, partition.n), dtype=complex)
    for level, indices in enumerate(partition.sets):
        data[level, indices] = _amplitude(mode, c)
    return SensorProfile(kind=ProfileKind.DIAGONAL, data=data, family=ProfileFamily.NONOVERLAPPING, mode=mode)


def almost_identical(
    lambdas: Sequence[complex],
    n: int,
    mode: SamplingMode,
    base: Optional[np.ndarray] = None,
) -> SensorProfile:
    """
    H_c = λ_c H, com H diagonal de entradas unimodulares.

    Raises:
        IsometryError: Se Σ|λ_c|² ≠ C (distinct) ou ≠ 1 (identical)
    """
    weights = np.asarray(lambdas, dtype=complex)
    c = weights.size
    base = np.ones(n, dtype=complex) if base is None else np.asarray(base, dtype=complex)
    if np.max(np.abs(np.abs(base) - 1.0)) > DEFAULT_TOLERANCE:
        raise IsometryError("O perfil base H deve ter entradas de módulo 1")
    target = float(c) if mode == SamplingMode.DISTINCT else 1.0
    energy = float(np.sum(np.abs(weights) ** 2))
    if abs(energy - target) > DEFAULT_TOLERANCE:
        raise IsometryError(f"Σ|λ_c|² = {energy:.12g}, esperado {target:g} no modo {mode.value}")
    data = weights[:, None] * base[None, :]
    return SensorProfile(kind=ProfileKind.DIAGONAL, data=data, family=ProfileFamily.ALMOST_IDENTICAL, mode=mode)


def complex_unit(num_sensors: int, n: int, mode: SamplingMode, rng: RngStream) -> SensorProfile:
    """Perfis diagonais com entradas complexas unimodulares sorteadas."""
    phases = np.stack([rng.substream(c).unit_circle(n) for c in range(num_sensors)])
    scale = 1.0 if mode == SamplingMode.DISTINCT else 1.0 / np.sqrt(num_sensors)
    return SensorProfile(
        kind=ProfileKind.DIAGONAL, data=scale * phases, family=ProfileFamily.COMPLEX_UNIT, mode=mode,
    )


def piecewise_constant(mixing: np.ndarray, partition: Partition, mode: SamplingMode) -> SensorProfile:
    """
    H_c = √C Σ_d V_{c,d} P_{I_d} (distinct) ou Σ_d V_{c,d} P_{I_d} (identical).

    Raises:
        IsometryError: Se V não satisfaz a condição do modo
    """
    mixing = np.asarray(mixing, dtype=complex)
    c = partition.num_levels
    if mixing.shape != (c, c):
        raise InvalidArgumentError(f"Mistura deve ser {c}×{c}, recebido {mixing.shape}")
    deviation = check_mixing(mixing, mode)
    if deviation > DEFAULT_TOLERANCE:
        raise IsometryError(f"Matriz de mistura inválida para o modo {mode.value}: desvio {deviation:.3g}")
    labels = partition.level_of()
    data = _amplitude(mode, c) * mixing[:, labels]
    return SensorProfile(kind=ProfileKind.DIAGONAL, data=data, family=ProfileFamily.PIECEWISE_CONSTANT, mode=mode)


def banded_cosine(num_sensors: int, n: int, mode: SamplingMode, width_factor: float = 2.0) -> SensorProfile:
    """
    Perfis diagonais em banda: cosseno elevado de largura width_factor·N/C
    centrado em (c+½)N/C, vezes a fase linear em ((c)2π/C, (c+1)2π/C],
    normalizados para a isometria do modo.
    """
    if width_factor <= 0:
        raise InvalidArgumentError(f"Largura de banda deve ser positiva: {width_factor}")
    width = width_factor * n / num_sensors
    positions = np.arange(n) + 0.5
    raw = np.zeros((num_sensors, n), dtype=complex)
    for c in range(num_sensors):
        center = (c + 0.5) * n / num_sensors
        distance = positions - center
        magnitude = np.where(np.abs(distance) < width / 2, 0.5 * (1.0 + np.cos(2 * np.pi * distance / width)), 0.0)
        theta = c * 2 * np.pi / num_sensors + (np.arange(n) + 1) * 2 * np.pi / (n * num_sensors)
        raw[c] = magnitude * np.exp(1j * theta)
    profile = normalize_to_isometry(raw, mode)
    return SensorProfile(kind=ProfileKind.DIAGONAL, data=profile.data, family=ProfileFamily.BANDED_COSINE, mode=mode)


def circulant_filter(filters: np.ndarray, mode: SamplingMode, normalize: bool = True) -> SensorProfile:
    """
    Perfis circulantes com filtros h_c dados.

    Com `normalize`, os autovalores são reescalados frequência a frequência
    para satisfazer a isometria; sem, a isometria é apenas verificada.
    """
    filters = np.atleast_2d(np.asarray(filters, dtype=complex))
    c, n = filters.shape
    if normalize:
        eig = np.stack([circulant_eigenvalues(h) for h in filters])
        mass = _mode_scale(mode, c) * np.sum(np.abs(eig) ** 2, axis=0)
        if np.any(mass <= 0):
            raise IsometryError("Existe frequência sem energia em nenhum filtro")
        eig = eig / np.sqrt(mass)[None, :]
        filters = np.stack([inverse_unitary_dft(e) / np.sqrt(n) for e in eig])
    profile = SensorProfile(kind=ProfileKind.CIRCULANT, data=filters, family=ProfileFamily.CIRCULANT_FILTER, mode=mode)
    report = check_isometry(profile, mode)
    if not report.passed:
        raise IsometryError(f"Filtros circulantes não isométricos: desvio {report.max_deviation:.3g}")
    return profile


def circulant_unit_eigen(num_sensors: int, n: int, mode: SamplingMode, rng: RngStream) -> SensorProfile:
    """H_c = Φ* Λ_c Φ com autovalores sorteados no círculo unitário."""
    scale = 1.0 if mode == SamplingMode.DISTINCT else 1.0 / np.sqrt(num_sensors)
    filters = np.stack([
        scale * inverse_unitary_dft(rng.substream(c).unit_circle(n)) / np.sqrt(n)
        for c in range(num_sensors)
    ])
    return SensorProfile(
        kind=ProfileKind.CIRCULANT, data=filters, family=ProfileFamily.CIRCULANT_UNIT_EIGEN, mode=mode,
    )


def dft_like(num_sensors: int, n: int, mode: SamplingMode) -> SensorProfile:
    """(H_c)_jj = exp(2πi(c-j)/C)/√C, reescalado por √C no modo distinct."""
    if n % num_sensors != 0:
        raise InvalidArgumentError(f"C={num_sensors} deve dividir N={n}")
    c_idx = np.arange(1, num_sensors + 1)[:, None]
    j_idx = np.arange(1, n + 1)[None, :]
    data = np.exp(2j * np.pi * (c_idx - j_idx) / num_sensors) / np.sqrt(num_sensors)
    data = _amplitude(mode, num_sensors) * data
    return SensorProfile(kind=ProfileKind.DIAGONAL, data=data, family=ProfileFamily.DFT_LIKE, mode=mode)


def _partition_for(spec: ProfileSpec, num_sensors: int, n: int, partition: Optional[Partition]) -> Partition:
    if partition is not None:
        return partition
    if spec.partition == PartitionKind.BLOCKS:
        return block_partition(n, num_sensors)
    return interleaved_partition(n, num_sensors)


def _mixing_for(spec: ProfileSpec, num_sensors: int) -> np.ndarray:
    if spec.mixing == MixingKind.IDENTITY:
        return identity_mixing(num_sensors)
    if spec.mixing == MixingKind.BANDED:
        if spec.banded_filter is None or len(spec.banded_filter) != num_sensors:
            raise InvalidArgumentError(f"Mistura banda exige filtro de comprimento {num_sensors}")
        return banded_mixing(spec.banded_filter)
    return dft_mixing(num_sensors)


def build_profile(
    spec: ProfileSpec,
    num_sensors: int,
    n: int,
    mode: SamplingMode,
    partition: Optional[Partition] = None,
    rng: Optional[RngStream] = None,
) -> SensorProfile:
    """
    Constrói os perfis da família pedida e garante a isometria do modo.

    Args:
        spec: Família e parâmetros
        num_sensors: Número de sensores C
        n: Dimensão N
        mode: Modo de amostragem
        partition: Partição explícita (senão derivada de spec.partition)
        rng: Fluxo aleatório para famílias sorteadas

    Returns:
        SensorProfile: Perfis validados

    Raises:
        IsometryError: Se a construção não satisfaz a isometria
        InvalidArgumentError: Parâmetros ausentes ou incompatíveis
    """
    family = spec.family
    logger.debug(f"Construindo perfis {family.value} C={num_sensors} N={n} modo={mode.value}")

    if family in (ProfileFamily.COMPLEX_UNIT, ProfileFamily.CIRCULANT_UNIT_EIGEN) and rng is None:
        raise InvalidArgumentError(f"A família {family.value} exige um fluxo aleatório")

    if family == ProfileFamily.IDENTITY:
        if num_sensors != 1:
            raise InvalidArgumentError("A família identity exige C=1")
        profile = identity_profile(n).with_mode(mode)
    elif family == ProfileFamily.NONOVERLAPPING:
        profile = nonoverlapping(_partition_for(spec, num_sensors, n, partition), mode)
    elif family == ProfileFamily.ALMOST_IDENTICAL:
        if spec.lambdas is None:
            raise InvalidArgumentError("A família almost_identical exige lambdas")
        profile = almost_identical(spec.lambdas, n, mode)
    elif family == ProfileFamily.COMPLEX_UNIT:
        profile = complex_unit(num_sensors, n, mode, rng)
    elif family == ProfileFamily.PIECEWISE_CONSTANT:
        profile = piecewise_constant(
            _mixing_for(spec, num_sensors), _partition_for(spec, num_sensors, n, partition), mode,
        )
    elif family == ProfileFamily.BANDED_COSINE:
        profile = banded_cosine(num_sensors, n, mode, spec.width_factor)
    elif family == ProfileFamily.CIRCULANT_FILTER:
        if spec.filters is None:
            raise InvalidArgumentError("A família circulant_filter exige filtros")
        profile = circulant_filter(np.asarray(spec.filters), mode, spec.normalize)
    elif family == ProfileFamily.CIRCULANT_UNIT_EIGEN:
        profile = circulant_unit_eigen(num_sensors, n, mode, rng)
    elif family == ProfileFamily.DFT_LIKE:
        profile = dft_like(num_sensors, n, mode)
    else:
        raise InvalidArgumentError(f"Família de perfil não construível: {family.value}")

    if profile.num_sensors != num_sensors or profile.n != n:
        raise InvalidArgumentError(
            f"Perfis construídos com forma ({profile.num_sensors}, {profile.n}), esperado ({num_sensors}, {n})"
        )
    report = check_isometry(profile, mode)
    if not report.passed:
        raise IsometryError(f"Perfis {family.value} violam a isometria: desvio {report.max_deviation:.3g}")
    return profile


# Verificações

def isometry_deviation(profile: SensorProfile, mode: SamplingMode) -> float:
    """‖M − I‖ entrada a entrada, M = (1/C)ΣH*H ou ΣH*H."""
    scale = _mode_scale(mode, profile.num_sensors)
    if profile.kind == ProfileKind.DIAGONAL:
        diagonal = scale * np.sum(np.abs(profile.data) ** 2, axis=0)
        return float(np.max(np.abs(diagonal - 1.0)))
    if profile.kind == ProfileKind.CIRCULANT:
        eig = np.stack([circulant_eigenvalues(h) for h in profile.data])
        spectrum = scale * np.sum(np.abs(eig) ** 2, axis=0)
        column = inverse_unitary_dft(spectrum) / np.sqrt(profile.n)
        column[0] -= 1.0
        return float(np.max(np.abs(column)))
    dense = profile.data
    total = scale * np.einsum("cji,cjk->ik", dense.conj(), dense)
    return float(np.max(np.abs(total - np.eye(profile.n))))


def check_isometry(profile: SensorProfile, mode: SamplingMode, tol: float = DEFAULT_TOLERANCE) -> IsometryReport:
    """
    Verifica a condição de isometria do modo.

    Returns:
        IsometryReport: Desvio máximo e aprovação (desvio ≤ tol)
    """
    deviation = isometry_deviation(profile, mode)
    return IsometryReport(mode=mode, max_deviation=deviation, tolerance=tol, passed=deviation <= tol)


def joint_isotropy_deviation(
    profile: SensorProfile,
    weights: Sequence[float],
    second_moments: Optional[Sequence[np.ndarray]] = None,
) -> float:
    """
    Desvio de Σ_c w_c H_c* K_c H_c em relação a I, com K_c = E(a_c a_c*)
    (identidade por padrão).
    """
    n = profile.n
    total = np.zeros((n, n), dtype=complex)
    for c, w in enumerate(weights):
        h = profile.matrix(c)
        moment = np.eye(n) if second_moments is None else np.asarray(second_moments[c], dtype=complex)
        total += w * (h.conj().T @ moment @ h)
    return float(np.max(np.abs(total - np.eye(n))))


def normalize_to_isometry(
    raw_diagonals: np.ndarray,
    mode: SamplingMode,
    family: ProfileFamily = ProfileFamily.CUSTOM,
) -> SensorProfile:
    """
    Divide cada coluna das diagonais pela raiz da sua energia (modo identical)
    ou da energia média (modo distinct).

    Raises:
        IsometryError: Se alguma coordenada não tem energia em nenhum sensor
    """
    raw = np.atleast_2d(np.asarray(raw_diagonals, dtype=complex))
    mass = _mode_scale(mode, raw.shape[0]) * np.sum(np.abs(raw) ** 2, axis=0)
    empty = np.flatnonzero(mass <= 0)
    if empty.size:
        raise IsometryError(f"Coordenadas sem energia de perfil (sinal inobservável): {empty.tolist()}")
    return SensorProfile(kind=ProfileKind.DIAGONAL, data=raw / np.sqrt(mass)[None, :], family=family, mode=mode)


def profile_norms(profile: SensorProfile, partition: Optional[Partition] = None) -> ProfileNorms:
    """
    Normas ‖H_c‖∞, ‖H_c P_{I_d}‖∞, ‖h_c‖₁ e ‖Λ_c‖∞ conforme o tipo de perfil.
    """
    c = profile.num_sensors
    if profile.kind == ProfileKind.DIAGONAL:
        magnitudes = np.abs(profile.data)
        sup_norms = magnitudes.max(axis=1)
        restricted = None
        if partition is not None:
            restricted = [[float(magnitudes[k, level].max()) for level in partition.sets] for k in range(c)]
        return ProfileNorms(
            sup_norms=sup_norms.tolist(), restricted_norms=restricted, eigen_sup=sup_norms.tolist(),
        )

    matrices = [profile.matrix(k) for k in range(c)]
    sup_norms = [induced_inf_norm(h) for h in matrices]
    restricted = None
    if partition is not None:
        restricted = [[induced_inf_norm(h[:, level]) for level in partition.sets] for h in matrices]
    if profile.kind == ProfileKind.CIRCULANT:
        return ProfileNorms(
            sup_norms=sup_norms,
            restricted_norms=restricted,
            filter_l1=[float(np.sum(np.abs(h))) for h in profile.data],
            eigen_sup=[float(np.max(np.abs(profile.eigenvalues(k)))) for k in range(c)],
        )
    return ProfileNorms(sup_norms=sup_norms, restricted_norms=restricted)
