"""
Ensembles de linhas, montagem de sistemas paralelos (distinct/identical)
e medições ruidosas.
"""

import logging
from typing import List, Optional, Sequence

import numpy as np

from app.core.errors import InfeasibleSpecError, InvalidArgumentError, IsometryError
from app.core.numerics import RngStream, dft_matrix
from app.core.profiles import DEFAULT_TOLERANCE, check_isometry, joint_isotropy_deviation
from app.models.profile import SamplingMode, SensorProfile
from app.models.sensing import DftGrid, Ensemble, EnsembleKind, MeasurementSet, ParallelSystem
from app.schemas.sensing import EnsembleSpec, NoiseKind, NoiseSpec

logger = logging.getLogger(__name__)


def dft_ensemble(n: int, decimation: int = 1) -> Ensemble:
    """Ensemble DFT na grade completa (decimation=1) ou decimada."""
    grid = DftGrid.FULL if decimation == 1 else DftGrid.DECIMATED
    return Ensemble(kind=EnsembleKind.SUBSAMPLED_DFT, n=n, grid=grid, decimation=decimation)


def gaussian_ensemble(n: int) -> Ensemble:
    return Ensemble(kind=EnsembleKind.GAUSSIAN, n=n)


def explicit_ensemble(atoms: np.ndarray, probabilities: Optional[np.ndarray] = None) -> Ensemble:
    atoms = np.atleast_2d(np.asarray(atoms, dtype=complex))
    return Ensemble(kind=EnsembleKind.EXPLICIT_ATOMS, n=atoms.shape[1], atoms=atoms, probabilities=probabilities)


def ensemble_from_spec(spec: EnsembleSpec, n: int, num_sensors: int) -> Ensemble:
    if spec.kind == EnsembleKind.GAUSSIAN:
        return gaussian_ensemble(n)
    return dft_ensemble(n, num_sensors if spec.grid == DftGrid.DECIMATED else 1)


def sample_rows(ensemble: Ensemble, k: int, rng: RngStream) -> np.ndarray:
    """
    Sorteia k linhas brutas a* (k×N).

    DFT: sem reposição na grade; explícito: com reposição segundo as
    probabilidades; gaussiano: entradas reais N(0,1).

    Raises:
        InfeasibleSpecError: Se k excede os átomos DFT disponíveis
    """
    if ensemble.kind == EnsembleKind.GAUSSIAN:
        return rng.gaussian(k, ensemble.n).astype(complex)
    if ensemble.kind == EnsembleKind.SUBSAMPLED_DFT:
        grid = ensemble.grid_indices()
        if k > grid.size:
            raise InfeasibleSpecError(f"{k} linhas pedidas, apenas {grid.size} frequências disponíveis")
        picked = grid[rng.subset_without_replacement(grid.size, k)]
        return np.sqrt(ensemble.n) * np.array(dft_matrix(ensemble.n)[picked])
    atoms, probs = ensemble.atom_matrix()
    return np.conj(atoms[rng.choice(atoms.shape[0], k, probs)])


def row_counts_for(mode: SamplingMode, m: int, num_sensors: int) -> List[int]:
    """
    Linhas por sensor para m medições no total.

    Raises:
        InvalidArgumentError: Se m/C não é inteiro no modo identical
    """
    if m < 1:
        raise InvalidArgumentError(f"Número de medições deve ser positivo: {m}")
    if mode == SamplingMode.IDENTICAL:
        if m % num_sensors != 0:
            raise InvalidArgumentError(f"m={m} não é múltiplo de C={num_sensors} no modo identical")
        return [m // num_sensors] * num_sensors
    base, extra = divmod(m, num_sensors)
    return [base + (1 if c < extra else 0) for c in range(num_sensors)]


def _is_isotropic(ensemble: Ensemble) -> bool:
    if ensemble.kind == EnsembleKind.GAUSSIAN:
        return True
    moment = ensemble.second_moment()
    return float(np.max(np.abs(moment - np.eye(ensemble.n)))) <= DEFAULT_TOLERANCE


def _verify_isotropy(
    mode: SamplingMode,
    ensembles: Sequence[Ensemble],
    profile: SensorProfile,
    row_counts: Sequence[int],
) -> None:
    m = sum(row_counts)
    equal_counts = len(set(row_counts)) == 1
    if all(_is_isotropic(e) for e in ensembles) and (mode == SamplingMode.IDENTICAL or equal_counts):
        report = check_isometry(profile, mode)
        deviation = report.max_deviation
    elif mode == SamplingMode.IDENTICAL:
        moment = ensembles[0].second_moment()
        deviation = joint_isotropy_deviation(
            profile, [1.0] * profile.num_sensors, [moment] * profile.num_sensors,
        )
    else:
        deviation = joint_isotropy_deviation(
            profile, [count / m for count in row_counts], [e.second_moment() for e in ensembles],
        )
    if deviation > DEFAULT_TOLERANCE:
        raise IsometryError(f"Sistema {mode.value} não é isotrópico: desvio {deviation:.3g}")


def assemble(
    mode: SamplingMode,
    ensembles: Sequence[Ensemble],
    profile: SensorProfile,
    row_counts: Sequence[int],
    rng: RngStream,
) -> ParallelSystem:
    """
    Monta A = [A_1; …; A_C] com a normalização 1/√p.

    distinct: A_c = (m_c sorteios de G_c)·H_c, escala 1/√m;
    identical: um único conjunto Ã de m/C sorteios, A_c = Ã·H_c, escala 1/√(m/C).

    Args:
        mode: Modo de amostragem
        ensembles: Um ensemble por sensor (distinct) ou um único (identical)
        profile: Perfis H_c
        row_counts: Linhas por sensor
        rng: Fluxo aleatório

    Returns:
        ParallelSystem: Sistema montado

    Raises:
        IsometryError: Perfis não satisfazem a isotropia do modo
        InvalidArgumentError: Contagens ou formas incompatíveis
        InfeasibleSpecError: Linhas DFT insuficientes
    """
    num_sensors = profile.num_sensors
    ensembles = list(ensembles)
    if len(ensembles) == 1 and mode == SamplingMode.DISTINCT:
        ensembles = ensembles * num_sensors
    row_counts = [int(k) for k in row_counts]
    if len(row_counts) != num_sensors:
        raise InvalidArgumentError(f"Esperadas {num_sensors} contagens de linhas, recebidas {len(row_counts)}")
    if any(k < 1 for k in row_counts):
        raise InvalidArgumentError("Cada sensor deve ter ao menos uma linha")
    if any(e.n != profile.n for e in ensembles):
        raise InvalidArgumentError("Ensembles e perfis com dimensões diferentes")

    _verify_isotropy(mode, ensembles, profile, row_counts)

    if mode == SamplingMode.IDENTICAL:
        if len(set(row_counts)) != 1:
            raise InvalidArgumentError("No modo identical todos os sensores recebem m/C linhas")
        p = row_counts[0]
        shared = sample_rows(ensembles[0], p, rng.substream(0))
        blocks = [profile.right_multiply(c, shared) for c in range(num_sensors)]
        draws = (shared,)
        scale = 1.0 / np.sqrt(p)
    else:
        if len(ensembles) != num_sensors:
            raise InvalidArgumentError(f"Esperados {num_sensors} ensembles no modo distinct")
        draws = tuple(sample_rows(e, k, rng.substream(c)) for c, (e, k) in enumerate(zip(ensembles, row_counts)))
        blocks = [profile.right_multiply(c, rows) for c, rows in enumerate(draws)]
        scale = 1.0 / np.sqrt(sum(row_counts))

    matrix = scale * np.vstack(blocks)
    system = ParallelSystem(
        mode=mode,
        profile=profile,
        ensembles=tuple(ensembles),
        row_counts=tuple(row_counts),
        matrix=matrix,
        draws=draws,
    )
    logger.debug(f"Sistema montado: {system}")
    return system


def measure(
    system: ParallelSystem,
    x: np.ndarray,
    noise: Optional[NoiseSpec] = None,
    rng: Optional[RngStream] = None,
    error: Optional[np.ndarray] = None,
) -> MeasurementSet:
    """
    Mede y = Ax + e.

    `error` fixa o vetor de ruído; ruído gaussiano complexo usa `noise.sigma`
    por entrada. eta recebe ‖e‖₂ realizado (0 sem ruído).
    """
    x = np.asarray(x, dtype=complex)
    if x.shape != (system.n,):
        raise InvalidArgumentError(f"x deve ter comprimento {system.n}, recebido {x.shape}")
    if error is not None:
        e = np.asarray(error, dtype=complex)
        if e.shape != (system.m,):
            raise InvalidArgumentError(f"Ruído deve ter comprimento {system.m}")
    elif noise is not None and noise.kind == NoiseKind.GAUSSIAN and noise.sigma > 0:
        if rng is None:
            raise InvalidArgumentError("Ruído gaussiano exige um fluxo aleatório")
        e = noise.sigma * rng.complex_gaussian(system.m)
    else:
        e = np.zeros(system.m, dtype=complex)
    y = system.matvec(x) + e
    return MeasurementSet(y=y, eta=float(np.linalg.norm(e)), noise=e)
