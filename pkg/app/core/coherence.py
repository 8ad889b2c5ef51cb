"""
Quantidades de coerência: μ, μ_c, Γ₁, Γ₂, S_c, σ(G) e μ(G, H_1, …, H_C).

Valores exatos são supremos sobre todos os átomos de distribuições finitas.
Os supremos sobre z complexo com ‖z‖∞ = 1 usam uma grade de 8 fases por
coordenada e são reportados como colchete [cota inferior, cota superior].
"""

import itertools
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np

from app.core.errors import CoherenceUndefinedError, InvalidArgumentError
from app.core.numerics import RngStream, unitary_dft
from app.core.sensing import sample_rows
from app.models.profile import ProfileKind, SamplingMode, SensorProfile
from app.models.sensing import Ensemble, EnsembleKind, ParallelSystem
from app.models.signal import LevelScheme, Partition
from app.schemas.coherence import CoherenceMethod, CoherenceReport, GammaReport

logger = logging.getLogger(__name__)

PHASE_GRID = np.exp(2j * np.pi * np.arange(8) / 8)
MAX_EXACT_SUPPORT = 12
EXHAUSTIVE_LIMIT = 6
MAX_BRUTE_FORCE_N = 12
QUANTILE = 0.999


@dataclass(frozen=True, eq=False)
class AtomSet:
    """
    Distribuição finita de blocos B (N×D) com probabilidades.

    D = 1 para linhas isoladas; D = C para o bloco [H_1*a | … | H_C*a].
    """
    blocks: np.ndarray
    probabilities: np.ndarray
    rigorous: bool = True

    @property
    def n(self) -> int:
        return int(self.blocks.shape[1])

    @property
    def block_size(self) -> int:
        return int(self.blocks.shape[2])

    def active(self) -> np.ndarray:
        """Blocos com probabilidade positiva."""
        return self.blocks[self.probabilities > 0]

    def vectors(self) -> np.ndarray:
        """Átomos (K×N) de um conjunto com D = 1."""
        if self.block_size != 1:
            raise InvalidArgumentError("Quantidade definida apenas para átomos vetoriais (D=1)")
        return self.active()[:, :, 0]

    def second_moment(self) -> np.ndarray:
        """E(BB*)."""
        return np.einsum("k,kid,kjd->ij", self.probabilities, self.blocks, self.blocks.conj())


def atom_set(ensemble: Ensemble) -> AtomSet:
    """Átomos do ensemble como blocos N×1."""
    if not ensemble.is_finite:
        raise CoherenceUndefinedError("Ensemble gaussiano não é limitado; use o modo monte_carlo")
    atoms, probs = ensemble.atom_matrix()
    return AtomSet(blocks=atoms[:, :, None], probabilities=probs)


def sampled_atom_set(ensemble: Ensemble, samples: int, rng: RngStream) -> AtomSet:
    """Conjunto empírico de `samples` átomos sorteados (uniformes)."""
    if samples < 1:
        raise InvalidArgumentError(f"Número de amostras deve ser positivo: {samples}")
    if ensemble.kind == EnsembleKind.SUBSAMPLED_DFT:
        atoms = np.conj(np.vstack([sample_rows(ensemble, 1, rng.substream(k)) for k in range(samples)]))
    else:
        atoms = np.conj(sample_rows(ensemble, samples, rng))
    return AtomSet(blocks=atoms[:, :, None], probabilities=np.full(samples, 1.0 / samples), rigorous=False)


def _profiled(atoms: np.ndarray, profile: SensorProfile, c: int) -> np.ndarray:
    """H_c* a para cada átomo (linhas de `atoms`)."""
    return profile.adjoint_apply(c, atoms.T).T


def profiled_atom_set(base: AtomSet, profile: SensorProfile, c: int) -> AtomSet:
    """Átomos H_c* ã da distribuição F_c."""
    return AtomSet(
        blocks=_profiled(base.vectors(), profile, c)[:, :, None],
        probabilities=base.probabilities[base.probabilities > 0],
        rigorous=base.rigorous,
    )


def distinct_atom_set(bases: Sequence[AtomSet], profile: SensorProfile, row_counts: Sequence[int]) -> AtomSet:
    """Mistura dos F_c com pesos m_c/m (amostragem distinct, D = 1)."""
    m = float(sum(row_counts))
    blocks, probs = [], []
    for c, (base, count) in enumerate(zip(bases, row_counts)):
        f_c = profiled_atom_set(base, profile, c)
        blocks.append(f_c.blocks)
        probs.append(f_c.probabilities * count / m)
    return AtomSet(
        blocks=np.concatenate(blocks), probabilities=np.concatenate(probs),
        rigorous=all(b.rigorous for b in bases),
    )


def identical_atom_set(base: AtomSet, profile: SensorProfile) -> AtomSet:
    """Blocos B = [H_1*a | … | H_C*a] (amostragem identical, D = C)."""
    atoms = base.vectors()
    blocks = np.stack([_profiled(atoms, profile, c) for c in range(profile.num_sensors)], axis=2)
    return AtomSet(
        blocks=blocks, probabilities=base.probabilities[base.probabilities > 0], rigorous=base.rigorous,
    )


def system_atom_set(system: ParallelSystem, samples: Optional[int] = None, rng: Optional[RngStream] = None) -> AtomSet:
    """Distribuição dos blocos B que gera o sistema."""
    def base_of(ensemble: Ensemble, c: int) -> AtomSet:
        if samples is not None:
            return sampled_atom_set(ensemble, samples, rng.substream(c))
        return atom_set(ensemble)

    if samples is not None and rng is None:
        raise InvalidArgumentError("O modo monte_carlo exige um fluxo aleatório")
    if system.mode == SamplingMode.IDENTICAL:
        return identical_atom_set(base_of(system.ensembles[0], 0), system.profile)
    bases = [base_of(e, c) for c, e in enumerate(system.ensembles)]
    return distinct_atom_set(bases, system.profile, system.row_counts)


def _resolve(source: Union[Ensemble, AtomSet, ParallelSystem], samples: Optional[int], rng: Optional[RngStream]) -> AtomSet:
    if isinstance(source, AtomSet):
        return source
    if isinstance(source, ParallelSystem):
        return system_atom_set(source, samples, rng)
    if samples is not None:
        if rng is None:
            raise InvalidArgumentError("O modo monte_carlo exige um fluxo aleatório")
        return sampled_atom_set(source, samples, rng)
    return atom_set(source)


def _method(atoms: AtomSet) -> CoherenceMethod:
    return CoherenceMethod.EXACT if atoms.rigorous else CoherenceMethod.MONTE_CARLO


def _supremum(values: np.ndarray, atoms: AtomSet) -> float:
    if values.size == 0:
        return 0.0
    if atoms.rigorous:
        return float(np.max(values))
    return float(np.quantile(values, QUANTILE))


def mu(
    source: Union[Ensemble, AtomSet],
    samples: Optional[int] = None,
    rng: Optional[RngStream] = None,
) -> CoherenceReport:
    """
    Coerência μ(F) = sup ‖a‖²∞.

    Raises:
        CoherenceUndefinedError: Ensemble gaussiano sem `samples`
    """
    atoms = _resolve(source, samples, rng)
    values = np.max(np.abs(atoms.vectors()) ** 2, axis=1)
    return CoherenceReport(
        quantity="mu", value=_supremum(values, atoms), method=_method(atoms),
        samples=samples, rigorous=atoms.rigorous,
    )


def mu_levels(
    source: Union[Ensemble, AtomSet],
    partition: Partition,
    samples: Optional[int] = None,
    rng: Optional[RngStream] = None,
) -> List[CoherenceReport]:
    """Coerências locais μ_c = √(μ·μ′_c), μ′_c = sup ‖P_{I_c} a‖²∞."""
    atoms = _resolve(source, samples, rng)
    vectors = np.abs(atoms.vectors()) ** 2
    if vectors.shape[1] != partition.n:
        raise InvalidArgumentError("Partição incompatível com a dimensão dos átomos")
    mu_value = _supremum(np.max(vectors, axis=1), atoms)
    reports = []
    for c, level in enumerate(partition.sets):
        mu_prime = _supremum(np.max(vectors[:, level], axis=1), atoms)
        reports.append(CoherenceReport(
            quantity=f"mu_{c}",
            value=float(np.sqrt(mu_value * mu_prime)),
            method=_method(atoms),
            samples=samples,
            rigorous=atoms.rigorous,
            context={"mu": mu_value, "mu_prime": mu_prime, "level": c},
        ))
    return reports


def _quadratic_forms(z: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """z_q* M z_q para cada linha z_q de `z`."""
    return np.real(np.sum(np.conj(z) * (z @ matrix.T), axis=1))


def _exhaustive_grid_max(matrix: np.ndarray) -> float:
    size = matrix.shape[0]
    if size == 0:
        return 0.0
    if size == 1:
        return float(np.real(matrix[0, 0]))
    # a fase global é irrelevante: fixa z_0 = 1
    tail = np.array(list(itertools.product(range(8), repeat=size - 1)), dtype=int).reshape(-1, size - 1)
    z = np.hstack([np.ones((tail.shape[0], 1), dtype=complex), PHASE_GRID[tail]])
    return float(np.max(_quadratic_forms(z, matrix)))


def _ascent_grid_max(matrix: np.ndarray, starts: int = 16) -> float:
    size = matrix.shape[0]
    rng = np.random.default_rng(size)
    best = -np.inf
    for start in range(starts):
        z = np.ones(size, dtype=complex) if start == 0 else PHASE_GRID[rng.integers(0, 8, size)]
        value = float(np.real(np.conj(z) @ matrix @ z))
        improved = True
        while improved:
            improved = False
            for j in range(size):
                candidates = np.repeat(z[None, :], 8, axis=0)
                candidates[:, j] = PHASE_GRID
                values = _quadratic_forms(candidates, matrix)
                k = int(np.argmax(values))
                if values[k] > value + 1e-12:
                    z, value, improved = candidates[k], float(values[k]), True
        best = max(best, value)
    return best


def phase_grid_max(matrix: np.ndarray) -> float:
    """
    Máximo de z*Mz sobre z com entradas na grade de 8 fases.

    Busca exaustiva até EXHAUSTIVE_LIMIT coordenadas; acima disso, subida
    por coordenadas com múltiplos inícios. Ambos são cotas inferiores
    certificadas do supremo sobre ‖z‖∞ = 1.
    """
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape[0] <= EXHAUSTIVE_LIMIT:
        return _exhaustive_grid_max(matrix)
    return _ascent_grid_max(matrix)


def _upper_bound(matrix: np.ndarray) -> float:
    if matrix.shape[0] == 0:
        return 0.0
    entrywise = float(np.sum(np.abs(matrix)))
    spectral = matrix.shape[0] * float(np.max(np.linalg.eigvalsh((matrix + matrix.conj().T) / 2)))
    return min(entrywise, spectral)


def gamma(
    source: Union[Ensemble, AtomSet, ParallelSystem],
    support: Sequence[int],
    mode: CoherenceMethod = CoherenceMethod.EXACT,
    samples: Optional[int] = None,
    rng: Optional[RngStream] = None,
) -> GammaReport:
    """
    Coerências locais Γ₁(F, Δ) e Γ₂(F, Δ).

    exact: Γ₁ = max ‖BB*P_Δ‖∞ sobre átomos; Γ₂ como colchete da grade de fases.
    bound: |Δ|·max |(BB*)_ij| (cota das demonstrações, s·μ para D = 1).
    monte_carlo: as mesmas fórmulas sobre `samples` blocos sorteados.

    Raises:
        InvalidArgumentError: Suporte vazio ou grande demais para o modo exact
        CoherenceUndefinedError: Ensemble gaussiano fora do modo monte_carlo
    """
    delta = np.unique(np.asarray(support, dtype=int))
    if delta.size == 0:
        raise InvalidArgumentError("O suporte Δ deve ser não vazio")
    if mode == CoherenceMethod.MONTE_CARLO and samples is None:
        raise InvalidArgumentError("O modo monte_carlo exige o número de amostras")
    atoms = _resolve(source, samples if mode == CoherenceMethod.MONTE_CARLO else None, rng)
    if delta.max() >= atoms.n:
        raise InvalidArgumentError(f"Índices de Δ fora de {{0..{atoms.n - 1}}}")
    size = int(delta.size)
    blocks = atoms.active()
    probs = atoms.probabilities[atoms.probabilities > 0]
    context = {"support_size": size, "block_size": atoms.block_size}

    if mode == CoherenceMethod.BOUND:
        diagonal = np.sum(np.abs(blocks) ** 2, axis=2)
        value = size * float(np.max(diagonal))
        report = CoherenceReport(quantity="gamma1", value=value, method=CoherenceMethod.BOUND, context=context)
        return GammaReport(
            support=delta.tolist(), gamma1=report,
            gamma2=report.model_copy(update={"quantity": "gamma2"}),
        )

    if mode == CoherenceMethod.EXACT and size > MAX_EXACT_SUPPORT:
        raise InvalidArgumentError(f"|Δ|={size} excede o limite {MAX_EXACT_SUPPORT} do modo exact")

    # colunas Δ de BB* para cada átomo: (K, N, |Δ|)
    restricted = np.einsum("kid,kjd->kij", blocks, np.conj(blocks[:, delta, :]))
    gamma1_values = np.max(np.sum(np.abs(restricted), axis=2), axis=1)
    gamma1 = _supremum(gamma1_values, atoms)

    fourth = np.einsum("k,kia,kib->iab", probs, np.conj(restricted), restricted)
    lower = max(phase_grid_max(fourth[i]) for i in range(fourth.shape[0]))
    upper = max(_upper_bound(fourth[i]) for i in range(fourth.shape[0]))
    method = _method(atoms)
    logger.debug(f"Γ₁={gamma1:.6g}, Γ₂ ∈ [{lower:.6g}, {upper:.6g}] para |Δ|={size}")
    return GammaReport(
        support=delta.tolist(),
        gamma1=CoherenceReport(
            quantity="gamma1", value=gamma1, method=method, samples=samples,
            rigorous=atoms.rigorous, context=context,
        ),
        gamma2=CoherenceReport(
            quantity="gamma2", value=lower, method=method, samples=samples, lower=lower,
            upper=upper, rigorous=atoms.rigorous, context=context,
        ),
    )


def _level_supports(levels: LevelScheme):
    choices = [
        itertools.combinations(level.tolist(), s_c)
        for level, s_c in zip(levels.partition.sets, levels.local_sparsities)
    ]
    for combo in itertools.product(*choices):
        yield np.array(sorted(itertools.chain.from_iterable(combo)), dtype=int)


def relative_sparsity(
    profile: SensorProfile,
    levels: LevelScheme,
    mode: CoherenceMethod = CoherenceMethod.BOUND,
    ensembles: Optional[Sequence[Ensemble]] = None,
) -> List[CoherenceReport]:
    """
    Esparsidades relativas S_1, …, S_C.

    bound: S_c ≤ Σ_d ‖H_c P_{I_d}‖²∞ s_d (perfis diagonais, G isotrópico).
    exact (força bruta, N ≤ 12): máximo de z*E(a_c a_c*)z sobre suportes
    com s_d entradas em cada I_d e fases na grade de 8 pontos.

    Raises:
        InvalidArgumentError: Combinação de modo, perfil e tamanho não suportada
    """
    if profile.n != levels.partition.n:
        raise InvalidArgumentError("Esquema de níveis incompatível com os perfis")
    counts = np.asarray(levels.local_sparsities, dtype=float)

    if mode == CoherenceMethod.BOUND:
        if profile.kind != ProfileKind.DIAGONAL:
            raise InvalidArgumentError("A cota fechada de S_c exige perfis diagonais")
        magnitudes = np.abs(profile.data)
        reports = []
        for c in range(profile.num_sensors):
            restricted = np.array([magnitudes[c, level].max() for level in levels.partition.sets])
            reports.append(CoherenceReport(
                quantity=f"S_{c}", value=float(np.sum(restricted ** 2 * counts)),
                method=CoherenceMethod.BOUND, context={"sensor": c},
            ))
        return reports

    if mode != CoherenceMethod.EXACT:
        raise InvalidArgumentError(f"Modo {mode.value} não suportado para S_c")
    if profile.n > MAX_BRUTE_FORCE_N:
        raise InvalidArgumentError(f"Força bruta exige N ≤ {MAX_BRUTE_FORCE_N}, recebido {profile.n}")

    reports = []
    supports = list(_level_supports(levels))
    for c in range(profile.num_sensors):
        h = profile.matrix(c)
        moment = np.eye(profile.n) if ensembles is None else ensembles[c].second_moment()
        sensor_moment = h.conj().T @ moment @ h
        best = 0.0
        for delta in supports:
            if delta.size:
                best = max(best, phase_grid_max(sensor_moment[np.ix_(delta, delta)]))
        reports.append(CoherenceReport(
            quantity=f"S_{c}", value=best, method=CoherenceMethod.EXACT, lower=best,
            context={"sensor": c, "supports": len(supports)},
        ))
    return reports


def sigma_g(
    source: Union[Ensemble, AtomSet],
    samples: Optional[int] = None,
    rng: Optional[RngStream] = None,
) -> CoherenceReport:
    """σ(G) = sup N⁻¹‖Φa‖₁²."""
    atoms = _resolve(source, samples, rng)
    vectors = atoms.vectors()
    n = vectors.shape[1]
    values = np.sum(np.abs(unitary_dft(vectors.T)), axis=0) ** 2 / n
    return CoherenceReport(
        quantity="sigma_G", value=_supremum(values, atoms), method=_method(atoms),
        samples=samples, rigorous=atoms.rigorous,
    )


def mu_joint(
    source: Union[Ensemble, AtomSet],
    profile: SensorProfile,
    samples: Optional[int] = None,
    rng: Optional[RngStream] = None,
) -> CoherenceReport:
    """
    μ(G, H_1, …, H_C) = sup max_{i,j} |Σ_c e_i* H_c* a a* H_c e_j|.

    A matriz Σ_c (H_c*a)(H_c*a)* é semidefinida positiva, então o máximo
    em (i, j) ocorre na diagonal. Perfis do modo distinct, normalizados por
    (1/C)Σ_c H_c*H_c = I, entram reescalados por 1/√C.
    """
    base = _resolve(source, samples, rng)
    blocks = identical_atom_set(base, profile).active()
    values = np.max(np.sum(np.abs(blocks) ** 2, axis=2), axis=1)
    if profile.mode == SamplingMode.DISTINCT:
        values = values / profile.num_sensors
    return CoherenceReport(
        quantity="mu_joint", value=_supremum(values, base), method=_method(base),
        samples=samples, rigorous=base.rigorous, context={"sensors": profile.num_sensors},
    )
