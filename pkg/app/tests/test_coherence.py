import itertools

import numpy as np
import pytest

from app.core.coherence import (
    PHASE_GRID,
    AtomSet,
    atom_set,
    distinct_atom_set,
    gamma,
    identical_atom_set,
    mu,
    mu_joint,
    mu_levels,
    relative_sparsity,
    sigma_g,
    system_atom_set,
)
from app.core.errors import CoherenceUndefinedError, InvalidArgumentError
from app.core.numerics import RngStream, dft_matrix
from app.core.profiles import circulant_unit_eigen, complex_unit, dft_like, nonoverlapping, profile_norms
from app.core.sensing import assemble, dft_ensemble, explicit_ensemble, gaussian_ensemble
from app.core.signals import block_partition, interleaved_partition, single_level_partition
from app.models.profile import SamplingMode
from app.models.signal import LevelScheme
from app.schemas.coherence import CoherenceMethod


def _random_atom_set(n: int, atoms: int, seed: int) -> AtomSet:
    rng = RngStream(seed)
    vectors = np.stack([rng.substream(k).complex_gaussian(n) for k in range(atoms)])
    probs = rng.uniform(atoms) + 0.1
    return AtomSet(blocks=vectors[:, :, None], probabilities=probs / probs.sum())


def _brute_gamma1(blocks, support):
    best = 0.0
    for block in blocks:
        outer = block @ block.conj().T
        for i in range(outer.shape[0]):
            best = max(best, sum(abs(outer[i, j]) for j in support))
    return best


def _brute_gamma2_grid(blocks, probs, support):
    best = 0.0
    n = blocks.shape[1]
    for phases in itertools.product(range(8), repeat=len(support)):
        z = np.zeros(n, dtype=complex)
        z[list(support)] = PHASE_GRID[list(phases)]
        for i in range(n):
            value = sum(p * abs((b @ b.conj().T)[i] @ z) ** 2 for b, p in zip(blocks, probs))
            best = max(best, value)
    return best


def test_mu_dft_e_spikes():
    """Teste de μ = 1 para a DFT e μ = N para átomos impulso"""
    assert mu(dft_ensemble(8)).value == pytest.approx(1.0)
    spikes = explicit_ensemble(np.sqrt(8) * np.eye(8))
    assert mu(spikes).value == pytest.approx(8.0)


def test_mu_gaussiano_indefinido_e_monte_carlo():
    """Teste de coerência indefinida do ensemble gaussiano e do modo monte_carlo"""
    with pytest.raises(CoherenceUndefinedError):
        mu(gaussian_ensemble(8))

    report = mu(gaussian_ensemble(8), samples=200, rng=RngStream(1))
    assert report.method == CoherenceMethod.MONTE_CARLO
    assert not report.rigorous
    assert report.value > 1.0


def test_mu_levels():
    """Teste das coerências locais da DFT e de átomos restritos a um nível"""
    reports = mu_levels(dft_ensemble(8), interleaved_partition(8, 2))
    assert [r.value for r in reports] == pytest.approx([1.0, 1.0])

    atoms = np.zeros((1, 4))
    atoms[0, :2] = 1.0
    restricted = mu_levels(explicit_ensemble(atoms), block_partition(4, 2))
    assert restricted[1].value == 0.0

    single = mu_levels(dft_ensemble(8), single_level_partition(8))
    assert single[0].value == pytest.approx(mu(dft_ensemble(8)).value)


@pytest.mark.parametrize("seed", range(5))
def test_mu_e_mu_levels_contra_forca_bruta(seed):
    """Teste de μ e μ_c contra enumeração densa dos átomos"""
    atoms = _random_atom_set(6, 5, seed)
    vectors = atoms.vectors()
    partition = block_partition(6, 2)

    expected_mu = max(max(abs(v) ** 2) for v in vectors)
    reports = mu_levels(atoms, partition)

    assert mu(atoms).value == pytest.approx(expected_mu, abs=1e-12)
    for c, level in enumerate(partition.sets):
        mu_prime = max(max(abs(v[level]) ** 2) for v in vectors)
        assert reports[c].value == pytest.approx(np.sqrt(expected_mu * mu_prime), abs=1e-12)
        assert reports[c].value <= expected_mu + 1e-12


def test_gamma_dft_n4():
    """Teste de Γ₁ = |Δ|·μ = 2 para a DFT com N = 4 e Δ = {0, 1}"""
    report = gamma(dft_ensemble(4), [0, 1])
    assert report.gamma1.value == pytest.approx(2.0)
    assert report.gamma2.value >= 1.0 - 1e-12


def test_gamma_suporte_completo_satura_cota():
    """Teste de Δ = {0..N-1} com átomos DFT: Γ₁ = N·μ"""
    report = gamma(dft_ensemble(4), range(4))
    assert report.gamma1.value == pytest.approx(4 * mu(dft_ensemble(4)).value)


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("support", [[0], [1, 3], [0, 2, 5]])
def test_gamma_contra_forca_bruta(seed, support):
    """Teste de Γ₁ e do colchete de Γ₂ contra enumeração densa (N ≤ 8)"""
    # Arrange
    atoms = _random_atom_set(6, 4, seed)
    blocks = atoms.blocks
    mu_value = mu(atoms).value

    # Act
    report = gamma(atoms, support)

    # Assert
    assert report.gamma1.value == pytest.approx(_brute_gamma1(blocks, support), abs=1e-12)
    assert report.gamma1.value <= len(support) * mu_value + 1e-12
    brute = _brute_gamma2_grid(blocks, atoms.probabilities, support)
    assert report.gamma2.lower == pytest.approx(brute, rel=1e-10)
    assert report.gamma2.lower <= report.gamma2.upper + 1e-12


def test_gamma_sistema_identical_blocos():
    """Teste de Γ em blocos D = C do modo identical contra força bruta"""
    profile = dft_like(2, 8, SamplingMode.IDENTICAL)
    system = assemble(SamplingMode.IDENTICAL, [dft_ensemble(8)], profile, [4, 4], RngStream(2))
    atoms = system_atom_set(system)

    report = gamma(system, [0, 3])

    assert atoms.block_size == 2
    assert report.gamma1.context["block_size"] == 2
    assert report.gamma1.value == pytest.approx(_brute_gamma1(atoms.blocks, [0, 3]), abs=1e-12)
    assert report.gamma1.value >= 1.0 - 1e-12


def test_gamma_modo_bound_e_erros():
    """Teste do modo bound (|Δ|·μ) e dos erros de suporte"""
    report = gamma(dft_ensemble(8), [0, 1, 2], mode=CoherenceMethod.BOUND)
    assert report.gamma1.value == pytest.approx(3.0)
    assert report.gamma1.method == CoherenceMethod.BOUND

    with pytest.raises(InvalidArgumentError):
        gamma(dft_ensemble(8), [])
    with pytest.raises(InvalidArgumentError):
        gamma(dft_ensemble(16), range(13))
    with pytest.raises(InvalidArgumentError):
        gamma(dft_ensemble(8), [9])
    with pytest.raises(InvalidArgumentError):
        gamma(dft_ensemble(8), [0], mode=CoherenceMethod.MONTE_CARLO)


def test_gamma_monte_carlo_gaussiano():
    """Teste de Γ estimado por amostragem para o ensemble gaussiano"""
    report = gamma(gaussian_ensemble(6), [0, 1], mode=CoherenceMethod.MONTE_CARLO, samples=50, rng=RngStream(3))
    assert not report.gamma1.rigorous
    assert report.gamma1.samples == 50


def test_sigma_g():
    """Teste de σ(G) = 1 para átomos DFT, σ(G) = N para impulsos; átomo nulo não aumenta σ"""
    assert sigma_g(dft_ensemble(8)).value == pytest.approx(1.0)
    spikes = explicit_ensemble(np.sqrt(8) * np.eye(8))
    assert sigma_g(spikes).value == pytest.approx(8.0)

    with_zero = explicit_ensemble(np.vstack([dft_ensemble(8).atom_matrix()[0], np.zeros((1, 8))]))
    assert sigma_g(with_zero).value == pytest.approx(1.0)


@pytest.mark.parametrize("seed", range(3))
def test_sigma_g_contra_forca_bruta(seed):
    """Teste de σ(G) contra o cálculo denso N⁻¹‖Φa‖₁²"""
    atoms = _random_atom_set(8, 4, seed)
    phi = dft_matrix(8)
    expected = max(np.sum(np.abs(phi @ v)) ** 2 / 8 for v in atoms.vectors())
    assert sigma_g(atoms).value == pytest.approx(expected, abs=1e-12)


def test_mu_joint():
    """Teste de μ(G, H_1, …, H_C) para perfis diagonais e circulantes"""
    # C = 1, H = I: reduz a μ(G)
    assert mu_joint(dft_ensemble(8), dft_like(1, 8, SamplingMode.IDENTICAL)).value == pytest.approx(1.0)

    diagonal = complex_unit(4, 8, SamplingMode.IDENTICAL, RngStream(4))
    assert mu_joint(dft_ensemble(8), diagonal).value <= 1.0 + 1e-12

    circulant = circulant_unit_eigen(2, 8, SamplingMode.IDENTICAL, RngStream(5))
    filter_l1 = profile_norms(circulant).filter_l1
    bound = mu(dft_ensemble(8)).value * sum(v ** 2 for v in filter_l1)
    assert mu_joint(dft_ensemble(8), circulant).value <= bound + 1e-12


def test_mu_joint_perfis_distinct_reescalados():
    """Teste de μ_joint igual para o mesmo perfil nas normalizações distinct e identical"""
    distinct = mu_joint(dft_ensemble(8), dft_like(2, 8, SamplingMode.DISTINCT)).value
    identical = mu_joint(dft_ensemble(8), dft_like(2, 8, SamplingMode.IDENTICAL)).value

    assert distinct == pytest.approx(identical, abs=1e-12)
    assert distinct <= mu(dft_ensemble(8)).value + 1e-12


@pytest.mark.parametrize("seed", range(3))
def test_mu_joint_contra_forca_bruta(seed):
    """Teste de μ_joint contra o máximo em (i, j) de Σ_c e_i*H_c*aa*H_c e_j"""
    atoms = _random_atom_set(6, 3, seed)
    profile = complex_unit(2, 6, SamplingMode.IDENTICAL, RngStream(seed, (9,)))
    expected = 0.0
    for a in atoms.vectors():
        total = sum(
            profile.matrix(c).conj().T @ np.outer(a, a.conj()) @ profile.matrix(c) for c in range(2)
        )
        expected = max(expected, np.max(np.abs(total)))
    assert mu_joint(atoms, profile).value == pytest.approx(expected, abs=1e-12)


def test_relative_sparsity_nonoverlapping():
    """Teste de S_c = C·s_c com perfis sem sobreposição (bound e força bruta)"""
    # Arrange
    partition = interleaved_partition(4, 2)
    profile = nonoverlapping(partition, SamplingMode.DISTINCT)
    levels = LevelScheme(partition=partition, local_sparsities=(1, 1))

    # Act
    bound = relative_sparsity(profile, levels)
    exact = relative_sparsity(profile, levels, mode=CoherenceMethod.EXACT)

    # Assert
    assert [r.value for r in bound] == pytest.approx([2.0, 2.0])
    assert [r.value for r in exact] == pytest.approx([2.0, 2.0])


def test_relative_sparsity_casos_triviais():
    """Teste de esparsidades nulas e do colapso C = 1"""
    partition = interleaved_partition(8, 2)
    profile = nonoverlapping(partition, SamplingMode.DISTINCT)
    zero = relative_sparsity(profile, LevelScheme(partition=partition, local_sparsities=(0, 0)))
    assert [r.value for r in zero] == [0.0, 0.0]

    single = single_level_partition(8)
    unit = complex_unit(1, 8, SamplingMode.DISTINCT, RngStream(1))
    report = relative_sparsity(unit, LevelScheme(partition=single, local_sparsities=(3,)))
    assert report[0].value == pytest.approx(max(profile_norms(unit).sup_norms) ** 2 * 3)


def test_relative_sparsity_erros():
    """Teste de força bruta com N grande e cota fechada com perfis circulantes"""
    partition = interleaved_partition(16, 2)
    levels = LevelScheme(partition=partition, local_sparsities=(1, 1))
    with pytest.raises(InvalidArgumentError):
        relative_sparsity(nonoverlapping(partition, SamplingMode.DISTINCT), levels, mode=CoherenceMethod.EXACT)
    circulant = circulant_unit_eigen(2, 16, SamplingMode.DISTINCT, RngStream(0))
    with pytest.raises(InvalidArgumentError):
        relative_sparsity(circulant, levels)


def test_atom_sets_distinct_e_identical():
    """Teste das misturas distinct (pesos m_c/m) e dos blocos identical"""
    base = atom_set(dft_ensemble(4))
    profile = dft_like(2, 4, SamplingMode.DISTINCT)

    mixture = distinct_atom_set([base, base], profile, [1, 3])
    assert mixture.probabilities.sum() == pytest.approx(1.0)
    assert mixture.probabilities[:4].sum() == pytest.approx(0.25)
    assert np.allclose(mixture.second_moment(), np.eye(4), atol=1e-12)

    blocks = identical_atom_set(base, dft_like(2, 4, SamplingMode.IDENTICAL))
    assert blocks.block_size == 2
    assert np.allclose(blocks.second_moment(), np.eye(4), atol=1e-12)
