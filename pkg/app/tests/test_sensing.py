import numpy as np
import pytest

from app.core.errors import InfeasibleSpecError, InvalidArgumentError, IsometryError
from app.core.numerics import RngStream
from app.core.profiles import (
    banded_cosine,
    complex_unit,
    dft_like,
    dft_mixing,
    identity_profile,
    nonoverlapping,
    piecewise_constant,
)
from app.core.sensing import (
    assemble,
    dft_ensemble,
    explicit_ensemble,
    gaussian_ensemble,
    measure,
    row_counts_for,
    sample_rows,
)
from app.core.signals import interleaved_partition
from app.models.profile import ProfileKind, SamplingMode, SensorProfile
from app.schemas.sensing import NoiseKind, NoiseSpec


@pytest.fixture
def identical_system():
    profile = piecewise_constant(dft_mixing(2), interleaved_partition(8, 2), SamplingMode.IDENTICAL)
    return assemble(SamplingMode.IDENTICAL, [dft_ensemble(8)], profile, [4, 4], RngStream(1))


def test_row_counts_for():
    """Teste da divisão de linhas entre sensores"""
    assert row_counts_for(SamplingMode.DISTINCT, 10, 4) == [3, 3, 2, 2]
    assert row_counts_for(SamplingMode.IDENTICAL, 12, 4) == [3, 3, 3, 3]
    with pytest.raises(InvalidArgumentError):
        row_counts_for(SamplingMode.IDENTICAL, 10, 4)
    with pytest.raises(InvalidArgumentError):
        row_counts_for(SamplingMode.DISTINCT, 0, 2)


def test_ensembles_isotropicos():
    """Teste de E(aa*) = I para os ensembles DFT completo e decimado por átomos"""
    assert np.allclose(dft_ensemble(8).second_moment(), np.eye(8), atol=1e-12)
    assert dft_ensemble(8, 2).grid_indices().tolist() == [0, 2, 4, 6]

    spikes = explicit_ensemble(np.sqrt(4) * np.eye(4))
    assert np.allclose(spikes.second_moment(), np.eye(4))


def test_ensemble_gaussiano_isotropia_empirica():
    """Teste de isotropia empírica do ensemble gaussiano com 10⁴ sorteios"""
    rows = sample_rows(gaussian_ensemble(8), 10_000, RngStream(2))
    moment = rows.conj().T @ rows / rows.shape[0]
    assert np.linalg.norm(moment - np.eye(8), 2) < 0.05 * 8


def test_explicit_ensemble_probabilidades_invalidas():
    """Teste de probabilidades que não somam 1"""
    with pytest.raises(InvalidArgumentError):
        explicit_ensemble(np.eye(2), np.array([0.5, 0.6]))


def test_sample_rows_dft_sem_reposicao():
    """Teste de sorteio DFT sem reposição e do excesso de linhas"""
    rows = sample_rows(dft_ensemble(8), 8, RngStream(3))
    assert np.linalg.matrix_rank(rows) == 8
    with pytest.raises(InfeasibleSpecError):
        sample_rows(dft_ensemble(8), 9, RngStream(3))


def test_assemble_identical_c1_modelo_de_um_sensor():
    """Teste de C=1 com H = I: A é a matriz de um único sensor"""
    system = assemble(SamplingMode.IDENTICAL, [dft_ensemble(8)], identity_profile(8), [5], RngStream(4))
    assert system.matrix.shape == (5, 8)
    assert np.allclose(system.matrix, system.draws[0] / np.sqrt(5))


def test_assemble_distinct_nonoverlapping_bloco_diagonal():
    """Teste de estrutura bloco-diagonal com perfis sem sobreposição"""
    # Arrange
    partition = interleaved_partition(8, 2)
    profile = nonoverlapping(partition, SamplingMode.DISTINCT)

    # Act
    system = assemble(SamplingMode.DISTINCT, [dft_ensemble(8)], profile, [3, 3], RngStream(5))

    # Assert
    blocks = system.row_blocks()
    assert not np.any(system.matrix[blocks[0]][:, partition.sets[1]])
    assert not np.any(system.matrix[blocks[1]][:, partition.sets[0]])
    assert system.num_draws == 6


def test_assemble_identical_estrutura_de_blocos(identical_system):
    """Teste de A_c = Ã H_c com um único conjunto de sorteios"""
    shared = identical_system.draws[0]
    profile = identical_system.profile
    for c, block in enumerate(identical_system.row_blocks()):
        expected = profile.right_multiply(c, shared) / np.sqrt(4)
        assert np.allclose(identical_system.matrix[block], expected)
    assert identical_system.num_draws == 4
    assert identical_system.draw_rows(1).tolist() == [1, 5]


@pytest.mark.parametrize("mode", list(SamplingMode))
def test_assemble_todas_as_linhas_dft_da_isometria(mode):
    """Teste de A*A = I quando todas as N linhas DFT são sorteadas por sensor"""
    profile = dft_like(2, 8, mode)
    m = 2 * 8
    system = assemble(mode, [dft_ensemble(8)], profile, row_counts_for(mode, m, 2), RngStream(6))
    gram = system.matrix.conj().T @ system.matrix
    assert np.allclose(gram, np.eye(8), atol=1e-12)


def test_assemble_perfis_nao_isometricos():
    """Teste de erro com perfis que violam a isometria do modo"""
    profile = SensorProfile(kind=ProfileKind.DIAGONAL, data=np.ones((2, 8)))
    with pytest.raises(IsometryError):
        assemble(SamplingMode.IDENTICAL, [dft_ensemble(8)], profile, [2, 2], RngStream(0))


def test_assemble_distinct_contagens_desiguais():
    """Teste da isotropia conjunta com pesos m_c/m: perfis unimodulares passam e perfis em banda não"""
    # Arrange
    unit = complex_unit(2, 16, SamplingMode.DISTINCT, RngStream(8))
    banded = banded_cosine(2, 16, SamplingMode.DISTINCT)

    # Act
    system = assemble(SamplingMode.DISTINCT, [dft_ensemble(16)], unit, [4, 3], RngStream(9))
    balanced = assemble(SamplingMode.DISTINCT, [dft_ensemble(16)], banded, [4, 4], RngStream(9))

    # Assert
    assert system.matrix.shape == (7, 16)
    assert balanced.matrix.shape == (8, 16)
    with pytest.raises(IsometryError):
        assemble(SamplingMode.DISTINCT, [dft_ensemble(16)], banded, [4, 3], RngStream(9))


def test_assemble_contagens_invalidas():
    """Teste de contagens incompatíveis com o número de sensores"""
    profile = dft_like(2, 8, SamplingMode.IDENTICAL)
    with pytest.raises(InvalidArgumentError):
        assemble(SamplingMode.IDENTICAL, [dft_ensemble(8)], profile, [2, 3], RngStream(0))
    with pytest.raises(InvalidArgumentError):
        assemble(SamplingMode.IDENTICAL, [dft_ensemble(8)], profile, [2], RngStream(0))


def test_measure_sem_ruido(identical_system):
    """Teste de x = 0 sem ruído: y = 0 e eta = 0"""
    meas = measure(identical_system, np.zeros(8))
    assert not np.any(meas.y)
    assert meas.eta == 0.0


def test_measure_ruido_fixo(identical_system):
    """Teste de ruído fixo: eta = ‖e‖₂"""
    error = np.zeros(8, dtype=complex)
    error[0] = 0.1
    meas = measure(identical_system, np.ones(8), error=error)
    assert np.isclose(meas.eta, 0.1)
    assert np.allclose(meas.y, identical_system.matvec(np.ones(8)) + error)


def test_measure_ruido_gaussiano(identical_system):
    """Teste Monte-Carlo: média de ‖e‖₂² ≈ mσ²"""
    noise = NoiseSpec(kind=NoiseKind.GAUSSIAN, sigma=0.1)
    energies = [measure(identical_system, np.ones(8), noise, RngStream(7, (t,))).eta ** 2 for t in range(100)]
    assert np.mean(energies) == pytest.approx(8 * 0.01, rel=0.2)


def test_measure_erros(identical_system):
    """Teste de x com comprimento errado e ruído gaussiano sem fluxo aleatório"""
    with pytest.raises(InvalidArgumentError):
        measure(identical_system, np.ones(5))
    with pytest.raises(InvalidArgumentError):
        measure(identical_system, np.ones(8), NoiseSpec(kind=NoiseKind.GAUSSIAN, sigma=0.1))
