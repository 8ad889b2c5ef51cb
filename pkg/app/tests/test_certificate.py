import math

import numpy as np
import pytest
from pydantic import ValidationError

from app.core.certificate import (
    GolfingBlock,
    build_instance,
    check_conditions,
    event_frequencies,
    golfing_construct,
    golfing_schedule,
    propcond4_bound,
    split_golfing_blocks,
    verify_certificate,
)
from app.core.errors import InvalidArgumentError
from app.core.numerics import RngStream, complex_sign, dft_matrix
from app.core.profiles import identity_profile
from app.core.sensing import dft_ensemble
from app.core.solver import bpdn_solve, relative_error
from app.models.profile import ProfileFamily, SamplingMode
from app.models.sensing import MeasurementSet, ParallelSystem
from app.schemas.certificate import CertificateParams, CertificateSetup
from app.schemas.profile import ProfileSpec


@pytest.fixture
def setup():
    return CertificateSetup(
        n=16,
        sensors=2,
        mode=SamplingMode.IDENTICAL,
        profile=ProfileSpec(family=ProfileFamily.PIECEWISE_CONSTANT),
        s=4,
        master_seed=5,
        m_values=[8, 32],
        trials=4,
    )


def _identity_block(n: int) -> GolfingBlock:
    return GolfingBlock(matrix=np.eye(n, dtype=complex), rows=np.arange(n), draws=1)



def _stacked_dft_system(n: int, copies: int) -> ParallelSystem:
    """A = [Φ; …; Φ]/√copies, um único sensor com todas as linhas em ordem"""
    matrix = np.vstack([dft_matrix(n)] * copies) / np.sqrt(copies)
    return ParallelSystem(
        mode=SamplingMode.DISTINCT,
        profile=identity_profile(n),
        ensembles=(dft_ensemble(n),),
        row_counts=(copies * n,),
        matrix=matrix,
        draws=(np.sqrt(n) * matrix,),
    )


def test_golfing_schedule_s16():
    """Teste de L = 4, a_l, b_l e blocos iguais para s = 16, p = 32"""
    schedule = golfing_schedule(16, 32)
    assert schedule.num_blocks == 4
    assert schedule.p == [8, 8, 8, 8]
    assert schedule.a == pytest.approx([1 / (2 * math.sqrt(2))] * 2 + [0.5] * 2)
    assert schedule.b == pytest.approx([0.25, 0.25, 0.5, 0.5])


def test_golfing_schedule_s2():
    """Teste do menor suporte admitido: L = 3 e a₁ = 1/√2"""
    schedule = golfing_schedule(2, 12)
    assert schedule.num_blocks == 3
    assert schedule.a[0] == pytest.approx(1 / math.sqrt(2))
    assert schedule.p == [3, 3, 6]
    assert sum(schedule.p) == 12


def test_golfing_schedule_erros():
    """Teste de s < 2 e de sorteios insuficientes"""
    with pytest.raises(InvalidArgumentError):
        golfing_schedule(1, 32)
    with pytest.raises(InvalidArgumentError):
        golfing_schedule(16, 3)


def test_propcond4_bound_s16():
    """Teste de Σ_l b_l Π_{j<l} a_j para s = 16"""
    a = 1 / (2 * math.sqrt(2))
    expected = 0.25 + 0.25 * a + 0.5 * a ** 2 + 0.25 * a ** 2
    assert propcond4_bound(golfing_schedule(16, 32)) == pytest.approx(expected)


def test_certificate_params():
    """Teste do valor combinado padrão 5/6 e de α fora de [0, 1)"""
    params = CertificateParams()
    assert params.combined_value == pytest.approx(5 / 6)
    assert params.admissible
    with pytest.raises(ValidationError):
        CertificateParams(alpha=1.0)


def test_golfing_sinal_nulo():
    """Teste de x = 0: ρ = 0 e ξ = 0"""
    result = golfing_construct([_identity_block(6)], [], np.zeros(6))
    assert not np.any(result.rho)
    assert not np.any(result.xi)


def test_certificado_identidade():
    """Teste do caso A = I: certificado exato e v¹ = 0"""
    # Arrange
    x = np.zeros(6, dtype=complex)
    x[[1, 4]] = [2.0, -1j]
    support = [1, 4]

    # Act
    result = golfing_construct([_identity_block(6)], support, x)
    report = check_conditions(np.eye(6), support, x, result.rho, result.xi)

    # Assert
    assert report.valid
    values = {c.name: c.value for c in report.conditions}
    assert values["i"] == values["ii"] == values["iii"] == values["iv"] == 0.0
    assert report.measured_sigma == pytest.approx(1.0)
    assert not np.any(result.v_sequence[1])
    assert np.allclose(result.rho[support], complex_sign(x[support]))


def test_check_conditions_rho_nulo():
    """Teste de ρ = 0 com x ≠ 0: (iii) = √|Δ|"""
    x = np.array([1.0, 0.0, 1j, 0.0])
    report = check_conditions(np.eye(4), [0, 2], x, np.zeros(4), np.zeros(4))
    values = {c.name: c.value for c in report.conditions}
    assert values["iii"] == pytest.approx(math.sqrt(2))
    assert not report.valid


def test_check_conditions_formas_incompativeis():
    """Teste de erro com ρ de comprimento diferente de x"""
    with pytest.raises(InvalidArgumentError):
        check_conditions(np.eye(4), [0], np.ones(4), np.zeros(3), np.zeros(4))


def test_split_golfing_blocks_identical(setup):
    """Teste de blocos formados por sorteios completos (C linhas cada)"""
    system, _ = build_instance(setup, 32, RngStream(1))
    schedule = golfing_schedule(4, system.num_draws)

    blocks = split_golfing_blocks(system, schedule)

    rows = np.sort(np.concatenate([block.rows for block in blocks]))
    assert rows.tolist() == list(range(32))
    assert [block.rows.size for block in blocks] == [2 * size for size in schedule.p]


@pytest.mark.parametrize("seed", range(8))
def test_verify_certificate_identidade(setup, seed):
    """Teste de ρ = A*ξ e de 2L + 2 eventos para sistemas sorteados"""
    # Arrange
    system, x = build_instance(setup, 16, RngStream(seed))

    # Act
    report = verify_certificate(system, x)

    # Assert
    assert report.identity_error < 1e-10
    assert len(report.events) == 2 * report.schedule.num_blocks + 2


def test_verify_certificate_blocos_isometricos_cotas_encadeadas():
    """Teste das cotas (iii), (iv) e σ com blocos de golfe que satisfazem A_l*A_l = I"""
    # Arrange
    system = _stacked_dft_system(8, copies=4)
    x = np.zeros(8, dtype=complex)
    x[[0, 3, 5, 6]] = [1.0, -2j, 0.5, 1 + 1j]

    # Act
    report = verify_certificate(system, x)

    # Assert
    values = {c.name: c.value for c in report.conditions}
    assert report.schedule.p == [8, 8, 16]
    assert report.all_events_hold
    assert values["iii"] <= report.propcond3_bound
    assert values["iv"] <= report.propcond4_bound
    assert report.measured_sigma == pytest.approx(2.0)
    assert report.measured_sigma <= report.sigma_chain_bound
    assert report.valid


def test_cadeia_do_certificado_com_m_crescente():
    """Teste das cotas encadeadas e da recuperação BPDN no primeiro sorteio em que todos os eventos valem"""
    # Arrange
    setup = CertificateSetup(
        n=32,
        sensors=4,
        mode=SamplingMode.IDENTICAL,
        profile=ProfileSpec(family=ProfileFamily.PIECEWISE_CONSTANT),
        s=4,
        master_seed=11,
        m_values=[128],
        trials=1,
    )

    # Act
    found = None
    for m in (64, 96, 128):
        for seed in range(40):
            system, x = build_instance(setup, m, RngStream(setup.master_seed, (m, seed)))
            report = verify_certificate(system, x)
            if report.all_events_hold:
                found = (system, x, report)
                break
        if found:
            break

    # Assert
    assert found is not None
    system, x, report = found
    values = {c.name: c.value for c in report.conditions}
    assert values["iii"] <= report.propcond3_bound + 1e-10
    assert values["iii"] <= 0.25 + 1e-10
    assert values["iv"] <= report.propcond4_bound + 1e-10
    assert report.measured_sigma <= 8.0
    result = bpdn_solve(system, MeasurementSet(y=system.matvec(x)))
    assert relative_error(x, result.x_hat) < 1e-4


def test_evento_d_com_suporte_completo():
    """Teste do evento D vacuamente verdadeiro com Δ = {0..N-1}"""
    x = np.ones(4, dtype=complex)
    result = golfing_construct([_identity_block(4)], range(4), x)
    report = check_conditions(np.eye(4), range(4), x, result.rho, result.xi)
    assert {c.name: c.value for c in report.conditions}["ii"] == 0.0


def test_event_frequencies_crescem_com_m(setup):
    """Teste de P(C) = 1 com todas as linhas DFT e P(C) não decrescente em m"""
    frequencies = event_frequencies(setup)

    assert [f.m for f in frequencies] == [8, 32]
    assert frequencies[1].event_c == 1.0
    assert frequencies[1].event_d == 1.0
    assert frequencies[1].event_c >= frequencies[0].event_c


def test_event_frequencies_deterministico_entre_workers(setup):
    """Teste de frequências idênticas com 1 e 2 workers"""
    assert event_frequencies(setup, workers=1) == event_frequencies(setup, workers=2)


def test_event_frequencies_sem_valores_de_m(setup):
    """Teste de erro sem valores de m"""
    with pytest.raises(InvalidArgumentError):
        event_frequencies(setup.model_copy(update={"m_values": []}))
