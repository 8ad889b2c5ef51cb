import math

import pytest
from pydantic import ValidationError

from app.core.bounds import log_factor, required_measurements
from app.core.errors import InvalidArgumentError
from app.schemas.coherence import BoundQuery, BoundRule


def _query(rule, **kwargs):
    data = {"rule": rule, "n": 128, "eps": 0.05}
    data.update(kwargs)
    return BoundQuery(**data)


def test_log_factor_exemplo():
    """Teste de L(128, 10, 0.05) ≈ 20.048"""
    expected = math.log(128 / 0.05) + math.log(10) * math.log(10 / 0.05)
    assert log_factor(128, 10, 0.05) == pytest.approx(expected)
    assert log_factor(128, 10, 0.05) == pytest.approx(20.048, abs=1e-3)


@pytest.mark.parametrize("n, s, eps", [(1, 4, 0.1), (16, 1, 0.1), (16, 4, 0.0), (16, 4, 1.0)])
def test_log_factor_entradas_invalidas(n, s, eps):
    """Teste de N < 2, s < 2 e ε fora de (0, 1)"""
    with pytest.raises(InvalidArgumentError):
        log_factor(n, s, eps)


def test_cor_4_2_dft():
    """Teste de m ≳ s·C·μ(G)·L com s = 10, C = 4 e μ(G) = 1"""
    report = required_measurements(_query(BoundRule.COR_4_2, sensors=4, s=10, mu_g=1.0))
    assert report.rhs == pytest.approx(40 * log_factor(128, 10, 0.05))
    assert report.rhs == pytest.approx(801.9, abs=0.1)
    assert report.constant_free
    assert report.inputs["mu_g"] == 1.0


def test_cor_3_3_com_normas_unitarias_igual_a_cor_3_1():
    """Teste de cor_3_3 com ‖H_c‖∞ = 1 coincidindo com cor_3_1 quando μ(F_c) = μ(G)"""
    general = required_measurements(_query(BoundRule.COR_3_1, sensors=2, s=8, mu_f=[1.0, 1.0]))
    profiled = required_measurements(_query(BoundRule.COR_3_3, sensors=2, s=8, mu_g=1.0, sup_norms=[1.0, 1.0]))
    assert profiled.rhs == pytest.approx(general.rhs)


def test_thm_4_1_com_lambda_nao_depende_de_c():
    """Teste de thm_4_1 via λ: μ(G)·λ·s·L para qualquer C"""
    values = [
        required_measurements(_query(BoundRule.THM_4_1, sensors=c, s=16, lam=1.0, mu_g=1.0)).rhs
        for c in (1, 2, 4, 8)
    ]
    assert values == pytest.approx([16 * log_factor(128, 16, 0.05)] * 4)


def test_thm_4_1_com_esparsidades_locais():
    """Teste de thm_4_1 com C·max s_c"""
    report = required_measurements(_query(BoundRule.THM_4_1, sensors=2, local_sparsities=[3, 5], mu_g=1.0))
    assert report.rhs == pytest.approx(2 * 5 * log_factor(128, 8, 0.05))


def test_cor_3_4_nonoverlapping_condicao_lateral():
    """Teste da condição lateral = C para perfis sem sobreposição"""
    # Arrange
    root = math.sqrt(2)
    query = _query(
        BoundRule.COR_3_4, sensors=2, local_sparsities=[2, 4], mu_g=1.0,
        sup_norms=[root, root], restricted_norms=[[root, 0.0], [0.0, root]],
    )

    # Act
    report = required_measurements(query)

    # Assert
    assert report.side_condition == pytest.approx(2.0)
    assert report.side_condition_passed
    assert report.rhs == pytest.approx(2 * 4 * log_factor(128, 6, 0.05))


def test_cor_3_4_condicao_lateral_violada():
    """Teste de condição lateral acima de C"""
    report = required_measurements(_query(
        BoundRule.COR_3_4, sensors=2, local_sparsities=[2, 2], mu_g=1.0,
        sup_norms=[2.0, 2.0], restricted_norms=[[2.0, 2.0], [2.0, 2.0]],
    ))
    assert report.side_condition == pytest.approx(8.0)
    assert report.side_condition_passed is False


def test_thm_2_1_e_regras_circulantes():
    """Teste de D·Γ, de Σ‖h_c‖₁² e de max ‖Λ_c‖²∞σ(G_c)"""
    big_l = log_factor(128, 4, 0.05)
    thm = required_measurements(_query(BoundRule.THM_2_1, s=4, block_size=2, gamma=3.0))
    assert thm.rhs == pytest.approx(6 * big_l)

    cor_4_3 = required_measurements(_query(BoundRule.COR_4_3, sensors=2, s=4, mu_g=1.0, filter_l1=[1.0, 1.0]))
    assert cor_4_3.rhs == pytest.approx(4 * 2 * 2 * big_l)

    cor_3_6 = required_measurements(_query(BoundRule.COR_3_6, s=4, eigen_sup=[1.0, 2.0], sigma_g=[1.0, 0.5]))
    assert cor_3_6.rhs == pytest.approx(4 * 2.0 * big_l)


def test_cor_3_2_maximo_dos_dois_termos():
    """Teste de cor_3_2 com coerências locais e esparsidades relativas"""
    report = required_measurements(_query(
        BoundRule.COR_3_2, sensors=2, local_sparsities=[2, 2],
        local_coherences=[[1.0, 0.5], [0.5, 1.0]], row_fractions=[0.5, 0.5], relative_sparsities=[4.0, 4.0],
    ))
    # primeiro termo: 1·2 + 0.5·2 = 3; segundo: 0.5·1·4 + 0.5·0.5·4 = 3
    assert report.rhs == pytest.approx(3 * log_factor(128, 4, 0.05))


@pytest.mark.parametrize("rule, kwargs", [
    (BoundRule.THM_2_1, {"s": 4}),
    (BoundRule.COR_4_2, {"s": 4}),
    (BoundRule.THM_4_1, {"s": 4, "mu_g": 1.0}),
    (BoundRule.COR_3_4, {"local_sparsities": [1, 1], "sensors": 2, "mu_g": 1.0, "sup_norms": [1.0]}),
])
def test_entradas_ausentes(rule, kwargs):
    """Teste de regras sem as entradas exigidas"""
    with pytest.raises(InvalidArgumentError):
        required_measurements(_query(rule, **kwargs))


def test_bound_query_validacao():
    """Teste de ε inválido e ausência de esparsidade na consulta"""
    with pytest.raises(ValidationError):
        BoundQuery(rule=BoundRule.COR_4_2, n=128, eps=1.5, s=4, mu_g=1.0)
    with pytest.raises(ValidationError):
        BoundQuery(rule=BoundRule.COR_4_2, n=128, eps=0.05, mu_g=1.0)
