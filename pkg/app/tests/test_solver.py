import numpy as np
import pytest
from pydantic import ValidationError
from scipy.optimize import linprog

from app.core.errors import InvalidArgumentError
from app.core.numerics import RngStream
from app.core.solver import (
    BpdnSolver,
    bpdn_solve,
    project_ball,
    recovery_success,
    relative_error,
    soft_threshold,
)
from app.models.sensing import MeasurementSet
from app.schemas.solver import SolverConfig, SolverStatus


def _real_instance(seed: int, m: int = 6, n: int = 10, s: int = 2):
    rng = RngStream(seed)
    matrix = rng.substream(0).gaussian(m, n) / np.sqrt(m)
    x = np.zeros(n)
    support = rng.substream(1).subset_without_replacement(n, s)
    x[support] = rng.substream(2).gaussian(1, s)[0]
    return matrix, x


def _lp_basis_pursuit(matrix: np.ndarray, y: np.ndarray):
    # z = u - v com u, v ≥ 0; marginais das igualdades dão o dual ν
    m, n = matrix.shape
    result = linprog(
        c=np.ones(2 * n),
        A_eq=np.hstack([matrix, -matrix]),
        b_eq=y,
        bounds=[(0, None)] * (2 * n),
        method="highs",
    )
    assert result.status == 0
    minimizer = result.x[:n] - result.x[n:]
    return float(result.fun), minimizer, np.asarray(result.eqlin.marginals)


def test_soft_threshold():
    """Teste do encolhimento complexo e de sgn(0) = 0"""
    out = soft_threshold(np.array([3 + 4j, 0.5, 0.0, -2.0]), 1.0)
    assert np.allclose(out, [0.6 * 4 + 0.8 * 4j, 0.0, 0.0, -1.0])


def test_project_ball():
    """Teste da projeção na bola ℓ2 e do raio nulo"""
    v = np.array([3.0, 4.0])
    assert np.allclose(project_ball(v, 10.0), v)
    assert np.allclose(project_ball(v, 1.0), [0.6, 0.8])
    assert np.allclose(project_ball(v, 0.0), 0.0)


@pytest.mark.parametrize("seed", range(50))
def test_bpdn_contra_programacao_linear(seed):
    """Teste do minimizador e da otimalidade por subgradiente contra o programa linear equivalente"""
    # Arrange
    matrix, x = _real_instance(seed, s=1 + seed % 2)
    y = matrix @ x
    objective, minimizer, nu = _lp_basis_pursuit(matrix, y)

    # Act
    result = bpdn_solve(matrix, MeasurementSet(y=y))

    # Assert
    assert result.objective == pytest.approx(objective, rel=1e-5)
    assert np.linalg.norm(result.x_hat - minimizer) <= 1e-5 * max(1.0, np.linalg.norm(minimizer))
    assert result.constraint_slack <= 1e-6
    subgradient = matrix.T @ nu
    support = np.abs(result.x_hat) > 1e-8
    signs = result.x_hat[support] / np.abs(result.x_hat[support])
    assert np.allclose(subgradient[support], signs, atol=1e-6)
    assert np.all(np.abs(subgradient[~support]) <= 1.0 + 1e-6)


def test_bpdn_identidade_recupera_exatamente():
    """Teste de A = I sem ruído: x̂ = x"""
    x = np.zeros(8, dtype=complex)
    x[[1, 5]] = [1.0, -1j]
    result = bpdn_solve(np.eye(8), MeasurementSet(y=x.copy()))
    assert result.status == SolverStatus.CONVERGED
    assert np.allclose(result.x_hat, x, atol=1e-9)
    assert relative_error(x, result.x_hat) < 1e-9


def test_bpdn_ruido_maior_que_medicoes_da_zero():
    """Teste de η ≥ ‖y‖₂: x̂ = 0 sem iterações"""
    y = np.array([0.1, 0.0, -0.1j])
    result = bpdn_solve(np.ones((3, 4)), MeasurementSet(y=y, eta=1.0))
    assert not np.any(result.x_hat)
    assert result.iterations == 0
    assert result.objective == 0.0


def test_bpdn_com_ruido_respeita_restricao():
    """Teste de ‖Ax̂ − y‖₂ ≤ η + 1e-6 quando o solver converge"""
    matrix, x = _real_instance(3, m=20, n=30, s=3)
    noise = RngStream(4).gaussian(1, 20)[0] * 0.01
    y = matrix @ x + noise
    eta = float(np.linalg.norm(noise))

    result = bpdn_solve(matrix, MeasurementSet(y=y, eta=eta))

    assert result.status == SolverStatus.CONVERGED
    assert result.constraint_slack <= eta + 1e-6
    assert not result.polished


@pytest.mark.parametrize("eta", [0.0, 0.05])
def test_bpdn_equivariancia_de_fase(eta):
    """Teste de y·e^{iθ} levando a x̂·e^{iθ}"""
    # Arrange
    matrix, x = _real_instance(11, m=12, n=20, s=2)
    y = (matrix @ x).astype(complex)
    phase = np.exp(0.7j)

    # Act
    base = bpdn_solve(matrix, MeasurementSet(y=y, eta=eta))
    rotated = bpdn_solve(matrix, MeasurementSet(y=phase * y, eta=eta))

    # Assert
    assert np.allclose(rotated.x_hat, phase * base.x_hat, atol=1e-6)
    assert rotated.objective == pytest.approx(base.objective, rel=1e-6)


def test_bpdn_historico_e_reuso_da_fatoracao():
    """Teste do histórico por iteração e de duas resoluções com o mesmo solver"""
    matrix, x = _real_instance(7)
    solver = BpdnSolver(SolverConfig(record_history=True))

    first = solver.solve(matrix, MeasurementSet(y=matrix @ x))
    second = solver.solve(matrix, MeasurementSet(y=matrix @ x))

    assert len(first.history) == first.iterations
    assert {"objective", "primal_residual", "dual_residual"} <= set(first.history[0])
    assert np.allclose(first.x_hat, second.x_hat)


def test_bpdn_comprimento_de_y_invalido():
    """Teste de erro com y de comprimento diferente de m"""
    with pytest.raises(InvalidArgumentError):
        bpdn_solve(np.eye(4), MeasurementSet(y=np.ones(3)))


def test_recovery_success_limiar():
    """Teste do critério de sucesso com tolerâncias 1e-3 e 1e-4"""
    x = np.array([1.0, 0.0, -2.0])
    assert recovery_success(x, x * (1 + 5e-4))
    assert not recovery_success(x, x * (1 + 5e-4), tol=1e-4)
    with pytest.raises(InvalidArgumentError):
        relative_error(np.zeros(3), x)


def test_solver_config_validacao():
    """Teste de parâmetros inválidos do solver"""
    with pytest.raises(ValidationError):
        SolverConfig(relaxation=2.0)
    with pytest.raises(ValidationError):
        SolverConfig(rho=0.0)
    with pytest.raises(ValidationError):
        SolverConfig(max_iterations=0)
