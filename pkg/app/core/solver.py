"""
Solver BPDN: min ‖z‖₁ sujeito a ‖Az − y‖₂ ≤ η, por ADMM com sobre-relaxação.

Divisão: z = u (bloco ℓ1, penalidade ρ) e Az − y = w (bloco bola, penalidade 1),
com fatoração de Cholesky de (A*A + ρI) reaproveitada entre iterações.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from scipy.linalg import cho_factor, cho_solve, lstsq

from app.core.errors import InvalidArgumentError
from app.models.sensing import MeasurementSet, ParallelSystem
from app.schemas.solver import SolverConfig, SolverStatus

logger = logging.getLogger(__name__)

SUPPORT_THRESHOLD = 1e-6
POLISH_OBJECTIVE_SLACK = 1e-4
FEASIBILITY_TOL = 1e-6


def soft_threshold(v: np.ndarray, kappa: float) -> np.ndarray:
    """Encolhimento complexo t·max(0, 1 − κ/|t|), com 0 em t = 0."""
    v = np.asarray(v, dtype=complex)
    magnitude = np.abs(v)
    shrink = np.zeros_like(magnitude)
    nonzero = magnitude > 0
    shrink[nonzero] = np.maximum(0.0, 1.0 - kappa / magnitude[nonzero])
    return v * shrink


def project_ball(v: np.ndarray, radius: float) -> np.ndarray:
    """Projeção euclidiana na bola ‖w‖₂ ≤ radius (radius = 0 dá {0})."""
    norm = np.linalg.norm(v)
    if norm <= radius:
        return v
    if radius <= 0:
        return np.zeros_like(v)
    return v * (radius / norm)


@dataclass
class SolverResult:
    x_hat: np.ndarray
    status: SolverStatus
    iterations: int
    primal_residual: float
    dual_residual: float
    objective: float
    constraint_slack: float
    polished: bool = False
    history: List[Dict[str, float]] = field(default_factory=list)


class BpdnSolver:
    """
    Solver ADMM para basis pursuit denoising com dados complexos.

    A fatoração de (A*A + ρI) é guardada para a última matriz resolvida,
    de modo que várias medições do mesmo sistema reaproveitam o custo.
    """

    def __init__(self, config: Optional[SolverConfig] = None):
        self.config = config or SolverConfig()
        self._cached: Optional[Tuple[np.ndarray, float, tuple]] = None

    def _factor(self, matrix: np.ndarray):
        if self._cached is not None and self._cached[0] is matrix and self._cached[1] == self.config.rho:
            return self._cached[2]
        gram = matrix.conj().T @ matrix + self.config.rho * np.eye(matrix.shape[1])
        factor = cho_factor(gram)
        self._cached = (matrix, self.config.rho, factor)
        return factor

    def _restore_feasibility(self, matrix: np.ndarray, y: np.ndarray, z: np.ndarray, eta: float) -> np.ndarray:
        """Desloca z pela correção de norma mínima que leva Az − y à bola de raio η."""
        residual = matrix @ z - y
        if np.linalg.norm(residual) <= eta + FEASIBILITY_TOL:
            return z
        correction, _, _, _ = lstsq(matrix, project_ball(residual, eta) - residual)
        return z + correction

    def _polish(self, matrix: np.ndarray, y: np.ndarray, u: np.ndarray) -> Optional[np.ndarray]:
        scale = np.max(np.abs(u)) if u.size else 0.0
        if scale == 0:
            return None
        support = np.flatnonzero(np.abs(u) > SUPPORT_THRESHOLD * scale)
        if support.size > matrix.shape[0]:
            return None
        coefficients, _, _, _ = lstsq(matrix[:, support], y)
        candidate = np.zeros_like(u)
        candidate[support] = coefficients
        residual = np.linalg.norm(matrix @ candidate - y)
        if residual > 1e-9 * max(1.0, np.linalg.norm(y)):
            return None
        if np.sum(np.abs(candidate)) > (1.0 + POLISH_OBJECTIVE_SLACK) * np.sum(np.abs(u)):
            return None
        return candidate

    def solve(
        self,
        system: Union[ParallelSystem, np.ndarray],
        meas: MeasurementSet,
    ) -> SolverResult:
        """
        Resolve min ‖z‖₁ s.a. ‖Az − y‖₂ ≤ η.

        Args:
            system: Sistema montado ou matriz A (m×N)
            meas: Medições y e limite η

        Returns:
            SolverResult: Solução aproximada com diagnósticos; status
            max_iter quando as tolerâncias não são atingidas

        Raises:
            InvalidArgumentError: Dimensões inconsistentes
        """
        matrix = system.matrix if isinstance(system, ParallelSystem) else np.asarray(system, dtype=complex)
        y = np.asarray(meas.y, dtype=complex)
        eta = float(meas.eta)
        m, n = matrix.shape
        if y.shape != (m,):
            raise InvalidArgumentError(f"y deve ter comprimento {m}, recebido {y.shape}")

        if np.linalg.norm(y) <= eta:
            # zero é viável e tem norma ℓ1 mínima
            return SolverResult(
                x_hat=np.zeros(n, dtype=complex), status=SolverStatus.CONVERGED, iterations=0,
                primal_residual=0.0, dual_residual=0.0, objective=0.0,
                constraint_slack=float(np.linalg.norm(y)),
            )

        cfg = self.config
        rho, alpha = cfg.rho, cfg.relaxation
        factor = self._factor(matrix)
        adjoint = matrix.conj().T

        u = np.zeros(n, dtype=complex)
        w = np.zeros(m, dtype=complex)
        d1 = np.zeros(n, dtype=complex)
        d2 = np.zeros(m, dtype=complex)
        history: List[Dict[str, float]] = []
        status = SolverStatus.MAX_ITER
        primal = dual = np.inf
        iteration = 0

        for iteration in range(1, cfg.max_iterations + 1):
            x = cho_solve(factor, rho * (u - d1) + adjoint @ (y + w - d2))
            ax = matrix @ x
            x_relaxed = alpha * x + (1.0 - alpha) * u
            ax_relaxed = alpha * ax + (1.0 - alpha) * (w + y)

            u_old, w_old = u, w
            u = soft_threshold(x_relaxed + d1, 1.0 / rho)
            w = project_ball(ax_relaxed - y + d2, eta)
            d1 = d1 + x_relaxed - u
            d2 = d2 + ax_relaxed - y - w

            primal = float(np.sqrt(np.linalg.norm(x - u) ** 2 + np.linalg.norm(ax - y - w) ** 2))
            dual = float(np.linalg.norm(rho * (u - u_old) + adjoint @ (w - w_old)))
            eps_primal = np.sqrt(n + m) * cfg.abs_tol + cfg.rel_tol * max(
                np.sqrt(np.linalg.norm(x) ** 2 + np.linalg.norm(ax) ** 2),
                np.sqrt(np.linalg.norm(u) ** 2 + np.linalg.norm(w + y) ** 2),
            )
            eps_dual = np.sqrt(n) * cfg.abs_tol + cfg.rel_tol * np.linalg.norm(rho * d1 + adjoint @ d2)

            if cfg.record_history:
                history.append({
                    "iteration": float(iteration),
                    "objective": float(np.sum(np.abs(u))),
                    "primal_residual": primal,
                    "dual_residual": dual,
                })
            if primal <= eps_primal and dual <= eps_dual:
                feasible = self._restore_feasibility(matrix, y, u, eta)
                if np.linalg.norm(matrix @ feasible - y) <= eta + FEASIBILITY_TOL:
                    x_hat = feasible
                    status = SolverStatus.CONVERGED
                    break

        if status == SolverStatus.MAX_ITER:
            x_hat = u
        polished = False
        if cfg.polish and eta == 0.0:
            candidate = self._polish(matrix, y, u)
            if candidate is not None and np.linalg.norm(matrix @ candidate - y) <= FEASIBILITY_TOL:
                x_hat, polished = candidate, True

        if status == SolverStatus.MAX_ITER:
            logger.warning(
                f"BPDN atingiu {cfg.max_iterations} iterações sem convergir "
                f"(primal={primal:.3g}, dual={dual:.3g})"
            )
        return SolverResult(
            x_hat=x_hat,
            status=status,
            iterations=iteration,
            primal_residual=primal,
            dual_residual=dual,
            objective=float(np.sum(np.abs(x_hat))),
            constraint_slack=float(np.linalg.norm(matrix @ x_hat - y)),
            polished=polished,
            history=history,
        )


def bpdn_solve(
    system: Union[ParallelSystem, np.ndarray],
    meas: MeasurementSet,
    config: Optional[SolverConfig] = None,
) -> SolverResult:
    """Atalho: resolve com um BpdnSolver novo."""
    return BpdnSolver(config).solve(system, meas)


def relative_error(x: np.ndarray, x_hat: np.ndarray) -> float:
    """
    ‖x − x̂‖₂ / ‖x‖₂.

    Raises:
        InvalidArgumentError: Se x é o vetor nulo
    """
    reference = np.linalg.norm(x)
    if reference == 0:
        raise InvalidArgumentError("Sinal de referência nulo: erro relativo indefinido")
    return float(np.linalg.norm(np.asarray(x) - np.asarray(x_hat)) / reference)


def recovery_success(x: np.ndarray, x_hat: np.ndarray, tol: float = 1e-3) -> bool:
    """Sucesso quando ‖x − x̂‖₂/‖x‖₂ < tol."""
    return relative_error(x, x_hat) < tol
