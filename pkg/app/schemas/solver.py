"""
Schemas para o solver BPDN
"""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator


class SolverStatus(str, Enum):
    CONVERGED = "converged"
    MAX_ITER = "max_iter"


class SolverConfig(BaseModel):
    """
    Schema da seção [solver]
    """
    model_config = ConfigDict(extra="forbid")

    max_iterations: int = Field(5000, description="Número máximo de iterações ADMM")
    abs_tol: float = Field(1e-7, description="Tolerância absoluta dos resíduos")
    rel_tol: float = Field(1e-5, description="Tolerância relativa dos resíduos")
    rho: float = Field(1.0, description="Parâmetro de penalidade")
    relaxation: float = Field(1.5, description="Fator de sobre-relaxação em [1, 1.8]")
    polish: bool = Field(True, description="Refina por mínimos quadrados no suporte quando η = 0")
    record_history: bool = Field(False, description="Guarda objetivo e resíduos por iteração")

    @field_validator("max_iterations")
    def validar_iteracoes(cls, v):
        if v < 1:
            raise ValueError("O número máximo de iterações deve ser ao menos 1")
        return v

    @field_validator("abs_tol", "rel_tol", "rho")
    def validar_positivo(cls, v):
        if v <= 0:
            raise ValueError("Tolerâncias e penalidade devem ser positivas")
        return v

    @field_validator("relaxation")
    def validar_relaxacao(cls, v):
        if not 1.0 <= v <= 1.8:
            raise ValueError("O fator de sobre-relaxação deve estar em [1, 1.8]")
        return v


class RecoveryReport(BaseModel):
    """
    Resultado do subcomando recover
    """
    relative_error: float
    success: bool
    iterations: int
    status: SolverStatus
    objective: float
    constraint_slack: float
    eta: float
    m: int
    n: int
    s: int
    tolerance: float = Field(0.001, description="Tolerância do critério de sucesso")
    master_seed: Optional[int] = None
