"""
Schemas para relatórios de coerência e consultas de cotas
"""

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class CoherenceMethod(str, Enum):
    EXACT = "exact"
    BOUND = "bound"
    MONTE_CARLO = "monte_carlo"


class CoherenceReport(BaseModel):
    """
    Valor de uma quantidade de coerência e como foi obtido
    """
    quantity: str = Field(..., description="Nome da quantidade (mu, mu_c, gamma1, gamma2, S_c, sigma_G, mu_joint)")
    value: float = Field(..., description="Valor (para colchetes, a cota inferior certificada)")
    method: CoherenceMethod
    samples: Optional[int] = Field(None, description="Número de sorteios no modo monte_carlo")
    lower: Optional[float] = Field(None, description="Cota inferior do colchete")
    upper: Optional[float] = Field(None, description="Cota superior do colchete")
    rigorous: bool = Field(True, description="Falso para estimativas de Monte-Carlo")
    context: Dict[str, Any] = Field(default_factory=dict)


class GammaReport(BaseModel):
    """
    Coerências locais Γ₁ e Γ₂ relativas a um suporte
    """
    support: List[int]
    gamma1: CoherenceReport
    gamma2: CoherenceReport


class BoundRule(str, Enum):
    THM_2_1 = "thm_2_1"
    COR_3_1 = "cor_3_1"
    COR_3_2 = "cor_3_2"
    COR_3_3 = "cor_3_3"
    COR_3_4 = "cor_3_4"
    COR_3_5 = "cor_3_5"
    COR_3_6 = "cor_3_6"
    COR_4_1 = "cor_4_1"
    COR_4_2 = "cor_4_2"
    COR_4_3 = "cor_4_3"
    THM_4_1 = "thm_4_1"


class BoundQuery(BaseModel):
    """
    Entradas de uma regra de cota de medições

    Apenas os campos exigidos pela regra escolhida precisam ser informados.
    """
    model_config = ConfigDict(extra="forbid")

    rule: BoundRule
    n: int = Field(..., description="Dimensão N")
    sensors: int = Field(1, description="Número de sensores C")
    eps: float = Field(..., description="Probabilidade de falha ε")
    s: Optional[int] = Field(None, description="Esparsidade total")
    local_sparsities: Optional[List[int]] = Field(None, description="s_1, …, s_C")
    lam: Optional[float] = Field(None, description="Fator de equidistribuição λ")
    block_size: Optional[int] = Field(None, description="D (linhas por sorteio)")
    gamma: Optional[float] = Field(None, description="Γ(F, Δ)")
    mu_f: Optional[List[float]] = Field(None, description="μ(F_c) por sensor")
    mu_g: Optional[float] = Field(None, description="μ(G)")
    mu_joint: Optional[float] = Field(None, description="μ(G, H_1, …, H_C)")
    local_coherences: Optional[List[List[float]]] = Field(None, description="μ_d(F_c): linha c, coluna d")
    row_fractions: Optional[List[float]] = Field(None, description="m_d/m")
    relative_sparsities: Optional[List[float]] = Field(None, description="S_1, …, S_C")
    sup_norms: Optional[List[float]] = Field(None, description="‖H_c‖∞")
    restricted_norms: Optional[List[List[float]]] = Field(None, description="‖H_c P_{I_d}‖∞")
    filter_l1: Optional[List[float]] = Field(None, description="‖h_c‖₁")
    eigen_sup: Optional[List[float]] = Field(None, description="‖Λ_c‖∞")
    sigma_g: Optional[List[float]] = Field(None, description="σ(G_c)")

    @field_validator("eps")
    def validar_eps(cls, v):
        if not 0 < v < 1:
            raise ValueError("ε deve estar em (0, 1)")
        return v

    @field_validator("n", "sensors")
    def validar_dimensoes(cls, v):
        if v < 1:
            raise ValueError("Dimensões devem ser maiores que 0")
        return v

    @model_validator(mode="after")
    def validar_esparsidade(self):
        if self.s is None and self.local_sparsities is None:
            raise ValueError("Informe s ou as esparsidades locais")
        return self

    @property
    def total_sparsity(self) -> int:
        if self.s is not None:
            return self.s
        return int(sum(self.local_sparsities))


class BoundReport(BaseModel):
    """
    Lado direito (sem constante universal) de uma cota de medições
    """
    rule: BoundRule
    rhs: float = Field(..., description="Valor do lado direito com constante 1")
    log_factor: float
    log_base: str = "natural"
    constant_free: bool = True
    label: str = "up to universal constant"
    side_condition: Optional[float] = Field(None, description="Valor da condição lateral (cor_3_4)")
    side_condition_passed: Optional[bool] = None
    inputs: Dict[str, Any] = Field(default_factory=dict)
