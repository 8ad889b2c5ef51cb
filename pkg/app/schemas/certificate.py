"""
Schemas para certificados duais e o esquema de golfe
"""

from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.models.profile import SamplingMode
from app.schemas.profile import ProfileSpec
from app.schemas.sensing import EnsembleSpec


class CertificateParams(BaseModel):
    """
    Constantes α, β, γ, θ, σ das condições do certificado dual
    """
    model_config = ConfigDict(extra="forbid")

    alpha: float = Field(0.25, description="Cota de (i)")
    beta: float = Field(1.0, description="Cota de (ii)")
    gamma: float = Field(0.25, description="Cota de (iii)")
    theta: float = Field(0.5, description="Cota de (iv)")
    sigma: float = Field(8.0, description="Cota de (v): ‖ξ‖ ≤ σ√|Δ|")

    @field_validator("alpha")
    def validar_alpha(cls, v):
        if not 0 <= v < 1:
            raise ValueError("α deve estar em [0, 1)")
        return v

    @field_validator("beta", "gamma", "theta", "sigma")
    def validar_nao_negativo(cls, v):
        if v < 0:
            raise ValueError("As constantes do certificado devem ser não negativas")
        return v

    @property
    def combined_value(self) -> float:
        """θ + βγ/(1−α)"""
        return self.theta + self.beta * self.gamma / (1.0 - self.alpha)

    @property
    def admissible(self) -> bool:
        return self.combined_value < 1.0


class GolfingSchedule(BaseModel):
    """
    Parâmetros L, a_l, b_l e p_l do esquema de golfe
    """
    num_blocks: int
    a: List[float]
    b: List[float]
    p: List[int]


class ConditionResult(BaseModel):
    name: str
    value: float
    threshold: float
    passed: bool


class EventResult(BaseModel):
    name: str
    value: float
    threshold: float
    holds: bool


class CertificateReport(BaseModel):
    """
    Valores medidos das condições (i)–(v), eventos e validade
    """
    support: List[int]
    conditions: List[ConditionResult]
    measured_sigma: float
    combined_value: float
    admissible: bool
    events: List[EventResult] = Field(default_factory=list)
    all_events_hold: Optional[bool] = None
    schedule: Optional[GolfingSchedule] = None
    propcond3_bound: Optional[float] = None
    propcond4_bound: Optional[float] = None
    sigma_chain_bound: Optional[float] = None
    identity_error: Optional[float] = Field(None, description="‖ρ − A*ξ‖∞")
    valid: bool


class CertificateSetup(BaseModel):
    """
    Cenário para frequência de eventos: sistema e sinal equidistribuído
    """
    model_config = ConfigDict(extra="forbid")

    n: int = 32
    sensors: int = 4
    mode: SamplingMode = SamplingMode.IDENTICAL
    ensemble: EnsembleSpec = Field(default_factory=EnsembleSpec)
    profile: ProfileSpec
    s: int = Field(4, description="Esparsidade do sinal")
    lam: float = Field(1.0, description="Fator de equidistribuição λ")
    master_seed: int = 0
    m_values: List[int] = Field(default_factory=list, description="Valores de m avaliados")
    trials: int = Field(20, description="Sorteios por valor de m")

    @field_validator("s")
    def validar_s(cls, v):
        if v < 2:
            raise ValueError("O esquema de golfe exige s ≥ 2")
        return v


class EventFrequency(BaseModel):
    m: int
    trials: int
    event_c: float
    event_d: float
    all_events: float
    valid: float
