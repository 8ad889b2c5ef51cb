"""
Schemas das configurações de execução (arquivos TOML) e do manifesto
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.models.signal import SignalModel
from app.schemas.certificate import CertificateParams
from app.schemas.profile import PartitionKind, ProfileSpec
from app.schemas.sensing import EnsembleSpec, NoiseSpec, SystemSpec
from app.schemas.solver import SolverConfig


class SignalSection(BaseModel):
    """
    Schema da seção [signal]
    """
    model_config = ConfigDict(extra="forbid")

    model: SignalModel = Field(SignalModel.SPARSE, description="Modelo do sinal")
    s: Optional[int] = Field(None, description="Esparsidade (varrida no subcomando phase)")
    lam: float = Field(1.0, description="Fator λ dos modelos agrupado e equidistribuído")
    local_sparsities: Optional[List[int]] = Field(None, description="s_c do modelo por níveis")
    partition: PartitionKind = Field(PartitionKind.INTERLEAVED, description="Partição dos níveis")

    @field_validator("lam")
    def validar_lam(cls, v):
        if v < 1:
            raise ValueError("λ deve ser ≥ 1")
        return v


class CertificateSection(BaseModel):
    """
    Schema da seção [certificate]
    """
    model_config = ConfigDict(extra="forbid")

    params: CertificateParams = Field(default_factory=CertificateParams)
    m_values: List[int] = Field(default_factory=list, description="Valores de m para frequência de eventos")
    trials: int = Field(20, description="Sorteios por valor de m")

    @field_validator("trials")
    def validar_ensaios(cls, v):
        if v < 1:
            raise ValueError("O número de ensaios deve ser ao menos 1")
        return v


class ExperimentSection(BaseModel):
    """
    Schema da seção [experiment]
    """
    model_config = ConfigDict(extra="forbid")

    resolution: int = Field(49, description="Pontos por eixo da grade (δ, κ)")
    trials: int = Field(20, description="Ensaios por célula")
    tol: float = Field(1e-3, description="Tolerância do critério de sucesso")
    master_seed: Optional[int] = Field(None, description="Semente mestre (padrão: PCS_MASTER_SEED)")
    sensors: Optional[List[int]] = Field(None, description="Valores de C comparados; uma grade por valor")
    paired: bool = Field(False, description="Compartilha os sorteios entre os valores de C")
    avgp_thresholds: List[float] = Field(default_factory=lambda: [0.5], description="Limiares δ do AvgP")

    @field_validator("resolution", "trials")
    def validar_positivo(cls, v):
        if v < 1:
            raise ValueError("Resolução e ensaios devem ser ao menos 1")
        return v

    @field_validator("tol")
    def validar_tol(cls, v):
        if v <= 0:
            raise ValueError("A tolerância deve ser positiva")
        return v


class RunConfig(BaseModel):
    """
    Configuração completa de uma execução (todas as seções do TOML)
    """
    model_config = ConfigDict(extra="forbid")

    system: SystemSpec
    ensemble: EnsembleSpec = Field(default_factory=EnsembleSpec)
    profile: ProfileSpec
    signal: SignalSection = Field(default_factory=SignalSection)
    noise: NoiseSpec = Field(default_factory=NoiseSpec)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    certificate: CertificateSection = Field(default_factory=CertificateSection)
    experiment: ExperimentSection = Field(default_factory=ExperimentSection)

    @model_validator(mode="after")
    def validar_sensores(self):
        if self.experiment.sensors is not None and any(c < 1 for c in self.experiment.sensors):
            raise ValueError("Valores de C devem ser positivos")
        return self


class PhaseSummary(BaseModel):
    """
    Resumo de uma grade de transição de fase
    """
    sensors: int
    csv: str
    cells: int
    skipped: int
    avgp: Dict[str, Optional[float]] = Field(default_factory=dict)


class RunManifest(BaseModel):
    """
    Manifesto gravado ao lado de cada resultado
    """
    subcommand: str
    config: Dict[str, Any]
    master_seed: Optional[int] = None
    versions: Dict[str, str]
    outputs: List[str] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)


class DeltaComparison(BaseModel):
    """
    Menor índice δ com sucesso ≥ limiar, por κ, para duas grades
    """
    kappa_index: int
    kappa: float
    first: Optional[int] = None
    second: Optional[int] = None
    passed: bool
