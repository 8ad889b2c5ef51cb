"""
Schemas para sistemas de medição
"""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.models.profile import SamplingMode
from app.models.sensing import DftGrid, EnsembleKind


class NoiseKind(str, Enum):
    NONE = "none"
    GAUSSIAN = "gaussian"


class EnsembleSpec(BaseModel):
    """
    Schema da seção [ensemble]
    """
    model_config = ConfigDict(extra="forbid")

    kind: EnsembleKind = Field(EnsembleKind.SUBSAMPLED_DFT, description="Distribuição das linhas")
    grid: DftGrid = Field(DftGrid.FULL, description="Grade DFT completa ou decimada por C")

    @model_validator(mode="after")
    def validar_ensemble(self):
        if self.kind == EnsembleKind.EXPLICIT_ATOMS:
            raise ValueError("Ensembles de átomos explícitos não são configuráveis por arquivo")
        return self


class SystemSpec(BaseModel):
    """
    Schema da seção [system]
    """
    model_config = ConfigDict(extra="forbid")

    n: int = Field(..., description="Dimensão do sinal N")
    sensors: int = Field(1, description="Número de sensores C")
    mode: SamplingMode = Field(SamplingMode.DISTINCT, description="Amostragem distinct ou identical")
    m: Optional[int] = Field(None, description="Número total de medições (varrido no subcomando phase)")

    @field_validator("n", "sensors", "m")
    def validar_positivo(cls, v):
        if v is not None and v < 1:
            raise ValueError("Dimensões devem ser maiores que 0")
        return v


class NoiseSpec(BaseModel):
    """
    Schema da seção [noise]
    """
    model_config = ConfigDict(extra="forbid")

    kind: NoiseKind = NoiseKind.NONE
    sigma: float = Field(0.0, description="Desvio padrão por entrada (ruído gaussiano complexo)")

    @field_validator("sigma")
    def validar_sigma(cls, v):
        if v < 0:
            raise ValueError("O desvio padrão do ruído deve ser não negativo")
        return v
