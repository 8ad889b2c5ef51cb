"""
Schemas para perfis de sensor
"""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.models.profile import ProfileFamily, ProfileKind, SamplingMode


class MixingKind(str, Enum):
    """Matrizes de mistura V disponíveis"""
    DFT = "dft"
    IDENTITY = "identity"
    BANDED = "banded"


class PartitionKind(str, Enum):
    INTERLEAVED = "interleaved"
    BLOCKS = "blocks"


class ProfileSpec(BaseModel):
    """
    Schema da seção [profile] da configuração
    """
    model_config = ConfigDict(extra="forbid")

    family: ProfileFamily = Field(..., description="Família de construção dos perfis")
    partition: PartitionKind = Field(PartitionKind.INTERLEAVED, description="Partição usada pelas famílias por níveis: interleaved ou blocks")
    mixing: MixingKind = Field(MixingKind.DFT, description="Matriz de mistura: dft, identity ou banded")
    banded_filter: Optional[List[float]] = Field(None, description="Linha w da mistura banda circulante")
    lambdas: Optional[List[float]] = Field(None, description="Pesos λ_c da família almost_identical")
    filters: Optional[List[List[float]]] = Field(None, description="Filtros reais h_c da família circulant_filter")
    normalize: bool = Field(True, description="Normaliza filtros circulantes no domínio espectral")
    width_factor: float = Field(2.0, description="Largura do cosseno truncado em múltiplos de N/C")

    @field_validator("width_factor")
    def validar_largura(cls, v):
        if v <= 0:
            raise ValueError("A largura da banda deve ser positiva")
        return v


class IsometryReport(BaseModel):
    """
    Resultado da verificação de isometria
    """
    mode: SamplingMode
    max_deviation: float = Field(..., description="‖M − I‖ entrada a entrada")
    tolerance: float
    passed: bool


class ProfileNorms(BaseModel):
    """
    Normas dos perfis usadas nas cotas de medição
    """
    sup_norms: List[float] = Field(..., description="‖H_c‖∞ (norma induzida)")
    restricted_norms: Optional[List[List[float]]] = Field(None, description="‖H_c P_{I_d}‖∞, linha c e coluna d")
    filter_l1: Optional[List[float]] = Field(None, description="‖h_c‖₁ para perfis circulantes")
    eigen_sup: Optional[List[float]] = Field(None, description="‖Λ_c‖∞ para perfis diagonais ou circulantes")


class ProfileDocument(BaseModel):
    """
    Documento JSON de perfis: dados achatados com re/im intercalados
    """
    kind: ProfileKind
    family: ProfileFamily = ProfileFamily.CUSTOM
    mode: Optional[SamplingMode] = None
    C: int = Field(..., description="Número de sensores")
    N: int = Field(..., description="Dimensão do sinal")
    data: List[float] = Field(..., description="re₀, im₀, re₁, im₁, … em ordem C-major")

    @model_validator(mode="after")
    def validar_tamanho(self):
        per_sensor = self.N * self.N if self.kind == ProfileKind.DENSE else self.N
        if len(self.data) != 2 * self.C * per_sensor:
            raise ValueError(f"Esperados {2 * self.C * per_sensor} valores em data, recebidos {len(self.data)}")
        return self
