"""
Repositório para perfis de sensor em JSON.
"""
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from app.core.errors import InvalidArgumentError, MalformedFileError
from app.models.profile import ProfileKind, SensorProfile
from app.repositories.base_repository import BaseRepository, PathLike
from app.schemas.profile import ProfileDocument


class ProfileRepository(BaseRepository):
    """
    Grava e lê SensorProfile como documento {kind, family, mode, C, N, data}.
    """

    def __init__(self):
        super().__init__("perfis de sensor")

    def to_document(self, profile: SensorProfile) -> ProfileDocument:
        flat = profile.data.reshape(-1)
        interleaved = np.empty(2 * flat.size)
        interleaved[0::2] = flat.real
        interleaved[1::2] = flat.imag
        return ProfileDocument(
            kind=profile.kind, family=profile.family, mode=profile.mode,
            C=profile.num_sensors, N=profile.n, data=interleaved.tolist(),
        )

    def from_document(self, document: ProfileDocument) -> SensorProfile:
        values = np.asarray(document.data, dtype=float)
        flat = values[0::2] + 1j * values[1::2]
        shape = (document.C, document.N, document.N) if document.kind == ProfileKind.DENSE else (document.C, document.N)
        return SensorProfile(kind=document.kind, data=flat.reshape(shape), family=document.family, mode=document.mode)

    def save(self, profile: SensorProfile, path: PathLike) -> Path:
        """
        Grava os perfis em JSON.
        """
        document = self.to_document(profile)
        return self.write_text(path, document.model_dump_json(indent=2) + "\n")

    def load(self, path: PathLike) -> SensorProfile:
        """
        Lê perfis gravados por `save`.

        Raises:
            MalformedFileError: Documento ausente ou inválido
        """
        content = self.read_text(path)
        try:
            document = ProfileDocument.model_validate_json(content)
            return self.from_document(document)
        except (ValidationError, InvalidArgumentError) as e:
            raise MalformedFileError(f"Erro ao interpretar perfis em {path}: {str(e)}")


profile_repository = ProfileRepository()
