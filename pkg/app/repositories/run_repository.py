"""
Repositório para configurações TOML, resultados JSON e manifestos de execução.
"""
import csv
import io
import json
import logging
import platform
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import scipy
import toml

from app.core.config import settings
from app.core.errors import InvalidArgumentError, MalformedFileError
from app.models.sensing import ParallelSystem
from app.repositories.base_repository import BaseRepository, PathLike
from app.schemas.experiment import RunConfig, RunManifest

logger = logging.getLogger(__name__)


def _parse_value(raw: str) -> Any:
    """Interpreta o valor de um override como TOML; texto puro vira string."""
    try:
        return toml.loads(f"value = {raw}")["value"]
    except toml.TomlDecodeError:
        return raw


def apply_overrides(data: Dict[str, Any], overrides: Sequence[str]) -> Dict[str, Any]:
    """
    Aplica overrides `secao.chave=valor` (chaves aninhadas com pontos).

    Raises:
        InvalidArgumentError: Override sem '=' ou sem seção
    """
    for item in overrides:
        if "=" not in item:
            raise InvalidArgumentError(f"Override inválido (esperado secao.chave=valor): {item}")
        key, raw = item.split("=", 1)
        parts = [part.strip() for part in key.strip().split(".")]
        if len(parts) < 2 or not all(parts):
            raise InvalidArgumentError(f"Override sem seção: {item}")
        target = data
        for part in parts[:-1]:
            node = target.setdefault(part, {})
            if not isinstance(node, dict):
                raise InvalidArgumentError(f"Override {item} atravessa um valor que não é seção")
            target = node
        target[parts[-1]] = _parse_value(raw.strip())
        logger.debug(f"Override aplicado: {key.strip()} = {target[parts[-1]]!r}")
    return data


class RunRepository(BaseRepository):
    """
    Lê configurações e grava resultados sempre dentro do diretório de saída.
    """

    def __init__(self):
        super().__init__("resultado")

    def load_raw(self, path: PathLike) -> Dict[str, Any]:
        """
        Lê um arquivo TOML como dicionário.

        Raises:
            MalformedFileError: Arquivo ausente ou TOML inválido
        """
        content = self.read_text(path)
        try:
            return toml.loads(content)
        except toml.TomlDecodeError as e:
            raise MalformedFileError(f"Erro ao interpretar configuração {path}: {str(e)}")

    def load_config(self, path: Optional[PathLike], overrides: Sequence[str] = ()) -> RunConfig:
        """
        Carrega a configuração, aplica overrides e valida.

        Raises:
            MalformedFileError: Arquivo ausente ou TOML inválido
            pydantic.ValidationError: Chaves desconhecidas ou valores inválidos
        """
        data = self.load_raw(path) if path is not None else {}
        apply_overrides(data, overrides)
        config = RunConfig.model_validate(data)
        logger.info(f"Configuração carregada de {path or '<overrides>'}")
        return config

    def resolve(self, output_dir: PathLike, name: str) -> Path:
        """
        Caminho de `name` dentro de `output_dir`.

        Raises:
            InvalidArgumentError: Se o caminho escapa do diretório de saída
        """
        root = Path(output_dir).resolve()
        target = (root / name).resolve()
        if target != root and root not in target.parents:
            raise InvalidArgumentError(f"{name} fica fora do diretório de saída {root}")
        return target

    def write_json(self, output_dir: PathLike, name: str, payload: Any) -> Path:
        """
        Grava JSON com chaves ordenadas.
        """
        content = json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
        return self.write_text(self.resolve(output_dir, name), content)

    def write_manifest(
        self,
        output_dir: PathLike,
        subcommand: str,
        config: Dict[str, Any],
        master_seed: Optional[int] = None,
        outputs: Optional[List[str]] = None,
        notes: Optional[List[str]] = None,
    ) -> Path:
        """
        Grava manifest.json: subcomando, configuração ecoada, semente e versões.
        """
        manifest = RunManifest(
            subcommand=subcommand,
            config=config,
            master_seed=master_seed,
            versions={
                "parallel_cs_lab": settings.PROJECT_VERSION,
                "numpy": np.__version__,
                "scipy": scipy.__version__,
                "python": platform.python_version(),
            },
            outputs=outputs or [],
            notes=notes or [],
        )
        return self.write_json(output_dir, "manifest.json", manifest.model_dump(mode="json"))

    def write_csv(self, output_dir: PathLike, name: str, content: str) -> Path:
        return self.write_text(self.resolve(output_dir, name), content)

    def export_matrix_csv(self, system: ParallelSystem, output_dir: PathLike, name: str = "matrix.csv") -> Path:
        """
        Exporta A linha a linha com re/im intercalados (re_0, im_0, re_1, …).
        """
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        for row in system.matrix:
            values = np.empty(2 * row.size)
            values[0::2] = row.real
            values[1::2] = row.imag
            writer.writerow([f"{v:.17g}" for v in values])
        return self.write_csv(output_dir, name, buffer.getvalue())


run_repository = RunRepository()
