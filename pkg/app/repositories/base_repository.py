"""
Repositório base com leitura e escrita de arquivos.
"""
import logging
from pathlib import Path
from typing import Union

from app.core.errors import MalformedFileError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class BaseRepository:
    """
    Repositório base: operações de arquivo comuns, com falhas convertidas
    em MalformedFileError.
    """

    def __init__(self, name: str):
        self.name = name

    def read_text(self, path: PathLike) -> str:
        """
        Lê um arquivo de texto.
        """
        try:
            return Path(path).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as e:
            raise MalformedFileError(f"Erro ao ler {self.name} em {path}: {str(e)}")

    def write_text(self, path: PathLike, content: str) -> Path:
        """
        Grava um arquivo de texto, criando diretórios se necessário.
        """
        target = Path(path)
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(content, encoding="utf-8", newline="")
        except OSError as e:
            raise MalformedFileError(f"Erro ao gravar {self.name} em {path}: {str(e)}")
        logger.info(f"{self.name} gravado em {target}")
        return target
