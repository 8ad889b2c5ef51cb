import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from app.api.deps import add_common_arguments
from app.core.config import settings
from app.core.errors import MalformedFileError
from app.routers import bounds, certificate, coherence, phase, profiles, recover
from app.routers.base import CommandRouter

#log
logging.basicConfig(
    level=getattr(logging, settings.LOG_LEVEL.upper()),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_IO_ERROR = 2


class CliApplication:
    """
    Aplicação de linha de comando: registra routers de subcomandos e
    despacha a execução convertendo erros em códigos de saída.
    """

    def __init__(self, title: str, description: str, version: str):
        self.title = title
        self.description = description
        self.version = version
        self.routers: List[CommandRouter] = []

    def include_router(self, router: CommandRouter) -> None:
        self.routers.append(router)

    def build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(prog="pcslab", description=self.description)
        parser.add_argument("--version", action="version", version=f"{self.title} {self.version}")
        common = argparse.ArgumentParser(add_help=False)
        add_common_arguments(common)
        subparsers = parser.add_subparsers(dest="command", metavar="SUBCOMANDO")
        for router in self.routers:
            router.register(subparsers, parents=[common])
        return parser

    def _configure_logging(self, args: argparse.Namespace) -> None:
        if args.verbose:
            logging.getLogger().setLevel(logging.DEBUG)
        elif args.quiet:
            logging.getLogger().setLevel(logging.WARNING)

    def dispatch(self, argv: Optional[List[str]] = None) -> int:
        """
        Executa o subcomando pedido.

        Returns:
            int: 0 em sucesso, 1 em erro de domínio, 2 em erro de I/O,
            parse ou uso
        """
        parser = self.build_parser()
        try:
            args = parser.parse_args(argv)
        except SystemExit as e:
            return EXIT_OK if e.code in (0, None) else EXIT_IO_ERROR
        if args.command is None:
            parser.print_usage(sys.stderr)
            return EXIT_IO_ERROR

        self._configure_logging(args)
        logger.debug(f"Executando {args.command}")
        try:
            args.handler(args)
        except ValidationError as e:
            logger.error(f"Configuração inválida: {str(e)}")
            return EXIT_IO_ERROR
        except (MalformedFileError, OSError) as e:
            logger.error(f"Erro de leitura/escrita: {str(e)}")
            return EXIT_IO_ERROR
        except ValueError as e:
            logger.error(f"Erro de domínio: {str(e)}")
            return EXIT_DOMAIN_ERROR
        return EXIT_OK


app = CliApplication(
    title=settings.PROJECT_NAME,
    description=settings.PROJECT_DESCRIPTION,
    version=settings.PROJECT_VERSION,
)

app.include_router(profiles.router)
app.include_router(coherence.router)
app.include_router(bounds.router)
app.include_router(recover.router)
app.include_router(certificate.router)
app.include_router(phase.router)


def main(argv: Optional[List[str]] = None) -> int:
    return app.dispatch(argv)
