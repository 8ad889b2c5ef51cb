"""
Router de subcomandos da linha de comando.
"""
import argparse
from types import ModuleType
from typing import Callable, Optional


class CommandRouter:
    """
    Associa um subcomando ao endpoint que define seus argumentos e o executa.

    O endpoint expõe `add_arguments(parser)` e `handle(args)`.
    """

    def __init__(self, name: str, help: str, description: Optional[str] = None):
        self.name = name
        self.help = help
        self.description = description or help
        self.configure: Optional[Callable[[argparse.ArgumentParser], None]] = None
        self.handler: Optional[Callable[[argparse.Namespace], None]] = None

    def include_endpoint(self, endpoint: ModuleType) -> None:
        self.configure = endpoint.add_arguments
        self.handler = endpoint.handle

    def register(self, subparsers, parents=()) -> argparse.ArgumentParser:
        if self.handler is None:
            raise RuntimeError(f"Subcomando {self.name} sem endpoint")
        parser = subparsers.add_parser(
            self.name, help=self.help, description=self.description, parents=list(parents),
        )
        self.configure(parser)
        parser.set_defaults(handler=self.handler, command=self.name)
        return parser
