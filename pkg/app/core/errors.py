"""
Exceções do domínio.

Erros de domínio herdam de ValueError (código de saída 1 na CLI);
MalformedFileError representa falhas de leitura/parse (código 2).
"""


class ParallelCSError(Exception):
    """Exceção base do laboratório"""


class InvalidArgumentError(ParallelCSError, ValueError):
    """Argumento fora do domínio da operação"""


class InfeasibleSpecError(ParallelCSError, ValueError):
    """Especificação de sinal, sistema ou célula inviável"""


class IsometryError(ParallelCSError, ValueError):
    """Perfis de sensor não satisfazem a condição de isometria exigida"""


class CoherenceUndefinedError(ParallelCSError, ValueError):
    """Coerência indefinida para ensembles não limitados (ex.: gaussiano)"""


class EmptySelectionError(ParallelCSError, ValueError):
    """Seleção vazia de células da grade"""


class MalformedFileError(ParallelCSError):
    """Arquivo inexistente, ilegível ou fora do formato esperado"""
