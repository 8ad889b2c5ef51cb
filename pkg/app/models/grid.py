"""
Modelos para grades de transição de fase.
"""
from dataclasses import dataclass, field
from typing import List, Tuple


@dataclass(frozen=True)
class CellResult:
    i: int
    j: int
    delta: float
    kappa: float
    m: int
    s: int
    trials: int
    successes: int
    skipped: bool = False

    @property
    def fraction(self) -> float:
        if self.skipped or self.trials == 0:
            return 0.0
        return self.successes / self.trials


@dataclass
class PhaseGrid:
    """
    Grade (δ, κ) de frações de sucesso.

    `deltas[i]` e `kappas[j]` são os eixos; células em ordem (i, j) row-major.
    """
    deltas: Tuple[float, ...] = ()
    kappas: Tuple[float, ...] = ()
    cells: List[CellResult] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def cell(self, i: int, j: int) -> CellResult:
        return self.cells[i * len(self.kappas) + j]
