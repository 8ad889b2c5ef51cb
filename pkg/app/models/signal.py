"""
Modelos de esparsidade: partições, esquemas por níveis e especificações de sinal.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from app.core.errors import InfeasibleSpecError, InvalidArgumentError


class SignalModel(str, Enum):
    SPARSE = "sparse"
    SPARSE_IN_LEVELS = "sparse_in_levels"
    CLUSTERED = "clustered"
    EQUIDISTRIBUTED = "equidistributed"


@dataclass(frozen=True, eq=False)
class Partition:
    """
    Partição I_1, …, I_C de {0, …, N-1}.

    Os conjuntos são disjuntos, não vazios e cobrem todos os índices.
    """
    n: int
    sets: Tuple[np.ndarray, ...]

    def __post_init__(self):
        sets = tuple(np.sort(np.asarray(s, dtype=int)) for s in self.sets)
        object.__setattr__(self, "sets", sets)
        if self.n < 1 or not sets:
            raise InvalidArgumentError("Partição precisa de N ≥ 1 e ao menos um nível")
        if any(s.size == 0 for s in sets):
            raise InvalidArgumentError("Todos os níveis da partição devem ser não vazios")
        merged = np.concatenate(sets)
        if merged.size != self.n or not np.array_equal(np.sort(merged), np.arange(self.n)):
            raise InvalidArgumentError(f"Os níveis não cobrem {{0..{self.n - 1}}} exatamente uma vez")

    @classmethod
    def from_lists(cls, n: int, sets: Sequence[Sequence[int]]) -> "Partition":
        return cls(n=n, sets=tuple(np.asarray(s, dtype=int) for s in sets))

    @property
    def num_levels(self) -> int:
        return len(self.sets)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(int(s.size) for s in self.sets)

    def level_of(self) -> np.ndarray:
        """Vetor de comprimento N com o nível de cada índice."""
        labels = np.empty(self.n, dtype=int)
        for c, s in enumerate(self.sets):
            labels[s] = c
        return labels

    def __repr__(self):
        return f"<Partition(n={self.n}, sizes={self.sizes})>"


@dataclass(frozen=True, eq=False)
class LevelScheme:
    """Partição com esparsidades locais s_1, …, s_C (s_c ≤ |I_c|)."""
    partition: Partition
    local_sparsities: Tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(v) for v in self.local_sparsities)
        object.__setattr__(self, "local_sparsities", counts)
        if len(counts) != self.partition.num_levels:
            raise InvalidArgumentError(
                f"Esperadas {self.partition.num_levels} esparsidades locais, recebidas {len(counts)}"
            )
        for c, (s_c, size) in enumerate(zip(counts, self.partition.sizes)):
            if s_c < 0 or s_c > size:
                raise InfeasibleSpecError(f"Nível {c}: s_c={s_c} fora de [0, {size}]")

    @property
    def total(self) -> int:
        return int(sum(self.local_sparsities))


@dataclass(frozen=True, eq=False)
class SignalSpec:
    """
    Especificação de um sinal aleatório.

    sparse: usa `s`; sparse_in_levels: usa `levels`; clustered: usa `s`, `lam`
    e `start` (faixa {start, …, start+λs-1}); equidistributed: usa `s`, `lam`
    e `partition`.
    """
    model: SignalModel
    n: int
    s: Optional[int] = None
    levels: Optional[LevelScheme] = None
    lam: Optional[float] = None
    start: Optional[int] = None
    partition: Optional[Partition] = field(default=None)

    @property
    def band_width(self) -> int:
        return int(round(self.lam * self.s))
