"""
Repositório para grades de transição de fase em CSV.
"""
import csv
import io
from pathlib import Path
from typing import List

from app.core.errors import MalformedFileError
from app.models.grid import CellResult, PhaseGrid
from app.repositories.base_repository import BaseRepository, PathLike

CSV_HEADER = ["i", "j", "delta", "kappa", "m", "s", "trials", "successes", "fraction", "skipped"]


def _format_float(value: float) -> str:
    return f"{value:.6g}"


class GridRepository(BaseRepository):
    """
    Exporta e importa PhaseGrid no esquema
    i,j,delta,kappa,m,s,trials,successes,fraction,skipped.
    """

    def __init__(self):
        super().__init__("grade de transição de fase")

    def to_csv(self, grid: PhaseGrid) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for cell in grid.cells:
            writer.writerow([
                cell.i, cell.j, _format_float(cell.delta), _format_float(cell.kappa),
                cell.m, cell.s, cell.trials, cell.successes,
                _format_float(cell.fraction), int(cell.skipped),
            ])
        return buffer.getvalue()

    def export_csv(self, grid: PhaseGrid, path: PathLike) -> Path:
        """
        Grava a grade em ordem (i, j) row-major.
        """
        return self.write_text(path, self.to_csv(grid))

    def from_csv(self, content: str) -> PhaseGrid:
        """
        Reconstrói a grade; a fração é recalculada a partir das contagens.

        Raises:
            MalformedFileError: Cabeçalho, colunas ou valores inválidos
        """
        rows = list(csv.reader(io.StringIO(content)))
        if not rows or rows[0] != CSV_HEADER:
            raise MalformedFileError(f"Cabeçalho inválido: esperado {','.join(CSV_HEADER)}")

        cells: List[CellResult] = []
        try:
            for number, row in enumerate(rows[1:], start=2):
                if not row:
                    continue
                if len(row) != len(CSV_HEADER):
                    raise ValueError(f"linha {number} com {len(row)} colunas")
                skipped = int(row[9])
                if skipped not in (0, 1):
                    raise ValueError(f"linha {number}: skipped deve ser 0 ou 1")
                cell = CellResult(
                    i=int(row[0]), j=int(row[1]), delta=float(row[2]), kappa=float(row[3]),
                    m=int(row[4]), s=int(row[5]), trials=int(row[6]), successes=int(row[7]),
                    skipped=bool(skipped),
                )
                if cell.successes > cell.trials:
                    raise ValueError(f"linha {number}: sucessos excedem ensaios")
                cells.append(cell)
        except ValueError as e:
            raise MalformedFileError(f"Erro ao interpretar grade: {str(e)}")

        deltas = {cell.i: cell.delta for cell in cells}
        kappas = {cell.j: cell.kappa for cell in cells}
        grid = PhaseGrid(
            deltas=tuple(deltas[i] for i in sorted(deltas)),
            kappas=tuple(kappas[j] for j in sorted(kappas)),
            cells=cells,
        )
        expected = [(i, j) for i in range(len(grid.deltas)) for j in range(len(grid.kappas))]
        if [(cell.i, cell.j) for cell in cells] != expected:
            raise MalformedFileError("Células fora da ordem (i, j) row-major ou grade incompleta")
        return grid

    def import_csv(self, path: PathLike) -> PhaseGrid:
        return self.from_csv(self.read_text(path))


grid_repository = GridRepository()
