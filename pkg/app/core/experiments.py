"""
Experimentos de transição de fase sobre a grade (δ, κ).

δ = m/(CN) e κ = s/N percorrem pontos internos de (0, 1). Cada célula
roda ensaios independentes com sementes derivadas de (i, j, ensaio), de
modo que a grade não depende da ordem de execução nem do número de workers.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

from app.core.config import settings
from app.core.errors import EmptySelectionError, InfeasibleSpecError, InvalidArgumentError, IsometryError
from app.core.numerics import RngStream
from app.core.profiles import build_profile
from app.core.sensing import assemble, ensemble_from_spec, measure, row_counts_for
from app.core.signals import block_partition, gen_signal, interleaved_partition
from app.core.solver import BpdnSolver, relative_error
from app.models.grid import CellResult, PhaseGrid
from app.models.signal import LevelScheme, Partition, SignalModel, SignalSpec
from app.schemas.experiment import DeltaComparison, RunConfig
from app.schemas.profile import PartitionKind

logger = logging.getLogger(__name__)

SIGNIFICANT_DIGITS = 6


@dataclass(frozen=True)
class CellPlan:
    i: int
    j: int
    delta: float
    kappa: float
    m: int
    s: int


def _quantize(value: float) -> float:
    return float(f"{value:.{SIGNIFICANT_DIGITS}g}")


def grid_axis(resolution: int) -> Tuple[float, ...]:
    """Pontos k/(R+1), k = 1…R, com 6 algarismos significativos."""
    if resolution < 1:
        raise InvalidArgumentError(f"Resolução deve ser ao menos 1: {resolution}")
    return tuple(_quantize((k + 1) / (resolution + 1)) for k in range(resolution))


def _round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


def plan_cells(
    deltas: Sequence[float],
    kappas: Sequence[float],
    n: int,
    sensors: int,
) -> Tuple[List[CellPlan], List[str]]:
    """
    Converte (δ, κ) em (m, s) realizados.

    m = round(δCN) ajustado ao múltiplo de C mais próximo (mínimo C), de
    modo que cada sensor recebe m/C linhas nos dois modos; s = round(κN),
    mínimo 1. Ajustes viram notas.
    """
    plans, notes = [], []
    for i, delta in enumerate(deltas):
        m_raw = _round_half_up(delta * sensors * n)
        m = max(sensors, sensors * _round_half_up(m_raw / sensors))
        if m != m_raw:
            notes.append(f"linha i={i}: m ajustado de {m_raw} para {m}")
        for j, kappa in enumerate(kappas):
            s_raw = _round_half_up(kappa * n)
            s = max(1, s_raw)
            if s != s_raw and i == 0:
                notes.append(f"coluna j={j}: s ajustado de {s_raw} para {s}")
            plans.append(CellPlan(i=i, j=j, delta=delta, kappa=kappa, m=m, s=s))
    return plans, notes


def partition_for(kind: PartitionKind, n: int, sensors: int) -> Partition:
    if kind == PartitionKind.BLOCKS:
        return block_partition(n, sensors)
    return interleaved_partition(n, sensors)


def signal_spec(config: RunConfig, n: int, sensors: int, s: Optional[int], rng: RngStream) -> SignalSpec:
    """
    Especificação do sinal a partir de [signal]; `rng` sorteia o início da
    faixa no modelo agrupado.

    Raises:
        InvalidArgumentError: Modelo sem os parâmetros necessários
    """
    section = config.signal
    if section.model == SignalModel.SPARSE_IN_LEVELS:
        if section.local_sparsities is None:
            raise InvalidArgumentError("O modelo sparse_in_levels exige local_sparsities")
        scheme = LevelScheme(
            partition=partition_for(section.partition, n, sensors),
            local_sparsities=tuple(section.local_sparsities),
        )
        return SignalSpec(model=SignalModel.SPARSE_IN_LEVELS, n=n, levels=scheme)
    if s is None:
        raise InvalidArgumentError(f"O modelo {section.model.value} exige s")
    if section.model == SignalModel.SPARSE:
        return SignalSpec(model=SignalModel.SPARSE, n=n, s=s)
    if section.model == SignalModel.EQUIDISTRIBUTED:
        return SignalSpec(
            model=SignalModel.EQUIDISTRIBUTED, n=n, s=s, lam=section.lam,
            partition=partition_for(section.partition, n, sensors),
        )
    if section.model == SignalModel.CLUSTERED:
        width = int(round(section.lam * s))
        if width > n:
            raise InfeasibleSpecError(f"Faixa de largura {width} excede N={n}")
        start = rng.integer(0, n - width)
        return SignalSpec(model=SignalModel.CLUSTERED, n=n, s=s, lam=section.lam, start=start)
    raise InvalidArgumentError(f"Modelo de sinal desconhecido: {section.model.value}")


def run_trial(config: RunConfig, sensors: int, m: int, s: int, rng: RngStream, solver: BpdnSolver) -> bool:
    """
    Um ensaio: sinal, sistema, medição, solução e critério de sucesso.

    Subfluxos: 0 sinal, 1 sistema, 2 ruído, 3 perfis sorteados.
    """
    n = config.system.n
    mode = config.system.mode
    partition = partition_for(config.profile.partition, n, sensors) if n % sensors == 0 else None
    profile = build_profile(config.profile, sensors, n, mode, partition, rng.substream(3))
    ensemble = ensemble_from_spec(config.ensemble, n, sensors)
    system = assemble(mode, [ensemble], profile, row_counts_for(mode, m, sensors), rng.substream(1))
    signal_rng = rng.substream(0)
    x = gen_signal(signal_spec(config, n, sensors, s, signal_rng.substream(1)), signal_rng)
    meas = measure(system, x, config.noise, rng.substream(2))
    result = solver.solve(system, meas)
    return relative_error(x, result.x_hat) < config.experiment.tol


def _run_cell(config: RunConfig, sensors: int, master_seed: int, plan: CellPlan) -> CellResult:
    trials = config.experiment.trials
    solver = BpdnSolver(config.solver)
    successes = 0
    try:
        for trial in range(trials):
            path = (plan.i, plan.j, trial) if config.experiment.paired else (plan.i, plan.j, trial, sensors)
            if run_trial(config, sensors, plan.m, plan.s, RngStream(master_seed, path), solver):
                successes += 1
    except (InfeasibleSpecError, IsometryError) as e:
        logger.warning(f"Célula ({plan.i}, {plan.j}) ignorada: {str(e)}")
        return CellResult(
            i=plan.i, j=plan.j, delta=plan.delta, kappa=plan.kappa, m=plan.m, s=plan.s,
            trials=trials, successes=0, skipped=True,
        )
    logger.debug(f"Célula ({plan.i}, {plan.j}) m={plan.m} s={plan.s}: {successes}/{trials}")
    return CellResult(
        i=plan.i, j=plan.j, delta=plan.delta, kappa=plan.kappa, m=plan.m, s=plan.s,
        trials=trials, successes=successes,
    )


def run_phase_transition(config: RunConfig, sensors: Optional[int] = None, workers: int = 1) -> PhaseGrid:
    """
    Varre a grade (δ, κ) e conta recuperações bem-sucedidas.

    Args:
        config: Configuração da execução
        sensors: Número de sensores C (padrão: config.system.sensors)
        workers: Tamanho do pool de processos

    Returns:
        PhaseGrid: Células em ordem (i, j) row-major com notas de ajuste

    Raises:
        InvalidArgumentError: Configuração incompatível com a varredura
    """
    sensors = sensors or config.system.sensors
    n = config.system.n
    master_seed = config.experiment.master_seed
    if master_seed is None:
        master_seed = settings.MASTER_SEED
    axis = grid_axis(config.experiment.resolution)
    plans, notes = plan_cells(axis, axis, n, sensors)
    for note in notes:
        logger.warning(f"C={sensors}: {note}")

    logger.info(
        f"Transição de fase C={sensors} N={n} modo={config.system.mode.value}: "
        f"{len(plans)} células × {config.experiment.trials} ensaios, {workers} worker(s)"
    )
    cells = Parallel(n_jobs=workers)(
        delayed(_run_cell)(config, sensors, master_seed, plan) for plan in plans
    )
    grid = PhaseGrid(deltas=axis, kappas=axis, cells=list(cells), notes=notes)
    skipped = sum(1 for cell in grid.cells if cell.skipped)
    logger.info(f"Transição de fase C={sensors} concluída ({skipped} células ignoradas)")
    return grid


def run_phase_sweep(config: RunConfig, workers: int = 1) -> Dict[int, PhaseGrid]:
    """Uma grade por valor de C em [experiment].sensors (ou o C do sistema)."""
    values = config.experiment.sensors or [config.system.sensors]
    return {c: run_phase_transition(config, c, workers) for c in values}


def avgp(grid: PhaseGrid, delta_max: float) -> float:
    """
    Média percentual das frações de sucesso nas células não ignoradas com δ < delta_max.

    Raises:
        EmptySelectionError: Se nenhuma célula é selecionada
    """
    fractions = [cell.fraction for cell in grid.cells if not cell.skipped and cell.delta < delta_max]
    if not fractions:
        raise EmptySelectionError(f"Nenhuma célula com δ < {delta_max}")
    return 100.0 * float(np.mean(fractions))


def avgp_table(grids: Dict[int, PhaseGrid], thresholds: Sequence[float]) -> Dict[str, Dict[str, Optional[float]]]:
    """AvgP por C e limiar; seleções vazias ficam como None."""
    table: Dict[str, Dict[str, Optional[float]]] = {}
    for sensors, grid in grids.items():
        row: Dict[str, Optional[float]] = {}
        for threshold in thresholds:
            try:
                row[f"{threshold:g}"] = avgp(grid, threshold)
            except EmptySelectionError:
                row[f"{threshold:g}"] = None
        table[str(sensors)] = row
    return table


def smallest_delta_index(grid: PhaseGrid, j: int, threshold: float = 0.8) -> Optional[int]:
    """Menor i com fração ≥ threshold na coluna κ_j."""
    for i in range(len(grid.deltas)):
        cell = grid.cell(i, j)
        if not cell.skipped and cell.fraction >= threshold:
            return i
    return None


def compare_smallest_delta(
    first: PhaseGrid,
    second: PhaseGrid,
    threshold: float = 0.8,
    kappa_max: float = 0.3,
    slack: int = 1,
) -> List[DeltaComparison]:
    """
    Compara, para cada κ ≤ kappa_max, o menor δ com sucesso ≥ threshold.

    A comparação passa quando a segunda grade não exige mais que `slack`
    células de δ acima da primeira.
    """
    if first.kappas != second.kappas or first.deltas != second.deltas:
        raise InvalidArgumentError("As grades comparadas devem ter os mesmos eixos")
    comparisons = []
    for j, kappa in enumerate(first.kappas):
        if kappa > kappa_max:
            continue
        a = smallest_delta_index(first, j, threshold)
        b = smallest_delta_index(second, j, threshold)
        if b is None:
            passed = a is None
        else:
            passed = a is None or b <= a + slack
        comparisons.append(DeltaComparison(kappa_index=j, kappa=kappa, first=a, second=b, passed=passed))
    return comparisons
