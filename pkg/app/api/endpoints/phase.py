"""
Endpoint do subcomando phase: grades de transição de fase em CSV e resumo JSON.
"""
import argparse
import logging

from app.api.deps import finish, get_config, get_master_seed, get_output_dir, get_workers
from app.core.experiments import avgp_table, compare_smallest_delta, run_phase_sweep
from app.repositories.grid_repository import grid_repository
from app.repositories.run_repository import run_repository
from app.schemas.experiment import PhaseSummary

logger = logging.getLogger(__name__)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--threshold", type=float, default=0.8, help="Sucesso mínimo na comparação entre valores de C")
    parser.add_argument("--kappa-max", type=float, default=0.3, help="Maior κ na comparação entre valores de C")


def handle(args: argparse.Namespace) -> None:
    """
    Roda uma grade por valor de C; com um só valor grava phase.csv,
    senão phase_c<C>.csv para cada C.
    """
    config = get_config(args)
    seed = get_master_seed(config)
    config.experiment.master_seed = seed
    output_dir = get_output_dir(args)
    grids = run_phase_sweep(config, get_workers(args))

    table = avgp_table(grids, config.experiment.avgp_thresholds)
    summaries, outputs, notes = [], [], []
    for sensors, grid in grids.items():
        name = "phase.csv" if len(grids) == 1 else f"phase_c{sensors}.csv"
        grid_repository.export_csv(grid, run_repository.resolve(output_dir, name))
        outputs.append(name)
        notes.extend(f"C={sensors}: {note}" for note in grid.notes)
        summaries.append(PhaseSummary(
            sensors=sensors, csv=name, cells=len(grid.cells),
            skipped=sum(1 for cell in grid.cells if cell.skipped), avgp=table[str(sensors)],
        ).model_dump(mode="json"))

    payload = {
        "grids": summaries,
        "avgp": table,
    }
    if len(grids) >= 2:
        keys = sorted(grids)
        comparisons = compare_smallest_delta(grids[keys[0]], grids[keys[-1]], args.threshold, args.kappa_max)
        payload["comparison"] = {
            "first": keys[0],
            "second": keys[-1],
            "passed": all(c.passed for c in comparisons),
            "per_kappa": [c.model_dump(mode="json") for c in comparisons],
        }
    logger.info(f"Transição de fase gravada: {', '.join(outputs)}")
    finish(
        args, payload, config=config.model_dump(mode="json"), master_seed=seed,
        extra_outputs=tuple(outputs), notes=notes,
    )
