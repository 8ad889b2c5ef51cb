"""
Endpoint do subcomando recover: um sinal, um sistema, uma solução BPDN.
"""
import argparse
import logging

import numpy as np

from app.api.deps import finish, get_config, get_master_seed, get_output_dir, get_system
from app.core.experiments import signal_spec
from app.core.numerics import RngStream
from app.core.sensing import measure
from app.core.signals import gen_signal
from app.core.solver import BpdnSolver, relative_error
from app.repositories.run_repository import run_repository
from app.schemas.solver import RecoveryReport

logger = logging.getLogger(__name__)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol", type=float, default=None, help="Tolerância de sucesso (padrão: [experiment].tol)")
    parser.add_argument("--export-matrix", action="store_true", help="Exporta A em matrix.csv")


def handle(args: argparse.Namespace) -> None:
    """
    Gera x, mede y = Ax + e e resolve o BPDN.

    Subfluxos da semente mestre: 0 sinal, 1 sistema, 2 ruído, 3 perfis.
    """
    config = get_config(args)
    seed = get_master_seed(config)
    rng = RngStream(seed, (0,))
    system = get_system(config, rng)

    signal_rng = rng.substream(0)
    spec = signal_spec(config, system.n, system.num_sensors, config.signal.s, signal_rng.substream(1))
    x = gen_signal(spec, signal_rng)
    meas = measure(system, x, config.noise, rng.substream(2))
    result = BpdnSolver(config.solver).solve(system, meas)

    tol = args.tol if args.tol is not None else config.experiment.tol
    error = relative_error(x, result.x_hat)
    report = RecoveryReport(
        relative_error=error,
        success=error < tol,
        iterations=result.iterations,
        status=result.status,
        objective=result.objective,
        constraint_slack=result.constraint_slack,
        eta=meas.eta,
        m=system.m,
        n=system.n,
        s=int(np.count_nonzero(x)),
        tolerance=tol,
        master_seed=seed,
    )
    logger.info(f"Recuperação: erro relativo {error:.3e} ({'sucesso' if report.success else 'falha'})")

    outputs = ()
    if args.export_matrix:
        run_repository.export_matrix_csv(system, get_output_dir(args))
        outputs = ("matrix.csv",)
    finish(
        args, report.model_dump(mode="json"), config=config.model_dump(mode="json"),
        master_seed=seed, extra_outputs=outputs,
    )
