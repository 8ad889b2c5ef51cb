"""
Endpoint do subcomando certificate.
"""
import argparse
import logging

from app.api.deps import finish, get_config, get_master_seed, get_system, get_workers
from app.core.certificate import event_frequencies, verify_certificate
from app.core.experiments import signal_spec
from app.core.numerics import RngStream
from app.core.sensing import measure
from app.core.signals import gen_signal
from app.core.solver import BpdnSolver, relative_error
from app.schemas.certificate import CertificateSetup

logger = logging.getLogger(__name__)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--frequencies", action="store_true",
        help="Estima as frequências dos eventos para [certificate].m_values",
    )


def handle(args: argparse.Namespace) -> None:
    """
    Verifica o certificado para um sinal sorteado e, opcionalmente,
    estima frequências de eventos em função de m.
    """
    config = get_config(args)
    seed = get_master_seed(config)
    rng = RngStream(seed, (0,))
    system = get_system(config, rng)

    signal_rng = rng.substream(0)
    spec = signal_spec(config, system.n, system.num_sensors, config.signal.s, signal_rng.substream(1))
    x = gen_signal(spec, signal_rng)
    report = verify_certificate(system, x, config.certificate.params)

    noiseless = measure(system, x)
    result = BpdnSolver(config.solver).solve(system, noiseless)
    payload = {
        "report": report.model_dump(mode="json"),
        "recovery_error": relative_error(x, result.x_hat),
    }

    if args.frequencies:
        setup = CertificateSetup(
            n=config.system.n,
            sensors=config.system.sensors,
            mode=config.system.mode,
            ensemble=config.ensemble,
            profile=config.profile,
            s=config.signal.s,
            lam=config.signal.lam,
            master_seed=seed,
            m_values=config.certificate.m_values,
            trials=config.certificate.trials,
        )
        frequencies = event_frequencies(setup, get_workers(args))
        payload["frequencies"] = [f.model_dump(mode="json") for f in frequencies]

    logger.info(f"Certificado {'válido' if report.valid else 'inválido'} para s={len(report.support)}")
    finish(args, payload, config=config.model_dump(mode="json"), master_seed=seed)
