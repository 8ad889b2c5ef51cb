"""
Endpoint do subcomando profiles: constrói perfis, verifica a isometria
e grava normas e dados dos perfis.
"""
import argparse
import logging

from app.api.deps import finish, get_config, get_master_seed, get_output_dir, get_profile
from app.core.experiments import partition_for
from app.core.numerics import RngStream
from app.core.profiles import check_isometry, profile_norms
from app.repositories.profile_repository import profile_repository
from app.repositories.run_repository import run_repository

logger = logging.getLogger(__name__)

PROFILE_DATA = "profile_data.json"


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tolerance", type=float, default=1e-10, help="Tolerância da verificação de isometria")


def handle(args: argparse.Namespace) -> None:
    """
    Constrói os perfis de [profile] para o sistema de [system].
    """
    config = get_config(args)
    seed = get_master_seed(config)
    system = config.system
    profile = get_profile(config, RngStream(seed, (0,)).substream(3))
    report = check_isometry(profile, system.mode, args.tolerance)

    partition = None
    if system.n % system.sensors == 0:
        partition = partition_for(config.profile.partition, system.n, system.sensors)
    norms = profile_norms(profile, partition)

    profile_repository.save(profile, run_repository.resolve(get_output_dir(args), PROFILE_DATA))
    logger.info(f"Perfis {profile.family.value}: isometria {'ok' if report.passed else 'violada'}")
    finish(
        args,
        {
            "family": profile.family.value,
            "kind": profile.kind.value,
            "mode": system.mode.value,
            "sensors": profile.num_sensors,
            "n": profile.n,
            "isometry": report.model_dump(mode="json"),
            "norms": norms.model_dump(mode="json"),
        },
        config=config.model_dump(mode="json"),
        master_seed=seed,
        extra_outputs=(PROFILE_DATA,),
    )
