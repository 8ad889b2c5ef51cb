"""
Dependências compartilhadas pelos endpoints da linha de comando.
"""
import argparse
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from app.core.config import settings
from app.core.errors import InvalidArgumentError
from app.core.experiments import partition_for
from app.core.numerics import RngStream
from app.core.profiles import build_profile
from app.core.sensing import assemble, ensemble_from_spec, row_counts_for
from app.models.profile import SensorProfile
from app.models.sensing import ParallelSystem
from app.repositories.run_repository import run_repository
from app.schemas.experiment import RunConfig

logger = logging.getLogger(__name__)


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    """Opções aceitas por todos os subcomandos."""
    parser.add_argument("--config", help="Arquivo de configuração TOML")
    parser.add_argument(
        "--set", dest="overrides", action="append", default=[], metavar="SECAO.CHAVE=VALOR",
        help="Sobrescreve uma chave da configuração (pode ser repetido)",
    )
    parser.add_argument("--output", help="Diretório de saída (padrão: PCS_OUTPUT_DIR)")
    parser.add_argument("--workers", type=int, default=None, help="Tamanho do pool de processos")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log em nível DEBUG")
    parser.add_argument("-q", "--quiet", action="store_true", help="Log apenas a partir de WARNING")


def get_output_dir(args: argparse.Namespace) -> Path:
    return Path(args.output or settings.OUTPUT_DIR)


def get_workers(args: argparse.Namespace) -> int:
    workers = args.workers if args.workers is not None else settings.WORKERS
    if workers < 1:
        raise InvalidArgumentError(f"Número de workers deve ser ao menos 1: {workers}")
    return workers


def get_config(args: argparse.Namespace) -> RunConfig:
    """
    Carrega a configuração do subcomando.

    Raises:
        InvalidArgumentError: Nem --config nem --set informados
    """
    if args.config is None and not args.overrides:
        raise InvalidArgumentError(f"O subcomando {args.command} exige --config ou --set")
    return run_repository.load_config(args.config, args.overrides)


def get_master_seed(config: RunConfig) -> int:
    seed = config.experiment.master_seed
    return settings.MASTER_SEED if seed is None else seed


def get_profile(config: RunConfig, rng: RngStream) -> SensorProfile:
    system = config.system
    partition = None
    if system.n % system.sensors == 0:
        partition = partition_for(config.profile.partition, system.n, system.sensors)
    return build_profile(config.profile, system.sensors, system.n, system.mode, partition, rng)


def get_system(config: RunConfig, rng: RngStream) -> ParallelSystem:
    """
    Monta o sistema de [system]; subfluxos: 1 sistema, 3 perfis.

    Raises:
        InvalidArgumentError: [system].m ausente
    """
    system = config.system
    if system.m is None:
        raise InvalidArgumentError("A seção [system] deve informar m")
    profile = get_profile(config, rng.substream(3))
    ensemble = ensemble_from_spec(config.ensemble, system.n, system.sensors)
    counts = row_counts_for(system.mode, system.m, system.sensors)
    return assemble(system.mode, [ensemble], profile, counts, rng.substream(1))


def finish(
    args: argparse.Namespace,
    payload: Any,
    config: Optional[Dict[str, Any]] = None,
    master_seed: Optional[int] = None,
    extra_outputs: Tuple[str, ...] = (),
    notes: Optional[List[str]] = None,
) -> Path:
    """Grava `<subcomando>.json` e o manifesto."""
    output_dir = get_output_dir(args)
    name = f"{args.command}.json"
    path = run_repository.write_json(output_dir, name, payload)
    run_repository.write_manifest(
        output_dir, args.command, config or {}, master_seed,
        outputs=[name, *extra_outputs], notes=notes,
    )
    logger.info(f"Resultados de {args.command} em {output_dir}")
    return path
