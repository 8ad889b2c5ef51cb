"""
Endpoint do subcomando coherence.
"""
import argparse
import logging
from typing import List

from app.api.deps import finish, get_config, get_master_seed, get_profile
from app.core.coherence import (
    MAX_BRUTE_FORCE_N,
    atom_set,
    distinct_atom_set,
    gamma,
    identical_atom_set,
    mu,
    mu_joint,
    mu_levels,
    relative_sparsity,
    sampled_atom_set,
    sigma_g,
)
from app.core.experiments import partition_for
from app.core.numerics import RngStream
from app.core.sensing import ensemble_from_spec, row_counts_for
from app.models.profile import ProfileKind, SamplingMode
from app.models.signal import LevelScheme
from app.schemas.coherence import CoherenceMethod

logger = logging.getLogger(__name__)


def _indices(text: str) -> List[int]:
    return [int(item) for item in text.split(",") if item.strip()]


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--support", type=_indices, default=None, help="Suporte Δ (índices separados por vírgula, base 0)")
    parser.add_argument(
        "--method", choices=[m.value for m in CoherenceMethod], default=CoherenceMethod.EXACT.value,
        help="exact, bound ou monte_carlo",
    )
    parser.add_argument("--samples", type=int, default=None, help="Sorteios do modo monte_carlo")


def handle(args: argparse.Namespace) -> None:
    """
    Calcula μ, μ_c, σ(G), μ_joint e, com suporte, Γ₁/Γ₂ e S_c.
    """
    config = get_config(args)
    seed = get_master_seed(config)
    rng = RngStream(seed, (0,))
    method = CoherenceMethod(args.method)
    samples = args.samples if method == CoherenceMethod.MONTE_CARLO else None
    system = config.system
    notes = []

    ensemble = ensemble_from_spec(config.ensemble, system.n, system.sensors)
    profile = get_profile(config, rng.substream(3))
    base = sampled_atom_set(ensemble, samples, rng.substream(4)) if samples else atom_set(ensemble)
    if system.mode == SamplingMode.IDENTICAL:
        atoms = identical_atom_set(base, profile)
    else:
        counts = row_counts_for(system.mode, system.m, system.sensors) if system.m else [1] * system.sensors
        atoms = distinct_atom_set([base] * system.sensors, profile, counts)

    partition = None
    if system.n % system.sensors == 0:
        partition = partition_for(config.profile.partition, system.n, system.sensors)

    payload = {
        "mu": mu(base).model_dump(mode="json"),
        "sigma_G": sigma_g(base).model_dump(mode="json"),
        "mu_joint": mu_joint(base, profile).model_dump(mode="json"),
    }
    if partition is not None:
        payload["mu_levels"] = [r.model_dump(mode="json") for r in mu_levels(base, partition)]

    if args.support:
        payload["gamma"] = gamma(atoms, args.support, method, samples, rng.substream(5)).model_dump(mode="json")

    if config.signal.local_sparsities is not None and partition is not None:
        levels = LevelScheme(partition=partition, local_sparsities=tuple(config.signal.local_sparsities))
        if method == CoherenceMethod.EXACT and system.n <= MAX_BRUTE_FORCE_N:
            sparsity_mode = CoherenceMethod.EXACT
        else:
            sparsity_mode = CoherenceMethod.BOUND
        if sparsity_mode == CoherenceMethod.BOUND and profile.kind != ProfileKind.DIAGONAL:
            notes.append("S_c omitido: a cota fechada exige perfis diagonais")
        else:
            reports = relative_sparsity(profile, levels, sparsity_mode)
            payload["relative_sparsity"] = [r.model_dump(mode="json") for r in reports]

    logger.info(f"Coerências calculadas no modo {method.value}")
    finish(args, payload, config=config.model_dump(mode="json"), master_seed=seed, notes=notes)
