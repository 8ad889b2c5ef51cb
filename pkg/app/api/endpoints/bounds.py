"""
Endpoint do subcomando bounds: entradas numéricas explícitas por flags.
"""
import argparse
import json
from typing import List

from app.api.deps import finish
from app.core.bounds import required_measurements
from app.schemas.coherence import BoundQuery, BoundRule


def _floats(text: str) -> List[float]:
    return [float(item) for item in text.split(",") if item.strip()]


def _ints(text: str) -> List[int]:
    return [int(item) for item in text.split(",") if item.strip()]


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--rule", required=True, choices=[r.value for r in BoundRule], help="Regra de cota")
    parser.add_argument("--N", dest="n", type=int, required=True, help="Dimensão N")
    parser.add_argument("--C", dest="sensors", type=int, default=1, help="Número de sensores")
    parser.add_argument("--eps", type=float, required=True, help="Probabilidade de falha ε")
    parser.add_argument("--s", type=int, default=None, help="Esparsidade total")
    parser.add_argument("--local-sparsities", type=_ints, default=None, help="s_1,…,s_C")
    parser.add_argument("--lambda", dest="lam", type=float, default=None, help="Fator de equidistribuição λ")
    parser.add_argument("--D", dest="block_size", type=int, default=None, help="Linhas por sorteio")
    parser.add_argument("--gamma", type=float, default=None, help="Γ(F, Δ)")
    parser.add_argument("--muF", dest="mu_f", type=_floats, default=None, help="μ(F_c) por sensor")
    parser.add_argument("--muG", dest="mu_g", type=float, default=None, help="μ(G)")
    parser.add_argument("--muJoint", dest="mu_joint", type=float, default=None, help="μ(G, H_1, …, H_C)")
    parser.add_argument("--local-coherences", type=json.loads, default=None, help="Matriz JSON μ_d(F_c)")
    parser.add_argument("--row-fractions", type=_floats, default=None, help="m_d/m")
    parser.add_argument("--relative-sparsities", type=_floats, default=None, help="S_1,…,S_C")
    parser.add_argument("--sup-norms", type=_floats, default=None, help="‖H_c‖∞")
    parser.add_argument("--restricted-norms", type=json.loads, default=None, help="Matriz JSON ‖H_c P_{I_d}‖∞")
    parser.add_argument("--filter-l1", type=_floats, default=None, help="‖h_c‖₁")
    parser.add_argument("--eigen-sup", type=_floats, default=None, help="‖Λ_c‖∞")
    parser.add_argument("--sigmaG", dest="sigma_g", type=_floats, default=None, help="σ(G_c)")


QUERY_FIELDS = (
    "rule", "n", "sensors", "eps", "s", "local_sparsities", "lam", "block_size", "gamma", "mu_f",
    "mu_g", "mu_joint", "local_coherences", "row_fractions", "relative_sparsities", "sup_norms",
    "restricted_norms", "filter_l1", "eigen_sup", "sigma_g",
)


def handle(args: argparse.Namespace) -> None:
    """
    Avalia a regra pedida e grava bounds.json.
    """
    values = {name: getattr(args, name) for name in QUERY_FIELDS if getattr(args, name) is not None}
    query = BoundQuery(**values)
    report = required_measurements(query)
    finish(args, report.model_dump(mode="json"), config=query.model_dump(mode="json", exclude_none=True))
