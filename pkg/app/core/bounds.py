"""
Fator logarítmico e lados direitos das cotas de número de medições.

Todas as cotas são avaliadas com a constante universal igual a 1 e
logaritmo natural; servem para comparações relativas.
"""

import logging
import math
from typing import List, Optional

from app.core.errors import InvalidArgumentError
from app.schemas.coherence import BoundQuery, BoundReport, BoundRule

logger = logging.getLogger(__name__)


def log_factor(n: int, s: int, eps: float) -> float:
    """
    L = log(N/ε) + log(s)·log(s/ε).

    Raises:
        InvalidArgumentError: Se N < 2, s < 2 ou ε ∉ (0, 1)
    """
    if n < 2:
        raise InvalidArgumentError(f"N deve ser ≥ 2, recebido {n}")
    if s < 2:
        raise InvalidArgumentError(f"s deve ser ≥ 2, recebido {s}")
    if not 0 < eps < 1:
        raise InvalidArgumentError(f"ε deve estar em (0, 1), recebido {eps}")
    return math.log(n / eps) + math.log(s) * math.log(s / eps)


def _require(query: BoundQuery, *names: str) -> None:
    missing = [name for name in names if getattr(query, name) is None]
    if missing:
        raise InvalidArgumentError(f"Regra {query.rule.value} exige: {', '.join(missing)}")


def _per_sensor(values: List, sensors: int, name: str) -> None:
    if len(values) != sensors:
        raise InvalidArgumentError(f"{name} deve ter {sensors} entradas, recebido {len(values)}")


def required_measurements(query: BoundQuery) -> BoundReport:
    """
    Avalia o lado direito da regra pedida.

    Args:
        query: Regra e entradas

    Returns:
        BoundReport: Valor com constante 1, fator L e entradas ecoadas;
        para cor_3_4 inclui a condição lateral e sua aprovação

    Raises:
        InvalidArgumentError: Entradas ausentes ou fora das hipóteses
    """
    s = query.total_sparsity
    if query.local_sparsities is not None and any(v < 0 for v in query.local_sparsities):
        raise InvalidArgumentError("Esparsidades locais devem ser não negativas")
    big_l = log_factor(query.n, s, query.eps)
    rule = query.rule
    sensors = query.sensors
    side: Optional[float] = None
    side_passed: Optional[bool] = None

    if rule == BoundRule.THM_2_1:
        _require(query, "gamma")
        factor = (query.block_size or 1) * query.gamma
    elif rule == BoundRule.COR_3_1:
        _require(query, "mu_f")
        factor = s * max(query.mu_f)
    elif rule == BoundRule.COR_3_2:
        _require(query, "local_sparsities", "local_coherences", "row_fractions", "relative_sparsities")
        counts = query.local_sparsities
        coherences = query.local_coherences
        fractions = query.row_fractions
        relative = query.relative_sparsities
        for values, name in (
            (counts, "local_sparsities"), (coherences, "local_coherences"),
            (fractions, "row_fractions"), (relative, "relative_sparsities"),
        ):
            _per_sensor(values, sensors, name)
        first = max(sum(coherences[c][d] * counts[d] for d in range(sensors)) for c in range(sensors))
        second = max(
            sum(fractions[d] * coherences[d][c] * relative[d] for d in range(sensors))
            for c in range(sensors)
        )
        factor = max(first, second)
    elif rule == BoundRule.COR_3_3:
        _require(query, "mu_g", "sup_norms")
        factor = s * query.mu_g * max(query.sup_norms) ** 2
    elif rule == BoundRule.COR_3_4:
        _require(query, "mu_g", "sup_norms", "restricted_norms", "local_sparsities")
        sup = query.sup_norms
        restricted = query.restricted_norms
        counts = query.local_sparsities
        _per_sensor(sup, sensors, "sup_norms")
        _per_sensor(restricted, sensors, "restricted_norms")
        _per_sensor(counts, sensors, "local_sparsities")
        side = max(sum(sup[d] * restricted[d][c] for d in range(sensors)) for c in range(sensors))
        side_passed = side <= sensors
        factor = query.mu_g * max(
            sum(sup[c] * restricted[c][d] * counts[d] for d in range(sensors)) for c in range(sensors)
        )
    elif rule == BoundRule.COR_3_5:
        _require(query, "mu_g", "filter_l1")
        factor = s * query.mu_g * max(query.filter_l1) ** 2
    elif rule == BoundRule.COR_3_6:
        _require(query, "eigen_sup", "sigma_g")
        _per_sensor(query.sigma_g, len(query.eigen_sup), "sigma_g")
        factor = s * max(lam ** 2 * sig for lam, sig in zip(query.eigen_sup, query.sigma_g))
    elif rule == BoundRule.COR_4_1:
        _require(query, "mu_joint")
        factor = s * sensors * query.mu_joint
    elif rule == BoundRule.COR_4_2:
        _require(query, "mu_g")
        factor = s * sensors * query.mu_g
    elif rule == BoundRule.COR_4_3:
        _require(query, "mu_g", "filter_l1")
        factor = s * sensors * query.mu_g * sum(v ** 2 for v in query.filter_l1)
    elif rule == BoundRule.THM_4_1:
        _require(query, "mu_g")
        if query.local_sparsities is not None:
            factor = query.mu_g * sensors * max(query.local_sparsities)
        elif query.lam is not None:
            # max s_c = λs/C, logo C·max s_c = λs
            factor = query.mu_g * query.lam * s
        else:
            raise InvalidArgumentError("Regra thm_4_1 exige esparsidades locais ou λ")
    else:
        raise InvalidArgumentError(f"Regra desconhecida: {rule}")

    rhs = factor * big_l
    logger.debug(f"Cota {rule.value}: fator={factor:.6g}, L={big_l:.6g}, m ≳ {rhs:.6g}")
    return BoundReport(
        rule=rule,
        rhs=rhs,
        log_factor=big_l,
        side_condition=side,
        side_condition_passed=side_passed,
        inputs=query.model_dump(mode="json", exclude_none=True),
    )
