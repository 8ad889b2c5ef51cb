"""
Certificado dual inexato construído pelo esquema de golfe.

As linhas de A são agrupadas por sorteio independente em L blocos; cada
bloco corrige o resíduo de sinal deixado pelos anteriores. O certificado
resultante ρ = A*ξ é verificado contra as condições (i)–(v) e os eventos
intermediários A_l, B_l, C, D.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from joblib import Parallel, delayed

from app.core.errors import InvalidArgumentError
from app.core.numerics import RngStream, complex_sign
from app.core.profiles import build_profile
from app.core.sensing import assemble, ensemble_from_spec, row_counts_for
from app.core.signals import block_partition, gen_signal, interleaved_partition, support_of
from app.models.profile import SamplingMode
from app.models.sensing import ParallelSystem
from app.models.signal import SignalModel, SignalSpec
from app.schemas.certificate import (
    CertificateParams,
    CertificateReport,
    CertificateSetup,
    ConditionResult,
    EventFrequency,
    EventResult,
    GolfingSchedule,
)
from app.schemas.profile import PartitionKind

logger = logging.getLogger(__name__)

# folga numérica nas comparações com as cotas
COMPARISON_SLACK = 1e-12
EVENT_C_THRESHOLD = 0.25
EVENT_D_THRESHOLD = 1.0


@dataclass
class GolfingBlock:
    """Bloco A_l = √(p/p_l)·A[rows] formado por p_l sorteios."""
    matrix: np.ndarray
    rows: np.ndarray
    draws: int


@dataclass
class GolfingResult:
    rho: np.ndarray
    xi: np.ndarray
    v_sequence: List[np.ndarray] = field(default_factory=list)


def golfing_schedule(s: int, p: int) -> GolfingSchedule:
    """
    Calcula L, a_l, b_l e os tamanhos de bloco p_l.

    L = 2 + ⌈log₂(s)/2⌉; a₁ = a₂ = 1/(2√log₂√s), a_l = 1/2 para l ≥ 3;
    b₁ = b₂ = 1/4, b_l = log₂(√s)/4 para l ≥ 3. Os blocos l ≥ 3 recebem
    ⌊p/(2(L−2))⌋ sorteios, os dois primeiros ⌊p/4⌋ e o resto é dividido
    entre eles.

    Raises:
        InvalidArgumentError: Se s < 2 ou algum bloco fica vazio
    """
    if s < 2:
        raise InvalidArgumentError(f"O esquema de golfe exige s ≥ 2, recebido {s}")
    half_log = math.log2(s) / 2.0
    later = math.ceil(half_log)
    num_blocks = 2 + later

    a = [1.0 / (2.0 * math.sqrt(half_log))] * 2 + [0.5] * later
    b = [0.25] * 2 + [half_log / 4.0] * later

    later_size = p // (2 * later)
    first_size = p // 4
    remainder = p - 2 * first_size - later * later_size
    sizes = [first_size + (remainder + 1) // 2, first_size + remainder // 2] + [later_size] * later
    if min(sizes) < 1:
        raise InvalidArgumentError(f"p={p} sorteios insuficientes para {num_blocks} blocos de golfe")
    return GolfingSchedule(num_blocks=num_blocks, a=a, b=b, p=sizes)


def _draw_order(system: ParallelSystem) -> List[np.ndarray]:
    """Linhas de A de cada sorteio, alternando sensores no modo distinct."""
    if system.mode == SamplingMode.IDENTICAL:
        return [system.draw_rows(k) for k in range(system.num_draws)]
    per_sensor = [np.arange(block.start, block.stop) for block in system.row_blocks()]
    order = []
    for index in range(max(len(rows) for rows in per_sensor)):
        for rows in per_sensor:
            if index < len(rows):
                order.append(np.array([rows[index]]))
    return order


def split_golfing_blocks(system: ParallelSystem, schedule: GolfingSchedule) -> List[GolfingBlock]:
    """
    Agrupa os sorteios independentes de A em blocos de golfe.

    Raises:
        InvalidArgumentError: Se os tamanhos não somam p
    """
    p = system.num_draws
    if sum(schedule.p) != p:
        raise InvalidArgumentError(f"Blocos somam {sum(schedule.p)} sorteios, sistema tem {p}")
    order = _draw_order(system)
    blocks = []
    start = 0
    for size in schedule.p:
        rows = np.concatenate(order[start:start + size])
        blocks.append(GolfingBlock(matrix=np.sqrt(p / size) * system.matrix[rows], rows=rows, draws=size))
        start += size
    return blocks


def golfing_construct(
    blocks: Sequence[GolfingBlock],
    support: Sequence[int],
    x: np.ndarray,
    m: Optional[int] = None,
) -> GolfingResult:
    """
    Constrói ρ e ξ com ρ = A*ξ.

    v⁰ = P_Δ sgn(P_Δ x); ρ^l = ρ^{l−1} + A_l* A_l v^{l−1};
    v^l = sgn(P_Δ x) − P_Δ ρ^l. ξ acumula √(p/p_l)·A_l v^{l−1} nas
    linhas do bloco.

    Args:
        blocks: Blocos de golfe
        support: Suporte Δ
        x: Sinal que define os sinais
        m: Número de linhas de A (padrão: maior linha usada + 1)

    Returns:
        GolfingResult: ρ, ξ e a sequência v⁰…v^L
    """
    x = np.asarray(x, dtype=complex)
    support = np.asarray(support, dtype=int)
    if m is None:
        m = int(max(block.rows.max() for block in blocks)) + 1
    p = sum(block.draws for block in blocks)
    if any(block.matrix.shape[1] != x.size for block in blocks):
        raise InvalidArgumentError(f"Blocos incompatíveis com x de comprimento {x.size}")

    sign = np.zeros_like(x)
    sign[support] = complex_sign(x[support])
    rho = np.zeros_like(x)
    xi = np.zeros(m, dtype=complex)
    v = sign.copy()
    v_sequence = [v]
    for block in blocks:
        image = block.matrix @ v
        rho = rho + block.matrix.conj().T @ image
        xi[block.rows] += np.sqrt(p / block.draws) * image
        v = sign.copy()
        v[support] -= rho[support]
        v_sequence.append(v)
    return GolfingResult(rho=rho, xi=xi, v_sequence=v_sequence)


def _complement(n: int, support: np.ndarray) -> np.ndarray:
    mask = np.ones(n, dtype=bool)
    mask[support] = False
    return np.flatnonzero(mask)


def _support_norms(matrix: np.ndarray, support: np.ndarray):
    """(‖A_Δ*A_Δ − I‖₂, max_{i∉Δ} ‖A_Δ* A e_i‖₂)"""
    if support.size == 0:
        return 0.0, 0.0
    restricted = matrix[:, support]
    alpha_value = float(np.linalg.norm(restricted.conj().T @ restricted - np.eye(support.size), 2))
    outside = _complement(matrix.shape[1], support)
    if outside.size == 0:
        return alpha_value, 0.0
    cross = restricted.conj().T @ matrix[:, outside]
    return alpha_value, float(np.max(np.linalg.norm(cross, axis=0)))


def check_conditions(
    matrix: np.ndarray,
    support: Sequence[int],
    x: np.ndarray,
    rho: np.ndarray,
    xi: np.ndarray,
    params: Optional[CertificateParams] = None,
) -> CertificateReport:
    """
    Mede as condições (i)–(v) do certificado dual.

    (i) ‖A_Δ*A_Δ − I‖ ≤ α; (ii) max_{i∉Δ} ‖A_Δ*Ae_i‖ ≤ β;
    (iii) ‖ρ_Δ − sgn(x_Δ)‖ ≤ γ; (iv) ‖P_Δ^⊥ρ‖∞ ≤ θ; (v) ‖ξ‖ ≤ σ√|Δ|.
    O certificado é válido quando as cinco passam e θ + βγ/(1−α) < 1.
    """
    params = params or CertificateParams()
    matrix = np.asarray(matrix)
    support = np.asarray(support, dtype=int)
    x = np.asarray(x, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != x.shape or matrix.shape[1] != x.size:
        raise InvalidArgumentError("Formas incompatíveis entre A, x e ρ")

    alpha_value, beta_value = _support_norms(matrix, support)
    gamma_value = float(np.linalg.norm(rho[support] - complex_sign(x[support])))
    outside = _complement(matrix.shape[1], support)
    theta_value = float(np.max(np.abs(rho[outside]))) if outside.size else 0.0
    measured_sigma = float(np.linalg.norm(xi) / np.sqrt(max(support.size, 1)))

    conditions = [
        ConditionResult(name=name, value=value, threshold=threshold, passed=value <= threshold + COMPARISON_SLACK)
        for name, value, threshold in (
            ("i", alpha_value, params.alpha),
            ("ii", beta_value, params.beta),
            ("iii", gamma_value, params.gamma),
            ("iv", theta_value, params.theta),
            ("v", measured_sigma, params.sigma),
        )
    ]
    identity_error = float(np.max(np.abs(rho - matrix.conj().T @ xi)))
    return CertificateReport(
        support=support.tolist(),
        conditions=conditions,
        measured_sigma=measured_sigma,
        combined_value=params.combined_value,
        admissible=params.admissible,
        identity_error=identity_error,
        valid=params.admissible and all(c.passed for c in conditions),
    )


def check_events(
    matrix: np.ndarray,
    blocks: Sequence[GolfingBlock],
    support: Sequence[int],
    schedule: GolfingSchedule,
    v_sequence: Sequence[np.ndarray],
) -> List[EventResult]:
    """
    Avalia os eventos A_l, B_l (por bloco), C e D.

    A_l: ‖(P_Δ − P_Δ A_l*A_l P_Δ) v^{l−1}‖∞ ≤ a_l ‖v^{l−1}‖∞
    B_l: ‖P_Δ^⊥ A_l*A_l P_Δ v^{l−1}‖∞ ≤ b_l ‖v^{l−1}‖∞
    C: ‖A_Δ*A_Δ − I‖ ≤ 1/4; D: max_{i∉Δ} ‖A_Δ*Ae_i‖ ≤ 1 (vale com Δ^c vazio)
    """
    support = np.asarray(support, dtype=int)
    if len(blocks) != schedule.num_blocks:
        raise InvalidArgumentError(f"Esperados {schedule.num_blocks} blocos, recebidos {len(blocks)}")
    outside = _complement(np.asarray(matrix).shape[1], support)
    events = []
    for index, block in enumerate(blocks):
        v = v_sequence[index]
        scale = float(np.max(np.abs(v))) if v.size else 0.0
        gram_v = block.matrix.conj().T @ (block.matrix @ v)
        inside = float(np.max(np.abs(v[support] - gram_v[support])))
        leak = float(np.max(np.abs(gram_v[outside]))) if outside.size else 0.0
        for name, value, coefficient in (("A", inside, schedule.a[index]), ("B", leak, schedule.b[index])):
            threshold = coefficient * scale
            events.append(EventResult(
                name=f"{name}_{index + 1}", value=value, threshold=threshold,
                holds=value <= threshold + COMPARISON_SLACK,
            ))
    alpha_value, beta_value = _support_norms(np.asarray(matrix), support)
    events.append(EventResult(
        name="C", value=alpha_value, threshold=EVENT_C_THRESHOLD,
        holds=alpha_value <= EVENT_C_THRESHOLD + COMPARISON_SLACK,
    ))
    events.append(EventResult(
        name="D", value=beta_value, threshold=EVENT_D_THRESHOLD,
        holds=beta_value <= EVENT_D_THRESHOLD + COMPARISON_SLACK,
    ))
    return events


def propcond3_bound(schedule: GolfingSchedule, s: int) -> float:
    """√s·Π a_l: cota de (iii) quando todos os A_l valem."""
    return math.sqrt(s) * math.prod(schedule.a)


def propcond4_bound(schedule: GolfingSchedule) -> float:
    """Σ_l b_l Π_{j<l} a_j: cota de (iv) quando todos os A_l e B_l valem."""
    total, product = 0.0, 1.0
    for a_l, b_l in zip(schedule.a, schedule.b):
        total += b_l * product
        product *= a_l
    return total


def sigma_chain_bound(schedule: GolfingSchedule) -> float:
    """
    Cota de ‖ξ‖/√s quando todos os A_l valem:
    Σ_l √(p/p_l)·√(1 + a_l)·Π_{j<l} a_j.
    """
    p = sum(schedule.p)
    total, product = 0.0, 1.0
    for a_l, p_l in zip(schedule.a, schedule.p):
        total += math.sqrt(p / p_l) * math.sqrt(1.0 + a_l) * product
        product *= a_l
    return total


def verify_certificate(
    system: ParallelSystem,
    x: np.ndarray,
    params: Optional[CertificateParams] = None,
) -> CertificateReport:
    """
    Constrói o certificado por golfe para x e verifica condições e eventos.

    Args:
        system: Sistema montado
        x: Sinal com |supp(x)| ≥ 2
        params: Constantes α, β, γ, θ, σ

    Returns:
        CertificateReport: Condições, eventos, cotas encadeadas e validade

    Raises:
        InvalidArgumentError: Suporte pequeno demais ou sorteios insuficientes
    """
    x = np.asarray(x, dtype=complex)
    support = support_of(x)
    s = int(support.size)
    schedule = golfing_schedule(s, system.num_draws)
    blocks = split_golfing_blocks(system, schedule)
    result = golfing_construct(blocks, support, x, m=system.m)
    report = check_conditions(system.matrix, support, x, result.rho, result.xi, params)
    events = check_events(system.matrix, blocks, support, schedule, result.v_sequence)

    report.events = events
    report.all_events_hold = all(event.holds for event in events)
    report.schedule = schedule
    report.propcond3_bound = propcond3_bound(schedule, s)
    report.propcond4_bound = propcond4_bound(schedule)
    report.sigma_chain_bound = sigma_chain_bound(schedule)
    logger.info(
        f"Certificado s={s} p={system.num_draws} L={schedule.num_blocks}: "
        f"válido={report.valid}, eventos={report.all_events_hold}"
    )
    return report


def build_instance(setup: CertificateSetup, m: int, rng: RngStream):
    """
    Sorteia sistema e sinal equidistribuído para um cenário.

    Returns:
        Tuple[ParallelSystem, np.ndarray]: Sistema e sinal
    """
    if setup.profile.partition == PartitionKind.BLOCKS:
        partition = block_partition(setup.n, setup.sensors)
    else:
        partition = interleaved_partition(setup.n, setup.sensors)
    profile = build_profile(setup.profile, setup.sensors, setup.n, setup.mode, partition, rng.substream(3))
    ensemble = ensemble_from_spec(setup.ensemble, setup.n, setup.sensors)
    counts = row_counts_for(setup.mode, m, setup.sensors)
    system = assemble(setup.mode, [ensemble], profile, counts, rng.substream(1))
    spec = SignalSpec(
        model=SignalModel.EQUIDISTRIBUTED, n=setup.n, s=setup.s, lam=setup.lam, partition=partition,
    )
    x = gen_signal(spec, rng.substream(0))
    return system, x


def _trial_events(setup: CertificateSetup, m_index: int, m: int, trial: int):
    rng = RngStream(setup.master_seed, (m_index, trial))
    system, x = build_instance(setup, m, rng)
    report = verify_certificate(system, x)
    by_name = {event.name: event.holds for event in report.events}
    return by_name["C"], by_name["D"], bool(report.all_events_hold), report.valid


def event_frequencies(setup: CertificateSetup, workers: int = 1) -> List[EventFrequency]:
    """
    Frequências empíricas dos eventos e da validade por valor de m.

    Cada ensaio usa o fluxo (índice de m, ensaio) da semente mestre, de
    modo que o resultado não depende do número de workers.
    """
    if not setup.m_values:
        raise InvalidArgumentError("Nenhum valor de m informado")
    if setup.trials < 1:
        raise InvalidArgumentError(f"Número de ensaios deve ser positivo: {setup.trials}")

    frequencies = []
    for m_index, m in enumerate(setup.m_values):
        outcomes = Parallel(n_jobs=workers)(
            delayed(_trial_events)(setup, m_index, m, trial) for trial in range(setup.trials)
        )
        counts = np.sum(np.array(outcomes, dtype=float), axis=0)
        frequency = EventFrequency(
            m=m,
            trials=setup.trials,
            event_c=counts[0] / setup.trials,
            event_d=counts[1] / setup.trials,
            all_events=counts[2] / setup.trials,
            valid=counts[3] / setup.trials,
        )
        logger.info(f"m={m}: P(C)={frequency.event_c:.3f}, P(D)={frequency.event_d:.3f}, válido={frequency.valid:.3f}")
        frequencies.append(frequency)
    return frequencies
