"""
Funções de fronteira no plano (R2, R4) e critérios de emaranhamento e de
pertinência à classe W.

Convenção de margem: negativa quando a desigualdade testada é violada
(emaranhado / fora da classe W), positiva ou nula caso contrário.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

import config
from src.core.moments import moment_design, default_design
from src.core.qcore import BellDiagonalParams, dicke_marginal_coeffs
from src.utils.errors import (
    DomainError,
    InvalidParams,
    SlopeSignViolation,
    UnsupportedQubitNumber,
)

logger = logging.getLogger(__name__)

R2_MAX = 1 / 3
R2_SEP_MAX = 1 / 9
_EDGE_TOL = 1e-12


class Verdict(str, Enum):
    SEPARABLE = "separable"
    ENTANGLED = "entangled"
    INCONCLUSIVE = "inconclusive"
    OUTSIDE_WCLASS = "outside-wclass"
    NONPHYSICAL = "nonphysical-point"


@dataclass(frozen=True)
class RegionVerdict:
    verdict: Verdict
    margin: float
    criterion: str = ""

    @property
    def detected(self) -> bool:
        return self.verdict in (Verdict.ENTANGLED, Verdict.OUTSIDE_WCLASS)

    def as_dict(self) -> dict:
        return {"criterion": self.criterion, "verdict": self.verdict.value, "margin": self.margin}


@dataclass(frozen=True)
class WClassCriterionParams:
    nqubits: int
    chi: float
    slope_m: float
    intercept_btilde: float

    def __post_init__(self) -> None:
        if self.chi <= 0:
            raise InvalidParams(f"chi = {self.chi} deve ser positivo")


# --- Fronteiras ---

def _check_domain(r2: float, lo: float = 0.0, hi: float = R2_MAX) -> float:
    if not lo - _EDGE_TOL <= r2 <= hi + _EDGE_TOL:
        raise DomainError(f"R2 = {r2!r} fora de [{lo:.6g}, {hi:.6g}]")
    return min(max(r2, lo), hi)


def _sep_family(r2: float, sign: float) -> float:
    """Família |c|_1 = 1 com dois c_i iguais; sign escolhe o ramo."""
    root = max(27 * r2 - 1, 0.0) ** 1.5
    return 9 / 225 * (2 * r2 + 54 * r2**2 + sign * 4 * math.sqrt(2) / 81 * root - 7 / 81)


def f_lb(r2: float) -> float:
    """Fronteira inferior de todos os estados."""
    r2 = _check_domain(r2)
    return 405 / 225 * r2**2


def f_ub(r2: float) -> float:
    """Fronteira superior de todos os estados."""
    r2 = _check_domain(r2)
    if r2 <= R2_SEP_MAX:
        return 729 / 225 * r2**2
    return 9 / 225 * (1 - 6 * r2 + 54 * r2**2)


def f_lb_sep(r2: float) -> float:
    """Fronteira inferior dos estados separáveis (três trechos)."""
    r2 = _check_domain(r2)
    if r2 <= 1 / 27:
        return 405 / 225 * r2**2
    if r2 <= 1 / 18:
        return _sep_family(r2, -1.0)
    return 9 / 225 * (54 * r2**2 + 6 * r2 - 1 / 3)


def f_ub_sep(r2: float) -> float:
    return f_ub(_check_domain(r2, hi=R2_SEP_MAX))


def f_lb_ent(r2: float) -> float:
    return f_lb(_check_domain(r2, lo=1 / 27))


def f_ub_ent(r2: float) -> float:
    """Fronteira superior dos emaranhados; não há BD emaranhado abaixo de 1/27."""
    r2 = _check_domain(r2, lo=1 / 27)
    if r2 <= R2_SEP_MAX:
        return _sep_family(r2, +1.0)
    return f_ub(r2)


BORDERS = {
    "f_lb": (f_lb, 0.0, R2_MAX),
    "f_ub": (f_ub, 0.0, R2_MAX),
    "f_lb_sep": (f_lb_sep, 0.0, R2_MAX),
    "f_ub_sep": (f_ub_sep, 0.0, R2_SEP_MAX),
    "f_lb_ent": (f_lb_ent, 1 / 27, R2_MAX),
    "f_ub_ent": (f_ub_ent, 1 / 27, R2_MAX),
}


def separator_g(r2: float, r4: float) -> float:
    """Superfície que separa BD separáveis de emaranhados no espaço (R2, R4, R6)."""
    return (
        26244 * r2**4
        - 17496 * r2**3
        - 24300 * r2**2 * r4
        + 13500 * r2 * r4
        - 36 * r2
        + 5625 * r4**2
        + 150 * r4
        + 1
    ) / 1960


# --- Critérios de dois qubits ---

def criterion_F(r2: float, r4: float, tol: float = config.DECISION_TOL) -> RegionVerdict:
    """F = R4 - f_LB,sep(R2) >= 0 para todo estado separável."""
    r2c = _check_domain(r2)
    outside = min(r4 - f_lb(r2c), f_ub(r2c) - r4)
    if outside < -tol:
        return RegionVerdict(Verdict.NONPHYSICAL, outside, "F")
    margin = min(r4 - f_lb_sep(r2c), R2_SEP_MAX - r2)
    if margin < -tol:
        return RegionVerdict(Verdict.ENTANGLED, margin, "F")
    return RegionVerdict(Verdict.INCONCLUSIVE, margin, "F")


def criterion_R6(r2: float, r4: float, r6: float, tol: float = config.DECISION_TOL) -> RegionVerdict:
    """Decisão completa para estados BD: emaranhado sse R6 > g(R2, R4).

    R2 acima de 1/9 também indica emaranhamento (cobre o vértice de Bell,
    onde R6 = g). Para estados não BD o veredito separável não vale.
    """
    _check_domain(r2)
    margin = min(separator_g(r2, r4) - r6, R2_SEP_MAX - r2)
    if margin < -tol:
        return RegionVerdict(Verdict.ENTANGLED, margin, "R6")
    return RegionVerdict(Verdict.SEPARABLE, margin, "R6")


def single_qubit_bounds() -> tuple[float, float]:
    """Máximos de (R2, R4) para um qubit, atingidos por estados puros."""
    return 1 / 3, 1 / 5


def nqubit_bounds(n: int) -> tuple[float, float]:
    if n < 1:
        raise InvalidParams(f"N = {n} < 1")
    r2, r4 = single_qubit_bounds()
    return r2**n, r4**n


def simple_bounds(n: int, r2: float, r4: float, tol: float = config.DECISION_TOL) -> RegionVerdict:
    """Separáveis satisfazem R2 <= 1/3^N e R4 <= 1/5^N."""
    b2, b4 = nqubit_bounds(n)
    margin = min(b2 - r2, b4 - r4)
    if margin < -tol:
        return RegionVerdict(Verdict.ENTANGLED, margin, "simple")
    return RegionVerdict(Verdict.INCONCLUSIVE, margin, "simple")


def bd_exact_verdict(params: BellDiagonalParams) -> RegionVerdict:
    """Regra exata para BD: separável sse |c1| + |c2| + |c3| <= 1."""
    if not params.is_physical():
        return RegionVerdict(Verdict.NONPHYSICAL, float(np.min(params.eigenvalues())), "bd-exact")
    margin = 1.0 - params.l1_norm
    verdict = Verdict.SEPARABLE if params.is_separable() else Verdict.ENTANGLED
    return RegionVerdict(verdict, margin, "bd-exact")


def dicke_moments(n: int, k: int) -> tuple[float, float]:
    """(R2, R4) exatos da marginal de dois corpos de |D^N_k> (qualquer N)."""
    tensor = dicke_marginal_coeffs(n, k).correlation_tensor()
    return moment_design(tensor, 2, default_design(2)), moment_design(tensor, 4, default_design(4))


def dicke_detect(n: int, k: int) -> RegionVerdict:
    r2, r4 = dicke_moments(n, k)
    verdict = criterion_F(r2, r4)
    return RegionVerdict(verdict.verdict, verdict.margin, "F-dicke")


# --- Classe W ---

# Máximo de R2 na classe W, atingido por |W_N>
CHI = {3: 11 / 81, 4: 4 / 81, 5: 7 / 405}
LINE_CRITERION_QUBITS = range(3, 7)

_params_cache: dict[int, WClassCriterionParams] = {}


def wclass_r2_criterion(params: WClassCriterionParams, r2: float, tol: float = config.DECISION_TOL) -> RegionVerdict:
    margin = params.chi - r2
    if margin < -tol:
        return RegionVerdict(Verdict.OUTSIDE_WCLASS, margin, "chi")
    return RegionVerdict(Verdict.INCONCLUSIVE, margin, "chi")


def wclass_line_criterion(
    params: WClassCriterionParams, r2: float, r4: float, tol: float = config.DECISION_TOL
) -> RegionVerdict:
    """Estados da classe W satisfazem m R2 + b~ >= R4 (válido apenas com m < 0)."""
    if params.slope_m >= 0:
        raise SlopeSignViolation(
            f"N={params.nqubits}: m = {params.slope_m} >= 0 invalida o critério linear"
        )
    margin = params.slope_m * r2 + params.intercept_btilde - r4
    if margin < -tol:
        return RegionVerdict(Verdict.OUTSIDE_WCLASS, margin, "line")
    return RegionVerdict(Verdict.INCONCLUSIVE, margin, "line")


def _load_frozen(n: int) -> Optional[WClassCriterionParams]:
    from src.utils.io import read_json

    path = config.LINE_PARAMS_FILE
    if not path.exists():
        return None
    entry = read_json(path).get(str(n))
    if entry is None:
        return None
    logger.debug(f"Parâmetros do critério linear N={n} lidos de {path}")
    return WClassCriterionParams(
        n, float(entry["chi"]), float(entry["slope_m"]), float(entry["intercept_btilde"])
    )


def wclass_params(n: int, seed=0, threads: Optional[int] = None) -> WClassCriterionParams:
    """chi, m e b~ para N em 3..6.

    Lê ``data/line_params.json`` (gerado por ``calibrate``) ou calcula sob
    demanda, com cache por processo.
    """
    if n not in LINE_CRITERION_QUBITS:
        raise UnsupportedQubitNumber(f"Critérios da classe W suportados para N = 3..6 (recebido {n})")
    if n in _params_cache:
        return _params_cache[n]
    params = _load_frozen(n)
    if params is None:
        from src.processors.witness_opt import compute_line_params

        logger.info(f"Calculando parâmetros do critério linear para N={n}")
        params = compute_line_params(n, seed=seed, threads=threads).params
    _params_cache[n] = params
    return params


def clear_params_cache() -> None:
    """Esquece parâmetros em memória (após ``calibrate`` regravar o arquivo)."""
    _params_cache.clear()
