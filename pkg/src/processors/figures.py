"""
Tabelas por trás dos comandos fig2a, fig2b, fig3a, fig3b e scan-bd.

Cada função devolve um ``pandas.DataFrame`` pronto para ``write_csv``;
nenhuma delas desenha gráficos.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

import config
from src.core.criteria import (
    BORDERS,
    R2_MAX,
    Verdict,
    WClassCriterionParams,
    bd_exact_verdict,
    criterion_F,
    criterion_R6,
    dicke_detect,
    dicke_moments,
    wclass_params,
)
from src.core.moments import bd_moments, state_moments
from src.core.qcore import (
    BellDiagonalParams,
    DensityMatrix,
    basis_ket,
    bell_state,
    ghz,
    maximally_mixed,
    psi_theta,
    random_bd_params,
    random_density_matrix,
    random_mixed_wclass,
    random_separable_mixture,
    tensor_product,
    w_state,
)
from src.processors.witness_opt import (
    amplitude_threshold,
    noise_threshold,
    wclass_chi,
    wclass_mixed_border_estimate,
)
from src.utils.errors import InvalidParams, NotDetected
from src.utils.parallel import parallel_map
from src.utils.rng import SeedLike, make_rng, spawn

logger = logging.getLogger(__name__)

STATE_CLASSES = ("mixed", "fullysep", "wclass")
FIG2A_CURVES = ("f_lb", "f_ub", "f_lb_sep", "f_ub_ent")


# --- Figura 2(a): fronteiras BD ---

def fig2a_curves(points: int = 201) -> pd.DataFrame:
    """Fronteiras em uma grade uniforme de R2 em [0, 1/3]; NaN fora do domínio."""
    if points < 2:
        raise InvalidParams(f"points = {points} < 2")
    grid = np.linspace(0.0, R2_MAX, points)
    data = {"r2": grid}
    for name in FIG2A_CURVES:
        fn, lo, hi = BORDERS[name]
        data[name] = [fn(r2) if lo <= r2 <= hi else np.nan for r2 in grid]
    return pd.DataFrame(data)


def fig2a_points() -> pd.DataFrame:
    rows = [
        ("A", "maximamente misturado", 0.0, 0.0),
        ("B", "produto puro", 1 / 9, 1 / 25),
        ("C", "Bell", 1 / 3, 1 / 5),
    ]
    for i, n in enumerate(range(3, 8), start=1):
        r2, r4 = dicke_moments(n, 2)
        rows.append((f"D{i}", f"marginal de |D^{n}_2>", r2, r4))
    return pd.DataFrame(rows, columns=["label", "state", "r2", "r4"])


# --- Figura 2(b): varredura de Dicke ---

def fig2b_dicke(nmax: int = 200) -> pd.DataFrame:
    """Veredito do critério F para |D^N_k>, 2 <= N <= nmax, 1 <= k <= N/2."""
    if nmax < 2:
        raise InvalidParams(f"nmax = {nmax} < 2")
    rows = []
    for n in range(2, nmax + 1):
        for k in range(1, n // 2 + 1):
            r2, r4 = dicke_moments(n, k)
            verdict = dicke_detect(n, k)
            rows.append({
                "n": n,
                "k": k,
                "r2": r2,
                "r4": r4,
                "margin": verdict.margin,
                "detected": verdict.detected,
            })
    df = pd.DataFrame(rows)
    logger.info(f"Dicke: {int(df['detected'].sum())} de {len(df)} pares (N, k) detectados")
    return df


# --- Figura 3(a): plano (R2, R4) de três qubits ---

def _random_state(state_class: str, child: np.random.SeedSequence) -> DensityMatrix:
    rng = make_rng(child)
    if state_class == "mixed":
        return random_density_matrix(3, rng)
    rank = int(rng.integers(1, 9))
    if state_class == "fullysep":
        return random_separable_mixture(3, rank, rng)
    return random_mixed_wclass(3, rank, rng)


def fig3a_scatter(
    count: int,
    state_class: str = "mixed",
    seed: SeedLike = None,
    threads: Optional[int] = None,
) -> pd.DataFrame:
    if state_class not in STATE_CLASSES:
        raise InvalidParams(f"Classe {state_class!r}; opções: {', '.join(STATE_CLASSES)}")
    if count < 1:
        raise InvalidParams(f"count = {count} < 1")

    def run(child) -> tuple[float, float]:
        m = state_moments(_random_state(state_class, child))
        return m.r2, m.r4

    pairs = parallel_map(run, spawn(seed, count), threads)
    df = pd.DataFrame(pairs, columns=["r2", "r4"])
    df.insert(0, "class", state_class)
    return df


def fig3a_anchors() -> pd.DataFrame:
    bell_times_zero = DensityMatrix(
        tensor_product(bell_state("phi+").data, np.outer(basis_ket([0]), basis_ket([0])))
    )
    states = [
        ("A", "maximamente misturado", maximally_mixed(3)),
        ("B", "produto puro", DensityMatrix.from_ket(basis_ket([0, 0, 0]))),
        ("C", "biseparável |phi>|Bell>", bell_times_zero),
        ("D", "W3", w_state(3)),
        ("E", "GHZ3", ghz(3)),
    ]
    rows = []
    for label, name, rho in states:
        m = state_moments(rho)
        rows.append((label, name, m.r2, m.r4))
    return pd.DataFrame(rows, columns=["label", "state", "r2", "r4"])


def fig3a_curves(n: int = 3, points: int = 101) -> pd.DataFrame:
    """GHZ ruidoso (p em [0, 1]) e |Psi(theta)> (theta em [0, pi/2]).

    O GHZ ruidoso segue a lei de escala exata R^(t)(p) = (1-p)^t R^(t)(GHZ).
    """
    ghz_m = state_moments(ghz(n))
    rows = []
    for p in np.linspace(0.0, 1.0, points):
        s = 1 - p
        rows.append(("noisyghz", p, s**2 * ghz_m.r2, s**4 * ghz_m.r4))
    for theta in np.linspace(0.0, math.pi / 2, points):
        m = state_moments(psi_theta(n, theta))
        rows.append(("psitheta", theta, m.r2, m.r4))
    return pd.DataFrame(rows, columns=["curve", "parameter", "r2", "r4"])


def fig3a_wclass_border(points: int = 60, samples: int = 20_000, seed: SeedLike = None) -> pd.DataFrame:
    """Estimativa da borda inferior de Conv(W^(3)) (subclasse |000>, |W3>, 1)."""
    grid = np.linspace(0.0, 11 / 81, points)
    return wclass_mixed_border_estimate(grid, samples=samples, seed=seed)


# --- Figura 3(b): limiares ---

def _threshold_row(n: int, criterion: str, params) -> dict:
    row = {"n": n, "criterion": criterion}
    for key, fn in (("p_star", noise_threshold), ("theta_star", amplitude_threshold)):
        try:
            res = fn(n, criterion, params)
            row[key], row[f"{key}_bracket"] = res.threshold, res.bracket_width
        except NotDetected as e:
            logger.warning(str(e))
            row[key], row[f"{key}_bracket"] = np.nan, np.nan
    return row


def fig3b_thresholds(
    nmax: int = 6,
    seed: SeedLike = 0,
    threads: Optional[int] = None,
) -> pd.DataFrame:
    """p* e theta* para os dois critérios, N = 3..nmax (linha apenas até 6)."""
    if not 3 <= nmax <= 8:
        raise InvalidParams(f"nmax = {nmax} fora de 3..8")
    rows = []
    for n in range(3, nmax + 1):
        chi = wclass_chi(n, seed=seed, threads=threads)
        rows.append(_threshold_row(n, "r2-only", WClassCriterionParams(n, chi, -1.0, 0.0)))
        if n <= 6:
            rows.append(_threshold_row(n, "line", wclass_params(n, seed=seed, threads=threads)))
    return pd.DataFrame(rows)


# --- Varredura BD ---

@dataclass(frozen=True)
class BDScanResult:
    samples: pd.DataFrame
    summary: pd.DataFrame
    violations: int
    r6_missed: int = 0


def scan_bd(count: int = 10_000, seed: SeedLike = None, band: float = config.SCAN_BD_BAND) -> BDScanResult:
    """Critérios F e R6 contra a regra exata |c|_1 <= 1 em estados BD uniformes.

    Violação de correção: um critério declara emaranhado um estado separável.
    Emaranhados que R6 não detecta fora de ``band`` em torno de |c|_1 = 1 vão
    para ``r6_missed``; ``missed_rank_deficient`` separa os de menor autovalor
    <= ``BD_RANK_TOL``, onde R6 e g coincidem dentro do arredondamento.
    """
    if count < 1:
        raise InvalidParams(f"count = {count} < 1")
    rows = []
    for c in random_bd_params(count, seed, "all"):
        params = BellDiagonalParams(*(float(v) for v in c))
        m = bd_moments(params)
        exact = bd_exact_verdict(params)
        f = criterion_F(m.r2, m.r4)
        r6 = criterion_R6(m.r2, m.r4, m.r6)
        lambda_min = float(np.min(params.eigenvalues()))
        rows.append({
            "c1": params.c1,
            "c2": params.c2,
            "c3": params.c3,
            "l1_norm": params.l1_norm,
            "lambda_min": lambda_min,
            "rank_deficient": lambda_min <= config.BD_RANK_TOL,
            "r2": m.r2,
            "r4": m.r4,
            "r6": m.r6,
            "exact": exact.verdict.value,
            "criterion_f": f.verdict.value,
            "criterion_r6": r6.verdict.value,
        })
    df = pd.DataFrame(rows)
    separable = df["exact"] == Verdict.SEPARABLE.value
    outside_band = (df["l1_norm"] - 1.0).abs() > band
    summary = []
    for name in ("criterion_f", "criterion_r6"):
        flagged = df[name] == Verdict.ENTANGLED.value
        missed = ~flagged & ~separable
        summary.append({
            "criterion": name,
            "true_entangled": int((flagged & ~separable).sum()),
            "false_entangled": int((flagged & separable).sum()),
            "missed_entangled": int(missed.sum()),
            "missed_outside_band": int((missed & outside_band).sum()),
            "missed_rank_deficient": int((missed & outside_band & df["rank_deficient"]).sum()),
            "true_not_flagged": int((~flagged & separable).sum()),
        })
    summary_df = pd.DataFrame(summary).set_index("criterion", drop=False)
    violations = int(summary_df["false_entangled"].sum())
    r6_missed = int(summary_df.loc["criterion_r6", "missed_outside_band"])
    if violations:
        logger.error(f"{violations} estados separáveis declarados emaranhados")
    if r6_missed:
        deficient = int(summary_df.loc["criterion_r6", "missed_rank_deficient"])
        logger.warning(
            f"R6 não detectou {r6_missed} emaranhados fora da faixa {band:g} "
            f"({deficient} de posto incompleto)"
        )
    logger.info(f"Varredura BD: {count} estados, {int((~separable).sum())} emaranhados")
    return BDScanResult(df, summary_df.reset_index(drop=True), violations, r6_missed)
