"""
Otimização de momentos sobre a classe W e derivação dos critérios.

Inclui χ^(N) (máximo de R2 na classe W), os parâmetros do critério linear
m e b~, os limiares de ruído p* e de amplitude θ*, o oráculo de força bruta
para as fronteiras BD e a estimativa da fronteira de Conv(W^(3)).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
import pandas as pd
from scipy.optimize import minimize

import config
from src.core.criteria import (
    CHI,
    LINE_CRITERION_QUBITS,
    BORDERS,
    WClassCriterionParams,
    wclass_line_criterion,
    wclass_params,
    wclass_r2_criterion,
)
from src.core.designs import icosahedron_design, octahedron_design
from src.core.moments import moment_design
from src.core.qcore import (
    StandardFormParams,
    correlation_tensor,
    ghz,
    ket_correlation_tensor,
    psi_theta,
    random_bd_params,
    standard_form_ket,
    w_state,
)
from src.utils.errors import InvalidParams, NotDetected, SlopeSignViolation, UnsupportedQubitNumber
from src.utils.parallel import parallel_map
from src.utils.rng import SeedLike, make_rng, spawn

logger = logging.getLogger(__name__)

OPT_QUBITS = range(3, 9)


@dataclass(frozen=True)
class OptResult:
    value: float
    argmax: StandardFormParams
    restarts: int
    spread: float
    values: tuple = field(default=(), repr=False)

    @property
    def converged(self) -> bool:
        return self.spread <= config.OPT_SPREAD_WARN


@dataclass(frozen=True)
class ThresholdResult:
    threshold: float
    criterion: str
    bracket_width: float
    lower: float = 0.0
    upper: float = 0.0
    method: str = "bisection"


@dataclass(frozen=True)
class LineParamsResult:
    params: WClassCriterionParams
    provenance: dict


# --- Momentos exatos de estados puros da forma padrão ---

def _pure_moments(psi: np.ndarray, with_r4: bool = True) -> tuple[float, float]:
    """(R2, R4) exatos de um ket; sem ``with_r4`` devolve R4 = nan."""
    tensor = ket_correlation_tensor(psi)
    r2 = float(np.sum(tensor.values**2)) / 3**tensor.nqubits
    r4 = moment_design(tensor, 4, icosahedron_design()) if with_r4 else math.nan
    return r2, r4


def _wclass_dimension(n: int) -> int:
    return 4 if n == 3 else n + 1


def _amplitudes(w: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(w)
    return w / norm if norm > 0 else np.full_like(w, 1 / math.sqrt(len(w)))


def _moments_from_w(n: int, w: np.ndarray, with_r4: bool) -> tuple[float, float]:
    # sinais de lambda são absorvidos por fases Z locais: os momentos só dependem de |lambda|
    return _pure_moments(standard_form_ket(n, _amplitudes(w)), with_r4)


def _maximize(
    n: int,
    objective: Callable[[float, float], float],
    restarts: int,
    seed: SeedLike,
    threads: Optional[int],
    with_r4: bool,
) -> OptResult:
    dim = _wclass_dimension(n)

    def run(child) -> tuple[float, np.ndarray]:
        rng = np.random.default_rng(child)
        w0 = rng.random(dim) + 1e-3
        res = minimize(
            lambda w: -objective(*_moments_from_w(n, w, with_r4)),
            w0,
            method="Nelder-Mead",
            options={
                "maxiter": config.OPT_MAXITER_PER_DIM * dim,
                "xatol": config.OPT_XATOL,
                "fatol": config.OPT_FATOL,
            },
        )
        lam = np.abs(_amplitudes(res.x))
        return objective(*_pure_moments(standard_form_ket(n, lam), with_r4)), lam

    results = parallel_map(run, spawn(seed, restarts), threads)
    values = np.array([v for v, _ in results])
    best = int(np.argmax(values))
    spread = float(values.max() - values.min())
    return OptResult(
        float(values[best]),
        StandardFormParams(tuple(results[best][1])),
        restarts,
        spread,
        tuple(float(v) for v in values),
    )


def maximize_objective_wclass(
    n: int,
    objective: Callable[[float, float], float],
    restarts: int = config.OPT_RESTARTS,
    seed: SeedLike = 0,
    threads: Optional[int] = None,
    with_r4: bool = True,
) -> OptResult:
    """Maximiza ``objective(R2, R4)`` sobre a forma padrão W (Nelder-Mead multi-start)."""
    if n not in OPT_QUBITS:
        raise UnsupportedQubitNumber(f"Otimização na classe W para N = 3..8 (recebido {n})")
    if restarts < 1:
        raise InvalidParams(f"restarts = {restarts} < 1")
    result = _maximize(n, objective, restarts, seed, threads, with_r4)
    if not result.converged:
        logger.warning(
            f"N={n}: dispersão {result.spread:.2e} entre reinícios; dobrando para {2 * restarts}"
        )
        result = _maximize(n, objective, 2 * restarts, seed, threads, with_r4)
        if not result.converged:
            logger.warning(
                f"N={n}: dispersão {result.spread:.2e} persiste com {result.restarts} reinícios; "
                "máximo não convergiu"
            )
    logger.info(f"N={n}: máximo {result.value:.12g} ({result.restarts} reinícios)")
    return result


def maximize_moment_wclass(
    n: int,
    t: int,
    restarts: int = config.OPT_RESTARTS,
    seed: SeedLike = 0,
    threads: Optional[int] = None,
) -> OptResult:
    if t == 2:
        objective = lambda r2, r4: r2  # noqa: E731
    elif t == 4:
        objective = lambda r2, r4: r4  # noqa: E731
    else:
        raise InvalidParams(f"t = {t}: apenas R2 e R4 são otimizados")
    return maximize_objective_wclass(n, objective, restarts, seed, threads, with_r4=t == 4)


def wclass_chi(n: int, restarts: int = config.OPT_RESTARTS, seed: SeedLike = 0,
               threads: Optional[int] = None) -> float:
    """χ^(N): constante conhecida para N = 3, 4, 5; otimizado nos demais."""
    if n in CHI:
        return CHI[n]
    return maximize_moment_wclass(n, 2, restarts, seed, threads).value


def compute_line_params(
    n: int,
    seed: SeedLike = 0,
    restarts: int = config.OPT_RESTARTS,
    threads: Optional[int] = None,
) -> LineParamsResult:
    """Inclinação m pelos argmax de R2 e R4 e intercepto b~ = max (R4 - m R2)."""
    if n not in LINE_CRITERION_QUBITS:
        raise UnsupportedQubitNumber(f"Critério linear definido para N = 3..6 (recebido {n})")
    seeds = spawn(seed, 3)
    opt2 = maximize_moment_wclass(n, 2, restarts, seeds[0], threads)
    opt4 = maximize_moment_wclass(n, 4, restarts, seeds[1], threads)
    r2a, r4a = _pure_moments(standard_form_ket(n, opt2.argmax.lambdas))
    r2b, r4b = _pure_moments(standard_form_ket(n, opt4.argmax.lambdas))
    if abs(r2a - r2b) < config.DECISION_TOL:
        raise SlopeSignViolation(f"N={n}: argmax de R2 e R4 coincidem; inclinação indefinida")
    slope = (r4a - r4b) / (r2a - r2b)
    if slope >= 0:
        raise SlopeSignViolation(f"N={n}: m = {slope:.6g} >= 0")
    opt_b = maximize_objective_wclass(n, lambda r2, r4: r4 - slope * r2, restarts, seeds[2], threads)
    chi = CHI.get(n, opt2.value)
    params = WClassCriterionParams(n, chi, slope, opt_b.value)
    provenance = {
        "restarts": [opt2.restarts, opt4.restarts, opt_b.restarts],
        "spread": [opt2.spread, opt4.spread, opt_b.spread],
        "converged": [opt2.converged, opt4.converged, opt_b.converged],
        "argmax_r2": list(opt2.argmax.lambdas),
        "argmax_r4": list(opt4.argmax.lambdas),
        "points": [[r2a, r4a], [r2b, r4b]],
    }
    logger.info(f"N={n}: m = {slope:.12g}, b~ = {opt_b.value:.12g}")
    return LineParamsResult(params, provenance)


# --- Limiares ---

def _bisect(detected: Callable[[float], bool], lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Fronteira entre ``lo`` (não detectado) e ``hi`` (detectado)."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if detected(mid):
            hi = mid
        else:
            lo = mid
    return lo, hi


def _ghz_moments(n: int, with_r4: bool) -> tuple[float, float]:
    tensor = correlation_tensor(ghz(n))
    r2 = moment_design(tensor, 2, octahedron_design())
    return r2, moment_design(tensor, 4, icosahedron_design()) if with_r4 else math.nan


def noise_threshold(
    n: int,
    criterion: str = "r2-only",
    params: Optional[WClassCriterionParams] = None,
    method: str = "closed-form",
    tol: float = config.BISECTION_TOL,
) -> ThresholdResult:
    """Ruído p* até o qual o GHZ ruidoso é detectado fora de Conv(W^(N)).

    Usa R2(p) = (1-p)^2 R2_GHZ e R4(p) = (1-p)^4 R4_GHZ.
    """
    r2g, r4g = _ghz_moments(n, with_r4=criterion == "line")
    if criterion == "r2-only":
        chi = params.chi if params is not None else wclass_chi(n)
        if not wclass_r2_criterion(WClassCriterionParams(n, chi, -1.0, 0.0), r2g).detected:
            raise NotDetected(f"GHZ_{n} não viola R2 <= chi^({n}) nem sem ruído")
        if method == "closed-form":
            return ThresholdResult(1 - math.sqrt(chi / r2g), criterion, 0.0, method=method)

        def detected(p: float) -> bool:
            return (1 - p) ** 2 * r2g > chi

    elif criterion == "line":
        params = params if params is not None else wclass_params(n)
        if not wclass_line_criterion(params, r2g, r4g).detected:
            raise NotDetected(f"GHZ_{n} não viola o critério linear nem sem ruído")

        def detected(p: float) -> bool:
            s = 1 - p
            return r4g * s**4 > params.slope_m * r2g * s**2 + params.intercept_btilde

    else:
        raise InvalidParams(f"Critério desconhecido {criterion!r}; use r2-only ou line")
    # detectado em p = 0, não detectado em p = 1
    lo, hi = _bisect(lambda p: not detected(p), 0.0, 1.0, tol)
    return ThresholdResult(0.5 * (lo + hi), criterion, hi - lo, lo, hi)


def amplitude_threshold(
    n: int,
    criterion: str = "r2-only",
    params: Optional[WClassCriterionParams] = None,
    tol: float = config.BISECTION_TOL,
) -> ThresholdResult:
    """θ* acima do qual |Ψ(θ)> é detectado fora da classe W (bisseção em [0, π/4])."""
    if criterion == "r2-only":
        chi = params.chi if params is not None else wclass_chi(n)
        params = WClassCriterionParams(n, chi, -1.0, 0.0)
        check = lambda r2, r4: wclass_r2_criterion(params, r2)  # noqa: E731
    elif criterion == "line":
        params = params if params is not None else wclass_params(n)
        check = lambda r2, r4: wclass_line_criterion(params, r2, r4)  # noqa: E731
    else:
        raise InvalidParams(f"Critério desconhecido {criterion!r}; use r2-only ou line")

    def detected(theta: float) -> bool:
        tensor = correlation_tensor(psi_theta(n, theta))
        r2 = moment_design(tensor, 2, octahedron_design())
        r4 = moment_design(tensor, 4, icosahedron_design()) if criterion == "line" else 0.0
        return check(r2, r4).detected

    if not detected(math.pi / 4):
        raise NotDetected(f"|Ψ(π/4)> de {n} qubits não é detectado")
    lo, hi = _bisect(detected, 0.0, math.pi / 4, tol)
    return ThresholdResult(0.5 * (lo + hi), criterion, hi - lo, lo, hi)


# --- Oráculos de fronteira ---

def _bd_moment_arrays(c: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    r2 = np.sum(c**2, axis=1) / 9
    r4 = 2 / 75 * np.sum(c**4, axis=1) + 27 / 25 * r2**2
    return r2, r4


def sample_bd_params(samples: int, mode: str, seed: SeedLike = None) -> np.ndarray:
    """Amostras BD físicas filtradas por ``mode`` (all, separable, entangled).

    Mistura amostras uniformes com amostras concentradas nas faces e vértices.
    """
    if mode not in ("all", "separable", "entangled"):
        raise InvalidParams(f"Modo desconhecido {mode!r}")
    source = "separable" if mode == "separable" else "all"
    concentrations = (1.0, 0.3, 0.05)
    parts = []
    for conc, child in zip(concentrations, spawn(seed, len(concentrations))):
        parts.append(random_bd_params(samples // len(concentrations) + 1, child, source, conc))
    c = np.concatenate(parts)[:samples]
    if mode == "entangled":
        c = c[np.sum(np.abs(c), axis=1) > 1.0]
    return c


def bd_boundary_bruteforce(
    r2_grid: Sequence[float],
    samples_per_cell: int = 1000,
    mode: str = "all",
    seed: SeedLike = None,
    cell_width: float = 2e-3,
) -> pd.DataFrame:
    """Mínimo e máximo de R4 por célula de R2 sobre estados BD aleatórios.

    Colunas: r2, r2_at_min, r4_min, r2_at_max, r4_max, count.
    """
    grid = np.asarray(r2_grid, dtype=float)
    if grid.size == 0 or grid.min() < 0 or grid.max() > 1 / 3 + 1e-12:
        raise InvalidParams("Grade de R2 deve estar em [0, 1/3]")
    c = sample_bd_params(samples_per_cell * len(grid), mode, seed)
    r2, r4 = _bd_moment_arrays(c)
    rows = []
    half = cell_width / 2
    for g in grid:
        mask = np.abs(r2 - g) <= half
        if not mask.any():
            rows.append({"r2": g, "r2_at_min": np.nan, "r4_min": np.nan,
                         "r2_at_max": np.nan, "r4_max": np.nan, "count": 0})
            continue
        idx = np.flatnonzero(mask)
        i_min, i_max = idx[np.argmin(r4[idx])], idx[np.argmax(r4[idx])]
        rows.append({
            "r2": g,
            "r2_at_min": r2[i_min],
            "r4_min": r4[i_min],
            "r2_at_max": r2[i_max],
            "r4_max": r4[i_max],
            "count": int(mask.sum()),
        })
    logger.info(f"Força bruta BD ({mode}): {len(c)} amostras em {len(grid)} células")
    return pd.DataFrame(rows)


def border_violations(samples: np.ndarray, mode: str, tol: float = 1e-9) -> dict[str, int]:
    """Conta pontos (R2, R4) do lado errado de cada fronteira aplicável ao modo."""
    r2, r4 = _bd_moment_arrays(samples)
    checks = {
        "all": [("f_lb", +1), ("f_ub", -1)],
        "separable": [("f_lb_sep", +1), ("f_ub_sep", -1)],
        "entangled": [("f_lb_ent", +1), ("f_ub_ent", -1)],
    }[mode]
    out = {}
    for name, sign in checks:
        fn, lo, hi = BORDERS[name]
        inside = (r2 >= lo) & (r2 <= hi)
        bound = np.array([fn(v) for v in r2[inside]])
        # sign +1: fronteira inferior (R4 >= f); -1: superior (R4 <= f)
        out[name] = int(np.sum(sign * (r4[inside] - bound) < -tol))
    return out


def wclass_mixed_border_estimate(
    r2_grid: Sequence[float],
    samples: int = 20_000,
    seed: SeedLike = None,
    cell_width: float = 2e-3,
) -> pd.DataFrame:
    """Estimativa de min R4 por célula de R2 em Conv({|000>, |W3>, 1/8}).

    A identidade não contribui para o tensor: T = a T_000 + b T_W.
    """
    rng = make_rng(seed)
    octa, ico = octahedron_design(), icosahedron_design()
    t_prod = ket_correlation_tensor(standard_form_ket(3, [1.0, 0.0, 0.0, 0.0])).values
    t_w = correlation_tensor(w_state(3)).values
    weights = rng.dirichlet(np.ones(3), size=samples)

    def design_values(points: np.ndarray, tensor: np.ndarray) -> np.ndarray:
        e = tensor
        for _ in range(3):
            e = np.tensordot(e, points, axes=([0], [1]))
        return e.reshape(-1)

    e2p, e2w = design_values(octa.half_points(), t_prod), design_values(octa.half_points(), t_w)
    e4p, e4w = design_values(ico.half_points(), t_prod), design_values(ico.half_points(), t_w)
    a, b = weights[:, :1], weights[:, 1:2]
    r2 = np.mean((a * e2p + b * e2w) ** 2, axis=1)
    r4 = np.mean((a * e4p + b * e4w) ** 4, axis=1)
    rows = []
    for g in np.asarray(r2_grid, dtype=float):
        mask = np.abs(r2 - g) <= cell_width / 2
        rows.append({
            "r2": g,
            "r4_min": float(r4[mask].min()) if mask.any() else np.nan,
            "count": int(mask.sum()),
        })
    return pd.DataFrame(rows)
