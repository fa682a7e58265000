"""
Motores de momentos R^(t) de correlações locais aleatórias.

Quatro caminhos independentes, todos sobre o tensor de correlação:

* ``moment_design``: soma exata sobre um design esférico por qubit;
* ``moment_mc``: Monte Carlo com direções uniformes;
* ``moment_monomial``: expansão multinomial integrada analiticamente (oráculo);
* ``bd_moments``: formas fechadas para estados Bell-diagonais.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Optional, Union

import numpy as np

import config
from src.core.designs import (
    SphericalDesign,
    UnitaryDesign,
    icosahedron_design,
    octahedron_design,
    sphere_monomial_average,
)
from src.core.qcore import (
    BellDiagonalParams,
    CorrelationTensor,
    DensityMatrix,
    correlation_tensor,
    two_body_correlation_tensor,
)
from src.utils.errors import (
    DesignSumTooLarge,
    ExpansionTooLarge,
    InsufficientStrength,
    InvalidParams,
)
from src.utils.parallel import parallel_map
from src.utils.rng import SeedLike, spawn

logger = logging.getLogger(__name__)

ENGINES = ("design", "montecarlo", "monomial", "bd-closed-form")
TensorLike = Union[CorrelationTensor, np.ndarray]


def _values(tensor: TensorLike) -> np.ndarray:
    if isinstance(tensor, CorrelationTensor):
        return tensor.values
    return CorrelationTensor(tensor).values


@dataclass(frozen=True)
class MomentSet:
    """Momentos R2, R4 (e R6 opcional) com a proveniência do cálculo."""

    r2: float
    r4: float
    r6: Optional[float] = None
    engine: str = "design"
    routing: dict = field(default_factory=dict)
    nsamples: Optional[int] = None
    stderr: Optional[dict] = None

    def __post_init__(self) -> None:
        if self.engine not in ENGINES:
            raise InvalidParams(f"Motor desconhecido {self.engine!r}")
        stochastic = self.engine == "montecarlo"
        if stochastic != (self.nsamples is not None and self.stderr is not None):
            raise InvalidParams("nsamples/stderr existem apenas para o motor montecarlo")
        if not stochastic:
            self._check_ordering()

    def _check_ordering(self) -> None:
        tol = config.DECISION_TOL
        ok = -tol <= self.r2 <= 1 + tol and -tol <= self.r4 <= self.r2 + tol
        if self.r6 is not None:
            ok = ok and -tol <= self.r6 <= self.r4 + tol
        if not ok:
            raise InvalidParams(
                f"Momentos violam 0 <= R6 <= R4 <= R2 <= 1: ({self.r2}, {self.r4}, {self.r6})"
            )

    def value(self, t: int) -> float:
        vals = {2: self.r2, 4: self.r4, 6: self.r6}
        if vals.get(t) is None:
            raise InvalidParams(f"Momento de ordem {t} não calculado")
        return vals[t]

    def as_dict(self) -> dict:
        out = {"r2": self.r2, "r4": self.r4, "engine": self.engine}
        if self.r6 is not None:
            out["r6"] = self.r6
        if self.routing:
            out["routing"] = {str(k): v for k, v in self.routing.items()}
        if self.nsamples is not None:
            out["nsamples"] = self.nsamples
            out["stderr"] = {str(k): v for k, v in self.stderr.items()}
        return out


class MonteCarloEstimate(NamedTuple):
    estimate: float
    stderr: float
    nsamples: int


# --- Motor por designs ---

def _design_sum(values: np.ndarray, t: int, points: np.ndarray, threads: Optional[int]) -> float:
    n, count = values.ndim, len(points)
    terms = count**n
    if terms > config.DESIGN_SUM_MAX_TERMS:
        raise DesignSumTooLarge(
            f"{count}^{n} = {terms:.3e} termos excede {config.DESIGN_SUM_MAX_TERMS:.0e}; "
            f"use o motor montecarlo"
        )
    fixed = 0
    while count ** (n - fixed) > config.DESIGN_CHUNK_TERMS:
        fixed += 1

    def block(prefix: tuple) -> float:
        e = values
        for k in prefix:
            e = np.tensordot(points[k], e, axes=([0], [0]))
        for _ in range(n - fixed):
            e = np.tensordot(e, points, axes=([0], [1]))
        return float(np.sum(np.power(e, t)))

    prefixes = list(itertools.product(range(count), repeat=fixed))
    partial = parallel_map(block, prefixes, threads)
    return math.fsum(partial) / terms


def moment_design(
    tensor: TensorLike, t: int, design: SphericalDesign, threads: Optional[int] = None
) -> float:
    """(1/L^N) sum E(u_k1, ..., u_kN)^t sobre todas as combinações de vértices.

    Para t par e design antipodal, usa metade dos pontos em cada qubit.
    """
    if design.strength < t:
        raise InsufficientStrength(
            f"Design {design.name!r} tem força {design.strength} < t = {t}"
        )
    points = design.half_points() if t % 2 == 0 and design.is_antipodal() else design.points
    return _design_sum(_values(tensor), t, points, threads)


def moment_unitary_design(
    tensor: TensorLike, t: int, design: UnitaryDesign, threads: Optional[int] = None
) -> float:
    """Média de E^t sobre as direções de todos os elementos (com multiplicidade)."""
    if design.strength < t:
        raise InsufficientStrength(
            f"Design {design.name!r} tem força {design.strength} < t = {t}"
        )
    return _design_sum(_values(tensor), t, design.directions(), threads)


# --- Monte Carlo ---

def uniform_directions(rng: np.random.Generator, shape: tuple) -> np.ndarray:
    """Direções uniformes: z ~ U[-1, 1], azimute ~ U[0, 2pi)."""
    z = rng.uniform(-1.0, 1.0, size=shape)
    phi = rng.uniform(0.0, 2 * math.pi, size=shape)
    r = np.sqrt(1.0 - z**2)
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=-1)


def correlation_values(values: np.ndarray, directions: np.ndarray) -> np.ndarray:
    """E(u_1, ..., u_N) para um lote de direções de shape (S, N, 3)."""
    e = np.tensordot(directions[:, 0, :], values, axes=([1], [0]))
    for q in range(1, values.ndim):
        e = np.einsum("si...,si->s...", e, directions[:, q, :])
    return e


def moment_mc(
    tensor: TensorLike,
    t: int,
    nsamples: int,
    seed: SeedLike = None,
    threads: Optional[int] = None,
) -> MonteCarloEstimate:
    """Média amostral de E^t e erro padrão (desvio amostral / sqrt(n)).

    Os blocos de amostras recebem sementes filhas pelo índice do bloco.
    """
    if nsamples < config.MC_MIN_SAMPLES:
        raise InvalidParams(f"nsamples = {nsamples} < {config.MC_MIN_SAMPLES}")
    values = _values(tensor)
    n = values.ndim
    chunk = max(1, min(config.MC_CHUNK_SIZE, config.DESIGN_CHUNK_TERMS // 3 ** (n - 1)))
    nchunks = math.ceil(nsamples / chunk)
    seeds = spawn(seed, nchunks)

    def run(i: int) -> np.ndarray:
        size = min(chunk, nsamples - i * chunk)
        rng = np.random.default_rng(seeds[i])
        return np.power(correlation_values(values, uniform_directions(rng, (size, n))), t)

    samples = np.concatenate(parallel_map(run, range(nchunks), threads))
    stderr = float(np.std(samples, ddof=1) / math.sqrt(nsamples))
    return MonteCarloEstimate(float(np.mean(samples)), stderr, nsamples)


# --- Oráculo monomial ---

@lru_cache(maxsize=None)
def _sphere_weights(t: int) -> np.ndarray:
    w = np.zeros((t + 1, t + 1))
    for a in range(t + 1):
        for b in range(t + 1 - a):
            w[a, b] = sphere_monomial_average(a, b, t - a - b)
    w.setflags(write=False)
    return w


def monomial_cost(nqubits: int, t: int) -> int:
    return (t + 1) ** (2 * nqubits)


def moment_monomial(tensor: TensorLike, t: int) -> float:
    """Expande E^t em monômios das componentes das direções e integra cada fator.

    O polinômio guarda, por qubit, os expoentes (a, b) de x e y; o de z é
    implícito (c = t - a - b).
    """
    values = _values(tensor)
    n = values.ndim
    cost = monomial_cost(n, t)
    if cost > config.MONOMIAL_MAX_TERMS:
        raise ExpansionTooLarge(
            f"Expansão com {cost:.3e} coeficientes (N={n}, t={t}) excede "
            f"{config.MONOMIAL_MAX_TERMS:.0e}"
        )
    shifts = {
        0: ((slice(1, None), slice(None)), (slice(None, -1), slice(None))),
        1: ((slice(None), slice(1, None)), (slice(None), slice(None, -1))),
        2: ((slice(None), slice(None)), (slice(None), slice(None))),
    }
    entries = [(idx, float(values[idx])) for idx in zip(*np.nonzero(values))]
    moves = []
    for idx, coeff in entries:
        dst = tuple(s for i in idx for s in shifts[int(i)][0])
        src = tuple(s for i in idx for s in shifts[int(i)][1])
        moves.append((dst, src, coeff))

    poly = np.zeros((t + 1,) * (2 * n))
    poly[(0,) * (2 * n)] = 1.0
    for _ in range(t):
        nxt = np.zeros_like(poly)
        for dst, src, coeff in moves:
            nxt[dst] += coeff * poly[src]
        poly = nxt

    weights = _sphere_weights(t)
    result = poly
    for _ in range(n):
        result = np.tensordot(result, weights, axes=([0, 1], [0, 1]))
    return float(result)


# --- Formas fechadas Bell-diagonais ---

def bd_moments(params: BellDiagonalParams) -> MomentSet:
    c = params.as_array()
    r2 = float(np.sum(c**2) / 9)
    r4 = float(2 / 75 * np.sum(c**4) + 27 / 25 * r2**2)
    r6 = float(8 / 735 * np.sum(c**6) - 486 / 245 * r2**3 + 135 / 49 * r2 * r4)
    return MomentSet(r2, r4, r6, engine="bd-closed-form")


# --- Roteamento ---

@lru_cache(maxsize=None)
def _shipped(name: str) -> SphericalDesign:
    return {"octahedron": octahedron_design, "icosahedron": icosahedron_design}[name]()


def default_design(t: int) -> Optional[SphericalDesign]:
    """Menor design distribuído com força >= t (nenhum para t >= 6)."""
    if t <= 3:
        return _shipped("octahedron")
    if t <= 5:
        return _shipped("icosahedron")
    return None


def exact_moment(
    tensor: TensorLike,
    t: int,
    design: Optional[SphericalDesign] = None,
    threads: Optional[int] = None,
) -> tuple[float, str]:
    """Momento exato pelo design adequado; cai no oráculo monomial sem design de força t."""
    chosen = design if design is not None and design.strength >= t else default_design(t)
    if chosen is None:
        return moment_monomial(tensor, t), "monomial"
    return moment_design(tensor, t, chosen, threads), "design"


def moments(
    tensor: TensorLike,
    include_r6: bool = False,
    engine: str = "design",
    design: Optional[SphericalDesign] = None,
    nsamples: int = 100_000,
    seed: SeedLike = None,
    threads: Optional[int] = None,
) -> MomentSet:
    """R2, R4 e opcionalmente R6 pelo motor pedido.

    Roteamento de R6: sem design de força >= 6, o motor ``design`` usa o
    oráculo monomial (com aviso). Estados BD usam ``bd_moments``.
    """
    ts = (2, 4, 6) if include_r6 else (2, 4)
    vals: dict[int, float] = {}
    routing: dict[int, str] = {}
    if engine == "montecarlo":
        errs = {}
        for t, child in zip(ts, spawn(seed, len(ts))):
            est = moment_mc(tensor, t, nsamples, child, threads)
            vals[t], errs[t] = est.estimate, est.stderr
            routing[t] = "montecarlo"
        return MomentSet(vals[2], vals[4], vals.get(6), "montecarlo", routing, nsamples, errs)
    if engine == "monomial":
        for t in ts:
            vals[t], routing[t] = moment_monomial(tensor, t), "monomial"
    elif engine == "design":
        for t in ts:
            vals[t], routing[t] = exact_moment(tensor, t, design, threads)
            if routing[t] == "monomial":
                logger.warning(f"Sem design de força {t}; R{t} calculado pelo oráculo monomial")
    else:
        raise InvalidParams(f"Motor desconhecido {engine!r}; use design, montecarlo ou monomial")
    logger.debug(f"Roteamento dos momentos: {routing}")
    return MomentSet(vals[2], vals[4], vals.get(6), engine, routing)


def state_moments(rho: DensityMatrix, include_r6: bool = False, **kwargs) -> MomentSet:
    return moments(correlation_tensor(rho), include_r6=include_r6, **kwargs)


def two_body_moments(
    rho: DensityMatrix,
    alpha: int,
    beta: int,
    t: int,
    design: Optional[SphericalDesign] = None,
) -> float:
    """R^(t) do par (alpha, beta) a partir do tensor de dois corpos."""
    value, _ = exact_moment(two_body_correlation_tensor(rho, alpha, beta), t, design)
    return value
