"""
Designs esféricos e unitários de um qubit.

Construção (octaedro, icosaedro, grupo de Clifford, SL(2,F5)), projeção de
designs unitários na esfera de Bloch, verificação por monômios e
serialização em JSON.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.special import gamma

import config
from src.core.qcore import rotation_from_unitary
from src.utils.errors import (
    ClosureSizeMismatch,
    DedupSizeMismatch,
    DesignParseError,
    NonUnitaryResult,
    VerificationFailure,
)
from src.utils.io import read_json, write_json
from src.utils.rng import SeedLike

logger = logging.getLogger(__name__)

GOLDEN = (1 + math.sqrt(5)) / 2
_PHASE_REF_TOL = 1e-6


# --- Tipos ---

@dataclass(frozen=True, eq=False)
class SphericalDesign:
    """Conjunto finito de direções na esfera com força declarada t."""

    name: str
    strength: int
    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.array(self.points, dtype=float).reshape(-1, 3)
        if pts.shape[0] == 0:
            raise DesignParseError(f"Design {self.name!r} sem pontos")
        norms = np.linalg.norm(pts, axis=1)
        if np.max(np.abs(norms - 1.0)) > config.STATE_TOL:
            raise DesignParseError(f"Design {self.name!r} tem pontos fora da esfera unitária")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def size(self) -> int:
        return len(self)

    def is_antipodal(self, tol: float = config.GROUP_TOL) -> bool:
        return all(
            np.min(np.linalg.norm(self.points + p, axis=1)) < tol for p in self.points
        )

    def half_points(self) -> np.ndarray:
        """Um representante de cada par antipodal (o de maior coordenada não nula)."""
        pts = self.points
        keep = np.zeros(len(pts), dtype=bool)
        undecided = np.ones(len(pts), dtype=bool)
        for axis in (2, 1, 0):
            pos = undecided & (pts[:, axis] > config.GROUP_TOL)
            neg = undecided & (pts[:, axis] < -config.GROUP_TOL)
            keep |= pos
            undecided &= ~(pos | neg)
        return pts[keep]


@dataclass(frozen=True, eq=False)
class UnitaryDesign:
    """Conjunto finito de unitárias 2x2 com força declarada t."""

    name: str
    strength: int
    unitaries: np.ndarray

    def __post_init__(self) -> None:
        us = np.array(self.unitaries, dtype=complex).reshape(-1, 2, 2)
        dev = _unitarity_deviation(us)
        if dev > config.DESIGN_TOL:
            raise NonUnitaryResult(f"Design {self.name!r}: desvio de unitariedade {dev:.3e}")
        us.setflags(write=False)
        object.__setattr__(self, "unitaries", us)

    def __len__(self) -> int:
        return self.unitaries.shape[0]

    @property
    def size(self) -> int:
        return len(self)

    def directions(self) -> np.ndarray:
        """Vetores de Bloch de U sigma_z U^dagger para cada elemento (com multiplicidade)."""
        return np.array([rotation_from_unitary(u)[:, 2] for u in self.unitaries])


@dataclass(frozen=True)
class VerificationReport:
    passed: bool
    strength: int
    max_deviation: float
    worst_monomial: tuple = field(default=())
    tol: float = config.DESIGN_TOL

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "strength": self.strength,
            "max_deviation": self.max_deviation,
            "worst_monomial": list(self.worst_monomial),
            "tol": self.tol,
        }


def _unitarity_deviation(us: np.ndarray) -> float:
    prod = np.einsum("kba,kbc->kac", us.conj(), us)
    return float(np.max(np.abs(prod - np.eye(2)))) if len(us) else 0.0


# --- Integrais na esfera e verificação ---

@lru_cache(maxsize=None)
def sphere_monomial_average(a: int, b: int, c: int) -> float:
    """Média uniforme de x^a y^b z^c sobre S^2.

    Produto das integrais em theta e phi em forma de funções Gama; nula
    salvo quando a, b e c são pares.
    """
    if a < 0 or b < 0 or c < 0:
        raise ValueError(f"Expoentes negativos: {(a, b, c)}")
    if a % 2 or b % 2 or c % 2:
        return 0.0
    alpha, beta, gam = (a + 1) / 2, (b + 1) / 2, (c + 1) / 2
    integral = 2 * gamma(alpha) * gamma(beta) * gamma(gam) / gamma(alpha + beta + gam)
    return float(integral / (4 * math.pi))


def _monomials(t: int):
    for a in range(t + 1):
        for b in range(t + 1 - a):
            for c in range(t + 1 - a - b):
                yield a, b, c


def verify_spherical_design(
    points: Union[SphericalDesign, np.ndarray], t: int, tol: float = config.DESIGN_TOL
) -> VerificationReport:
    """Compara a média de cada monômio de grau <= t com a integral exata."""
    pts = points.points if isinstance(points, SphericalDesign) else np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise DesignParseError("Conjunto de pontos vazio")
    powers = [np.stack([pts[:, k] ** e for e in range(t + 1)]) for k in range(3)]
    worst, worst_mono = 0.0, ()
    for a, b, c in _monomials(t):
        avg = float(np.mean(powers[0][a] * powers[1][b] * powers[2][c]))
        dev = abs(avg - sphere_monomial_average(a, b, c))
        if dev > worst:
            worst, worst_mono = dev, (a, b, c)
    return VerificationReport(worst < tol, t, worst, worst_mono, tol)


def verify_unitary_design(
    design: UnitaryDesign,
    t: Optional[int] = None,
    trials: int = config.UNITARY_DESIGN_TRIALS,
    tol: float = config.UNITARY_DESIGN_TOL,
    seed: SeedLike = 0,
) -> VerificationReport:
    """Verificação operacional: momentos via design contra o oráculo monomial.

    Usa ``trials`` estados aleatórios de dois qubits e todas as ordens pares
    até a força declarada.
    """
    from src.core.moments import moment_monomial, moment_unitary_design
    from src.core.qcore import correlation_tensor, random_density_matrix
    from src.utils.rng import spawn

    t = design.strength if t is None else t
    worst, worst_case = 0.0, ()
    for trial, child in enumerate(spawn(seed, trials)):
        tensor = correlation_tensor(random_density_matrix(2, child))
        for order in range(2, t + 1, 2):
            dev = abs(
                moment_unitary_design(tensor, order, design)
                - moment_monomial(tensor, order)
            )
            if dev > worst:
                worst, worst_case = dev, (trial, order)
    logger.debug(f"Design unitário {design.name}: desvio máximo {worst:.3e}")
    return VerificationReport(worst < tol, t, worst, worst_case, tol)


# --- Designs esféricos ---

def octahedron_design() -> SphericalDesign:
    pts = np.concatenate([np.eye(3), -np.eye(3)])
    return SphericalDesign("octahedron", 3, pts)


def icosahedron_design() -> SphericalDesign:
    """Vértices (0, +-1, +-phi) com permutações cíclicas, normalizados."""
    pts = []
    for s1, s2 in itertools.product((1, -1), repeat=2):
        base = (0.0, s1 * 1.0, s2 * GOLDEN)
        for shift in range(3):
            pts.append(base[-shift:] + base[:-shift] if shift else base)
    pts = np.array(pts)
    return SphericalDesign("icosahedron", 5, pts / np.linalg.norm(pts, axis=1, keepdims=True))


# --- Fechamento de grupos ---

def _phase_canonical(m: np.ndarray) -> np.ndarray:
    flat = m.reshape(-1)
    idx = int(np.argmax(np.abs(flat) > _PHASE_REF_TOL))
    ref = flat[idx]
    return m * (abs(ref) / ref)


def _index_of(stack: list, m: np.ndarray, tol: float) -> int:
    if not stack:
        return -1
    dev = np.max(np.abs(np.asarray(stack) - m), axis=(1, 2))
    hit = int(np.argmin(dev))
    return hit if dev[hit] < tol else -1


def close_group(
    generators: Sequence[np.ndarray],
    max_order: int,
    modulo_phase: bool = False,
    tol: float = config.GROUP_TOL,
) -> list[np.ndarray]:
    """Fechamento por busca em largura; interrompe se passar de ``max_order``."""
    canon = _phase_canonical if modulo_phase else (lambda m: m)
    gens = [np.asarray(g, dtype=complex) for g in generators]
    elements = [canon(np.eye(2, dtype=complex))]
    frontier = list(elements)
    while frontier:
        next_frontier = []
        for e in frontier:
            for g in gens:
                p = canon(e @ g)
                if _index_of(elements, p, tol) < 0:
                    elements.append(p)
                    next_frontier.append(p)
                    if len(elements) > max_order:
                        raise ClosureSizeMismatch(
                            f"Fechamento passou de {max_order} elementos; geradores não "
                            f"geram o grupo esperado"
                        )
        frontier = next_frontier
    logger.debug(f"Fechamento de grupo: {len(elements)} elementos")
    return elements


def dedupe_phase(unitaries: Sequence[np.ndarray], tol: float = config.GROUP_TOL) -> list[np.ndarray]:
    """Remove matrizes iguais a menos de fase global."""
    kept, canon = [], []
    for u in unitaries:
        c = _phase_canonical(u)
        if _index_of(canon, c, tol) < 0:
            kept.append(u)
            canon.append(c)
    return kept


def clifford_group_1q() -> UnitaryDesign:
    """Grupo de Clifford de um qubit gerado por H e S = exp(i pi/4 sigma_z)."""
    h = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    s = np.diag([np.exp(1j * math.pi / 4), np.exp(-1j * math.pi / 4)])
    elements = close_group([h, s], max_order=24, modulo_phase=True)
    if len(elements) != 24:
        raise ClosureSizeMismatch(f"Grupo de Clifford com {len(elements)} elementos (esperado 24)")
    return UnitaryDesign("clifford", 3, np.array(elements))


def _quaternion_su2(a: float, b: float, c: float, d: float) -> np.ndarray:
    # a + bi + cj + dk -> a 1 - i (b sx + c sy + d sz)
    return np.array([[a - 1j * d, -c - 1j * b], [c - 1j * b, a + 1j * d]], dtype=complex)


def _omega_powers(*exps: int) -> complex:
    w = np.exp(2j * math.pi / 15)
    return complex(sum(w**e for e in exps))


def sl2f5_printed_generators() -> list[np.ndarray]:
    """Geradores de SL(2,F5) na forma publicada, omega = exp(2 pi i / 15).

    O quarto gerador tem traço -(omega^3 + omega^17), que não é real: não tem
    ordem finita e o fechamento não termina em 120 elementos (ver
    docs/README.md).
    """
    w = lambda *e: _omega_powers(*e)  # noqa: E731
    return [
        -np.eye(2, dtype=complex),
        np.array([[w(10), w(11, 14)], [-w(2, 8), -w(10)]]),
        np.array([[-w(11, 14), w(6, 9)], [-w(1, 2, 4, 7, 8, 13), w(11, 14)]]),
        np.array([[0, w(5)], [-w(10), -w(3, 17)]]),
    ]


def sl2f5_icosian_generators() -> list[np.ndarray]:
    """Geradores de SL(2,F5) como grupo icosaédrico binário em SU(2).

    i, j e (1+i+j+k)/2 geram o tetraédrico binário (24 elementos), maximal
    no icosaédrico binário; (phi + phi^-1 i + j)/2 completa os 120.
    """
    half = 0.5
    return [
        _quaternion_su2(0, 1, 0, 0),
        _quaternion_su2(0, 0, 1, 0),
        _quaternion_su2(half, half, half, half),
        _quaternion_su2(GOLDEN / 2, 1 / (2 * GOLDEN), half, 0),
    ]


def _sqrt_and_inverse(p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w, v = np.linalg.eigh(p)
    if np.min(w) <= 0:
        raise NonUnitaryResult(f"P não é positiva definida (autovalor mínimo {np.min(w):.3e})")
    root = (v * np.sqrt(w)) @ v.conj().T
    inv_root = (v / np.sqrt(w)) @ v.conj().T
    return root, inv_root


def sl2f5_design(generators: Optional[Sequence[np.ndarray]] = None) -> UnitaryDesign:
    """Design unitário 5 de 60 elementos a partir de SL(2,F5).

    Etapas: fechamento em 120 elementos, P = sum S^dagger S, conjugação
    U = sqrt(P) S sqrt(P)^-1 e remoção das fases globais.
    """
    gens = sl2f5_icosian_generators() if generators is None else list(generators)
    group = close_group(gens, max_order=120)
    if len(group) != 120:
        raise ClosureSizeMismatch(f"SL(2,F5) com {len(group)} elementos (esperado 120)")
    stack = np.array(group)
    p = np.einsum("kba,kbc->ac", stack.conj(), stack)
    root, inv_root = _sqrt_and_inverse(p)
    unitaries = np.einsum("ab,kbc,cd->kad", root, stack, inv_root)
    dev = _unitarity_deviation(unitaries)
    if dev > config.GROUP_TOL:
        raise NonUnitaryResult(f"Conjugação por sqrt(P) com desvio de unitariedade {dev:.3e}")
    unique = dedupe_phase(list(unitaries))
    if len(unique) != 60:
        raise DedupSizeMismatch(f"{len(unique)} unitárias após remover fases (esperado 60)")
    logger.info("SL(2,F5): 120 elementos, 60 unitárias distintas a menos de fase")
    return UnitaryDesign("sl2f5", 5, np.array(unique))


def project_to_sphere(design: UnitaryDesign, tol: float = config.GROUP_TOL) -> SphericalDesign:
    """Direções distintas de U sigma_z U^dagger; herda a força do design."""
    points: list[np.ndarray] = []
    for u in design.directions():
        if not points or np.min(np.linalg.norm(np.asarray(points) - u, axis=1)) >= tol:
            points.append(u)
    pts = np.asarray(points)
    pts = pts / np.linalg.norm(pts, axis=1, keepdims=True)
    logger.debug(f"{design.name}: {len(pts)} direções na esfera")
    return SphericalDesign(f"{design.name}-sphere", design.strength, pts)


def icosidodecahedron_design() -> SphericalDesign:
    proj = project_to_sphere(sl2f5_design())
    return SphericalDesign("icosidodecahedron", proj.strength, proj.points)


SHIPPED_DESIGNS: dict[str, Callable[[], Union[SphericalDesign, UnitaryDesign]]] = {
    "octahedron": octahedron_design,
    "icosahedron": icosahedron_design,
    "icosidodecahedron": icosidodecahedron_design,
    "clifford": clifford_group_1q,
    "sl2f5": sl2f5_design,
}


def build_design(name: str) -> Union[SphericalDesign, UnitaryDesign]:
    if name not in SHIPPED_DESIGNS:
        raise DesignParseError(
            f"Design desconhecido {name!r}; opções: {', '.join(SHIPPED_DESIGNS)}"
        )
    return SHIPPED_DESIGNS[name]()


# --- Serialização ---

def design_to_dict(design: Union[SphericalDesign, UnitaryDesign]) -> dict:
    if isinstance(design, SphericalDesign):
        return {
            "name": design.name,
            "strength": design.strength,
            "kind": "spherical",
            "points": design.points.tolist(),
        }
    return {
        "name": design.name,
        "strength": design.strength,
        "kind": "unitary",
        "unitaries": [
            [[[float(z.real), float(z.imag)] for z in row] for row in u]
            for u in design.unitaries
        ],
    }


def design_from_dict(payload: dict) -> Union[SphericalDesign, UnitaryDesign]:
    try:
        name = str(payload["name"])
        strength = int(payload["strength"])
        kind = payload["kind"]
        if kind == "spherical":
            return SphericalDesign(name, strength, np.asarray(payload["points"], dtype=float))
        if kind == "unitary":
            arr = np.asarray(payload["unitaries"], dtype=float)
            return UnitaryDesign(name, strength, arr[..., 0] + 1j * arr[..., 1])
    except (KeyError, TypeError, ValueError, IndexError) as e:
        if isinstance(e, (DesignParseError, NonUnitaryResult)):
            raise
        raise DesignParseError(f"Arquivo de design mal formado: {e}") from e
    raise DesignParseError(f"Tipo de design desconhecido: {kind!r}")


def verify_design(design: Union[SphericalDesign, UnitaryDesign]) -> VerificationReport:
    if isinstance(design, SphericalDesign):
        return verify_spherical_design(design, design.strength)
    return verify_unitary_design(design)


def save_design(design: Union[SphericalDesign, UnitaryDesign], path: Union[str, Path]) -> Path:
    return write_json(design_to_dict(design), path)


def load_design(path: Union[str, Path]) -> Union[SphericalDesign, UnitaryDesign]:
    """Carrega e reverifica o design na força declarada."""
    try:
        payload = read_json(path)
    except (OSError, ValueError) as e:
        raise DesignParseError(f"Não foi possível ler {path}: {e}") from e
    if not isinstance(payload, dict):
        raise DesignParseError(f"{path}: objeto JSON esperado")
    design = design_from_dict(payload)
    report = verify_design(design)
    if not report.passed:
        raise VerificationFailure(
            f"{path}: design {design.name!r} falha na força {design.strength} "
            f"(desvio {report.max_deviation:.3e})"
        )
    logger.info(f"Design {design.name!r} carregado ({design.size} elementos, t={design.strength})")
    return design
