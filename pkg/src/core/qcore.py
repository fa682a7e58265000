"""
Álgebra linear complexa para operadores densos pequenos, construtores de
estados de N qubits, tensores de correlação e geradores de estados aleatórios.

Convenção de ordenação: o qubit 0 é o mais significativo, isto é,
|b0 b1 ... b_{N-1}> tem índice sum_q b_q 2^(N-1-q).
"""

from __future__ import annotations

import logging
import math
from dataclasses import InitVar, dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np
from scipy import linalg as sla
from scipy.spatial.transform import Rotation
from scipy.stats import unitary_group

import config
from src.utils.errors import (
    DimensionOverflow,
    InvalidIndex,
    InvalidParams,
    InvalidState,
    NonPhysicalParams,
    UnnormalizedParams,
)
from src.utils.rng import SeedLike, make_rng

logger = logging.getLogger(__name__)

AXES = ("x", "y", "z")

# Operadores como ndarrays complexos 2^N x 2^N
ComplexOperator = np.ndarray

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
PAULI_STACK = np.stack([_PAULI[a] for a in AXES])

# _PAULI_VECTORS[i, 2a + b] = sigma_i[b, a]: contrai rho_ab para obter tr[rho sigma_i]
_PAULI_VECTORS = np.stack([_PAULI[a].T.reshape(4) for a in AXES])


def _axis_index(i: Union[str, int]) -> int:
    if isinstance(i, str) and i.lower() in AXES:
        return AXES.index(i.lower())
    if isinstance(i, (int, np.integer)) and 0 <= int(i) < 3:
        return int(i)
    raise InvalidIndex(f"Eixo de Pauli inválido: {i!r} (use x, y ou z)")


def pauli(i: Union[str, int]) -> ComplexOperator:
    """Matriz de Pauli 2x2 para o eixo x, y ou z (ou 0, 1, 2)."""
    return PAULI_STACK[_axis_index(i)].copy()


def operator_nqubits(op: np.ndarray) -> int:
    """Número de qubits de um operador quadrado de dimensão 2^N."""
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise InvalidState(f"Operador não é quadrado: shape {op.shape}")
    dim = op.shape[0]
    n = int(round(math.log2(dim))) if dim > 0 else 0
    if n < 1 or 2**n != dim:
        raise InvalidState(f"Dimensão {dim} não é potência de 2 (>= 2)")
    return n


def _check_nmax(n: int) -> None:
    if n > config.N_MAX:
        raise DimensionOverflow(
            f"{n} qubits excede N_MAX = {config.N_MAX} para operadores densos"
        )


def tensor_product(a: ComplexOperator, b: ComplexOperator) -> ComplexOperator:
    """Produto de Kronecker a (x) b, limitado a N_MAX qubits."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    _check_nmax(operator_nqubits(a) + operator_nqubits(b))
    return np.kron(a, b)


def kron_all(ops: Iterable[np.ndarray]) -> np.ndarray:
    """Produto de Kronecker de uma sequência (kets ou operadores)."""
    out = None
    for op in ops:
        op = np.asarray(op, dtype=complex)
        out = op.copy() if out is None else np.kron(out, op)
    if out is None:
        raise InvalidIndex("Sequência vazia para o produto tensorial")
    return out


# --- Tipos de domínio ---

class BlochDirection(NamedTuple):
    x: float
    y: float
    z: float

    @classmethod
    def from_vector(cls, v: Sequence[float], tol: float = config.STATE_TOL) -> "BlochDirection":
        v = np.asarray(v, dtype=float)
        if abs(float(v @ v) - 1.0) > tol:
            raise InvalidParams(f"Direção de Bloch não unitária: |u|^2 = {float(v @ v)!r}")
        return cls(float(v[0]), float(v[1]), float(v[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def observable(self) -> ComplexOperator:
        """sigma_u = u . sigma."""
        return np.tensordot(self.as_array(), PAULI_STACK, axes=1)


def check_state(mat: np.ndarray) -> None:
    """Levanta InvalidState se ``mat`` não for um operador densidade."""
    tr = np.trace(mat)
    if abs(tr - 1.0) > config.STATE_TOL:
        raise InvalidState(f"Traço {tr.real:.3e}{tr.imag:+.3e}j diferente de 1")
    herm = np.max(np.abs(mat - mat.conj().T))
    if herm > config.STATE_TOL:
        raise InvalidState(f"Matriz não hermitiana (desvio {herm:.3e})")
    lam_min = float(np.linalg.eigvalsh(mat)[0])
    if lam_min < -config.PSD_TOL:
        raise InvalidState(f"Autovalor negativo {lam_min:.3e}")


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Operador densidade denso de N qubits (imutável)."""

    data: np.ndarray
    validate: InitVar[bool] = True

    def __post_init__(self, validate: bool) -> None:
        data = np.array(self.data, dtype=complex)
        n = operator_nqubits(data)
        _check_nmax(n)
        if validate:
            check_state(data)
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def nqubits(self) -> int:
        return int(round(math.log2(self.data.shape[0])))

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @classmethod
    def from_ket(cls, psi: np.ndarray) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex).reshape(-1)
        norm = np.linalg.norm(psi)
        if norm == 0:
            raise InvalidState("Vetor de estado nulo")
        psi = psi / norm
        return cls(np.outer(psi, psi.conj()))

    def purity(self) -> float:
        return float(np.real(np.trace(self.data @ self.data)))

    def mix(self, other: "DensityMatrix", weight: float) -> "DensityMatrix":
        """weight * self + (1 - weight) * other."""
        return DensityMatrix(weight * self.data + (1.0 - weight) * other.data)

    def to_dict(self) -> dict:
        return {
            "nqubits": self.nqubits,
            "data": [[[float(z.real), float(z.imag)] for z in row] for row in self.data],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "DensityMatrix":
        try:
            arr = np.asarray(payload["data"], dtype=float)
            mat = arr[..., 0] + 1j * arr[..., 1]
        except (KeyError, IndexError, TypeError, ValueError) as e:
            raise InvalidState(f"JSON de matriz densidade mal formado: {e}") from e
        dm = cls(mat)
        if "nqubits" in payload and int(payload["nqubits"]) != dm.nqubits:
            raise InvalidState(
                f"nqubits declarado {payload['nqubits']} difere da dimensão {dm.dim}"
            )
        return dm


@dataclass(frozen=True, eq=False)
class CorrelationTensor:
    """Tensor real T_{i1..iN} = <sigma_i1 (x) ... (x) sigma_iN>, shape (3,)*N."""

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=float)
        if arr.ndim == 1 and arr.size > 1:
            n = int(round(math.log(arr.size, 3)))
            if 3**n != arr.size:
                raise InvalidState(f"{arr.size} entradas não é potência de 3")
            arr = arr.reshape((3,) * n)
        if arr.ndim < 1 or any(s != 3 for s in arr.shape):
            raise InvalidState(f"Tensor de correlação com shape inválido {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def nqubits(self) -> int:
        return self.values.ndim

    def entry(self, label: str) -> float:
        """Entrada por rótulo, por exemplo ``"xyy"``."""
        if len(label) != self.nqubits:
            raise InvalidIndex(f"Rótulo {label!r} não tem {self.nqubits} eixos")
        return float(self.values[tuple(_axis_index(c) for c in label)])

    def nonzero_entries(self, tol: float = 1e-12) -> dict[str, float]:
        out = {}
        for idx in zip(*np.nonzero(np.abs(self.values) > tol)):
            out["".join(AXES[i] for i in idx)] = float(self.values[idx])
        return out

    def scaled(self, s: float) -> "CorrelationTensor":
        return CorrelationTensor(s * self.values)

    def rotated(self, rotations: Sequence[np.ndarray]) -> "CorrelationTensor":
        """Aplica uma rotação SO(3) por qubit (efeito de unitárias locais)."""
        t = self.values
        for q, r in enumerate(rotations):
            t = np.moveaxis(np.tensordot(r, t, axes=([1], [q])), 0, q)
        return CorrelationTensor(t)


@dataclass(frozen=True)
class BellDiagonalParams:
    """Parâmetros (c1, c2, c3) de rho_BD = [1 + sum_j c_j sigma_j (x) sigma_j] / 4."""

    c1: float
    c2: float
    c3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3], dtype=float)

    def eigenvalues(self) -> np.ndarray:
        c1, c2, c3 = self.c1, self.c2, self.c3
        return np.array([
            (1 - c1 - c2 - c3) / 4,
            (1 + c1 + c2 - c3) / 4,
            (1 + c1 - c2 + c3) / 4,
            (1 - c1 + c2 + c3) / 4,
        ])

    @classmethod
    def from_eigenvalues(cls, lam: Sequence[float]) -> "BellDiagonalParams":
        l1, l2, l3, l4 = (float(v) for v in lam)
        return cls(l2 + l3 - l1 - l4, l2 - l3 - l1 + l4, l3 + l4 - l1 - l2)

    def is_physical(self, tol: float = config.PSD_TOL) -> bool:
        return bool(np.min(self.eigenvalues()) >= -tol)

    @property
    def l1_norm(self) -> float:
        return abs(self.c1) + abs(self.c2) + abs(self.c3)

    def is_separable(self) -> bool:
        """Regra exata: BD é separável sse |c1| + |c2| + |c3| <= 1."""
        return self.l1_norm <= 1.0

    def correlation_tensor(self) -> CorrelationTensor:
        return CorrelationTensor(np.diag(self.as_array()))


@dataclass(frozen=True)
class DickeMarginalCoeffs:
    """v+ |00><00| + v- |11><11| + y (|01> + |10>)(<01| + <10|)."""

    vplus: float
    vminus: float
    y: float

    def __post_init__(self) -> None:
        if min(self.vplus, self.vminus, self.y) < -config.STATE_TOL:
            raise InvalidParams(f"Coeficientes negativos: {self}")
        if abs(self.vplus + self.vminus + 2 * self.y - 1.0) > config.STATE_TOL:
            raise UnnormalizedParams(f"v+ + v- + 2y != 1: {self}")

    def density_matrix(self) -> DensityMatrix:
        mat = np.zeros((4, 4), dtype=complex)
        mat[0, 0] = self.vplus
        mat[3, 3] = self.vminus
        mat[1:3, 1:3] = self.y
        return DensityMatrix(mat)

    def correlation_tensor(self) -> CorrelationTensor:
        return CorrelationTensor(
            np.diag([2 * self.y, 2 * self.y, self.vplus + self.vminus - 2 * self.y])
        )


@dataclass(frozen=True)
class StandardFormParams:
    """Amplitudes não negativas (normalizadas) e fase da forma padrão."""

    lambdas: tuple
    phi: float = 0.0

    def __post_init__(self) -> None:
        lam = tuple(float(v) for v in self.lambdas)
        object.__setattr__(self, "lambdas", lam)
        if any(v < 0 for v in lam):
            raise InvalidParams(f"Amplitudes negativas: {lam}")
        if not 0.0 <= self.phi <= math.pi:
            raise InvalidParams(f"phi = {self.phi} fora de [0, pi]")
        norm2 = sum(v * v for v in lam)
        if abs(norm2 - 1.0) > config.STATE_TOL:
            raise UnnormalizedParams(f"sum lambda_i^2 = {norm2!r} != 1")

    @classmethod
    def normalized(cls, weights: Sequence[float], phi: float = 0.0) -> "StandardFormParams":
        w = np.abs(np.asarray(weights, dtype=float))
        return cls(tuple(w / np.linalg.norm(w)), phi)


# --- Tensores de correlação ---

def _correlation_values(mat: np.ndarray) -> np.ndarray:
    n = operator_nqubits(mat)
    t = mat.reshape((2,) * (2 * n))
    order = [ax for q in range(n) for ax in (q, n + q)]
    t = t.transpose(order).reshape((4,) * n)
    for q in range(n):
        t = np.moveaxis(np.tensordot(_PAULI_VECTORS, t, axes=([1], [q])), 0, q)
    return np.ascontiguousarray(t.real)


def correlation_tensor(rho: DensityMatrix) -> CorrelationTensor:
    """T_{i1..iN} = tr[rho (sigma_i1 (x) ... (x) sigma_iN)] (correlações de N corpos)."""
    return CorrelationTensor(_correlation_values(rho.data))


def ket_correlation_tensor(psi: np.ndarray) -> CorrelationTensor:
    """Atalho sem validação para estados puros (usado nos laços de otimização)."""
    psi = np.asarray(psi, dtype=complex)
    return CorrelationTensor(_correlation_values(np.outer(psi, psi.conj())))


def _check_qubits(indices: Iterable[int], n: int) -> list[int]:
    idx = sorted(set(int(i) for i in indices))
    if not idx:
        raise InvalidIndex("Conjunto de qubits vazio")
    if idx[0] < 0 or idx[-1] >= n:
        raise InvalidIndex(f"Índices {idx} fora de 0..{n - 1}")
    return idx


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Traço parcial mantendo os qubits ``keep`` (na ordem crescente)."""
    n = rho.nqubits
    keep = _check_qubits(keep, n)
    traced = [q for q in range(n) if q not in keep]
    dk, dt = 2 ** len(keep), 2 ** len(traced)
    t = rho.data.reshape((2,) * (2 * n))
    order = keep + traced + [n + q for q in keep] + [n + q for q in traced]
    t = t.transpose(order).reshape(dk, dt, dk, dt)
    return DensityMatrix(np.einsum("ajbj->ab", t))


def two_body_correlation_tensor(rho: DensityMatrix, alpha: int, beta: int) -> CorrelationTensor:
    """Tensor 3x3 de <1..sigma_i(alpha)..sigma_j(beta)..1>."""
    if alpha == beta:
        raise InvalidIndex(f"alpha e beta devem ser distintos (recebido {alpha})")
    _check_qubits([alpha, beta], rho.nqubits)
    t = correlation_tensor(partial_trace(rho, [alpha, beta])).values
    return CorrelationTensor(t.T if alpha > beta else t)


# --- Construtores de estados ---

def basis_ket(bits: Sequence[int]) -> np.ndarray:
    n = len(bits)
    psi = np.zeros(2**n, dtype=complex)
    psi[int("".join(str(int(b)) for b in bits), 2)] = 1.0
    return psi


def maximally_mixed(n: int) -> DensityMatrix:
    _check_nmax(n)
    return DensityMatrix(np.eye(2**n, dtype=complex) / 2**n)


def bell_state(kind: str = "psi+") -> DensityMatrix:
    """Estados de Bell: phi+, phi-, psi+, psi-."""
    s = 1 / math.sqrt(2)
    kets = {
        "phi+": [s, 0, 0, s],
        "phi-": [s, 0, 0, -s],
        "psi+": [0, s, s, 0],
        "psi-": [0, s, -s, 0],
    }
    if kind not in kets:
        raise InvalidParams(f"Estado de Bell desconhecido: {kind!r}")
    return DensityMatrix.from_ket(np.array(kets[kind], dtype=complex))


def _check_n(n: int, minimum: int = 1) -> None:
    if n < minimum:
        raise InvalidParams(f"N = {n} < {minimum}")
    _check_nmax(n)


def ghz_ket(n: int) -> np.ndarray:
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = psi[-1] = 1 / math.sqrt(2)
    return psi


def ghz(n: int) -> DensityMatrix:
    _check_n(n, 2)
    return DensityMatrix.from_ket(ghz_ket(n))


def noisy_ghz(n: int, p: float) -> DensityMatrix:
    """p * 1/2^N + (1 - p) |GHZ><GHZ| (forma normalizada)."""
    if not 0.0 <= p <= 1.0:
        raise InvalidParams(f"p = {p} fora de [0, 1]")
    _check_n(n, 2)
    psi = ghz_ket(n)
    mat = p * np.eye(2**n) / 2**n + (1 - p) * np.outer(psi, psi.conj())
    return DensityMatrix(mat)


def psi_theta_ket(n: int, theta: float) -> np.ndarray:
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = math.cos(theta)
    psi[-1] = math.sin(theta)
    return psi


def psi_theta(n: int, theta: float) -> DensityMatrix:
    """|Psi(theta)> = cos(theta)|0>^N + sin(theta)|1>^N, 0 <= theta <= pi/2."""
    if not 0.0 <= theta <= math.pi / 2 + 1e-15:
        raise InvalidParams(f"theta = {theta} fora de [0, pi/2]")
    _check_n(n, 2)
    return DensityMatrix.from_ket(psi_theta_ket(n, theta))


@lru_cache(maxsize=None)
def _popcounts(n: int) -> np.ndarray:
    counts = np.array([bin(i).count("1") for i in range(2**n)])
    counts.setflags(write=False)
    return counts


def dicke_ket(n: int, k: int) -> np.ndarray:
    mask = _popcounts(n) == k
    psi = np.zeros(2**n, dtype=complex)
    psi[mask] = 1 / math.sqrt(math.comb(n, k))
    return psi


def dicke_state(n: int, k: int) -> DensityMatrix:
    """|D^N_k>: superposição simétrica com k excitações."""
    if not 0 <= k <= n:
        raise InvalidParams(f"k = {k} fora de 0..{n}")
    _check_n(n, 1)
    return DensityMatrix.from_ket(dicke_ket(n, k))


def w_state(n: int) -> DensityMatrix:
    return dicke_state(n, 1)


def dicke_marginal_coeffs(n: int, k: int) -> DickeMarginalCoeffs:
    """Coeficientes da marginal de dois corpos de |D^N_k>.

    v+ = (N-k)(N-k-1) / (N(N-1)); a expressão (N-1)(N-k-1) / (N(N-1)) que
    aparece na literatura viola a normalização para k >= 2 (ver docs/README.md).
    """
    if n < 2:
        raise InvalidParams(f"N = {n} < 2 não tem marginais de dois corpos")
    if not 0 <= k <= n:
        raise InvalidParams(f"k = {k} fora de 0..{n}")
    den = n * (n - 1)
    return DickeMarginalCoeffs(
        vplus=(n - k) * (n - k - 1) / den,
        vminus=k * (k - 1) / den,
        y=k * (n - k) / den,
    )


def dicke_two_body_marginal(n: int, k: int) -> DensityMatrix:
    """Marginal de dois corpos em forma fechada (vale para N até 10^6)."""
    return dicke_marginal_coeffs(n, k).density_matrix()


def standard_form_ket(n: int, lambdas: Sequence[float], phi: float = 0.0) -> np.ndarray:
    """Ket da forma padrão sem validação.

    N = 3: l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> + l4|111>
    (com 4 amplitudes, l4 = 0).
    N > 3 (forma da classe W): l0|0...0> + sum_k l_k |0..1_k..0>, N+1 amplitudes.
    """
    lam = np.asarray(lambdas, dtype=float)
    psi = np.zeros(2**n, dtype=complex)
    if n == 3:
        if lam.size == 4:
            lam = np.append(lam, 0.0)
        if lam.size != 5:
            raise InvalidParams(f"Forma padrão de 3 qubits exige 5 amplitudes, recebido {lam.size}")
        psi[[0, 4, 5, 6, 7]] = lam
        psi[4] = lam[1] * np.exp(1j * phi)
        return psi
    if lam.size != n + 1:
        raise InvalidParams(f"Forma padrão W de {n} qubits exige {n + 1} amplitudes")
    psi[0] = lam[0]
    for k in range(n):
        psi[2 ** (n - 1 - k)] = lam[k + 1]
    return psi


def standard_form_state(
    n: int, params: StandardFormParams, wclass_only: bool = False
) -> DensityMatrix:
    """Projetor da forma padrão; para N > 3 a forma já é a da classe W."""
    if n < 3:
        raise InvalidParams(f"Forma padrão definida para N >= 3 (recebido {n})")
    _check_nmax(n)
    if n == 3 and wclass_only:
        lam = params.lambdas
        if (len(lam) == 5 and lam[4] != 0.0) or params.phi != 0.0:
            raise InvalidParams("Classe W de 3 qubits exige lambda_4 = phi = 0")
    return DensityMatrix.from_ket(standard_form_ket(n, params.lambdas, params.phi))


def bell_diagonal(params: BellDiagonalParams) -> DensityMatrix:
    lam = params.eigenvalues()
    if np.min(lam) < -config.PSD_TOL:
        raise NonPhysicalParams(
            f"{params} tem autovalor {float(np.min(lam))} < 0"
        )
    mat = np.eye(4, dtype=complex)
    for c, s in zip(params.as_array(), PAULI_STACK):
        mat = mat + c * np.kron(s, s)
    return DensityMatrix(mat / 4)


# --- Unitárias locais ---

def su2_from_rotation(rot: np.ndarray) -> np.ndarray:
    """U em SU(2) com U (a . sigma) U^dagger = (R a) . sigma."""
    rotvec = Rotation.from_matrix(rot).as_rotvec()
    return sla.expm(-0.5j * np.tensordot(rotvec, PAULI_STACK, axes=1))


def rotation_from_unitary(u: np.ndarray) -> np.ndarray:
    """Matriz SO(3) induzida por U: R_ij = tr[sigma_i U sigma_j U^dagger] / 2."""
    conj = np.einsum("ab,jbc,dc->jad", u, PAULI_STACK, u.conj())
    return np.real(np.einsum("iba,jab->ij", PAULI_STACK, conj)) / 2


def apply_local_unitaries(rho: DensityMatrix, unitaries: Sequence[np.ndarray]) -> DensityMatrix:
    if len(unitaries) != rho.nqubits:
        raise InvalidIndex(f"{len(unitaries)} unitárias para {rho.nqubits} qubits")
    u = kron_all(unitaries)
    mat = u @ rho.data @ u.conj().T
    return DensityMatrix((mat + mat.conj().T) / 2)


def _bell_twirl(mat: np.ndarray) -> np.ndarray:
    out = mat.copy()
    for s in PAULI_STACK:
        ss = np.kron(s, s)
        out = out + ss @ mat @ ss
    return out / 4


def bd_project_state(rho: DensityMatrix) -> DensityMatrix:
    """Estado BD com os mesmos momentos de um estado de dois qubits.

    Diagonaliza a matriz de correlação com rotações próprias (liberdade LU,
    via SVD com correção de sinal do determinante) e aplica o twirl separável
    rho -> (rho + sum_i sigma_i sigma_i rho sigma_i sigma_i) / 4, que elimina
    os vetores de Bloch locais.
    """
    if rho.nqubits != 2:
        raise InvalidState(f"bd_project exige 2 qubits (recebido {rho.nqubits})")
    tmat = correlation_tensor(rho).values
    u, _, vt = np.linalg.svd(tmat)
    if np.linalg.det(u) < 0:
        u = u.copy()
        u[:, 2] *= -1
    if np.linalg.det(vt) < 0:
        vt = vt.copy()
        vt[2, :] *= -1
    # R_A T R_B^T = diag(c) com R_A = U^T, R_B = V^T
    rotated = apply_local_unitaries(rho, [su2_from_rotation(u.T), su2_from_rotation(vt)])
    twirled = _bell_twirl(rotated.data)
    return DensityMatrix((twirled + twirled.conj().T) / 2)


def bd_project(rho: DensityMatrix) -> BellDiagonalParams:
    diag = np.diag(correlation_tensor(bd_project_state(rho)).values)
    return BellDiagonalParams(*(float(c) for c in diag))


# --- Estados aleatórios ---

def _random_ket(dim: int, rng: np.random.Generator) -> np.ndarray:
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return psi / np.linalg.norm(psi)


def _hermitize(mat: np.ndarray) -> np.ndarray:
    return (mat + mat.conj().T) / 2


def random_pure_state(n: int, seed: SeedLike = None) -> DensityMatrix:
    """Estado puro Haar (amplitudes gaussianas complexas normalizadas)."""
    _check_n(n)
    rng = make_rng(seed)
    return DensityMatrix.from_ket(_random_ket(2**n, rng))


def _random_product_ket(n: int, rng: np.random.Generator) -> np.ndarray:
    return kron_all(_random_ket(2, rng) for _ in range(n))


def random_product_state(n: int, seed: SeedLike = None) -> DensityMatrix:
    _check_n(n)
    rng = make_rng(seed)
    return DensityMatrix.from_ket(_random_product_ket(n, rng))


def _mixture(kets: Sequence[np.ndarray], weights: np.ndarray) -> DensityMatrix:
    mat = sum(w * np.outer(k, k.conj()) for w, k in zip(weights, kets))
    return DensityMatrix(_hermitize(mat))


def random_separable_mixture(n: int, rank: int, seed: SeedLike = None) -> DensityMatrix:
    """Combinação convexa (pesos Dirichlet planos) de ``rank`` produtos puros."""
    _check_n(n)
    if rank < 1:
        raise InvalidParams(f"rank = {rank} < 1")
    rng = make_rng(seed)
    kets = [_random_product_ket(n, rng) for _ in range(rank)]
    return _mixture(kets, rng.dirichlet(np.ones(rank)))


def random_local_unitaries(n: int, seed: SeedLike = None) -> list[np.ndarray]:
    rng = make_rng(seed)
    return [unitary_group.rvs(2, random_state=rng) for _ in range(n)]


def random_wclass_ket(n: int, seed: SeedLike = None) -> np.ndarray:
    """Forma padrão W aleatória conjugada por unitárias locais Haar."""
    rng = make_rng(seed)
    count = 4 if n == 3 else n + 1
    lam = np.abs(rng.standard_normal(count))
    lam /= np.linalg.norm(lam)
    psi = standard_form_ket(n, lam)
    return kron_all(random_local_unitaries(n, rng)) @ psi


def random_mixed_wclass(n: int, count: int, seed: SeedLike = None) -> DensityMatrix:
    _check_n(n, 3)
    if count < 1:
        raise InvalidParams(f"count = {count} < 1")
    rng = make_rng(seed)
    kets = [random_wclass_ket(n, rng) for _ in range(count)]
    return _mixture(kets, rng.dirichlet(np.ones(count)))


def random_density_matrix(n: int, seed: SeedLike = None, rank: int | None = None) -> DensityMatrix:
    """Mistura de ``rank`` estados puros Haar com pesos Dirichlet planos.

    Sem ``rank``, ele é sorteado uniformemente em 1..2^N.
    """
    _check_n(n)
    rng = make_rng(seed)
    if rank is None:
        rank = int(rng.integers(1, 2**n + 1))
    kets = [_random_ket(2**n, rng) for _ in range(rank)]
    return _mixture(kets, rng.dirichlet(np.ones(rank)))


def random_bd_params(
    count: int, seed: SeedLike = None, mode: str = "all", concentration: float = 1.0
) -> np.ndarray:
    """Parâmetros (c1, c2, c3) aleatórios, shape (count, 3).

    ``all``: uniforme no tetraedro físico (autovalores Dirichlet planos).
    ``separable``: uniforme no octaedro |c|_1 <= 1 (magnitudes Dirichlet e
    sinais aleatórios). ``concentration`` < 1 concentra amostras em faces,
    arestas e vértices.
    """
    rng = make_rng(seed)
    alpha = np.full(4, float(concentration))
    if mode == "all":
        lam = rng.dirichlet(alpha, size=count)
        l1, l2, l3, l4 = lam.T
        return np.stack([l2 + l3 - l1 - l4, l2 - l3 - l1 + l4, l3 + l4 - l1 - l2], axis=1)
    if mode == "separable":
        mags = rng.dirichlet(alpha, size=count)[:, :3]
        signs = rng.choice(np.array([-1.0, 1.0]), size=(count, 3))
        return mags * signs
    raise InvalidParams(f"Modo de amostragem BD desconhecido: {mode!r}")
