from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from . import config
from .core_math import eigenvalues_hermitian, spectrum_entropy
from .errors import DomainError

logger = logging.getLogger(__name__)

COS_CLAMP_TOL = 1e-12
THETA_ZERO = 1e-14


@dataclass(frozen=True)
class BlochPair:
    """
    Geometry of the qubit state rho_pq and its Z-conjugate.

    Both share the eigenvalues (1 +- r)/2; their Bloch vectors lie in the
    x-z plane at relative angle theta.
    """

    p_eff: float
    q: float
    r: float = field(init=False)
    cos_theta: float = field(init=False)

    def __post_init__(self) -> None:
        for name, value in (("p_eff", self.p_eff), ("q", self.q)):
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"{name}={value} outside [0, 1]")
        p, q = self.p_eff, self.q
        r = math.sqrt(max(0.0, 1.0 - 16.0 * p * (1.0 - p) * q * (1.0 - q)))
        if r < THETA_ZERO:
            cos_theta = 1.0
        else:
            cos_theta = (1.0 - 8.0 * p * (1.0 - p) * (1.0 - 2.0 * q * (1.0 - q))) / (r * r)
        if abs(cos_theta) > 1.0 + COS_CLAMP_TOL:
            logger.debug("cos(theta)=%.15f outside [-1, 1] for p=%s, q=%s", cos_theta, p, q)
        object.__setattr__(self, "r", min(r, 1.0))
        object.__setattr__(self, "cos_theta", float(np.clip(cos_theta, -1.0, 1.0)))

    @property
    def theta(self) -> float:
        return math.acos(self.cos_theta)

    @property
    def eigenvalues(self) -> tuple[float, float]:
        return 0.5 * (1.0 + self.r), 0.5 * (1.0 - self.r)

    @property
    def bloch_vector(self) -> tuple[float, float, float]:
        p, q = self.p_eff, self.q
        return 2.0 * math.sqrt(p * (1.0 - p)) * (1.0 - 2.0 * q), 0.0, 1.0 - 2.0 * p


@dataclass
class BlockSpectrum:
    blocks: list[tuple[int, np.ndarray]]

    @property
    def dimension(self) -> int:
        return sum(h * len(values) for h, values in self.blocks)

    @property
    def trace(self) -> float:
        return math.fsum(h * float(np.sum(values)) for h, values in self.blocks)

    def entropy(self) -> float:
        return math.fsum(float(h) * spectrum_entropy(values) for h, values in self.blocks)


def _twice(j: float) -> int:
    twice_j = int(round(2 * j))
    if abs(2 * j - twice_j) > 1e-12 or twice_j < 0:
        raise DomainError(f"j={j} is not a non-negative half-integer")
    return twice_j


def irrep_labels(n: int) -> list[int]:
    """Twice-j values n, n-2, ..., 1 or 0."""
    return list(range(n, -1, -2))


def _degeneracy_twice(n: int, twice_j: int) -> int:
    if twice_j > n or (n - twice_j) % 2:
        raise DomainError(f"2j={twice_j} incompatible with n={n}")
    k = (n - twice_j) // 2
    return math.comb(n, k) * (twice_j + 1) // (n - k + 1)


def degeneracy(n: int, j: float) -> int:
    """Multiplicity h_j of the spin-j irrep in n qubits."""
    return _degeneracy_twice(n, _twice(j))


def _diag_twice(n: int, twice_j: int, rho1: float, rho2: float) -> np.ndarray:
    twice_k = np.arange(-twice_j, twice_j + 1, 2)
    up = (twice_j - twice_k) // 2
    down = (twice_j + twice_k) // 2
    paired = (n - twice_j) // 2
    return np.power(rho1, up) * np.power(rho2, down) * (rho1 * rho2) ** paired


def diag_irrep(n: int, j: float, rho1: float, rho2: float) -> np.ndarray:
    """Diagonal of rho^(x)n on one copy of the spin-j irrep, for k = -j..j."""
    if rho1 < 0.0 or rho2 < 0.0:
        raise DomainError("Eigenvalues must be non-negative")
    twice_j = _twice(j)
    _degeneracy_twice(n, twice_j)
    return _diag_twice(n, twice_j, rho1, rho2)


def _rotation_twice(twice_j: int, theta: float) -> np.ndarray:
    dim = twice_j + 1
    # Basis ordered k = j, j-1, ..., -j.
    twice_k = np.arange(twice_j, -twice_j - 1, -2)[1:]
    j = twice_j / 2.0
    k = twice_k / 2.0
    ladder = np.sqrt(j * (j + 1.0) - k * (k + 1.0))
    raising = np.zeros((dim, dim))
    raising[np.arange(dim - 1), np.arange(1, dim)] = ladder
    # -i J_y theta / 2 with J_y = (J+ - J-) / 2i
    generator = -(raising - raising.T) * theta / 4.0
    return expm(generator)


def wigner_rotation(j: float, theta: float) -> np.ndarray:
    """exp(-i J_y theta / 2) on the spin-j irrep; real orthogonal."""
    return _rotation_twice(_twice(j), theta)


def _block_eigenvalues(n: int, twice_j: int, alpha: float, beta: float, bp: BlochPair) -> np.ndarray:
    rho1, rho2 = bp.eigenvalues
    diag = _diag_twice(n, twice_j, rho1, rho2)[::-1]
    theta = bp.theta
    if theta < THETA_ZERO or twice_j == 0:
        return np.sort((alpha + beta) * diag)[::-1]
    rotation = _rotation_twice(twice_j, 2.0 * theta)
    block = alpha * (rotation * diag) @ rotation.T + beta * np.diag(diag)
    return eigenvalues_hermitian(block)


def block_spectrum(n: int, alpha: float, beta: float, bp: BlochPair, threads: int | None = None) -> BlockSpectrum:
    """Spectrum of alpha rho^(x)n + beta (Z rho Z)^(x)n block by block."""
    if n < 1:
        raise DomainError(f"n={n} must be positive")
    if alpha < 0.0 or beta < 0.0:
        raise DomainError("Mixture weights must be non-negative")
    threads = config.QKD_THREADS if threads is None else max(1, threads)
    labels = irrep_labels(n)

    def build(twice_j: int) -> tuple[int, np.ndarray]:
        return _degeneracy_twice(n, twice_j), _block_eigenvalues(n, twice_j, alpha, beta, bp)

    if threads == 1 or len(labels) == 1:
        return BlockSpectrum([build(twice_j) for twice_j in labels])
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return BlockSpectrum(list(pool.map(build, labels)))


def mix_entropy_z_pair(n: int, alpha: float, beta: float, bp: BlochPair, threads: int | None = None) -> float:
    return block_spectrum(n, alpha, beta, bp, threads=threads).entropy()
