from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import entr, gammaln

from .errors import DomainError, NotPSDError, ShapeError

LN2 = math.log(2.0)
NEGATIVE_TOL = 1e-12
CLAMP_BAND = 1e-9
HERMITIAN_TOL = 1e-12


def shannon_entropy(p: ArrayLike, base: float = 2.0) -> float:
    """
    Entropy -sum x log_base x with 0 log 0 = 0.

    Subnormalized vectors are accepted; each entry contributes on its own.
    """
    if base <= 1.0:
        raise DomainError(f"Entropy base must exceed 1, got {base}")
    values = np.asarray(p, dtype=float).ravel()
    if values.size and values.min() < -NEGATIVE_TOL:
        raise DomainError(f"Negative probability {values.min():.3e}")
    values = np.clip(values, 0.0, None)
    return float(np.sum(entr(values)) / math.log(base))


def binary_entropy(x: ArrayLike) -> float | np.ndarray:
    values = np.asarray(x, dtype=float)
    if values.size and (values.min() < -NEGATIVE_TOL or values.max() > 1.0 + NEGATIVE_TOL):
        raise DomainError("Binary entropy argument outside [0, 1]")
    values = np.clip(values, 0.0, 1.0)
    result = (entr(values) + entr(1.0 - values)) / LN2
    if result.ndim == 0:
        return float(result)
    return result


def _as_hermitian(A: ArrayLike) -> np.ndarray:
    matrix = np.asarray(A)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ShapeError(f"Expected a square matrix, got shape {matrix.shape}")
    scale = max(1.0, float(np.max(np.abs(matrix)))) if matrix.size else 1.0
    if matrix.size and np.max(np.abs(matrix - matrix.conj().T)) > HERMITIAN_TOL * scale:
        raise ShapeError("Matrix is not Hermitian within tolerance")
    return 0.5 * (matrix + matrix.conj().T)


def eigenvalues_hermitian(A: ArrayLike, check: bool = False) -> np.ndarray:
    """Real eigenvalues in descending order."""
    matrix = _as_hermitian(A)
    if matrix.shape[0] == 0:
        return np.zeros(0)
    if not check:
        return np.linalg.eigvalsh(matrix)[::-1]

    values, vectors = np.linalg.eigh(matrix)
    rebuilt = (vectors * values) @ vectors.conj().T
    residual = np.linalg.norm(matrix - rebuilt)
    bound = 1e-10 * max(np.linalg.norm(matrix), np.finfo(float).tiny)
    if residual > bound:
        raise ShapeError(f"Eigendecomposition residual {residual:.3e} exceeds {bound:.3e}")
    return values[::-1]


def spectrum_entropy(eigenvalues: ArrayLike) -> float:
    """
    Entropy in bits of a PSD spectrum.

    Eigenvalues in [-1e-9, 0) are clamped to zero; anything more negative
    means the operator was not PSD.
    """
    values = np.asarray(eigenvalues, dtype=float).ravel()
    if values.size and values.min() < -CLAMP_BAND:
        raise NotPSDError(f"Eigenvalue {values.min():.3e} below -{CLAMP_BAND}")
    values = np.clip(values, 0.0, None)
    return float(np.sum(entr(values)) / LN2)


def von_neumann_entropy(A: ArrayLike) -> float:
    return spectrum_entropy(eigenvalues_hermitian(A))


def log_binomial(n: int, k: int | np.ndarray) -> float | np.ndarray:
    """ln C(n, k), or -inf outside 0 <= k <= n."""
    ks = np.asarray(k, dtype=float)
    inside = (ks >= 0) & (ks <= n)
    safe = np.where(inside, ks, 0.0)
    values = gammaln(n + 1.0) - gammaln(safe + 1.0) - gammaln(n - safe + 1.0)
    values = np.where(inside, values, -np.inf)
    if values.ndim == 0:
        return float(values)
    return values


def log_multinomial(n: int, parts: np.ndarray) -> np.ndarray:
    """ln of n! / prod(parts!) along the last axis."""
    parts = np.asarray(parts, dtype=float)
    return gammaln(n + 1.0) - np.sum(gammaln(parts + 1.0), axis=-1)

