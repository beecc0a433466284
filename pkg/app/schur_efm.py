"""
Schur basis of n qudits by joint diagonalization of commuting class operators.

The computational basis splits into configuration subspaces (letter counts),
each invariant under permutations of the tensor factors. Inside one subspace
the 2-cycle class operators of the chain S_n > S_{n-1} > ... > S_2 fix the
Young tableau, and class operators of the intrinsic group along the chain
given by the letter counts fix the Weyl tableau. Their joint eigenvectors,
with signs chosen so the principal coefficient is positive, form the basis.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from . import config
from .core_math import spectrum_entropy, eigenvalues_hermitian
from .errors import (
    BudgetExceededError,
    DegeneracyResolutionError,
    DomainError,
    UnsupportedRangeError,
)

logger = logging.getLogger(__name__)

MAX_N = 15
GREEK = "αβγδεζηθικλμνξοπρστυφχψω"
CLUSTER_TOL = 1e-8
HERMITIAN_RESIDUAL = 1e-10

Word = tuple[int, ...]
Partition = tuple[int, ...]
Tableau = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Configuration:
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.counts or min(self.counts) < 0 or sum(self.counts) == 0:
            raise DomainError(f"Invalid configuration {self.counts}")

    @property
    def n(self) -> int:
        return sum(self.counts)

    @property
    def q(self) -> int:
        return len(self.counts)

    @property
    def dimension(self) -> int:
        dim = math.factorial(self.n)
        for count in self.counts:
            dim //= math.factorial(count)
        return dim

    @property
    def letters(self) -> list[int]:
        """Letters that occur, in increasing order."""
        return [letter for letter, count in enumerate(self.counts) if count]

    @property
    def chain(self) -> list[int]:
        """Subgroup sizes n(1) < n(2) < ... < n(l) = n from partial sums of non-zero counts."""
        return list(itertools.accumulate(self.counts[letter] for letter in self.letters))

    @property
    def generating_word(self) -> Word:
        return tuple(letter for letter, count in enumerate(self.counts) for _ in range(count))

    def words(self) -> np.ndarray:
        """All words of this configuration, lexicographically sorted, shape (dim, n)."""
        rows = list(_multiset_words(list(self.counts)))
        return np.asarray(rows, dtype=np.int64).reshape(len(rows), self.n)


def _multiset_words(counts: list[int]) -> Iterator[Word]:
    if not any(counts):
        yield ()
        return
    for letter, count in enumerate(counts):
        if count:
            counts[letter] -= 1
            for rest in _multiset_words(counts):
                yield (letter,) + rest
            counts[letter] += 1


def configurations(n: int, q: int) -> Iterator[Configuration]:
    for bars in itertools.combinations(range(n + q - 1), q - 1):
        edges = (-1,) + bars + (n + q - 1,)
        yield Configuration(tuple(edges[i + 1] - edges[i] - 1 for i in range(q)))


def young_diagrams(n: int, max_rows: int | None = None) -> list[Partition]:
    """Partitions of n in descending lexicographic order."""
    max_rows = n if max_rows is None else max_rows

    def extend(remaining: int, largest: int, rows: int) -> Iterator[Partition]:
        if remaining == 0:
            yield ()
            return
        if rows == 0:
            return
        for first in range(min(remaining, largest), 0, -1):
            for rest in extend(remaining - first, first, rows - 1):
                yield (first,) + rest

    return list(extend(n, n, max_rows))


def _conjugate(parts: Sequence[int]) -> list[int]:
    return [sum(1 for row in parts if row > col) for col in range(parts[0])] if parts else []


def hook_dimension(nu: Sequence[int]) -> int:
    """h_nu(S_n) from the hook length formula."""
    columns = _conjugate(nu)
    hooks = 1
    for i, row in enumerate(nu):
        for j in range(row):
            hooks *= (row - j - 1) + (columns[j] - i - 1) + 1
    return math.factorial(sum(nu)) // hooks


def gl_dimension(nu: Sequence[int], q: int) -> int:
    """h_nu(GL_q) from the hook-content formula."""
    if len(nu) > q:
        return 0
    columns = _conjugate(nu)
    value = Fraction(1)
    for i, row in enumerate(nu):
        for j in range(row):
            hook = (row - j - 1) + (columns[j] - i - 1) + 1
            value *= Fraction(q + j - i, hook)
    return int(value)


def class_eigenvalues(nu: Sequence[int]) -> tuple[int, int]:
    """Eigenvalues of the 2- and 3-cycle class operators on the irrep nu."""
    n = sum(nu)
    lam2 = Fraction(n, 2) + Fraction(1, 2) * sum(v * (v - 2 * i) for i, v in enumerate(nu, start=1))
    lam3 = Fraction(2 * n, 3) - Fraction(n * n, 2) + Fraction(1, 3) * sum(
        v * (v * v - (3 * i - Fraction(3, 2)) * v + 3 * i * (i - 1)) for i, v in enumerate(nu, start=1)
    )
    return int(lam2), int(lam3)


@lru_cache(maxsize=None)
def _diagram_lookup(size: int) -> dict[tuple[int, int], Partition]:
    table: dict[tuple[int, int], Partition] = {}
    for nu in young_diagrams(size):
        key = class_eigenvalues(nu)
        if key in table:
            raise UnsupportedRangeError(f"(C2, C3) does not separate diagrams of size {size}")
        table[key] = nu
    return table


def _check_range(n: int) -> None:
    if n < 1:
        raise DomainError(f"n={n} must be positive")
    if n >= MAX_N:
        raise UnsupportedRangeError(f"n={n}: 2- and 3-cycle class operators are complete only for n < {MAX_N}")


def _cycles(k: int, n: int, cycle_len: int) -> Iterator[np.ndarray]:
    """Permutations of range(n) (as image arrays) in the cycle class of S_k."""
    if cycle_len == 2:
        for a, b in itertools.combinations(range(k), 2):
            perm = np.arange(n)
            perm[a], perm[b] = b, a
            yield perm
    elif cycle_len == 3:
        for a, b, c in itertools.combinations(range(k), 3):
            for x, y, z in ((a, b, c), (a, c, b)):
                perm = np.arange(n)
                perm[x], perm[y], perm[z] = y, z, x
                yield perm
    else:
        raise DomainError(f"Only 2- and 3-cycle class operators are supported, got {cycle_len}")


def _word_codes(words: np.ndarray, q: int) -> np.ndarray:
    n = words.shape[1]
    powers = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return words @ powers


def _assemble(images: Iterator[np.ndarray], words: np.ndarray, q: int) -> np.ndarray:
    codes = _word_codes(words, q)
    dim = len(words)
    matrix = np.zeros((dim, dim))
    columns = np.arange(dim)
    for image in images:
        rows = np.searchsorted(codes, _word_codes(image, q))
        np.add.at(matrix, (rows, columns), 1.0)
    return matrix


def class_operator(n: int, cycle_len: int, subgroup_size: int, config_: Configuration) -> np.ndarray:
    """Class operator of S_k (acting on the first k tensor factors) on a configuration subspace."""
    _check_range(n)
    if config_.n != n:
        raise DomainError(f"Configuration {config_.counts} does not have n={n}")
    if not 1 <= subgroup_size <= n:
        raise DomainError(f"Subgroup size {subgroup_size} outside [1, {n}]")
    words = config_.words()

    def images() -> Iterator[np.ndarray]:
        for perm in _cycles(subgroup_size, n, cycle_len):
            image = np.empty_like(words)
            image[:, perm] = words
            yield image

    return _assemble(images(), words, config_.q)


def _slot_positions(words: np.ndarray) -> np.ndarray:
    """
    positions[w, s]: where slot s of the generating word sits in word w.

    The generating word is sorted, so slot s holds the s-th smallest letter;
    equal letters are matched to slots in order of position.
    """
    return np.argsort(words, axis=1, kind="stable")


def intrinsic_class_operator(n: int, cycle_len: int, subgroup_chain_index: int, config_: Configuration) -> np.ndarray:
    """
    Class operator of the intrinsic group S_{n(j)} on a configuration subspace.

    ``subgroup_chain_index`` is j in 1..l, selecting n(j) from Configuration.chain.
    Only these subgroups commute with the stabilizer of the generating word.
    """
    _check_range(n)
    if config_.n != n:
        raise DomainError(f"Configuration {config_.counts} does not have n={n}")
    chain = config_.chain
    if not 1 <= subgroup_chain_index <= len(chain):
        raise DomainError(f"Chain index {subgroup_chain_index} outside [1, {len(chain)}] for {config_.counts}")
    k = chain[subgroup_chain_index - 1]
    words = config_.words()
    positions = _slot_positions(words)
    generating = np.broadcast_to(np.asarray(config_.generating_word), words.shape)

    def images() -> Iterator[np.ndarray]:
        for perm in _cycles(k, n, cycle_len):
            image = np.empty_like(words)
            np.put_along_axis(image, positions[:, perm], generating, axis=1)
            yield image

    return _assemble(images(), words, config_.q)


@dataclass
class SchurVector:
    nu: Partition
    weyl: Tableau
    gelfand: tuple[tuple[int, ...], ...]
    tableau: Tableau
    tableau_key: tuple[int, ...]
    configuration: Configuration
    words: np.ndarray
    coeffs: np.ndarray

    def sort_key(self, q: int) -> tuple:
        padded = tuple(self.nu) + (0,) * (q - len(self.nu))
        return padded, self.gelfand, self.tableau_key

    def word_labels(self) -> list[str]:
        q = self.configuration.q
        if q <= len(GREEK):
            return ["".join(GREEK[letter] for letter in word) for word in self.words]
        return [".".join(str(letter) for letter in word) for word in self.words]


@dataclass
class SchurBasis:
    n: int
    q: int
    vectors: list[SchurVector]

    def dense_matrix(self) -> np.ndarray:
        """Rows are basis vectors over the q^n computational basis."""
        matrix = np.zeros((len(self.vectors), self.q**self.n))
        for row, vector in enumerate(self.vectors):
            matrix[row, _word_codes(vector.words, self.q)] = vector.coeffs
        return matrix

    def irreps(self) -> dict[Partition, list[SchurVector]]:
        grouped: dict[Partition, list[SchurVector]] = {}
        for vector in self.vectors:
            grouped.setdefault(vector.nu, []).append(vector)
        return grouped

    def to_document(self) -> list[dict]:
        return [
            {
                "nu": list(vector.nu),
                "gelfand": [list(row) for row in vector.gelfand],
                "tableau": [list(row) for row in vector.tableau],
                "coeffs": [
                    [label, float(value), 0.0]
                    for label, value in zip(vector.word_labels(), vector.coeffs)
                ],
            }
            for vector in self.vectors
        ]


def _snap(values: np.ndarray, tol: float) -> np.ndarray:
    snapped = np.rint(values)
    distance = float(np.max(np.abs(values - snapped))) if values.size else 0.0
    if distance > tol:
        raise DegeneracyResolutionError(f"Eigenvalue snap distance {distance:.3e} exceeds {tol:.1e}")
    return snapped.astype(np.int64)


def _joint_eigenvectors(operators: list[np.ndarray], dim: int) -> np.ndarray:
    """Orthonormal joint eigenvectors (columns) of commuting real symmetric operators."""
    if not operators or dim == 1:
        return np.eye(dim)
    generic = sum(op * math.pi ** (-i) for i, op in enumerate(operators))
    values, vectors = np.linalg.eigh(generic)
    scale = max(1.0, float(np.max(np.abs(values))))
    groups = np.split(np.arange(dim), np.nonzero(np.diff(values) > CLUSTER_TOL * scale)[0] + 1)
    refined = []
    for group in groups:
        basis = vectors[:, group]
        if len(group) > 1:
            basis = _refine_cluster(basis, operators)
        refined.append(basis)
    return np.hstack(refined)


def _refine_cluster(basis: np.ndarray, operators: list[np.ndarray]) -> np.ndarray:
    subspaces = [basis]
    for op in operators:
        split = []
        for sub in subspaces:
            if sub.shape[1] == 1:
                split.append(sub)
                continue
            values, local = np.linalg.eigh(sub.T @ op @ sub)
            rounded = np.rint(values)
            for value in np.unique(rounded):
                split.append(sub @ local[:, rounded == value])
        subspaces = split
    return np.hstack(subspaces)


def _tableau_from_contents(contents: Sequence[int]) -> Tableau:
    rows: list[list[int]] = []
    for number, content in enumerate(contents, start=1):
        for r in range(len(rows) + 1):
            length = len(rows[r]) if r < len(rows) else 0
            addable = r == 0 or len(rows[r - 1]) > length
            if addable and length - r == content:
                if r == len(rows):
                    rows.append([])
                rows[r].append(number)
                break
        else:
            raise DegeneracyResolutionError(f"Content sequence {list(contents)} is not a Young tableau")
    return tuple(tuple(row) for row in rows)


def _weyl_tableau(shapes: list[Partition], letters: list[int]) -> Tableau:
    rows: list[list[int]] = []
    previous: Partition = ()
    for shape, letter in zip(shapes, letters):
        for r, length in enumerate(shape):
            before = previous[r] if r < len(previous) else 0
            if length < before:
                raise DegeneracyResolutionError(f"Shape chain {shapes} is not increasing")
            if r == len(rows):
                rows.append([])
            rows[r].extend([letter] * (length - before))
        previous = shape
    return tuple(tuple(row) for row in rows)


def gelfand_symbol(weyl: Tableau, q: int) -> tuple[tuple[int, ...], ...]:
    symbol = []
    for t in range(1, q + 1):
        limit = q - t
        row_counts = [sum(1 for letter in row if letter <= limit) for row in weyl]
        width = q - t + 1
        row_counts = (row_counts + [0] * width)[:width]
        symbol.append(tuple(row_counts))
    return tuple(symbol)


def _principal_word(weyl: Tableau, tableau: Tableau, n: int) -> Word:
    word = [0] * n
    for r, row in enumerate(tableau):
        for c, number in enumerate(row):
            word[number - 1] = weyl[r][c]
    return tuple(word)


def _configuration_vectors(config_: Configuration, snap_tol: float) -> list[SchurVector]:
    n = config_.n
    words = config_.words()
    chain = config_.chain
    letters = config_.letters

    young_ops = [class_operator(n, 2, k, config_) for k in range(n, 1, -1)]
    weyl_ops: list[np.ndarray] = []
    for index in range(2, len(chain)):
        weyl_ops.append(intrinsic_class_operator(n, 2, index, config_))
        weyl_ops.append(intrinsic_class_operator(n, 3, index, config_))
    operators = young_ops + weyl_ops

    vectors = _joint_eigenvectors(operators, len(words))
    quotients = np.array([np.einsum("ij,ik,kj->j", vectors, op, vectors) for op in operators]).reshape(
        len(operators), vectors.shape[1]
    )
    labels = _snap(quotients, snap_tol)
    codes = _word_codes(words, config_.q)

    result = []
    for col in range(vectors.shape[1]):
        chain_values = [int(v) for v in labels[: len(young_ops), col]] + [0]
        diffs = [chain_values[i] - chain_values[i + 1] for i in range(len(chain_values) - 1)]
        contents = [0] + diffs[::-1]
        tableau = _tableau_from_contents(contents)
        nu = tuple(len(row) for row in tableau)

        shapes: list[Partition] = [(chain[0],)]
        for offset, size in enumerate(chain[1:-1]):
            key = (int(labels[len(young_ops) + 2 * offset, col]), int(labels[len(young_ops) + 2 * offset + 1, col]))
            shape = _diagram_lookup(size).get(key)
            if shape is None:
                raise DegeneracyResolutionError(f"No Young diagram of size {size} with class eigenvalues {key}")
            shapes.append(shape)
        if len(chain) > 1:
            shapes.append(nu)
        weyl = _weyl_tableau(shapes, letters)

        coeffs = vectors[:, col].copy()
        principal_code = _word_codes(np.asarray([_principal_word(weyl, tableau, n)]), config_.q)[0]
        index = int(np.searchsorted(codes, principal_code))
        pivot = coeffs[index] if index < len(codes) and codes[index] == principal_code else 0.0
        if abs(pivot) < 1e-12:
            # principal term vanished numerically; use the first non-zero coefficient
            pivot = coeffs[np.flatnonzero(np.abs(coeffs) > 1e-12)[0]]
        if pivot < 0:
            coeffs = -coeffs
        support = np.abs(coeffs) > 1e-14
        result.append(
            SchurVector(
                nu=nu,
                weyl=weyl,
                gelfand=gelfand_symbol(weyl, config_.q),
                tableau=tableau,
                tableau_key=tuple(chain_values),
                configuration=config_,
                words=words[support],
                coeffs=coeffs[support],
            )
        )
    return result


@lru_cache(maxsize=16)
def _build_basis(n: int, q: int, snap_tol: float) -> SchurBasis:
    vectors: list[SchurVector] = []
    for config_ in configurations(n, q):
        vectors.extend(_configuration_vectors(config_, snap_tol))
    vectors.sort(key=lambda vector: vector.sort_key(q), reverse=True)
    logger.debug("Built Schur basis n=%d q=%d with %d vectors", n, q, len(vectors))
    return SchurBasis(n, q, vectors)


def schur_basis(n: int, q: int, budget: int | None = None) -> SchurBasis:
    _check_range(n)
    if q < 1:
        raise DomainError(f"q={q} must be positive")
    budget = config.QKD_SCHUR_MAX_DIM if budget is None else budget
    if q**n > budget:
        raise BudgetExceededError(f"q^n = {q**n} exceeds the Schur budget {budget}")
    return _build_basis(n, q, config.QKD_SNAP_TOL)


@dataclass
class IrrepBlock:
    nu: Partition
    block: np.ndarray
    multiplicity: int


def _apply_tensor_power(vectors: np.ndarray, rho: np.ndarray, n: int) -> np.ndarray:
    q = rho.shape[0]
    tensor = vectors.reshape((vectors.shape[0],) + (q,) * n)
    for _ in range(n):
        tensor = np.tensordot(tensor, rho, axes=([1], [1]))
    return tensor.reshape(vectors.shape[0], -1)


def block_project(basis: SchurBasis, rho: np.ndarray, tableau: Tableau | None = None) -> list[IrrepBlock]:
    """
    Blocks D^nu(rho) of rho^(x)n, one per Young diagram.

    Each block is taken on the vectors sharing one Young tableau (the first in
    basis order unless ``tableau`` is given), indexed by Weyl tableau.
    """
    rho = np.asarray(rho)
    if rho.shape != (basis.q, basis.q):
        raise DomainError(f"rho has shape {rho.shape}, expected ({basis.q}, {basis.q})")
    blocks = []
    for nu, members in basis.irreps().items():
        chosen = tableau if tableau is not None and any(v.tableau == tableau for v in members) else members[0].tableau
        selected = [vector for vector in members if vector.tableau == chosen]
        dense = SchurBasis(basis.n, basis.q, selected).dense_matrix()
        image = _apply_tensor_power(dense.astype(rho.dtype), rho, basis.n)
        block = dense @ image.T
        residual = float(np.max(np.abs(block - block.conj().T))) if block.size else 0.0
        if residual > HERMITIAN_RESIDUAL * max(1.0, float(np.max(np.abs(block)))):
            logger.warning("Block %s has Hermiticity residual %.3e", nu, residual)
        blocks.append(IrrepBlock(nu, 0.5 * (block + block.conj().T), hook_dimension(nu)))
    return blocks


def tensor_power_mixture_entropy(
    basis: SchurBasis, rho_a: np.ndarray, rho_b: np.ndarray, weight_a: float, weight_b: float
) -> float:
    """S(weight_a rho_a^(x)n + weight_b rho_b^(x)n) from the irrep blocks."""
    blocks_a = block_project(basis, rho_a)
    blocks_b = block_project(basis, rho_b)
    terms = []
    for block_a, block_b in zip(blocks_a, blocks_b):
        mixed = weight_a * block_a.block + weight_b * block_b.block
        terms.append(block_a.multiplicity * spectrum_entropy(eigenvalues_hermitian(mixed)))
    return math.fsum(terms)
