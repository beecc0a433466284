from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, NamedTuple

import numpy as np
from scipy.special import entr

from . import config
from .channels import PauliDist
from .core_math import LN2, log_binomial, log_multinomial
from .errors import BudgetExceededError, DomainError

logger = logging.getLogger(__name__)


class LogicalError(NamedTuple):
    lx: int
    lz: int


# Same order as PauliDist entries: I, X, Y, Z.
LOGICAL_ERRORS = (LogicalError(0, 0), LogicalError(1, 0), LogicalError(1, 1), LogicalError(0, 1))


@dataclass(frozen=True)
class CatSyndromeClass:
    m: int
    weight: int

    @property
    def multiplicity(self) -> int:
        return math.comb(self.m - 1, self.weight)


@dataclass(frozen=True)
class ConcSyndromeClass:
    """
    Syndromes of the concatenated cat code that share one joint probability.

    ``freq[alpha * m1 + beta]`` counts the outer positions 2..m2 whose pair
    (alpha_i, beta_i) equals (alpha, beta).
    """

    m1: int
    m2: int
    beta1: int
    freq: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.freq) != 2 * self.m1 or sum(self.freq) != self.m2 - 1:
            raise DomainError(f"Invalid frequency vector {self.freq} for m1={self.m1}, m2={self.m2}")
        if not 0 <= self.beta1 < self.m1:
            raise DomainError(f"beta1={self.beta1} outside [0, {self.m1 - 1}]")

    @property
    def multiplicity(self) -> int:
        count = math.comb(self.m1 - 1, self.beta1) * math.factorial(self.m2 - 1)
        for a_j in self.freq:
            count //= math.factorial(a_j)
        for idx, a_j in enumerate(self.freq):
            count *= math.comb(self.m1 - 1, idx % self.m1) ** a_j
        return count


def _check_blocks(m1: int, m2: int = 1) -> None:
    if m1 < 1 or m2 < 1:
        raise DomainError(f"Block sizes must be positive, got m1={m1}, m2={m2}")


def _phase_sign(bits: int) -> float:
    return -1.0 if bits % 2 else 1.0


def f0_f1(lz: int, alpha: int, beta: int, m1: int, dist: PauliDist) -> tuple[float, float]:
    if not 0 <= beta <= m1:
        raise DomainError(f"beta={beta} outside [0, {m1}]")
    flip = dist.p_x + dist.p_y
    stay = 1.0 - flip
    diff = dist.p_x - dist.p_y
    signed = 1.0 - dist.p_x - dist.p_y - 2.0 * dist.p_z
    sign = _phase_sign(lz + alpha)
    f0 = 0.5 * (flip**beta * stay ** (m1 - beta) + sign * diff**beta * signed ** (m1 - beta))
    f1 = 0.5 * (stay**beta * flip ** (m1 - beta) + sign * signed**beta * diff ** (m1 - beta))
    return f0, f1


def cat_joint(l: LogicalError, cls: CatSyndromeClass, dist: PauliDist) -> float:
    m, s = cls.m, cls.weight
    lx, lz = l
    a = lx * (m - 2 * s) + s
    b = (1 - lx) * (m - 2 * s) + s
    flip = dist.p_x + dist.p_y
    term = flip**a * (1.0 - flip) ** b
    phase = (dist.p_x - dist.p_y) ** a * (1.0 - flip - 2.0 * dist.p_z) ** b
    return 0.5 * (term + _phase_sign(lz) * phase)


def cat_joint_table(m: int, dist: PauliDist) -> np.ndarray:
    """Array of shape (4, m): joint probability per logical error and syndrome weight."""
    _check_blocks(m)
    table = np.empty((4, m))
    for s in range(m):
        cls = CatSyndromeClass(m, s)
        for row, l in enumerate(LOGICAL_ERRORS):
            table[row, s] = cat_joint(l, cls, dist)
    return table


def cat_conditional_entropy(m: int, dist: PauliDist) -> float:
    """Sum over syndromes of P(s) H4(P(l|s)) in bits for the [[m,1]] cat code."""
    table = np.clip(cat_joint_table(m, dist), 0.0, None)
    weights = np.exp(log_binomial(m - 1, np.arange(m)))
    per_class = entr(table).sum(axis=0) - entr(table.sum(axis=0))
    return math.fsum(weights * per_class) / LN2


def _pair_factors(m1: int, dist: PauliDist) -> tuple[np.ndarray, np.ndarray]:
    """(F0+F1) and (F0-F1) indexed by [lz, alpha * m1 + beta]."""
    plus = np.empty((2, 2 * m1))
    minus = np.empty((2, 2 * m1))
    for lz in (0, 1):
        for alpha in (0, 1):
            for beta in range(m1):
                f0, f1 = f0_f1(lz, alpha, beta, m1, dist)
                plus[lz, alpha * m1 + beta] = f0 + f1
                minus[lz, alpha * m1 + beta] = f0 - f1
    return plus, minus


def conccat_joint(l: LogicalError, cls: ConcSyndromeClass, dist: PauliDist) -> float:
    plus, minus = _pair_factors(cls.m1, dist)
    freq = np.asarray(cls.freq, dtype=np.int64)
    lz = l.lz
    prod_plus = plus[lz, cls.beta1] * np.prod(np.power(plus[lz], freq))
    prod_minus = minus[lz, cls.beta1] * np.prod(np.power(minus[lz], freq))
    return float(0.5 * (prod_plus + _phase_sign(l.lx) * prod_minus))


def class_count(m1: int, m2: int) -> int:
    return m1 * math.comb(m2 - 1 + 2 * m1 - 1, m2 - 1)


def iter_conc_classes(m1: int, m2: int) -> Iterator[ConcSyndromeClass]:
    """Classes in lexicographic order of (beta1, freq)."""
    _check_blocks(m1, m2)
    for beta1 in range(m1):
        for freq in _iter_freq_chunks(m1, m2, config.QKD_CHUNK_SIZE):
            for row in freq:
                yield ConcSyndromeClass(m1, m2, beta1, tuple(int(a) for a in row))


def _iter_freq_chunks(m1: int, m2: int, chunk_size: int) -> Iterator[np.ndarray]:
    parts = 2 * m1
    total = m2 - 1
    slots = total + parts - 1
    combos = itertools.combinations(range(slots), parts - 1)
    while True:
        batch = list(itertools.islice(combos, chunk_size))
        if not batch:
            return
        bars = np.asarray(batch, dtype=np.int64).reshape(len(batch), parts - 1)
        padded = np.hstack(
            [
                np.full((len(batch), 1), -1, dtype=np.int64),
                bars,
                np.full((len(batch), 1), slots, dtype=np.int64),
            ]
        )
        yield np.diff(padded, axis=1) - 1


ChunkTerm = Callable[[int, np.ndarray, np.ndarray], float]


def reduce_conc_classes(
    m1: int,
    m2: int,
    term: ChunkTerm,
    threads: int | None = None,
    budget: int | None = None,
) -> float:
    """
    Sum ``term(beta1, freq, log_mult)`` over all concatenated-code classes.

    Chunks are fixed by QKD_CHUNK_SIZE and combined in enumeration order with
    math.fsum, so the result does not depend on the thread count.
    """
    _check_blocks(m1, m2)
    budget = config.QKD_CLASS_BUDGET if budget is None else budget
    threads = config.QKD_THREADS if threads is None else max(1, threads)
    count = class_count(m1, m2)
    if count > budget:
        raise BudgetExceededError(f"{count} syndrome classes for ({m1}, {m2}) exceed budget {budget}")
    logger.debug("Reducing %d classes for m1=%d, m2=%d on %d threads", count, m1, m2, threads)

    log_inner = np.asarray(log_binomial(m1 - 1, np.arange(2 * m1) % m1))

    def evaluate(task: tuple[int, np.ndarray]) -> float:
        beta1, freq = task
        log_mult = (
            log_binomial(m1 - 1, beta1)
            + log_multinomial(m2 - 1, freq)
            + freq @ log_inner
        )
        return float(term(beta1, freq, log_mult))

    def tasks() -> Iterator[tuple[int, np.ndarray]]:
        for beta1 in range(m1):
            for freq in _iter_freq_chunks(m1, m2, config.QKD_CHUNK_SIZE):
                yield beta1, freq

    partials: list[float] = []
    if threads == 1:
        partials.extend(evaluate(task) for task in tasks())
        return math.fsum(partials)

    window = 2 * threads
    task_iter = tasks()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        while True:
            batch = list(itertools.islice(task_iter, window))
            if not batch:
                break
            partials.extend(pool.map(evaluate, batch))
    return math.fsum(partials)


def conccat_joint_chunk(
    beta1: int, freq: np.ndarray, plus: np.ndarray, minus: np.ndarray
) -> np.ndarray:
    """Joint probabilities of shape (4, N) for a chunk of classes, rows ordered as LOGICAL_ERRORS."""
    rows = np.empty((4, freq.shape[0]))
    for lz in (0, 1):
        prod_plus = plus[lz, beta1] * np.prod(np.power(plus[lz][None, :], freq), axis=1)
        prod_minus = minus[lz, beta1] * np.prod(np.power(minus[lz][None, :], freq), axis=1)
        for row, l in enumerate(LOGICAL_ERRORS):
            if l.lz == lz:
                rows[row] = 0.5 * (prod_plus + _phase_sign(l.lx) * prod_minus)
    return rows


def conccat_conditional_entropy(
    m1: int,
    m2: int,
    dist: PauliDist,
    threads: int | None = None,
    budget: int | None = None,
) -> float:
    plus, minus = _pair_factors(m1, dist)

    def term(beta1: int, freq: np.ndarray, log_mult: np.ndarray) -> float:
        joint = np.clip(conccat_joint_chunk(beta1, freq, plus, minus), 0.0, None)
        per_class = entr(joint).sum(axis=0) - entr(joint.sum(axis=0))
        return float(np.sum(np.exp(log_mult) * per_class))

    return reduce_conc_classes(m1, m2, term, threads=threads, budget=budget) / LN2
