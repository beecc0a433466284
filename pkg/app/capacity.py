from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable

from .channels import PauliDist, depolarizing
from .core_math import binary_entropy, shannon_entropy
from .errors import BracketError, DomainError
from .optimize import find_threshold
from .repcodes import cat_conditional_entropy, conccat_conditional_entropy

logger = logging.getLogger(__name__)

PMAX_BRACKET = (1e-4, 0.25)
PMAX_EXTENDED_UPPER = 0.4


@dataclass(frozen=True)
class CapacityQuery:
    m1: int
    m2: int
    dist: PauliDist

    def __post_init__(self) -> None:
        if self.m1 < 1 or self.m2 < 1:
            raise DomainError(f"Block sizes must be positive, got ({self.m1}, {self.m2})")

    @classmethod
    def depolarizing(cls, m1: int, m2: int, p: float) -> CapacityQuery:
        return cls(m1, m2, depolarizing(p))


def hashing_rate(dist: PauliDist) -> float:
    """Random stabilizer code rate 1 - H(dist), in qubits per channel use. Not clamped."""
    return 1.0 - shannon_entropy(dist.as_array(), base=2.0)


def one_shot_capacity(p: float) -> float:
    # H(1-p, p/3, p/3, p/3) = H2(p) + p log2(3)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p={p} outside [0, 1]")
    return 1.0 - binary_entropy(p) - p * math.log2(3.0)


def cat_rate(m: int, dist: PauliDist) -> float:
    return (1.0 - cat_conditional_entropy(m, dist)) / m


def conc_rate(query: CapacityQuery, threads: int | None = None, budget: int | None = None) -> float:
    blocks = query.m1 * query.m2
    entropy = conccat_conditional_entropy(query.m1, query.m2, query.dist, threads=threads, budget=budget)
    return (1.0 - entropy) / blocks


def pmax_capacity(m1: int, m2: int, tol: float = 1e-7, threads: int | None = None) -> float:
    """Depolarizing probability at which the concatenated-cat rate vanishes."""

    def rate(p: float) -> float:
        return conc_rate(CapacityQuery.depolarizing(m1, m2, p), threads=threads)

    lo, hi = PMAX_BRACKET
    if rate(hi) > 0.0:
        logger.debug("Rate still positive at p=%s for (%d, %d); extending bracket", hi, m1, m2)
        hi = PMAX_EXTENDED_UPPER
    try:
        result = find_threshold(rate, lo, hi, tol)
    except BracketError as exc:
        raise BracketError(f"No sign change of the ({m1}, {m2}) rate on [{lo}, {hi}]") from exc
    logger.info("p_max(%d, %d) = %.7f", m1, m2, result)
    return result


def pmax_profile(m1: int, m2_values: Iterable[int], tol: float = 1e-7, threads: int | None = None) -> list[tuple[int, float]]:
    return [(m2, pmax_capacity(m1, m2, tol=tol, threads=threads)) for m2 in m2_values]
