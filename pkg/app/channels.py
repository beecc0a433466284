from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError

PROB_TOL = 1e-12


class ProtocolKind(str, Enum):
    BB84 = "bb84"
    SIX_STATE = "six-state"


PROTOCOL_ALIASES = {
    "bb84": ProtocolKind.BB84,
    "six-state": ProtocolKind.SIX_STATE,
    "sixstate": ProtocolKind.SIX_STATE,
    "six_state": ProtocolKind.SIX_STATE,
    "6-state": ProtocolKind.SIX_STATE,
}


def parse_protocol(value: str | ProtocolKind) -> ProtocolKind:
    if isinstance(value, ProtocolKind):
        return value
    normalized = (value or "").strip().lower()
    try:
        return PROTOCOL_ALIASES[normalized]
    except KeyError as exc:
        raise DomainError(f"Unknown protocol: {value!r}") from exc


@dataclass(frozen=True)
class PauliDist:
    """Probabilities of the single-qubit Pauli errors I, X, Y, Z."""

    p_i: float
    p_x: float
    p_y: float
    p_z: float

    def __post_init__(self) -> None:
        entries = self.as_array()
        if entries.min() < -PROB_TOL:
            raise DomainError(f"Negative Pauli probability in {tuple(entries)}")
        if abs(entries.sum() - 1.0) > PROB_TOL:
            raise DomainError(f"Pauli probabilities sum to {entries.sum():.15f}")

    def as_array(self) -> np.ndarray:
        return np.array([self.p_i, self.p_x, self.p_y, self.p_z], dtype=float)

    @property
    def flip(self) -> float:
        """Probability that the computational-basis bit is flipped (X or Y)."""
        return self.p_x + self.p_y


def _check_probability(name: str, value: float, upper: float = 1.0) -> None:
    if not (-PROB_TOL <= value <= upper + PROB_TOL):
        raise DomainError(f"{name}={value} outside [0, {upper}]")


def depolarizing(p: float) -> PauliDist:
    _check_probability("p", p)
    return PauliDist(1.0 - p, p / 3.0, p / 3.0, p / 3.0)


def bb84_t_range(p: float) -> tuple[float, float]:
    """Feasible interval of the Y-error weight t compatible with bit-error rate p."""
    _check_probability("p", p)
    return max(0.0, 2.0 * p - 1.0), p


def effective_dist(kind: ProtocolKind | str, p: float, t: float | None = None) -> PauliDist:
    kind = parse_protocol(kind)
    if kind is ProtocolKind.SIX_STATE:
        if t is not None:
            raise DomainError("The 6-state distribution takes no t parameter")
        _check_probability("p", p, upper=2.0 / 3.0)
        return PauliDist(1.0 - 1.5 * p, p / 2.0, p / 2.0, p / 2.0)

    t_min, t_max = bb84_t_range(p)
    if t is None:
        t = p * p
    if not (t_min - PROB_TOL <= t <= t_max + PROB_TOL):
        raise DomainError(f"t={t} outside feasible interval [{t_min}, {t_max}]")
    return PauliDist(1.0 - 2.0 * p + t, p - t, t, p - t)
