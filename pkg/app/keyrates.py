from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np
from scipy.special import expit, xlogy

from . import config
from .channels import PauliDist, ProtocolKind, bb84_t_range, effective_dist, parse_protocol
from .core_math import binary_entropy, log_binomial, shannon_entropy, spectrum_entropy, eigenvalues_hermitian
from .errors import DomainError
from .repcodes import cat_conditional_entropy, reduce_conc_classes
from .schur_efm import schur_basis, tensor_power_mixture_entropy
from .schur_qubit import BlochPair, mix_entropy_z_pair

logger = logging.getLogger(__name__)

PAULI_Z = np.diag([1.0, -1.0])


@dataclass(frozen=True)
class PreprocParams:
    p: float
    q: float = 0.0
    Q: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.p < 0.5:
            raise DomainError(f"p={self.p} outside [0, 1/2)")
        for name, value in (("q", self.q), ("Q", self.Q)):
            if not 0.0 <= value <= 0.5:
                raise DomainError(f"{name}={value} outside [0, 1/2]")

    @property
    def p_tilde(self) -> float:
        return self.p * (1.0 - self.q) + (1.0 - self.p) * self.q

    @property
    def p_prime(self) -> float:
        """Phase-error weight conditioned on no bit error (6-state)."""
        return self.p / (2.0 * (1.0 - self.p))

    @property
    def q_tot(self) -> float:
        return self.q * (1.0 - self.Q) + (1.0 - self.q) * self.Q


@dataclass
class RateResult:
    rate: float
    i_xy: float
    i_xe: float
    block_size: int
    params: PreprocParams
    protocol: ProtocolKind = ProtocolKind.BB84
    extras: dict[str, float] = field(default_factory=dict)

    @classmethod
    def from_components(
        cls, i_xy: float, i_xe: float, block_size: int, params: PreprocParams, protocol: ProtocolKind
    ) -> RateResult:
        return cls((i_xy - i_xe) / block_size, i_xy, i_xe, block_size, params, protocol)


def _check_block(m: int) -> None:
    if m < 1:
        raise DomainError(f"Block size m={m} must be positive")


def mutual_info_xy(m: int, p_tilde: float) -> float:
    """
    1 - sum_s P(s) H2(P(l=0|s)) for the length-m repetition code on a binary
    symmetric channel with crossover p_tilde.
    """
    _check_block(m)
    if not 0.0 <= p_tilde <= 1.0:
        raise DomainError(f"p_tilde={p_tilde} outside [0, 1]")
    s = np.arange(m, dtype=float)
    log_p0 = xlogy(s, p_tilde) + xlogy(m - s, 1.0 - p_tilde)
    log_p1 = xlogy(m - s, p_tilde) + xlogy(s, 1.0 - p_tilde)
    log_total = np.logaddexp(log_p0, log_p1)
    weights = np.exp(log_binomial(m - 1, s) + log_total)
    with np.errstate(invalid="ignore"):
        posterior = np.where(np.isfinite(log_total), expit(log_p0 - log_p1), 0.5)
    return 1.0 - math.fsum(weights * binary_entropy(posterior))


def bb84_rate(m: int, p: float, q: float, threads: int | None = None) -> RateResult:
    _check_block(m)
    params = PreprocParams(p, q)
    bloch = BlochPair(p, q)
    i_xy = mutual_info_xy(m, params.p_tilde)
    mixed = mix_entropy_z_pair(m, 0.5, 0.5, bloch, threads=threads)
    i_xe = mixed - m * binary_entropy(0.5 * (1.0 + bloch.r))
    return RateResult.from_components(i_xy, i_xe, m, params, ProtocolKind.BB84)


def _sixstate_branch(m: int, u: int, q: float, bloch: BlochPair, threads: int | None) -> float:
    """Bracketed I(X:E) contribution of the error patterns with u bit flips."""
    quantum = m - u
    total = []
    for k in range(u + 1):
        alpha = 0.5 * q**k * (1.0 - q) ** (u - k)
        beta = 0.5 * (1.0 - q) ** k * q ** (u - k)
        if quantum == 0:
            # rho^(x)0 is the scalar 1
            entropy = shannon_entropy([alpha + beta])
        else:
            entropy = mix_entropy_z_pair(quantum, alpha, beta, bloch, threads=threads)
        total.append(math.comb(u, k) * entropy)
    return math.fsum(total) - u * binary_entropy(q) - quantum * binary_entropy(0.5 * (1.0 + bloch.r))


def sixstate_rate(m: int, p: float, q: float, threads: int | None = None) -> RateResult:
    _check_block(m)
    if p >= 2.0 / 3.0:
        raise DomainError(f"p={p} must be below 2/3")
    params = PreprocParams(p, q)
    bloch = BlochPair(params.p_prime, q)
    i_xy = mutual_info_xy(m, params.p_tilde)
    terms = []
    for u in range(m + 1):
        weight = math.comb(m, u) * p**u * (1.0 - p) ** (m - u)
        if weight == 0.0:
            continue
        terms.append(weight * _sixstate_branch(m, u, q, bloch, threads))
    return RateResult.from_components(i_xy, math.fsum(terms), m, params, ProtocolKind.SIX_STATE)


def rate_q0(kind: ProtocolKind | str, m: int, p: float) -> float:
    """Rate without noisy preprocessing, from the cat-code syndrome statistics."""
    _check_block(m)
    dist = effective_dist(parse_protocol(kind), p)
    return (1.0 - cat_conditional_entropy(m, dist)) / m


def protocol_rate(kind: ProtocolKind | str, m: int, p: float, q: float, threads: int | None = None) -> RateResult:
    kind = parse_protocol(kind)
    if kind is ProtocolKind.BB84:
        return bb84_rate(m, p, q, threads=threads)
    return sixstate_rate(m, p, q, threads=threads)


def _flip_weights(m1: int, p_tilde: float, Q: float) -> tuple[np.ndarray, np.ndarray]:
    beta = np.arange(m1)
    keep = np.power(1.0 - p_tilde, m1 - beta) * np.power(p_tilde, beta)
    flip = np.power(1.0 - p_tilde, beta) * np.power(p_tilde, m1 - beta)
    g0 = keep * (1.0 - Q) + flip * Q
    g1 = flip * (1.0 - Q) + keep * Q
    return g0, g1


def mutual_info_xy_iter(
    m1: int, m2: int, p_tilde: float, Q: float, threads: int | None = None, budget: int | None = None
) -> float:
    """Mutual information per outer block for two rounds of repetition-code preprocessing."""
    if not 0.0 <= p_tilde <= 1.0 or not 0.0 <= Q <= 1.0:
        raise DomainError(f"p_tilde={p_tilde}, Q={Q} outside [0, 1]")
    g0, g1 = _flip_weights(m1, p_tilde, Q)
    same = np.concatenate([g0, g1])
    other = np.concatenate([g1, g0])

    def term(beta1: int, freq: np.ndarray, log_mult: np.ndarray) -> float:
        p0 = g0[beta1] * np.prod(np.power(same[None, :], freq), axis=1)
        p1 = g1[beta1] * np.prod(np.power(other[None, :], freq), axis=1)
        total = p0 + p1
        with np.errstate(invalid="ignore", divide="ignore"):
            posterior = np.where(total > 0.0, p0 / np.where(total > 0.0, total, 1.0), 0.5)
        return float(np.sum(np.exp(log_mult) * total * binary_entropy(np.clip(posterior, 0.0, 1.0))))

    return 1.0 - reduce_conc_classes(m1, m2, term, threads=threads, budget=budget)


def qubit_state(bloch: BlochPair) -> np.ndarray:
    x, _, z = bloch.bloch_vector
    return 0.5 * np.array([[1.0 + z, x], [x, 1.0 - z]])


def _tensor_power(matrix: np.ndarray, n: int) -> np.ndarray:
    return reduce(np.kron, [matrix] * n)


def iterated_inner_state(m1: int, p: float, q: float, Q: float) -> tuple[np.ndarray, np.ndarray]:
    """A = (1-Q) rho^(x)m1 + Q (Z rho Z)^(x)m1 and its Z^(x)m1 conjugate B."""
    rho = qubit_state(BlochPair(p, q))
    flipped = PAULI_Z @ rho @ PAULI_Z
    a = (1.0 - Q) * _tensor_power(rho, m1) + Q * _tensor_power(flipped, m1)
    z_all = np.diag(_tensor_power(np.diag(PAULI_Z), m1))
    b = z_all @ a @ z_all
    return a, b


def _iterated_outer_entropy(a: np.ndarray, b: np.ndarray, m2: int, method: str) -> float:
    dim = a.shape[0] ** m2
    if method == "auto":
        method = "dense" if dim <= config.QKD_DENSE_MAX_DIM else "schur"
    if method == "dense":
        logger.debug("Dense outer entropy, dimension %d", dim)
        mixed = 0.5 * _tensor_power(a, m2) + 0.5 * _tensor_power(b, m2)
        return spectrum_entropy(eigenvalues_hermitian(mixed))
    if method == "schur":
        basis = schur_basis(m2, a.shape[0])
        return tensor_power_mixture_entropy(basis, a, b, 0.5, 0.5)
    raise DomainError(f"Unknown entropy method {method!r}")


def bb84_iter_rate(
    m1: int,
    m2: int,
    p: float,
    q: float,
    Q: float,
    threads: int | None = None,
    method: str = "auto",
) -> RateResult:
    _check_block(m1)
    _check_block(m2)
    params = PreprocParams(p, q, Q)
    i_xy = mutual_info_xy_iter(m1, m2, params.p_tilde, Q, threads=threads)
    a, b = iterated_inner_state(m1, p, q, Q)
    inner = mix_entropy_z_pair(m1, 1.0 - Q, Q, BlochPair(p, q), threads=threads)
    i_xe = _iterated_outer_entropy(a, b, m2, method) - m2 * inner
    return RateResult.from_components(i_xy, i_xe, m1 * m2, params, ProtocolKind.BB84)


def _eve_states(dist: PauliDist) -> list[np.ndarray]:
    """Eve's purifying state for Alice's bit x, on registers |u, v>; u is the bit flip."""
    weights = {(0, 0): dist.p_i, (1, 0): dist.p_x, (1, 1): dist.p_y, (0, 1): dist.p_z}
    states = []
    for x in (0, 1):
        rho = np.zeros((4, 4))
        for u in (0, 1):
            ket = np.zeros(4)
            for v in (0, 1):
                ket[2 * u + v] = math.sqrt(weights[(u, v)]) * (-1.0) ** (v * x)
            rho += np.outer(ket, ket)
        states.append(rho)
    return states


def dense_bell_diagonal_rate(dist: PauliDist, m: int, q: float) -> tuple[float, float]:
    """
    (I_XY, I_XE) by building Eve's states for m copies of a Bell-diagonal pair.

    Exponential in m; used to audit the worst-case t and as a reference for m <= 3.
    """
    _check_block(m)
    eve = _eve_states(dist)
    noisy = [(1.0 - q) * eve[x] + q * eve[1 - x] for x in (0, 1)]
    strings = list(itertools.product((0, 1), repeat=m))
    scale = 0.5**m
    tau = {bits: scale * reduce(np.kron, [noisy[b] for b in bits]) for bits in strings}

    s_kse = math.fsum(spectrum_entropy(eigenvalues_hermitian(state)) for state in tau.values())
    s_se = math.fsum(
        spectrum_entropy(eigenvalues_hermitian(tau[bits] + tau[tuple(1 - b for b in bits)]))
        for bits in strings
        if bits[0] == 0
    )
    i_xe = 1.0 - (s_kse - s_se)

    p_tilde = dist.flip * (1.0 - q) + (1.0 - dist.flip) * q

    def p_diff(bits: tuple[int, ...]) -> float:
        ones = sum(bits)
        return p_tilde**ones * (1.0 - p_tilde) ** (m - ones)

    h_ksy = m + m * binary_entropy(p_tilde)
    joint_sy = []
    for rep in strings:
        if rep[0]:
            continue
        complement = tuple(1 - b for b in rep)
        for y in strings:
            d0 = tuple(a ^ b for a, b in zip(rep, y))
            d1 = tuple(a ^ b for a, b in zip(complement, y))
            joint_sy.append(scale * (p_diff(d0) + p_diff(d1)))
    i_xy = 1.0 - (h_ksy - shannon_entropy(joint_sy))
    return i_xy, i_xe


def bb84_rate_audit(m: int, p: float, q: float, points: int = 101) -> RateResult:
    """Minimum BB84 rate over the feasible Y-error weights t."""
    _check_block(m)
    params = PreprocParams(p, q)
    t_min, t_max = bb84_t_range(p)
    best: RateResult | None = None
    for t in np.linspace(t_min, t_max, points):
        dist = effective_dist(ProtocolKind.BB84, p, float(t))
        if q == 0.0:
            i_xy = mutual_info_xy(m, p)
            rate = (1.0 - cat_conditional_entropy(m, dist)) / m
            candidate = RateResult(rate, i_xy, i_xy - m * rate, m, params)
        elif m <= 3:
            i_xy, i_xe = dense_bell_diagonal_rate(dist, m, q)
            candidate = RateResult.from_components(i_xy, i_xe, m, params, ProtocolKind.BB84)
        else:
            raise DomainError("Audit with q > 0 is limited to m <= 3")
        candidate.extras["t"] = float(t)
        if best is None or candidate.rate < best.rate:
            best = candidate
    assert best is not None
    logger.debug("BB84 audit m=%d p=%s q=%s: min rate %.3e at t=%s", m, p, q, best.rate, best.extras["t"])
    return best
