from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import bisect

from . import config
from .channels import ProtocolKind, parse_protocol
from .errors import BracketError, DomainError

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2

# The rate vanishes identically at q = 1/2, so the search stops just short of it.
Q_UPPER = 0.4999
Q_GRID_STEP = 0.005
QQ_GRID_STEP = 0.02
COORDINATE_SWEEPS = 3
PMAX_SEARCH_BRACKET = (1e-4, 0.2)


@dataclass
class OptResult:
    best_value: float
    argmax: tuple[float, ...]
    evaluations: int
    converged: bool


@dataclass(frozen=True)
class QMode:
    """Preprocessing noise for a threshold search: fixed (q, Q) or maximized per p."""

    q: float | None = None
    Q: float = 0.0

    @classmethod
    def fixed(cls, q: float, Q: float = 0.0) -> QMode:
        return cls(q, Q)

    @classmethod
    def optimize(cls) -> QMode:
        return cls(None)

    @property
    def optimizing(self) -> bool:
        return self.q is None


class _Counted:
    def __init__(self, fn: Callable[..., float]) -> None:
        self.fn = fn
        self.calls = 0

    def __call__(self, *args: float) -> float:
        self.calls += 1
        return float(self.fn(*args))


def find_threshold(fn: Callable[[float], float], lo: float, hi: float, tol: float = 1e-7) -> float:
    """Root of fn on [lo, hi] by bisection; fn must change sign on the bracket."""
    f_lo, f_hi = fn(lo), fn(hi)
    if not (math.isfinite(f_lo) and math.isfinite(f_hi)) or f_lo * f_hi > 0.0:
        raise BracketError(f"No sign change on [{lo}, {hi}]: f={f_lo:.3e}, {f_hi:.3e}")
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    try:
        root, info = bisect(fn, lo, hi, xtol=tol, maxiter=200, full_output=True, disp=False)
    except (ValueError, RuntimeError) as exc:
        raise BracketError(f"Bisection failed on [{lo}, {hi}]") from exc
    if not info.converged:
        raise BracketError(f"Bisection did not converge on [{lo}, {hi}] after {info.iterations} steps")
    logger.debug("Threshold %.9f after %d bisection steps", root, info.iterations)
    return float(root)


def golden_section_max(
    fn: Callable[[float], float], lo: float, hi: float, tol: float = 1e-6
) -> tuple[float, float, bool]:
    """
    Golden-section search for the maximum of a unimodal fn on [lo, hi].

    Returns (x, fn(x), converged) for the better of the two final interior points.
    """
    a, b = min(lo, hi), max(lo, hi)
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, fn(x), True

    steps = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc, yd = fn(c), fn(d)
    for _ in range(steps - 1):
        if yc > yd:
            b, d, yd = d, c, yc
            h *= INV_PHI
            c = a + INV_PHI_SQUARE * h
            yc = fn(c)
        else:
            a, c, yc = c, d, yd
            h *= INV_PHI
            d = a + INV_PHI * h
            yd = fn(d)
    converged = math.isfinite(yc) and math.isfinite(yd)
    if yc > yd:
        return c, yc, converged
    return d, yd, converged


def q_grid(step: float = Q_GRID_STEP) -> np.ndarray:
    grid = np.arange(0.0, Q_UPPER, step)
    return np.append(grid, Q_UPPER)


def _evaluate(fn: Callable[..., float], points: Sequence[tuple[float, ...]], threads: int | None) -> np.ndarray:
    threads = config.QKD_THREADS if threads is None else max(1, threads)
    if threads == 1:
        return np.array([fn(*point) for point in points])
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return np.array(list(pool.map(lambda point: fn(*point), points)))


def _neighbours(grid: np.ndarray, index: int) -> tuple[float, float]:
    return float(grid[max(index - 1, 0)]), float(grid[min(index + 1, len(grid) - 1)])


def maximize_q(
    rate_fn: Callable[[float], float],
    tol: float = 1e-6,
    step: float = Q_GRID_STEP,
    threads: int | None = None,
) -> OptResult:
    counted = _Counted(rate_fn)
    grid = q_grid(step)
    values = _evaluate(counted, [(float(q),) for q in grid], threads)
    best = int(np.argmax(values))
    best_q, best_value = float(grid[best]), float(values[best])

    lo, hi = _neighbours(grid, best)
    q, value, converged = golden_section_max(counted, lo, hi, tol)
    if value > best_value:
        best_q, best_value = q, value
    return OptResult(best_value, (best_q,), counted.calls, converged)


def maximize_qQ(
    rate_fn: Callable[[float, float], float],
    tol: float = 1e-5,
    step: float = QQ_GRID_STEP,
    sweeps: int = COORDINATE_SWEEPS,
    threads: int | None = None,
) -> OptResult:
    counted = _Counted(rate_fn)
    grid = q_grid(step)
    points = [(float(q), float(Q)) for q in grid for Q in grid]
    values = _evaluate(counted, points, threads)
    best = int(np.argmax(values))
    (q, Q), best_value = points[best], float(values[best])

    converged = True
    for _ in range(sweeps):
        lo, hi = max(q - step, 0.0), min(q + step, Q_UPPER)
        cand, value, ok = golden_section_max(lambda x: counted(x, Q), lo, hi, tol)
        converged &= ok
        if value > best_value:
            q, best_value = cand, value
        lo, hi = max(Q - step, 0.0), min(Q + step, Q_UPPER)
        cand, value, ok = golden_section_max(lambda x: counted(q, x), lo, hi, tol)
        converged &= ok
        if value > best_value:
            Q, best_value = cand, value
    return OptResult(best_value, (q, Q), counted.calls, converged)


def _rate_at(kind: ProtocolKind, blocks: int | tuple[int, int], threads: int | None) -> Callable[..., float]:
    from .keyrates import bb84_iter_rate, protocol_rate, rate_q0

    if isinstance(blocks, tuple):
        m1, m2 = blocks
        if kind is not ProtocolKind.BB84:
            raise DomainError("Iterated preprocessing is only available for BB84")
        return lambda p, q, Q: bb84_iter_rate(m1, m2, p, q, Q, threads=threads).rate

    def single(p: float, q: float, Q: float = 0.0) -> float:
        if q == 0.0:
            return rate_q0(kind, blocks, p)
        return protocol_rate(kind, blocks, p, q, threads=threads).rate

    return single


def optimized_rate(
    kind: ProtocolKind | str,
    blocks: int | tuple[int, int],
    p: float,
    threads: int | None = None,
) -> OptResult:
    """Rate at p maximized over the preprocessing noise."""
    rate = _rate_at(parse_protocol(kind), blocks, threads)
    if isinstance(blocks, tuple):
        return maximize_qQ(lambda q, Q: rate(p, q, Q), threads=threads)
    return maximize_q(lambda q: rate(p, q), threads=threads)


def pmax_search(
    kind: ProtocolKind | str,
    blocks: int | tuple[int, int],
    q_mode: QMode = QMode(0.0),
    tol_p: float = 1e-7,
    bracket: tuple[float, float] = PMAX_SEARCH_BRACKET,
    threads: int | None = None,
) -> float:
    """Bit-error rate at which the key rate reaches zero."""
    kind = parse_protocol(kind)
    rate = _rate_at(kind, blocks, threads)
    if q_mode.optimizing:
        def objective(p: float) -> float:
            return optimized_rate(kind, blocks, p, threads=threads).best_value
    else:
        def objective(p: float) -> float:
            return rate(p, q_mode.q, q_mode.Q)

    lo, hi = bracket
    try:
        result = find_threshold(objective, lo, hi, tol_p)
    except BracketError as exc:
        raise BracketError(f"No threshold for {kind.value} blocks={blocks} {q_mode} on [{lo}, {hi}]") from exc
    logger.info("p_max(%s, blocks=%s, %s) = %.7f", kind.value, blocks, q_mode, result)
    return result


def best_block_length(
    kind: ProtocolKind | str,
    m_values: Iterable[int],
    q: float = 0.0,
    bracket: tuple[float, float] = PMAX_SEARCH_BRACKET,
    tol_p: float = 1e-7,
) -> tuple[int, float]:
    """Block length with the largest fixed-q threshold, as (m, p_max)."""
    results = [(m, pmax_search(kind, m, QMode.fixed(q), tol_p=tol_p, bracket=bracket)) for m in m_values]
    if not results:
        raise DomainError("No block lengths given")
    return max(results, key=lambda item: item[1])
