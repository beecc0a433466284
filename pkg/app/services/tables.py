from __future__ import annotations

import io
import logging
from typing import Iterable, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel

from .. import schemas
from ..capacity import CapacityQuery, conc_rate, pmax_capacity
from ..channels import ProtocolKind, parse_protocol
from ..errors import DomainError
from ..keyrates import RateResult, bb84_iter_rate, protocol_rate
from ..optimize import QMode, optimized_rate, pmax_search
from ..schur_efm import schur_basis

logger = logging.getLogger(__name__)

PROBABILITY_COLUMNS = ("p", "q", "Q", "p_max")
RATE_COLUMNS = ["p", "q", "Q", "rate", "i_xy", "i_xe"]


def p_samples(p: float | None, p_range: Sequence[float] | None) -> list[float]:
    """Single p, or start:stop:step with the stop value included when it lies on the grid."""
    if p is not None:
        return [float(p)]
    if p_range is None:
        raise DomainError("Either p or a p range is required")
    start, stop, step = p_range
    if step <= 0.0 or stop < start:
        raise DomainError(f"Invalid p range {start}:{stop}:{step}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def resolve_blocks(m: int | None, m1: int | None, m2: int | None) -> int | tuple[int, int]:
    if m1 is not None and m2 is not None:
        if m is not None:
            raise DomainError("Give either m or (m1, m2), not both")
        return m1, m2
    if m1 is not None or m2 is not None:
        raise DomainError("Iterated preprocessing needs both m1 and m2")
    return 1 if m is None else m


def _rate_result(
    kind: ProtocolKind, blocks: int | tuple[int, int], p: float, q: float, Q: float, threads: int | None
) -> RateResult:
    if isinstance(blocks, tuple):
        if kind is not ProtocolKind.BB84:
            raise DomainError("Iterated preprocessing is only available for BB84")
        return bb84_iter_rate(blocks[0], blocks[1], p, q, Q, threads=threads)
    if Q:
        raise DomainError("Q applies to iterated preprocessing only")
    return protocol_rate(kind, blocks, p, q, threads=threads)


def rate_rows(request: schemas.RateRequest) -> list[schemas.RateRow]:
    kind = parse_protocol(request.protocol)
    blocks = resolve_blocks(request.m, request.m1, request.m2)
    rows = []
    for p in p_samples(request.p, request.p_range):
        if request.optimize_q:
            best = optimized_rate(kind, blocks, p, threads=request.threads)
            q, Q = (best.argmax + (0.0,))[:2]
        else:
            q, Q = request.q or 0.0, request.Q or 0.0
        result = _rate_result(kind, blocks, p, q, Q, request.threads)
        rows.append(schemas.RateRow(p=p, q=q, Q=Q, rate=result.rate, i_xy=result.i_xy, i_xe=result.i_xe))
    logger.info("Computed %d rate rows for %s blocks=%s", len(rows), kind.value, blocks)
    return rows


def pmax_row(request: schemas.PmaxRequest) -> schemas.PmaxRow:
    if request.capacity:
        m1 = request.m1 or request.m or 1
        m2 = request.m2 or 1
        p_max = pmax_capacity(m1, m2, tol=request.tol, threads=request.threads)
        return schemas.PmaxRow(protocol="capacity", m1=m1, m2=m2, p_max=p_max)

    kind = parse_protocol(request.protocol or ProtocolKind.BB84)
    blocks = resolve_blocks(request.m, request.m1, request.m2)
    if request.optimize_q:
        mode = QMode.optimize()
    else:
        mode = QMode.fixed(request.q or 0.0, request.Q or 0.0)
        if mode.Q and not isinstance(blocks, tuple):
            raise DomainError("Q applies to iterated preprocessing only")
    p_max = pmax_search(kind, blocks, mode, tol_p=request.tol, threads=request.threads)
    m1, m2 = blocks if isinstance(blocks, tuple) else (blocks, 1)
    return schemas.PmaxRow(
        protocol=kind.value,
        m1=m1,
        m2=m2,
        q=mode.q,
        Q=mode.Q if isinstance(blocks, tuple) else None,
        optimized=mode.optimizing,
        p_max=p_max,
    )


def capacity_rows(request: schemas.CapacityRequest) -> list[schemas.CapacityRow]:
    return [
        schemas.CapacityRow(
            p=p,
            rate=conc_rate(CapacityQuery.depolarizing(request.m1, request.m2, p), threads=request.threads),
        )
        for p in p_samples(request.p, request.p_range)
    ]


def schur_document(n: int, q: int) -> schemas.SchurBasisOut:
    basis = schur_basis(n, q)
    return schemas.SchurBasisOut(
        n=n,
        q=q,
        vectors=[schemas.SchurVectorOut(**entry) for entry in basis.to_document()],
    )


def rows_to_frame(rows: Iterable[BaseModel], columns: list[str] | None = None) -> pd.DataFrame:
    frame = pd.DataFrame([row.model_dump() for row in rows], columns=columns)
    for column in PROBABILITY_COLUMNS:
        if column in frame:
            frame[column] = frame[column].map(lambda value: "" if pd.isna(value) else f"{value:.7f}")
    return frame


def rows_to_csv(rows: Iterable[BaseModel], columns: list[str] | None = None) -> str:
    buffer = io.StringIO()
    rows_to_frame(rows, columns).to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue()
