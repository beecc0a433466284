from fastapi import APIRouter, HTTPException, Query

from .. import schemas
from ..errors import KEY_RATE_ERRORS, http_status
from ..services import tables

router = APIRouter(prefix="/schur", tags=["schur"])


@router.get("", response_model=schemas.SchurBasisOut)
def get_schur_basis(
    n: int = Query(ge=1),
    q: int = Query(ge=1),
):
    try:
        return tables.schur_document(n, q)
    except KEY_RATE_ERRORS as exc:
        raise HTTPException(status_code=http_status(exc), detail=str(exc)) from exc
