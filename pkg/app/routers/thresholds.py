from fastapi import APIRouter, HTTPException

from .. import schemas
from ..errors import KEY_RATE_ERRORS, http_status
from ..services import tables

router = APIRouter(prefix="/thresholds", tags=["thresholds"])


@router.post("", response_model=schemas.PmaxRow)
def compute_threshold(request: schemas.PmaxRequest):
    try:
        return tables.pmax_row(request)
    except KEY_RATE_ERRORS as exc:
        raise HTTPException(status_code=http_status(exc), detail=str(exc)) from exc
