from fastapi import APIRouter, HTTPException

from .. import schemas
from ..errors import KEY_RATE_ERRORS, http_status
from ..services import tables

router = APIRouter(prefix="/rates", tags=["rates"])


@router.post("", response_model=list[schemas.RateRow])
def compute_rates(request: schemas.RateRequest):
    try:
        return tables.rate_rows(request)
    except KEY_RATE_ERRORS as exc:
        raise HTTPException(status_code=http_status(exc), detail=str(exc)) from exc
