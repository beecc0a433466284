from fastapi import APIRouter, HTTPException

from .. import schemas
from ..errors import KEY_RATE_ERRORS, http_status
from ..services import tables

router = APIRouter(prefix="/capacity", tags=["capacity"])


@router.post("", response_model=list[schemas.CapacityRow])
def compute_capacity(request: schemas.CapacityRequest):
    try:
        return tables.capacity_rows(request)
    except KEY_RATE_ERRORS as exc:
        raise HTTPException(status_code=http_status(exc), detail=str(exc)) from exc
