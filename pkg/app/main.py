import logging

from fastapi import FastAPI

from . import config
from .routers import capacity, rates, schur, thresholds

logging.basicConfig(level=config.QKD_LOG_LEVEL.upper())

app = FastAPI(title="QKD Key Rate API")

app.include_router(rates.router)
app.include_router(thresholds.router)
app.include_router(capacity.router)
app.include_router(schur.router)
