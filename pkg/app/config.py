import os

QKD_CLASS_BUDGET: int = int(os.environ.get("QKD_CLASS_BUDGET", "100000000"))
QKD_CHUNK_SIZE: int = int(os.environ.get("QKD_CHUNK_SIZE", "65536"))
QKD_THREADS: int = int(os.environ.get("QKD_THREADS", str(os.cpu_count() or 1)))
QKD_SCHUR_MAX_DIM: int = int(os.environ.get("QKD_SCHUR_MAX_DIM", "4096"))
QKD_DENSE_MAX_DIM: int = int(os.environ.get("QKD_DENSE_MAX_DIM", "4096"))
QKD_SNAP_TOL: float = float(os.environ.get("QKD_SNAP_TOL", "1e-6"))
QKD_LOG_LEVEL: str = os.environ.get("QKD_LOG_LEVEL", "WARNING")
