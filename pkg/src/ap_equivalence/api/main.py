import logging

from fastapi import FastAPI

from ap_equivalence import __version__
from ap_equivalence.api.routes import analysis, basis, corpus, equivalence

# Configure logging to show only INFO and above
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger()
logger.setLevel(logging.INFO)

logging.getLogger("uvicorn.access").setLevel(logging.WARNING)

app = FastAPI(title="ap-equivalence", version=__version__)

app.include_router(basis.router)
app.include_router(equivalence.router)
app.include_router(analysis.router)
app.include_router(corpus.router)


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}
