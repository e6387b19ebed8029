from fastapi import APIRouter
from ap_equivalence.controllers.corpus_controller import CorpusController

router = APIRouter(prefix="/corpus", tags=["corpus"])
corpus_controller = CorpusController()
router.include_router(corpus_controller.router)
