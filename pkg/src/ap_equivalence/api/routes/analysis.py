from fastapi import APIRouter
from ap_equivalence.controllers.analysis_controller import AnalysisController

router = APIRouter(prefix="/analysis", tags=["analysis"])
analysis_controller = AnalysisController()
router.include_router(analysis_controller.router)
