from fastapi import APIRouter
from ap_equivalence.controllers.equivalence_controller import EquivalenceController

router = APIRouter(prefix="/equivalence", tags=["equivalence"])
equivalence_controller = EquivalenceController()
router.include_router(equivalence_controller.router)
