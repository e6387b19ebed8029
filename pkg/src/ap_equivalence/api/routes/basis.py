from fastapi import APIRouter
from ap_equivalence.controllers.basis_controller import BasisController

router = APIRouter(prefix="/basis", tags=["basis"])
basis_controller = BasisController()
router.include_router(basis_controller.router)
