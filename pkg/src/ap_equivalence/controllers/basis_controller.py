from ap_equivalence.controllers.base_controller import BaseController
from ap_equivalence.domain.models.requests import IntegralBasisRequest, SumRequest
from ap_equivalence.domain.models.workspace import JsonReport


class BasisController(BaseController):
    def _register_routes(self):
        @self.router.post("/qbasis")
        def qbasis(request: SumRequest) -> JsonReport:
            """Q-basis of a sum's exponents and the representation matrix."""
            return self._handle(
                lambda: self.analysis_service.basis(self.analysis_service.parse(request.source), request.sum)
            )

        @self.router.post("/integral")
        def integral_basis(request: IntegralBasisRequest) -> JsonReport:
            """Integral basis, optionally with the trace over the first n exponents."""
            return self._handle(
                lambda: self.analysis_service.integral_basis(
                    self.analysis_service.parse(request.source), request.sum, request.trace
                )
            )
