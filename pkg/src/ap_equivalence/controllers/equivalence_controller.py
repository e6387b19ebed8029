from ap_equivalence.controllers.base_controller import BaseController
from ap_equivalence.domain.models.requests import EquivalenceRequest
from ap_equivalence.domain.models.workspace import JsonReport


class EquivalenceController(BaseController):
    def _register_routes(self):
        @self.router.post("/")
        def decide(request: EquivalenceRequest) -> JsonReport:
            """Verified verdict (or truncation trace) for two sums of one source."""
            return self._handle(
                lambda: self.analysis_service.equivalence(
                    self.analysis_service.parse(request.source),
                    request.sum1,
                    request.sum2,
                    request.definition,
                    request.trace,
                )
            )
