from ap_equivalence.controllers.base_controller import BaseController
from ap_equivalence.domain.models.workspace import JsonReport


class CorpusController(BaseController):
    def _register_routes(self):
        @self.router.get("/")
        def list_scenarios() -> JsonReport:
            return self.analysis_service.corpus_list()

        @self.router.get("/{name}")
        def run_scenario(name: str) -> JsonReport:
            """Run a bundled scenario by name, e.g. lambda0 or closing-remark."""
            return self._handle(lambda: self.analysis_service.run_scenario(name))
