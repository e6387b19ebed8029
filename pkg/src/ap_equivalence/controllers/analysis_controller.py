from ap_equivalence.controllers.base_controller import BaseController
from ap_equivalence.domain.models.requests import (
    AlmostPeriodRequest,
    BochnerFejerRequest,
    MeanValueRequest,
    TranslationRequest,
    ValueSetRequest,
)
from ap_equivalence.domain.models.workspace import JsonReport


class AnalysisController(BaseController):
    def _register_routes(self):
        @self.router.post("/bf")
        def bochner_fejer(request: BochnerFejerRequest) -> JsonReport:
            return self._handle(
                lambda: self.analysis_service.bochner_fejer(
                    self.analysis_service.parse(request.source), request.sum, request.orders, request.schedule
                )
            )

        @self.router.post("/mean")
        def mean_value(request: MeanValueRequest) -> JsonReport:
            return self._handle(
                lambda: self.analysis_service.mean_value(
                    self.analysis_service.parse(request.source),
                    request.sum,
                    request.sigma,
                    request.frequency,
                    request.T,
                    request.step,
                )
            )

        @self.router.post("/almost-periods")
        def almost_periods(request: AlmostPeriodRequest) -> JsonReport:
            return self._handle(
                lambda: self.analysis_service.almost_periods(
                    self.analysis_service.parse(request.source),
                    request.sum,
                    request.epsilon,
                    request.sigma_lo,
                    request.sigma_hi,
                    request.t_max,
                )
            )

        @self.router.post("/values")
        def values(request: ValueSetRequest) -> JsonReport:
            """Value-set comparison; with substrips set, the overlapping-substrip experiment."""
            return self._handle(
                lambda: self.analysis_service.compare_values(
                    self.analysis_service.parse(request.source),
                    request.sum1,
                    request.sum2,
                    request.sigma_lo,
                    request.sigma_hi,
                    request.samples,
                    request.seed,
                    request.tol,
                    request.t_cap,
                    request.substrips,
                )
            )

        @self.router.post("/translation")
        def translation(request: TranslationRequest) -> JsonReport:
            return self._handle(
                lambda: self.analysis_service.translation(
                    self.analysis_service.parse(request.source),
                    request.sum1,
                    request.sum2,
                    request.sigma_lo,
                    request.sigma_hi,
                    request.t_max,
                )
            )
