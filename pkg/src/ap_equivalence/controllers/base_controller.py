import logging
from typing import Callable, TypeVar

from fastapi import APIRouter, HTTPException

from ap_equivalence.domain.exceptions import (
    ApEquivalenceError,
    InternalInvariantError,
    SchemaViolation,
    VerdictMismatch,
)
from ap_equivalence.services.analysis_service import AnalysisService

logger = logging.getLogger(__name__)

T = TypeVar("T")


class BaseController:
    def __init__(self, analysis_service: AnalysisService | None = None):
        self.router = APIRouter()
        self.analysis_service = analysis_service or AnalysisService()
        self._register_routes()

    def _register_routes(self) -> None:
        raise NotImplementedError

    @staticmethod
    def _handle(call: Callable[[], T]) -> T:
        """Run a service call, translating domain errors into HTTP errors."""
        try:
            return call()
        except (VerdictMismatch, InternalInvariantError) as e:
            logger.error(f"Verification failure: {str(e)}")
            raise HTTPException(status_code=500, detail=str(e))
        except SchemaViolation as e:
            raise HTTPException(status_code=422, detail=str(e))
        except (ApEquivalenceError, ValueError, KeyError) as e:
            logger.debug(f"Rejected request: {str(e)}")
            raise HTTPException(status_code=400, detail=str(e))
        except Exception as e:
            logger.error(f"Unexpected failure: {str(e)}")
            raise HTTPException(status_code=500, detail=f"Internal error: {str(e)}")
