"""JSON documents (schema version "1") for symbol tables, sums, workspaces and verdicts.

Rationals travel as reduced "p/q" strings and complex numbers as [re, im] pairs, so exact
objects round-trip losslessly.
"""
import json
import logging
import math
from typing import Any, Dict, List, Literal, Optional, Tuple, Type, TypeVar

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from ap_equivalence.domain.exceptions import SchemaViolation
from ap_equivalence.domain.models.exponent import Exponent, SymbolTable
from ap_equivalence.domain.models.exponential_sum import (
    Coefficient,
    ExactCoefficient,
    ExponentialSum,
    NumericCoefficient,
    Term,
)
from ap_equivalence.domain.models.types import ComplexPair, Rational, Turns
from ap_equivalence.domain.models.verdict import EquivalenceVerdict
from ap_equivalence.domain.models.workspace import SCHEMA_VERSION, JsonReport, Workspace

logger = logging.getLogger(__name__)

M = TypeVar("M", bound=BaseModel)


class CoefficientDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    modulus: Optional[Rational] = None
    turns: Optional[Turns] = None
    value: Optional[ComplexPair] = None

    @model_validator(mode="after")
    def _one_form(self) -> "CoefficientDocument":
        exact = self.modulus is not None
        if exact == (self.value is not None) or (self.turns is not None and not exact):
            raise ValueError("a coefficient is either {modulus, turns} or {value}")
        if exact and self.modulus < 0:
            raise ValueError("modulus must be nonnegative")
        return self


class TermDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    exponent: List[Rational]
    coefficient: CoefficientDocument


class SumDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    strip: Tuple[Optional[float], Optional[float]] = (None, None)
    terms: List[TermDocument]


class SymbolTableDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    names: List[str]
    literals: List[str]


class WorkspaceDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    schema_version: Literal["1"]
    symbols: SymbolTableDocument
    sums: List[SumDocument]


def _pointer(loc: Tuple[Any, ...]) -> str:
    return "".join(f"/{str(part).replace('~', '~0').replace('/', '~1')}" for part in loc)


def _validate(model: Type[M], data: Any, prefix: str = "") -> M:
    try:
        return model.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        raise SchemaViolation(prefix + _pointer(tuple(first["loc"])), first["msg"]) from e


def serialize_table(table: SymbolTable) -> Dict[str, Any]:
    return {"names": list(table.names), "literals": list(table.literals)}


def _serialize_coefficient(c: Coefficient) -> Dict[str, Any]:
    if isinstance(c, ExactCoefficient):
        return {"modulus": str(c.modulus), "turns": str(c.turns)}
    return {"value": [c.value.real, c.value.imag]}


def serialize_sum(f: ExponentialSum) -> Dict[str, Any]:
    return {
        "name": f.name,
        "strip": [None if math.isinf(x) else x for x in f.strip],
        "terms": [
            {"exponent": [str(c) for c in t.exponent.coords], "coefficient": _serialize_coefficient(t.coefficient)}
            for t in f.terms
        ],
    }


def serialize_workspace(workspace: Workspace) -> Dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "symbols": serialize_table(workspace.table),
        "sums": [serialize_sum(f) for f in workspace.sums],
    }


def serialize_verdict(verdict: EquivalenceVerdict) -> Dict[str, Any]:
    return verdict.model_dump(mode="json")


def _table_from(document: SymbolTableDocument, pointer: str) -> SymbolTable:
    try:
        return SymbolTable(tuple(document.names), tuple(document.literals))
    except ValueError as e:
        raise SchemaViolation(pointer, str(e)) from e


def _sum_from(document: SumDocument, table: SymbolTable, pointer: str) -> ExponentialSum:
    terms = []
    for j, term in enumerate(document.terms):
        if len(term.exponent) != table.size:
            raise SchemaViolation(f"{pointer}/terms/{j}/exponent", f"expected {table.size} coordinates")
        c = term.coefficient
        coefficient: Coefficient = (
            ExactCoefficient(c.modulus, c.turns or 0) if c.modulus is not None else NumericCoefficient(c.value)
        )
        terms.append(Term(Exponent(table, tuple(term.exponent)), coefficient))
    lo, hi = document.strip
    strip = (-math.inf if lo is None else lo, math.inf if hi is None else hi)
    try:
        return ExponentialSum(table, tuple(terms), document.name, strip)
    except ValueError as e:
        raise SchemaViolation(pointer, str(e)) from e


def deserialize_table(data: Any) -> SymbolTable:
    return _table_from(_validate(SymbolTableDocument, data), "")


def deserialize_sum(data: Any, table: SymbolTable) -> ExponentialSum:
    return _sum_from(_validate(SumDocument, data), table, "")


def deserialize_workspace(data: Any) -> Workspace:
    document = _validate(WorkspaceDocument, data)
    table = _table_from(document.symbols, "/symbols")
    sums = tuple(_sum_from(s, table, f"/sums/{k}") for k, s in enumerate(document.sums))
    try:
        return Workspace(table, sums)
    except ValueError as e:
        raise SchemaViolation("/sums", str(e)) from e


def deserialize_verdict(data: Any) -> EquivalenceVerdict:
    return _validate(EquivalenceVerdict, data)


def make_report(command: str, inputs: Dict[str, Any], result: Any, negative: bool = False) -> JsonReport:
    payload = result.model_dump(mode="json") if isinstance(result, BaseModel) else result
    return JsonReport(command=command, inputs=inputs, result=payload, status="negative" if negative else "ok")


_ERROR_FIELDS = ("line", "column", "pointer", "name", "sum_name", "term_index")


def error_report(command: str, inputs: Dict[str, Any], error: Exception) -> JsonReport:
    """A report whose result describes the error that stopped the command."""
    details: Dict[str, Any] = {"type": type(error).__name__, "message": str(error)}
    details.update({field: getattr(error, field) for field in _ERROR_FIELDS if getattr(error, field, None) is not None})
    return JsonReport(command=command, inputs=inputs, result={"error": details}, status="error")


def dumps(report: JsonReport) -> str:
    return report.model_dump_json(indent=2)


def loads(text: str, model: Type[M] = JsonReport) -> M:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaViolation("", f"not JSON: {e}") from e
    return _validate(model, data)
