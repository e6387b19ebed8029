from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from ap_equivalence import __version__
from ap_equivalence.domain.exceptions import DuplicateName, UnknownName
from ap_equivalence.domain.models.exponent import SymbolTable
from ap_equivalence.domain.models.exponential_sum import ExponentialSum

SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class Workspace:
    """Declared symbols and named sums of one .apeq source, in declaration order."""

    table: SymbolTable
    sums: Tuple[ExponentialSum, ...] = ()
    source: Optional[str] = field(default=None, compare=False)
    lines: Dict[str, int] = field(default_factory=dict, compare=False)
    warnings: Tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        seen = set()
        for f in self.sums:
            if f.name in seen:
                raise DuplicateName(f"sum '{f.name}' is declared twice")
            if f.table != self.table:
                raise ValueError(f"sum '{f.name}' is not over the workspace symbol table")
            seen.add(f.name)

    @property
    def names(self) -> List[str]:
        return [f.name for f in self.sums]

    def get(self, name: str) -> ExponentialSum:
        for f in self.sums:
            if f.name == name:
                return f
        raise UnknownName(name, kind="sum")

    def provenance(self, name: str) -> str:
        return f"{self.source or '<string>'}:{self.lines.get(name, '?')}"


class JsonReport(BaseModel):
    """The single JSON document every command writes."""

    model_config = ConfigDict(extra="forbid")

    schema_version: Literal["1"] = SCHEMA_VERSION
    command: str
    inputs: Dict[str, Any]
    result: Dict[str, Any]
    status: Literal["ok", "negative", "error"] = "ok"
    tool_version: str = __version__
