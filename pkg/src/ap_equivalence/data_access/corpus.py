"""Named scenarios over the bundled worked examples in corpus/worked_examples.apeq."""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Literal, Tuple

from ap_equivalence.data_access.dsl_parser import parse_file
from ap_equivalence.domain.exceptions import UnknownName
from ap_equivalence.domain.models.workspace import Workspace

logger = logging.getLogger(__name__)

CORPUS_DIR = Path(__file__).parent / "corpus"
CORPUS_FILE = CORPUS_DIR / "worked_examples.apeq"


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    command: Literal["equiv", "integral-basis", "values"]
    sums: Tuple[str, ...]
    options: Dict[str, Any] = field(default_factory=dict)
    expected_status: Literal["ok", "negative"] = "ok"


SCENARIOS: Tuple[Scenario, ...] = (
    Scenario(
        "lambda0",
        "A1 against -A1 over the exponents 2j - 1 + 1/(2(2j - 1)), every truncation up to 50 terms",
        "equiv",
        ("A1", "A2"),
        {"trace": 50},
    ),
    Scenario(
        "lambda0-basis",
        "Integral bases of the first n exponents of A1; denominators 2, 6, 30, ...",
        "integral-basis",
        ("A1",),
        {"trace": 20},
    ),
    Scenario(
        "half-turn",
        "e^s + e^(2s) against -e^s + e^(2s); psi(1) = pi",
        "equiv",
        ("P", "H"),
    ),
    Scenario(
        "quarter-turn",
        "e^s + e^(2s) against i e^s + e^(2s); the relation 2*1 - 2 = 0 has defect 1/2",
        "equiv",
        ("P", "Q"),
        expected_status="negative",
    ),
    Scenario(
        "prime-twist",
        "sum_{n <= 10} n^(-s) against its twist by completely multiplicative prime phases",
        "equiv",
        ("D", "Dtw"),
    ),
    Scenario(
        "prime-twist-broken",
        "the twisted Dirichlet polynomial with the n = 6 phase reset, which breaks log 6 = log 2 + log 3",
        "equiv",
        ("D", "Dbad"),
        expected_status="negative",
    ),
    Scenario(
        "closing-remark",
        "e^(-n) against e^(-2n) coefficients on the exponents 1 - log(n)/n, n <= 7",
        "equiv",
        ("C1", "C2"),
        expected_status="negative",
    ),
)


def list_scenarios() -> List[Scenario]:
    return list(SCENARIOS)


def get_scenario(name: str) -> Scenario:
    for scenario in SCENARIOS:
        if scenario.name == name:
            return scenario
    raise UnknownName(name, kind="scenario")


@lru_cache(maxsize=1)
def load_corpus() -> Workspace:
    workspace = parse_file(CORPUS_FILE)
    logger.debug(f"Loaded corpus with sums {workspace.names}")
    return workspace
