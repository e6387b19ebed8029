"""Reader and printer for the .apeq language.

    symbol L2 = 0.693147180559945309417232121458;
    sum f = (1,0)*exp(3/2*s) + (1,1/2)*exp(19/6*s);    # exact: (modulus, phase in turns)
    sum g = <0.5,0.25>*exp(1 - 1*L2*s);                # numeric: <re, im>

Phases are written in turns (fractions of a full revolution), never radians.
"""
import logging
import re
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import pyparsing as pp

from ap_equivalence.domain.exceptions import DslSyntaxError, DuplicateName, UndeclaredSymbol
from ap_equivalence.domain.models.exponent import UNIT, Exponent, SymbolTable
from ap_equivalence.domain.models.exponential_sum import (
    Coefficient,
    ExactCoefficient,
    ExponentialSum,
    NumericCoefficient,
    Term,
)
from ap_equivalence.domain.models.workspace import Workspace
from ap_equivalence.services.basis_service import check_exponents

logger = logging.getLogger(__name__)

MIN_SYMBOL_DIGITS = 30
KEYWORDS = ("symbol", "sum", "exp", "s")


@lru_cache(maxsize=1)
def make_grammar() -> pp.ParserElement:
    lpar, rpar, comma, star, eq, semi = map(pp.Suppress, "(),*=;")
    lt, gt = pp.Suppress("<"), pp.Suppress(">")
    keyword = pp.MatchFirst([pp.Keyword(k) for k in KEYWORDS])

    name = (~keyword + pp.Word(pp.alphas + "_", pp.alphanums + "_")).set_name("NAME")
    rational = pp.Regex(r"[+-]?\d+(/0*[1-9]\d*)?").set_name("RAT")
    decimal = pp.Regex(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?").set_name("DECIMAL")

    part = pp.Group(pp.Located(rational + pp.Optional(star + name)))
    lin = pp.Group(part + pp.ZeroOrMore(pp.one_of("+ -") + part))
    exact = pp.Group(lpar + rational + comma + rational + rpar)("exact")
    numeric = pp.Group(lt + decimal + comma + decimal + gt)("numeric")
    term = pp.Group((exact | numeric) + star + pp.Keyword("exp").suppress() + lpar + lin("lin") + star + pp.Keyword("s").suppress() + rpar)

    symdecl = pp.Group(pp.Located(pp.Keyword("symbol") + name + eq + decimal + semi))
    sumdecl = pp.Group(pp.Located(pp.Keyword("sum") + name + eq + pp.Group(term + pp.ZeroOrMore(pp.Suppress("+") + term)) + semi))
    grammar = pp.ZeroOrMore(symdecl | sumdecl) + pp.StringEnd()
    grammar.ignore(pp.python_style_comment)
    return grammar


def _digits(literal: str) -> int:
    mantissa = re.split(r"[eE]", literal)[0]
    return sum(ch.isdigit() for ch in mantissa.lstrip("+-").lstrip("0."))


def _coefficient(term: pp.ParseResults) -> Coefficient:
    if "exact" in term:
        modulus, turns = term["exact"]
        return ExactCoefficient(Fraction(modulus), Fraction(turns))
    re_part, im_part = term["numeric"]
    return NumericCoefficient(complex(float(re_part), float(im_part)))


def _exponent(lin: pp.ParseResults, table: SymbolTable, text: str) -> Exponent:
    coords = [Fraction(0)] * table.size
    sign = 1
    for item in lin:
        if isinstance(item, str):
            sign = -1 if item == "-" else 1
            continue
        start, tokens, _ = item
        value = Fraction(tokens[0]) * sign
        symbol = tokens[1] if len(tokens) > 1 else UNIT
        if symbol not in table.names:
            raise UndeclaredSymbol(symbol, pp.lineno(start, text))
        coords[table.index(symbol)] += value
    return Exponent(table, tuple(coords))


def parse(text: str, source: Optional[str] = None) -> Workspace:
    """Parse .apeq text; symbols are collected before sums, so declaration order between them is free."""
    try:
        statements = make_grammar().parse_string(text, parse_all=True)
    except pp.ParseBaseException as e:
        raise DslSyntaxError(e.msg, e.lineno, e.col, source) from e

    declarations: List[Tuple[str, str]] = []
    warnings: List[str] = []
    sums_raw = []
    for statement in statements:
        start, tokens, _ = statement
        line = pp.lineno(start, text)
        if tokens[0] == "symbol":
            symbol, literal = tokens[1], tokens[2]
            if any(symbol == known for known, _ in declarations):
                raise DuplicateName(f"symbol '{symbol}' is declared twice (line {line})")
            if _digits(literal) < MIN_SYMBOL_DIGITS:
                message = f"symbol '{symbol}' at line {line} has fewer than {MIN_SYMBOL_DIGITS} significant digits"
                logger.warning(message)
                warnings.append(message)
            declarations.append((symbol, literal))
        else:
            sums_raw.append((tokens[1], tokens[2], line))

    table = SymbolTable.from_declarations(declarations)
    sums: List[ExponentialSum] = []
    lines: Dict[str, int] = {}
    for name, terms_raw, line in sums_raw:
        if name in lines:
            raise DuplicateName(f"sum '{name}' is declared twice (lines {lines[name]} and {line})")
        terms = [Term(_exponent(t["lin"], table, text), _coefficient(t)) for t in terms_raw]
        f = ExponentialSum(table, tuple(terms), name)
        check_exponents(f.exponents, where=f"sum '{name}' (line {line})")
        sums.append(f)
        lines[name] = line
    logger.debug(f"Parsed {len(declarations)} symbols and {len(sums)} sums from {source or '<string>'}")
    return Workspace(table, tuple(sums), source, lines, tuple(warnings))


def parse_file(path: Union[str, Path]) -> Workspace:
    path = Path(path)
    return parse(path.read_text(encoding="utf-8"), source=str(path))


def _format_exponent(e: Exponent) -> str:
    parts = []
    for symbol, c in zip(e.table.names, e.coords):
        if not c:
            continue
        magnitude = str(abs(c))
        text = magnitude if symbol == UNIT else f"{magnitude}*{symbol}"
        if not parts:
            parts.append(f"-{text}" if c < 0 else text)
        else:
            parts.append(f"- {text}" if c < 0 else f"+ {text}")
    return " ".join(parts) if parts else "0"


def _format_coefficient(c: Coefficient) -> str:
    if isinstance(c, ExactCoefficient):
        return f"({c.modulus},{c.turns})"
    return f"<{c.value.real!r},{c.value.imag!r}>"


def pretty_print(workspace: Workspace) -> str:
    """Syntactic normal form: parse(pretty_print(ws)) == ws."""
    lines = [f"symbol {n} = {lit};" for n, lit in zip(workspace.table.names[1:], workspace.table.literals[1:])]
    for f in workspace.sums:
        terms = " + ".join(f"{_format_coefficient(t.coefficient)}*exp({_format_exponent(t.exponent)}*s)" for t in f.terms)
        lines.append(f"sum {f.name} = {terms};")
    return "\n".join(lines) + "\n"
