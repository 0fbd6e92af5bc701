"""C-subset frontend: lexing, parsing, printing and section naming."""

from . import nodes
from .lexer import CSyntaxError, FrontendError, UnsupportedConstruct
from .parser import SourceUnit, parse, parse_directive, parse_expression, parse_statement
from .printer import format_directive, format_expr, print_unit, to_text
from .loops import (
    LoopHeader,
    SectionId,
    enumerate_sections,
    loop_header,
    region_sections,
    section_loops,
    top_level_loops,
)

__all__ = [
    "nodes",
    "CSyntaxError",
    "FrontendError",
    "UnsupportedConstruct",
    "SourceUnit",
    "parse",
    "parse_directive",
    "parse_expression",
    "parse_statement",
    "format_directive",
    "format_expr",
    "print_unit",
    "to_text",
    "LoopHeader",
    "SectionId",
    "enumerate_sections",
    "loop_header",
    "region_sections",
    "section_loops",
    "top_level_loops",
]
