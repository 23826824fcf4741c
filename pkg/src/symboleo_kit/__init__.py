"""Parse, lint and score Symboleo contract specifications, and drive prompt experiments."""

from symboleo_kit.linter import lint
from symboleo_kit.parser import ParseResult, parse
from symboleo_kit.printer import format_spec

__all__ = ["ParseResult", "format_spec", "lint", "parse"]
__version__ = "0.1.0"
