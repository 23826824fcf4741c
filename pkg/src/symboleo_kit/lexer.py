"""Tokenizer for ``.symboleo`` sources."""

from __future__ import annotations

import re
from dataclasses import dataclass

from symboleo_kit.ast import SourceSpan

SECTION_KEYWORDS = (
    "Domain",
    "Contract",
    "Declarations",
    "Preconditions",
    "Postconditions",
    "Obligations",
    "SurvivingObligations",
    "Powers",
    "Constraints",
)

KEYWORDS = frozenset(
    SECTION_KEYWORDS
    + (
        "endDomain",
        "endContract",
        "isA",
        "isAn",
        "with",
        "Env",
        "Obligation",
        "Power",
        "O",
        "P",
        "and",
        "or",
        "not",
        "true",
        "false",
    )
)

PUNCTUATION = frozenset("(),;:.")
# Longest first so that ``:=`` wins over ``:`` and ``<=`` over ``<``.
OPERATORS = ("->", ":=", "==", "!=", "<=", ">=", "<", ">", "=", "+", "-", "*", "/", "%")

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n\f]+)
  | (?P<comment>//[^\n]*)
  | (?P<date>\d{4}-\d{2}-\d{2}(?:T\d{2}:\d{2}(?::\d{2})?)?(?![\w]))
  | (?P<number>\d+(?:\.\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<operator>->|:=|==|!=|<=|>=|[<>=+\-*/%])
  | (?P<punct>[(),;:.])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class Token:
    # keyword, identifier, number, string, dateLiteral, punctuation,
    # operator, comment, illegal, eof
    kind: str
    lexeme: str
    span: SourceSpan
    offset: int = 0

    def is_(self, kind: str, lexeme: str | None = None) -> bool:
        return self.kind == kind and (lexeme is None or self.lexeme == lexeme)

    def __str__(self) -> str:
        return f"{self.kind}:{self.lexeme!r}@{self.span}"


def _advance(line: int, col: int, text: str) -> tuple[int, int]:
    nl = text.count("\n")
    if nl:
        return line + nl, len(text) - text.rfind("\n")
    return line, col + len(text)


def tokenize(source: str) -> list[Token]:
    """Split ``source`` into tokens; whitespace is dropped, comments kept.

    Characters outside the lexical alphabet become ``illegal`` tokens and
    lexing carries on, so the lexemes plus whitespace always rebuild the input.
    """
    tokens: list[Token] = []
    pos, line, col = 0, 1, 1
    n = len(source)
    while pos < n:
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            # An unterminated string swallows the rest of its line.
            if source[pos] == '"':
                end = source.find("\n", pos)
                end = n if end < 0 else end
            else:
                end = pos + 1
            text = source[pos:end]
            kind = "illegal"
        else:
            end = m.end()
            text = m.group()
            group = m.lastgroup
            kind = {
                "ws": "",
                "comment": "comment",
                "date": "dateLiteral",
                "number": "number",
                "string": "string",
                "operator": "operator",
                "punct": "punctuation",
            }.get(group, "")
            if group == "ident":
                kind = "keyword" if text in KEYWORDS else "identifier"
        end_line, end_col = _advance(line, col, text)
        if kind:
            # End column is inclusive of the last character.
            last_line, last_col = _advance(line, col, text[:-1]) if len(text) > 1 else (line, col)
            tokens.append(Token(kind, text, SourceSpan(line, col, last_line, last_col), pos))
        pos, line, col = end, end_line, end_col
    tokens.append(Token("eof", "", SourceSpan(line, col, line, col), n))
    return tokens


def unescape(lexeme: str) -> str:
    body = lexeme[1:-1]
    return re.sub(r"\\(.)", lambda m: {"n": "\n", "t": "\t"}.get(m.group(1), m.group(1)), body)


def escape(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t") + '"'
