"""Tokenizer for the C subset, with pragma and preprocessor lines as tokens."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .nodes import Span


class FrontendError(Exception):
    """Base class for located parse errors."""

    def __init__(self, span, message):
        self.span = span
        self.message = message
        super().__init__(f"{span}: {message}" if span else message)


class CSyntaxError(FrontendError):
    pass


class UnsupportedConstruct(FrontendError):
    def __init__(self, span, construct):
        self.construct = construct
        super().__init__(span, f"unsupported construct: {construct}")


@dataclass
class Token:
    kind: str  # id | kw | int | float | char | str | op | pragma | pp | eof
    text: str
    span: Span

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r})"


KEYWORDS = {
    "int", "double", "float", "char", "long", "short", "unsigned", "signed",
    "void", "static", "extern", "const", "volatile", "register", "inline",
    "return", "for", "if", "else", "while", "do", "break", "continue",
    "sizeof", "typedef", "goto", "switch", "case", "default", "struct",
    "union", "enum", "restrict",
}

_OPS = sorted(
    """<<= >>= ... -> ++ -- << >> <= >= == != && || += -= *= /= %= &= |= ^=
    + - * / % < > = ! ~ & | ^ ? : ; , . ( ) [ ] { }""".split(),
    key=len,
    reverse=True,
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<lcomment>//[^\n]*)
  | (?P<bcomment>/\*.*?\*/)
  | (?P<float>(?:\d+\.\d*|\.\d+)(?:[eE][+-]?\d+)?[fFlL]?|\d+[eE][+-]?\d+[fFlL]?)
  | (?P<int>0[xX][0-9a-fA-F]+[uUlL]*|\d+[uUlL]*)
  | (?P<id>[A-Za-z_]\w*)
  | (?P<char>'(?:\\.|[^\\'\n])+')
  | (?P<str>"(?:\\.|[^\\"\n])*")
  | (?P<op>"""
    + "|".join(re.escape(o) for o in _OPS)
    + r""")
    """,
    re.VERBOSE | re.DOTALL,
)


def tokenize(text: str, path: str = "<input>") -> list[Token]:
    tokens = []
    pos = 0
    line, col = 1, 1
    at_line_start = True
    n = len(text)
    while pos < n:
        if at_line_start:
            m = re.match(r"[ \t]*#", text[pos:])
            if m:
                # gather the directive with backslash continuations
                end = pos
                parts = []
                start_line, start_col = line, col + m.end() - 1
                while True:
                    nl = text.find("\n", end)
                    if nl == -1:
                        nl = n
                    chunk = text[end:nl]
                    line += 1
                    if chunk.rstrip().endswith("\\"):
                        parts.append(chunk.rstrip()[:-1])
                        end = nl + 1
                        if end >= n:
                            break
                        continue
                    parts.append(chunk)
                    end = nl + 1
                    break
                directive = " ".join(p.strip() for p in parts).strip()
                span = Span(start_line, start_col, line - 1, 0, path)
                body = directive[1:].strip()
                if re.match(r"pragma\b", body):
                    tokens.append(Token("pragma", body[len("pragma"):].strip(), span))
                else:
                    tokens.append(Token("pp", directive, span))
                pos = min(end, n)
                col = 1
                at_line_start = True
                continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise CSyntaxError(Span(line, col, line, col, path), f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        value = m.group()
        span = Span(line, col, line, col + len(value), path)
        if kind == "nl":
            line += 1
            col = 1
            at_line_start = True
            pos = m.end()
            continue
        if kind in ("ws", "lcomment"):
            col += len(value)
            pos = m.end()
            continue
        if kind == "bcomment":
            nls = value.count("\n")
            if nls:
                line += nls
                col = len(value) - value.rfind("\n")
            else:
                col += len(value)
            pos = m.end()
            continue
        at_line_start = False
        if kind == "id" and value in KEYWORDS:
            kind = "kw"
        tokens.append(Token(kind, value, span))
        col += len(value)
        pos = m.end()
    tokens.append(Token("eof", "", Span(line, col, line, col, path)))
    return tokens
