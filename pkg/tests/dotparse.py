"""Minimal independent DOT grammar validator used as a test oracle.

Implements the graph/digraph subset of the DOT language: node statements,
edge statements, attribute lists, quoted identifiers.  Raises DotSyntaxError
on any malformed input.  Kept deliberately separate from the production
exporter so it can act as a second opinion.
"""

from __future__ import annotations

import re


class DotSyntaxError(ValueError):
    pass


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*|\#[^\n]*|/\*.*?\*/)
  | (?P<edgeop>->|--)
  | (?P<punct>[{}\[\];,=:])
  | (?P<quoted>"(?:\\.|[^"\\])*")
  | (?P<id>[A-Za-z_\200-\377][A-Za-z0-9_\200-\377]*|-?(?:\.[0-9]+|[0-9]+(?:\.[0-9]*)?))
    """,
    re.VERBOSE | re.DOTALL,
)


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DotSyntaxError(f"unexpected character {text[pos]!r} at offset {pos}")
        pos = m.end()
        kind = m.lastgroup
        if kind in ("ws", "comment"):
            continue
        tokens.append((kind, m.group()))
    return tokens


class _DotParser:
    def __init__(self, tokens: list[tuple[str, str]]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> tuple[str, str]:
        if self.pos >= len(self.tokens):
            return ("eof", "")
        return self.tokens[self.pos]

    def take(self) -> tuple[str, str]:
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, value: str) -> None:
        kind, tok = self.take()
        if tok != value:
            raise DotSyntaxError(f"expected {value!r}, found {tok!r}")

    def expect_id(self) -> str:
        kind, tok = self.take()
        if kind not in ("id", "quoted"):
            raise DotSyntaxError(f"expected identifier, found {tok!r}")
        return tok

    def parse_graph(self) -> None:
        kind, tok = self.take()
        if tok == "strict":
            kind, tok = self.take()
        if tok not in ("graph", "digraph"):
            raise DotSyntaxError(f"expected 'graph' or 'digraph', found {tok!r}")
        if self.peek()[1] != "{":
            self.expect_id()
        self.expect("{")
        self.parse_stmt_list()
        self.expect("}")

    def parse_stmt_list(self) -> None:
        while self.peek()[1] not in ("}", ""):
            self.parse_stmt()
            if self.peek()[1] == ";":
                self.take()

    def parse_stmt(self) -> None:
        kind, tok = self.peek()
        if tok in ("graph", "node", "edge"):
            self.take()
            self.parse_attr_list(required=True)
            return
        if kind not in ("id", "quoted"):
            raise DotSyntaxError(f"unexpected token {tok!r} in statement position")
        self.take()
        if self.peek()[1] == "=":
            self.take()
            self.expect_id()
            return
        while self.peek()[0] == "edgeop":
            self.take()
            self.expect_id()
        if self.peek()[1] == "[":
            self.parse_attr_list(required=True)

    def parse_attr_list(self, required: bool = False) -> None:
        if self.peek()[1] != "[":
            if required:
                raise DotSyntaxError(f"expected attribute list, found {self.peek()[1]!r}")
            return
        while self.peek()[1] == "[":
            self.take()
            while self.peek()[1] != "]":
                self.expect_id()
                self.expect("=")
                self.expect_id()
                if self.peek()[1] in (",", ";"):
                    self.take()
            self.expect("]")

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)


def validate_dot(text: str) -> None:
    """Raise DotSyntaxError unless the text is one or more valid DOT graphs."""
    tokens = _tokenize(text)
    if not tokens:
        raise DotSyntaxError("empty document")
    parser = _DotParser(tokens)
    while not parser.at_end():
        parser.parse_graph()
