"""Noise stripping and token-level helpers.

``strip_noise`` blanks comments and string-literal contents while keeping
every character position stable: the output has exactly the same length and
line structure as the input, so offsets computed on the cleaned text map
one-to-one back onto the original source.
"""

from __future__ import annotations

import re

from .model import DiagnosticSeverity, ParseDiagnostic

IDENT_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*")

ELEMENTARY_TYPES = re.compile(
    r"^(address|bool|string|bytes([0-9]+)?|u?int([0-9]+)?|u?fixed[0-9x]*|mapping|function)$"
)

# Keywords that can never start an expression-level call site.
NON_CALL_KEYWORDS = frozenset(
    {
        "if",
        "else",
        "for",
        "while",
        "do",
        "try",
        "catch",
        "require",
        "assert",
        "revert",
        "return",
        "returns",
        "emit",
        "new",
        "delete",
        "unchecked",
        "assembly",
        "using",
        "modifier",
        "function",
        "constructor",
        "type",
    }
)


def _line_of(source: str, pos: int) -> int:
    return source.count("\n", 0, pos) + 1


def scan_noise(source: str) -> tuple[str, list[ParseDiagnostic]]:
    """Blank comments and string contents, reporting recovery diagnostics."""
    out = list(source)
    diags: list[ParseDiagnostic] = []
    i = 0
    n = len(source)
    while i < n:
        c = source[i]
        if c == "/" and i + 1 < n and source[i + 1] == "/":
            j = i
            while j < n and source[j] != "\n":
                out[j] = " "
                j += 1
            i = j
        elif c == "/" and i + 1 < n and source[i + 1] == "*":
            end = source.find("*/", i + 2)
            if end == -1:
                for j in range(i, n):
                    if source[j] != "\n":
                        out[j] = " "
                diags.append(
                    ParseDiagnostic(
                        line=_line_of(source, i),
                        severity=DiagnosticSeverity.WARNING,
                        message="unterminated block comment; remainder of input ignored",
                    )
                )
                i = n
            else:
                for j in range(i, end + 2):
                    if source[j] != "\n":
                        out[j] = " "
                i = end + 2
        elif c in ("'", '"'):
            quote = c
            j = i + 1
            closed = False
            while j < n:
                if source[j] == "\\" and j + 1 < n:
                    out[j] = " "
                    out[j + 1] = " "
                    j += 2
                    continue
                if source[j] == quote:
                    closed = True
                    break
                if source[j] == "\n":
                    break
                out[j] = " "
                j += 1
            if closed:
                i = j + 1
            else:
                diags.append(
                    ParseDiagnostic(
                        line=_line_of(source, i),
                        severity=DiagnosticSeverity.WARNING,
                        message="unterminated string literal",
                    )
                )
                i = j
        else:
            i += 1
    return "".join(out), diags


def strip_noise(source: str) -> str:
    """Replace comments and string contents with spaces, preserving lines."""
    cleaned, _ = scan_noise(source)
    return cleaned


def collapse_ws(text: str) -> str:
    return " ".join(text.split())


def match_brace(text: str, open_idx: int, open_char: str = "{", close_char: str = "}") -> int:
    """Index of the bracket matching ``text[open_idx]``, or -1 when unmatched."""
    depth = 0
    for i in range(open_idx, len(text)):
        c = text[i]
        if c == open_char:
            depth += 1
        elif c == close_char:
            depth -= 1
            if depth == 0:
                return i
    return -1


def word_in(text: str, word: str) -> bool:
    """Whole-word containment test."""
    return re.search(r"(?<![A-Za-z0-9_$])" + re.escape(word) + r"(?![A-Za-z0-9_$])", text) is not None


def find_assignment(text: str) -> tuple[int, str] | None:
    """Locate the first top-level assignment operator in a statement.

    Returns (index of '=', operator text) or None.  Comparison operators,
    mapping arrows and operators nested inside brackets are skipped.
    """
    depth = 0
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c in "([{":
            depth += 1
        elif c in ")]}":
            depth -= 1
        elif c == "=" and depth == 0:
            prev = text[i - 1] if i > 0 else ""
            nxt = text[i + 1] if i + 1 < n else ""
            if nxt == "=" or nxt == ">" or prev in "=!":
                i += 2 if nxt == "=" else 1
                continue
            if prev in "<>":
                if i >= 2 and text[i - 2] == prev:
                    return i - 2, text[i - 2 : i + 1]
                i += 1
                continue
            if prev in "+-*/%&|^":
                return i - 1, text[i - 1 : i + 1]
            return i, "="
        i += 1
    return None


def leftmost_identifier(text: str) -> str | None:
    m = IDENT_RE.search(text)
    return m.group() if m else None


_DATA_LOCATIONS = frozenset({"memory", "storage", "calldata"})


def local_declarations(text: str) -> list[tuple[str, str]]:
    """Extract ``(name, type)`` pairs declared by one statement's text.

    Recognizes plain declarations (``uint256 x = ...``), declarations with a
    data location, tuple declarations (``(bool ok, ) = ...``) and the init
    clause of a ``for`` header.  Returns [] when the text declares nothing.
    """
    text = text.strip().rstrip(";").strip()
    if text.startswith("for") and "(" in text:
        inner_start = text.index("(") + 1
        inner_end = match_brace(text, text.index("("), "(", ")")
        inner = text[inner_start : inner_end if inner_end != -1 else len(text)]
        init = inner.split(";", 1)[0]
        return local_declarations(init)

    assign = find_assignment(text)
    lhs = text[: assign[0]].strip() if assign else text

    if lhs.startswith("("):
        end = match_brace(lhs, 0, "(", ")")
        if end == -1:
            return []
        decls = []
        for part in _split_top_level(lhs[1:end], ","):
            tokens = IDENT_RE.findall(part)
            tokens = [t for t in tokens if t not in _DATA_LOCATIONS]
            if len(tokens) >= 2:
                decls.append((tokens[-1], " ".join(tokens[:-1])))
        return decls

    if any(ch in lhs for ch in ".[]"):
        # Indexed or member target: an assignment, not a declaration.
        return []
    tokens = lhs.split()
    if len(tokens) < 2:
        return []
    head = tokens[0]
    if not IDENT_RE.fullmatch(head) and not head.startswith("mapping"):
        return []
    rest = [t for t in tokens[1:] if t not in _DATA_LOCATIONS]
    if len(rest) != 1 or not IDENT_RE.fullmatch(rest[-1]):
        return []
    if head in NON_CALL_KEYWORDS:
        return []
    return [(rest[-1], head)]


def _split_top_level(text: str, sep: str) -> list[str]:
    """Split on a separator, ignoring occurrences nested in brackets."""
    parts = []
    depth = 0
    start = 0
    for i, c in enumerate(text):
        if c in "([{":
            depth += 1
        elif c in ")]}":
            depth -= 1
        elif c == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return [p for p in (part.strip() for part in parts) if p]


def split_top_level(text: str, sep: str = ",") -> list[str]:
    return _split_top_level(text, sep)
