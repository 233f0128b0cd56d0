"""Tolerant structural parser for Solidity source files.

Recovers a :class:`~smartgraph.model.SourceUnit` from arbitrary input.
Malformed regions never abort the parse; they are recorded as diagnostics
and scanning resumes at the next brace-balanced point.  The grammar subset
covers contracts, interfaces, libraries, inheritance lists, state variables,
functions, constructors, modifiers, events and structs.  Statements are
classified by leading keyword; expressions stay raw text.
"""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass

from .lexer import (
    ELEMENTARY_TYPES,
    IDENT_RE,
    NON_CALL_KEYWORDS,
    collapse_ws,
    find_assignment,
    local_declarations,
    match_brace,
    scan_noise,
    split_top_level,
)
from .model import (
    CallKind,
    CallSite,
    ContractDef,
    ContractKind,
    DiagnosticSeverity,
    EventDef,
    FunctionDef,
    ImportRef,
    ModifierDef,
    Mutability,
    ParamDef,
    ParseDiagnostic,
    SourceUnit,
    StatementKind,
    Statement,
    StateVarDef,
    StructDef,
    Visibility,
)

LOW_LEVEL_MEMBERS = frozenset({"call", "delegatecall", "send", "transfer", "staticcall"})

_VISIBILITY_WORDS = {v.value: v for v in Visibility if v is not Visibility.DEFAULT}
_MUTABILITY_WORDS = {
    "view": Mutability.VIEW,
    "pure": Mutability.PURE,
    "payable": Mutability.PAYABLE,
    "constant": Mutability.VIEW,
}
_QUOTED_RE = re.compile(r"[\"']([^\"']*)[\"']")
_DATA_LOCATIONS = frozenset({"memory", "storage", "calldata", "indexed"})


@dataclass
class CallCandidate:
    callee: str
    receiver: str
    final: str
    pos: int
    arg_count: int
    selectorish: bool


def parse_source(source: str, path: str = "<memory>") -> SourceUnit:
    """Parse arbitrary text into a SourceUnit.  Total: never raises."""
    text, diags = scan_noise(source)
    unit = SourceUnit(path=path, diagnostics=diags)
    parser = _Parser(source, text, unit)
    parser.parse_top_level()
    parser.link_inheritance()
    for contract in unit.contracts:
        parser.extract_calls(contract)
    return unit


class _Parser:
    def __init__(self, source: str, text: str, unit: SourceUnit):
        self.source = source
        self.text = text
        self.unit = unit
        self.n = len(text)
        self._line_starts = [0]
        for i, ch in enumerate(text):
            if ch == "\n":
                self._line_starts.append(i + 1)

    # -- position helpers ---------------------------------------------------

    def line_of(self, pos: int) -> int:
        return bisect_right(self._line_starts, min(pos, max(self.n - 1, 0)))

    def diag(self, pos: int, severity: DiagnosticSeverity, message: str) -> None:
        self.unit.diagnostics.append(
            ParseDiagnostic(line=self.line_of(pos), severity=severity, message=message)
        )

    def skip_ws(self, i: int, hi: int | None = None) -> int:
        hi = self.n if hi is None else hi
        while i < hi and self.text[i].isspace():
            i += 1
        return i

    def word_at(self, i: int) -> re.Match | None:
        return IDENT_RE.match(self.text, i)

    def brace_end(self, open_idx: int, hi: int | None = None) -> int:
        """Matching '}' index, capped at hi; -1 when unmatched."""
        end = match_brace(self.text, open_idx)
        if end == -1:
            return -1
        if hi is not None and end >= hi:
            return -1
        return end

    def paren_end(self, open_idx: int, hi: int | None = None) -> int:
        end = match_brace(self.text, open_idx, "(", ")")
        if end == -1:
            return -1
        if hi is not None and end >= hi:
            return -1
        return end

    def to_semicolon(self, i: int, hi: int) -> int:
        """Index just past the statement terminator, tracking bracket depth."""
        depth = 0
        j = i
        while j < hi:
            c = self.text[j]
            if c in "([{":
                depth += 1
            elif c in ")]}":
                depth -= 1
            elif c == ";" and depth <= 0:
                return j + 1
            j += 1
        return hi

    # -- top level ----------------------------------------------------------

    def parse_top_level(self) -> None:
        i = 0
        while i < self.n:
            i = self.skip_ws(i)
            if i >= self.n:
                break
            c = self.text[i]
            if c == "{":
                end = self.brace_end(i)
                self.diag(i, DiagnosticSeverity.WARNING, "unexpected top-level block")
                i = self.n if end == -1 else end + 1
                continue
            if c == "}":
                self.diag(i, DiagnosticSeverity.WARNING, "unbalanced '}' at top level")
                i += 1
                continue
            m = self.word_at(i)
            if m is None:
                i += 1
                continue
            word = m.group()
            if word == "pragma":
                i = self._parse_pragma(i, m.end())
            elif word == "import":
                i = self._parse_import(i, m.end())
            elif word == "abstract":
                i = m.end()
            elif word in ("contract", "interface", "library"):
                i = self._parse_contract(i, m.end(), ContractKind(word))
            elif word in ("function", "struct", "enum", "using", "type", "event", "error", "modifier"):
                i = self._consume_declaration(m.end())
            else:
                i = self._consume_declaration(m.end())

    def _consume_declaration(self, i: int) -> int:
        """Skip a free-standing declaration: to ';' or over one brace block."""
        j = i
        while j < self.n:
            c = self.text[j]
            if c == ";":
                return j + 1
            if c == "{":
                end = self.brace_end(j)
                return self.n if end == -1 else end + 1
            if c == "}":
                return j
            j += 1
        return self.n

    def _parse_pragma(self, start: int, after_kw: int) -> int:
        end = self.to_semicolon(after_kw, self.n)
        tail = collapse_ws(self.text[after_kw : end - 1 if end > after_kw else end])
        if tail.startswith("solidity"):
            tail = tail[len("solidity") :].strip()
        if tail:
            self.unit.pragmas.append(tail)
        return end

    def _parse_import(self, start: int, after_kw: int) -> int:
        end = self.to_semicolon(after_kw, self.n)
        raw = self.source[after_kw : end - 1 if end > after_kw else end]
        m = _QUOTED_RE.search(raw)
        path = m.group(1) if m else collapse_ws(raw)
        self.unit.imports.append(ImportRef(path=path, line=self.line_of(start)))
        return end

    # -- contracts ----------------------------------------------------------

    def _parse_contract(self, kw_start: int, after_kw: int, kind: ContractKind) -> int:
        i = self.skip_ws(after_kw)
        name_m = self.word_at(i)
        if name_m is None:
            self.diag(kw_start, DiagnosticSeverity.ERROR, f"{kind.value} declaration without a name")
            return self._consume_declaration(i)
        name = name_m.group()
        i = name_m.end()

        header_end = i
        while header_end < self.n and self.text[header_end] not in "{;":
            header_end += 1
        inherits: list[str] = []
        header = self.text[i:header_end]
        is_m = re.search(r"(?<![A-Za-z0-9_$])is(?![A-Za-z0-9_$])", header)
        if is_m:
            for entry in split_top_level(header[is_m.end() :], ","):
                ident = IDENT_RE.match(entry.strip())
                if ident:
                    inherits.append(ident.group())

        if header_end >= self.n or self.text[header_end] == ";":
            self.diag(kw_start, DiagnosticSeverity.ERROR, f"{kind.value} '{name}' has no body")
            return header_end + 1 if header_end < self.n else self.n

        body_open = header_end
        body_close = self.brace_end(body_open)
        if body_close == -1:
            self.diag(kw_start, DiagnosticSeverity.ERROR, f"unterminated {kind.value} '{name}'")
            body_close = self.n
            next_i = self.n
        else:
            next_i = body_close + 1

        contract = ContractDef(
            name=name,
            kind=kind,
            inherits=inherits,
            line_span=(self.line_of(kw_start), self.line_of(min(body_close, self.n - 1) if self.n else 0)),
        )
        self._parse_members(contract, body_open + 1, body_close)

        if any(c.name == name and c.kind == kind for c in self.unit.contracts):
            self.diag(
                kw_start,
                DiagnosticSeverity.WARNING,
                f"duplicate {kind.value} '{name}' ignored",
            )
        else:
            self.unit.contracts.append(contract)
        return next_i

    def _parse_members(self, contract: ContractDef, lo: int, hi: int) -> None:
        i = lo
        while i < hi:
            i = self.skip_ws(i, hi)
            if i >= hi:
                break
            c = self.text[i]
            if c in ";}":
                i += 1
                continue
            if c == "{":
                end = self.brace_end(i, hi)
                self.diag(i, DiagnosticSeverity.WARNING, "unexpected block inside contract body")
                i = hi if end == -1 else end + 1
                continue
            m = self.word_at(i)
            if m is None:
                i += 1
                continue
            word = m.group()
            if word == "function":
                fn, i = self._parse_function(i, m.end(), hi)
                contract.functions.append(fn)
            elif word in ("receive", "fallback") and self.skip_ws(m.end(), hi) < hi and self.text[self.skip_ws(m.end(), hi)] == "(":
                fn, i = self._parse_function(i, m.end(), hi, name_override=word)
                contract.functions.append(fn)
            elif word == "constructor":
                fn, i = self._parse_function(i, m.end(), hi, name_override="constructor")
                if contract.constructor is None:
                    contract.constructor = fn
                else:
                    self.diag(i, DiagnosticSeverity.WARNING, "duplicate constructor ignored")
            elif word == "modifier":
                fn, i = self._parse_function(i, m.end(), hi)
                contract.modifiers.append(
                    ModifierDef(name=fn.name, params=fn.params, body=fn.body, line_span=fn.line_span)
                )
            elif word == "event":
                i = self._parse_event(contract, i, m.end(), hi)
            elif word == "struct":
                i = self._parse_struct(contract, i, m.end(), hi)
            elif word in ("enum", "using", "error", "type"):
                i = self._skip_member(m.end(), hi)
            else:
                i = self._parse_state_var(contract, i, hi)

    def _skip_member(self, i: int, hi: int) -> int:
        j = i
        while j < hi:
            c = self.text[j]
            if c == ";":
                return j + 1
            if c == "{":
                end = self.brace_end(j, hi)
                return hi if end == -1 else end + 1
            j += 1
        return hi

    def _parse_event(self, contract: ContractDef, start: int, after_kw: int, hi: int) -> int:
        i = self.skip_ws(after_kw, hi)
        name_m = self.word_at(i)
        if name_m is None:
            self.diag(start, DiagnosticSeverity.WARNING, "event declaration without a name")
            return self._skip_member(i, hi)
        name = name_m.group()
        i = self.skip_ws(name_m.end(), hi)
        params_text = ""
        if i < hi and self.text[i] == "(":
            close = self.paren_end(i, hi)
            if close != -1:
                params_text = collapse_ws(self.text[i + 1 : close])
                i = close + 1
        end = self.to_semicolon(i, hi)
        contract.events.append(EventDef(name=name, params_text=params_text, line=self.line_of(start)))
        return end

    def _parse_struct(self, contract: ContractDef, start: int, after_kw: int, hi: int) -> int:
        i = self.skip_ws(after_kw, hi)
        name_m = self.word_at(i)
        if name_m is None:
            self.diag(start, DiagnosticSeverity.WARNING, "struct declaration without a name")
            return self._skip_member(i, hi)
        name = name_m.group()
        i = self.skip_ws(name_m.end(), hi)
        fields: list[ParamDef] = []
        if i < hi and self.text[i] == "{":
            close = self.brace_end(i, hi)
            if close == -1:
                self.diag(start, DiagnosticSeverity.ERROR, f"unterminated struct '{name}'")
                close = hi
            for entry in self.text[i + 1 : close].split(";"):
                entry = collapse_ws(entry)
                if not entry:
                    continue
                tokens = entry.split(" ")
                if len(tokens) >= 2 and IDENT_RE.fullmatch(tokens[-1]):
                    fields.append(ParamDef(type_name=" ".join(tokens[:-1]), name=tokens[-1]))
            i = close + 1
        contract.structs.append(StructDef(name=name, fields=fields, line=self.line_of(start)))
        return i

    def _parse_state_var(self, contract: ContractDef, start: int, hi: int) -> int:
        end = self.to_semicolon(start, hi)
        chunk = self.text[start : end - 1 if end > start else end]
        assign = find_assignment(chunk)
        decl = chunk[: assign[0]] if assign else chunk
        tokens = split_top_level(collapse_ws(decl), " ")
        if len(tokens) < 2:
            return end
        name = tokens[-1]
        if not IDENT_RE.fullmatch(name):
            return end
        visibility = Visibility.DEFAULT
        is_constant = False
        type_tokens: list[str] = []
        for tok in tokens[:-1]:
            if tok in _VISIBILITY_WORDS:
                visibility = _VISIBILITY_WORDS[tok]
            elif tok in ("constant", "immutable"):
                is_constant = True
            elif tok in ("override", "virtual", "transient"):
                continue
            else:
                type_tokens.append(tok)
        if not type_tokens:
            return end
        contract.state_vars.append(
            StateVarDef(
                name=name,
                type_name=" ".join(type_tokens),
                visibility=visibility,
                is_constant=is_constant,
                line=self.line_of(start),
            )
        )
        return end

    # -- functions and modifiers ---------------------------------------------

    def _parse_function(
        self, kw_start: int, after_kw: int, hi: int, name_override: str | None = None
    ) -> tuple[FunctionDef, int]:
        i = self.skip_ws(after_kw, hi)
        name = name_override or ""
        if name_override is None:
            name_m = self.word_at(i)
            if name_m is not None:
                name = name_m.group()
                i = name_m.end()

        params: list[ParamDef] = []
        i = self.skip_ws(i, hi)
        if i < hi and self.text[i] == "(":
            close = self.paren_end(i, hi)
            if close == -1:
                self.diag(i, DiagnosticSeverity.ERROR, f"unterminated parameter list in '{name}'")
                close = hi - 1
            params = self._parse_params(self.text[i + 1 : close])
            i = close + 1

        fn = FunctionDef(name=name or "fallback", params=params)
        body_open = -1
        end_pos = i
        while i < hi:
            i = self.skip_ws(i, hi)
            if i >= hi:
                break
            c = self.text[i]
            if c == "{":
                body_open = i
                break
            if c == ";":
                end_pos = i
                i += 1
                break
            if c == "(":
                close = self.paren_end(i, hi)
                i = (close + 1) if close != -1 else i + 1
                continue
            m = self.word_at(i)
            if m is None:
                i += 1
                continue
            w = m.group()
            i = m.end()
            if w in _VISIBILITY_WORDS:
                fn.visibility = _VISIBILITY_WORDS[w]
            elif w in _MUTABILITY_WORDS:
                fn.mutability = _MUTABILITY_WORDS[w]
            elif w == "returns":
                i = self.skip_ws(i, hi)
                if i < hi and self.text[i] == "(":
                    close = self.paren_end(i, hi)
                    if close != -1:
                        fn.returns = self._parse_params(self.text[i + 1 : close])
                        i = close + 1
            elif w == "virtual":
                continue
            elif w == "override":
                i = self.skip_ws(i, hi)
                if i < hi and self.text[i] == "(":
                    close = self.paren_end(i, hi)
                    i = (close + 1) if close != -1 else i
            else:
                j = self.skip_ws(i, hi)
                if j < hi and self.text[j] == "(":
                    close = self.paren_end(j, hi)
                    if close != -1:
                        fn.modifiers.append(w + "(" + collapse_ws(self.text[j + 1 : close]) + ")")
                        i = close + 1
                        continue
                fn.modifiers.append(w)

        if body_open != -1:
            body_close = self.brace_end(body_open, hi)
            if body_close == -1:
                self.diag(kw_start, DiagnosticSeverity.ERROR, f"unterminated body of '{fn.name}'")
                body_close = hi
            fn.body = self._parse_block(body_open + 1, body_close)
            fn.body_span = (body_open + 1, body_close)
            end_pos = min(body_close, self.n - 1) if self.n else 0
            next_i = body_close + 1
        else:
            fn.body_span = (0, 0)
            next_i = i
        fn.line_span = (self.line_of(kw_start), self.line_of(end_pos))
        return fn, next_i

    def _parse_params(self, inner: str) -> list[ParamDef]:
        out: list[ParamDef] = []
        for part in split_top_level(inner, ","):
            tokens = [t for t in collapse_ws(part).split(" ") if t not in _DATA_LOCATIONS]
            if not tokens:
                continue
            if len(tokens) >= 2 and IDENT_RE.fullmatch(tokens[-1]) and tokens[-1] != "payable":
                out.append(ParamDef(type_name=" ".join(tokens[:-1]), name=tokens[-1]))
            else:
                out.append(ParamDef(type_name=" ".join(tokens)))
        return out

    # -- statements -----------------------------------------------------------

    def _parse_block(self, lo: int, hi: int) -> list[Statement]:
        stmts: list[Statement] = []
        i = lo
        while i < hi:
            parsed, i = self._parse_one(i, hi)
            stmts.extend(parsed)
        return stmts

    def _parse_one(self, i: int, hi: int) -> tuple[list[Statement], int]:
        i = self.skip_ws(i, hi)
        if i >= hi:
            return [], hi
        c = self.text[i]
        if c == ";":
            return [], i + 1
        if c == "}":
            return [], i + 1
        if c == "{":
            end = self.brace_end(i, hi)
            if end == -1:
                return [], hi
            return self._parse_block(i + 1, end), end + 1

        m = self.word_at(i)
        word = m.group() if m else None
        if word == "if":
            return self._parse_if(i, m.end(), hi)
        if word in ("for", "while"):
            return self._parse_loop(i, m.end(), hi, word)
        if word == "do":
            return self._parse_do(i, m.end(), hi)
        if word == "try":
            return self._parse_try(i, m.end(), hi)
        if word == "unchecked":
            j = self.skip_ws(m.end(), hi)
            if j < hi and self.text[j] == "{":
                end = self.brace_end(j, hi)
                if end == -1:
                    return self._parse_block(j + 1, hi), hi
                return self._parse_block(j + 1, end), end + 1
            return self._simple_statement(i, hi)
        if word == "assembly":
            j = i
            while j < hi and self.text[j] != "{":
                j += 1
            end = self.brace_end(j, hi) if j < hi else -1
            self.diag(i, DiagnosticSeverity.WARNING, "assembly block treated as opaque statement")
            stop = hi if end == -1 else end + 1
            stmt = Statement(
                kind=StatementKind.OTHER,
                line=self.line_of(i),
                text=collapse_ws(self.text[i:stop]),
            )
            return [stmt], stop
        return self._simple_statement(i, hi)

    def _condition_end(self, i: int, hi: int) -> int:
        """Index just past a parenthesized header, or i when absent."""
        j = self.skip_ws(i, hi)
        if j < hi and self.text[j] == "(":
            close = self.paren_end(j, hi)
            if close != -1:
                return close + 1
        return i

    def _body_into(self, i: int, hi: int, children: list[Statement]) -> int:
        i = self.skip_ws(i, hi)
        if i >= hi:
            return hi
        if self.text[i] == "{":
            end = self.brace_end(i, hi)
            if end == -1:
                children.extend(self._parse_block(i + 1, hi))
                return hi
            children.extend(self._parse_block(i + 1, end))
            return end + 1
        if self.text[i] == ";":
            return i + 1
        parsed, i = self._parse_one(i, hi)
        children.extend(parsed)
        return i

    def _parse_if(self, start: int, after_kw: int, hi: int) -> tuple[list[Statement], int]:
        header_end = self._condition_end(after_kw, hi)
        if header_end == after_kw:
            return self._simple_statement(start, hi)
        stmt = Statement(
            kind=StatementKind.IF,
            line=self.line_of(start),
            text=collapse_ws(self.text[start:header_end]),
        )
        i = self._body_into(header_end, hi, stmt.children)
        while True:
            j = self.skip_ws(i, hi)
            m = self.word_at(j)
            if m is None or m.group() != "else":
                break
            j = self.skip_ws(m.end(), hi)
            m2 = self.word_at(j)
            if m2 is not None and m2.group() == "if":
                nested, i = self._parse_if(j, m2.end(), hi)
                stmt.children.extend(nested)
            else:
                i = self._body_into(j, hi, stmt.children)
        return [stmt], i

    def _parse_loop(self, start: int, after_kw: int, hi: int, word: str) -> tuple[list[Statement], int]:
        header_end = self._condition_end(after_kw, hi)
        if header_end == after_kw:
            return self._simple_statement(start, hi)
        stmt = Statement(
            kind=StatementKind.LOOP,
            line=self.line_of(start),
            text=collapse_ws(self.text[start:header_end]),
        )
        i = self._body_into(header_end, hi, stmt.children)
        return [stmt], i

    def _parse_do(self, start: int, after_kw: int, hi: int) -> tuple[list[Statement], int]:
        stmt = Statement(kind=StatementKind.LOOP, line=self.line_of(start), text="do")
        i = self._body_into(after_kw, hi, stmt.children)
        j = self.skip_ws(i, hi)
        m = self.word_at(j)
        if m is not None and m.group() == "while":
            end = self._condition_end(m.end(), hi)
            stmt.text = "do " + collapse_ws(self.text[j:end])
            i = self.to_semicolon(end, hi)
        return [stmt], i

    def _parse_try(self, start: int, after_kw: int, hi: int) -> tuple[list[Statement], int]:
        j = after_kw
        depth = 0
        while j < hi:
            c = self.text[j]
            if c == "(":
                depth += 1
            elif c == ")":
                depth -= 1
            elif c == "{" and depth <= 0:
                break
            elif c == ";" and depth <= 0:
                return self._simple_statement(start, hi)
            j += 1
        if j >= hi:
            return self._simple_statement(start, hi)
        stmt = Statement(
            kind=StatementKind.TRY_CATCH,
            line=self.line_of(start),
            text=collapse_ws(self.text[start:j]),
        )
        end = self.brace_end(j, hi)
        if end == -1:
            stmt.children.extend(self._parse_block(j + 1, hi))
            return [stmt], hi
        stmt.children.extend(self._parse_block(j + 1, end))
        i = end + 1
        while True:
            j = self.skip_ws(i, hi)
            m = self.word_at(j)
            if m is None or m.group() != "catch":
                break
            j = m.end()
            while j < hi and self.text[j] != "{":
                if self.text[j] == ";":
                    break
                j += 1
            if j >= hi or self.text[j] != "{":
                i = j
                break
            end = self.brace_end(j, hi)
            if end == -1:
                stmt.children.extend(self._parse_block(j + 1, hi))
                return [stmt], hi
            stmt.children.extend(self._parse_block(j + 1, end))
            i = end + 1
        return [stmt], i

    def _simple_statement(self, start: int, hi: int) -> tuple[list[Statement], int]:
        end = self.to_semicolon(start, hi)
        raw = self.text[start:end].rstrip()
        text = collapse_ws(raw)
        if not text:
            return [], end
        head_m = IDENT_RE.match(text)
        head = head_m.group() if head_m else ""
        kind = StatementKind.OTHER
        if head == "require":
            kind = StatementKind.REQUIRE
        elif head == "assert":
            kind = StatementKind.ASSERT
        elif head == "revert":
            kind = StatementKind.REVERT
        elif head == "emit":
            kind = StatementKind.EMIT
        elif head == "return":
            kind = StatementKind.RETURN
        elif head == "delete":
            kind = StatementKind.ASSIGNMENT
        elif find_assignment(text) is not None or "++" in text or "--" in text:
            kind = StatementKind.ASSIGNMENT
        elif "(" in text:
            kind = StatementKind.CALL
        return [Statement(kind=kind, line=self.line_of(start), text=text)], end

    # -- inheritance and call sites -------------------------------------------

    def link_inheritance(self) -> None:
        by_name: dict[str, ContractDef] = {}
        for c in self.unit.contracts:
            by_name.setdefault(c.name, c)
        for c in self.unit.contracts:
            seen = {c.name}
            queue = list(c.inherits)
            inherited: list[StateVarDef] = []
            own = {v.name for v in c.state_vars}
            while queue:
                parent_name = queue.pop(0)
                if parent_name in seen:
                    continue
                seen.add(parent_name)
                parent = by_name.get(parent_name)
                if parent is None:
                    self.unit.diagnostics.append(
                        ParseDiagnostic(
                            line=c.line_span[0],
                            severity=DiagnosticSeverity.WARNING,
                            message=f"unresolved parent '{parent_name}' of {c.kind.value} '{c.name}'",
                        )
                    )
                    continue
                for v in parent.state_vars:
                    if v.name not in own:
                        inherited.append(v)
                        own.add(v.name)
                queue.extend(parent.inherits)
            c.parent_state_vars = inherited

    def extract_calls(self, contract: ContractDef) -> None:
        type_names = {c.name for c in self.unit.contracts} | {s.name for s in contract.structs}
        scope_types = contract.state_scope()
        for fn in contract.all_functions():
            lo, hi = getattr(fn, "body_span", (0, 0))
            if hi <= lo:
                continue
            tmap = dict(scope_types)
            for p in fn.params:
                if p.name:
                    tmap[p.name] = p.type_name
            for r in fn.returns:
                if r.name:
                    tmap[r.name] = r.type_name
            for stmt in fn.statements():
                for nm, ty in local_declarations(stmt.text):
                    tmap[nm] = ty
            for cand in call_candidates(self.text, lo, hi):
                kind = classify_call(cand, tmap, type_names)
                if kind is None:
                    continue
                fn.calls.append(
                    CallSite(
                        callee=cand.callee,
                        kind=kind,
                        line=self.line_of(cand.pos),
                        arg_count=cand.arg_count,
                    )
                )


_CHAIN_RE = re.compile(r"[A-Za-z_$][\w$]*(?:\s*\.\s*[A-Za-z_$][\w$]*)*")


def _prev_word(text: str, pos: int) -> str:
    j = pos - 1
    while j >= 0 and text[j].isspace():
        j -= 1
    end = j + 1
    while j >= 0 and (text[j].isalnum() or text[j] in "_$"):
        j -= 1
    return text[j + 1 : end]


def call_candidates(text: str, lo: int, hi: int) -> list[CallCandidate]:
    """Scan a raw slice for call expressions, including nested ones."""
    out: list[CallCandidate] = []
    i = lo
    while i < hi:
        c = text[i]
        if c == ")":
            cand, nxt = _member_after_paren(text, i, hi)
            if cand is not None:
                out.append(cand)
                i = nxt
                continue
            i += 1
            continue
        if not (c.isalpha() or c in "_$"):
            i += 1
            continue
        if i > lo and (text[i - 1].isalnum() or text[i - 1] in "_$."):
            m = IDENT_RE.match(text, i)
            i = m.end() if m else i + 1
            continue
        m = _CHAIN_RE.match(text, i)
        if m is None:
            i += 1
            continue
        chain_end = m.end()
        j = _skip_ws(text, chain_end, hi)
        options = False
        if j < hi and text[j] == "{":
            close = match_brace(text, j)
            if close == -1 or close >= hi:
                i = chain_end
                continue
            k = _skip_ws(text, close + 1, hi)
            if k < hi and text[k] == "(":
                options = True
                j = k
            else:
                i = chain_end
                continue
        if j >= hi or text[j] != "(":
            i = chain_end
            continue
        close = match_brace(text, j, "(", ")")
        if close == -1 or close >= hi:
            close = hi
        args = text[j + 1 : close]
        chain = collapse_ws(m.group()).replace(" ", "")
        segments = chain.split(".")
        head, final = segments[0], segments[-1]
        prev = _prev_word(text, i)
        if (
            prev in ("emit", "new", "function", "event", "modifier")
            or head in NON_CALL_KEYWORDS
            or final in ("push", "pop")
        ):
            i = j + 1
            continue
        receiver = ".".join(segments[:-1])
        out.append(
            CallCandidate(
                callee=chain,
                receiver=receiver,
                final=final,
                pos=i,
                arg_count=_count_args(args),
                selectorish=options or ".selector" in args or "abi.encode" in args,
            )
        )
        i = j + 1
    return out


def _member_after_paren(text: str, close_pos: int, hi: int) -> tuple[CallCandidate | None, int]:
    j = _skip_ws(text, close_pos + 1, hi)
    if j >= hi or text[j] != ".":
        return None, close_pos + 1
    m = _CHAIN_RE.match(text, _skip_ws(text, j + 1, hi))
    if m is None:
        return None, close_pos + 1
    member = collapse_ws(m.group()).replace(" ", "")
    k = _skip_ws(text, m.end(), hi)
    options = False
    if k < hi and text[k] == "{":
        bclose = match_brace(text, k)
        if bclose == -1 or bclose >= hi:
            return None, close_pos + 1
        k2 = _skip_ws(text, bclose + 1, hi)
        if k2 < hi and text[k2] == "(":
            options = True
            k = k2
    if k >= hi or text[k] != "(":
        return None, close_pos + 1
    args_close = match_brace(text, k, "(", ")")
    if args_close == -1 or args_close >= hi:
        args_close = hi
    args = text[k + 1 : args_close]

    # Reconstruct the parenthesized receiver and any identifier chain before it.
    depth = 0
    r = close_pos
    open_pos = -1
    while r >= 0:
        if text[r] == ")":
            depth += 1
        elif text[r] == "(":
            depth -= 1
            if depth == 0:
                open_pos = r
                break
        r -= 1
    if open_pos == -1:
        return None, close_pos + 1
    s = open_pos - 1
    while s >= 0 and text[s].isspace():
        s -= 1
    chain_start = s + 1
    while s >= 0 and (text[s].isalnum() or text[s] in "_$."):
        s -= 1
    chain_start = s + 1
    receiver = collapse_ws(text[chain_start : close_pos + 1])
    final = member.split(".")[-1]
    cand = CallCandidate(
        callee=f"{receiver}.{member}",
        receiver=receiver,
        final=final,
        pos=j,
        arg_count=_count_args(args),
        selectorish=options or ".selector" in args or "abi.encode" in args,
    )
    return cand, k + 1


def _skip_ws(text: str, i: int, hi: int) -> int:
    while i < hi and text[i].isspace():
        i += 1
    return i


def _count_args(args: str) -> int:
    if not args.strip():
        return 0
    return len(split_top_level(args, ",")) or (1 if args.strip() else 0)


def classify_call(
    cand: CallCandidate, type_map: dict[str, str], type_names: set[str]
) -> CallKind | None:
    """Assign a call kind, or None when the candidate is a cast/constructor."""
    if not cand.receiver:
        name = cand.final
        if name in type_names or ELEMENTARY_TYPES.match(name) or name == "payable":
            return None
        return CallKind.INTERNAL
    head = cand.receiver.split(".", 1)[0].split("(", 1)[0].strip()
    if head in ("this", "super") and "(" not in cand.receiver:
        return CallKind.INTERNAL
    if cand.final in LOW_LEVEL_MEMBERS and (
        _address_like(cand.receiver, type_map) or cand.selectorish
    ):
        return CallKind.LOW_LEVEL
    return CallKind.EXTERNAL_MEMBER


def _address_like(receiver: str, type_map: dict[str, str]) -> bool:
    r = receiver.strip()
    if not r:
        return False
    if "address(" in r or "payable(" in r or r == "msg.sender" or r.endswith(".sender"):
        return True
    if IDENT_RE.fullmatch(r):
        declared = type_map.get(r, "")
        return declared.split(" ")[0].startswith("address") if declared else False
    return False
