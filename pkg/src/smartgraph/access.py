"""Read/write set resolution for parsed contracts.

A write is any assignment (including compound operators), increment or
decrement, ``delete``, or ``.push``/``.pop`` whose leftmost identifier names
a declared state variable of the contract or a resolved parent.  Any other
appearance of a state-variable name in a body counts as a read.  Locals,
parameters and named returns shadow state variables from their declaration
onward (in flattened source order).
"""

from __future__ import annotations

import re

from .lexer import IDENT_RE, find_assignment, local_declarations
from .model import ContractDef, FunctionDef, SourceUnit

_INCDEC_RE = re.compile(
    r"(?:\+\+|--)\s*([A-Za-z_$][\w$]*)|([A-Za-z_$][\w$]*)(?:\s*(?:\[[^\]]*\]\s*)*)(?:\+\+|--)"
)
_PUSH_POP_RE = re.compile(r"([A-Za-z_$][\w$]*)(?:\s*\[[^\]]*\]\s*)*\s*\.\s*(?:push|pop)\s*\(")


def resolve_access_sets(contract: ContractDef) -> ContractDef:
    """Populate writes/reads for every function of the contract, in place."""
    state_names = set(contract.state_scope())
    for fn in contract.all_functions():
        _resolve_function(fn, state_names)
    return contract


def resolve_unit(unit: SourceUnit) -> SourceUnit:
    """Resolve access sets for every contract of a parsed unit."""
    for contract in unit.contracts:
        resolve_access_sets(contract)
    return unit


def _resolve_function(fn: FunctionDef, state_names: set[str]) -> None:
    fn.writes = set()
    fn.reads = set()
    fn.reads_before_write = set()
    fn.write_lines = {}
    fn.read_lines = {}
    shadows = {p.name for p in fn.params if p.name}
    shadows |= {r.name for r in fn.returns if r.name}
    first_seen: set[str] = set()

    for stmt in fn.statements():
        declared = [name for name, _ in local_declarations(stmt.text)]
        shadows.update(declared)
        write_spans = _write_target_spans(stmt.text)

        for m in IDENT_RE.finditer(stmt.text):
            name = m.group()
            if name in shadows or name not in state_names:
                continue
            before = stmt.text[: m.start()].rstrip()
            if before.endswith("."):
                continue
            if (m.start(), m.end()) in write_spans:
                fn.writes.add(name)
                fn.write_lines.setdefault(name, stmt.line)
                if name not in first_seen:
                    first_seen.add(name)
            else:
                fn.reads.add(name)
                fn.read_lines.setdefault(name, stmt.line)
                if name not in first_seen:
                    first_seen.add(name)
                    fn.reads_before_write.add(name)


def _write_target_spans(text: str) -> set[tuple[int, int]]:
    """Char spans of identifiers that are mutation targets in this statement."""
    spans: set[tuple[int, int]] = set()

    assign = find_assignment(text)
    if assign is not None:
        lhs = text[: assign[0]]
        if lhs.strip().startswith("("):
            for part_span in _tuple_element_spans(lhs):
                spans.add(part_span)
        elif not local_declarations(text):
            m = IDENT_RE.search(lhs)
            if m:
                spans.add((m.start(), m.end()))

    if text.startswith("delete"):
        m = IDENT_RE.search(text, len("delete"))
        if m:
            spans.add((m.start(), m.end()))

    for m in _INCDEC_RE.finditer(text):
        group = 1 if m.group(1) else 2
        spans.add((m.start(group), m.end(group)))

    for m in _PUSH_POP_RE.finditer(text):
        spans.add((m.start(1), m.end(1)))

    return spans


def _tuple_element_spans(lhs: str) -> list[tuple[int, int]]:
    """Identifier spans assigned by a destructuring target like ``(a, b)``."""
    open_idx = lhs.index("(")
    inner_start = open_idx + 1
    inner = lhs[inner_start:]
    close = inner.rfind(")")
    if close != -1:
        inner = inner[:close]
    spans = []
    offset = inner_start
    for part in inner.split(","):
        stripped = part.strip()
        tokens = stripped.split()
        # Typed entries declare locals, not state writes.
        if len(tokens) == 1 and IDENT_RE.fullmatch(tokens[0]):
            m = IDENT_RE.search(part)
            if m:
                spans.append((offset + m.start(), offset + m.end()))
        offset += len(part) + 1
    return spans
