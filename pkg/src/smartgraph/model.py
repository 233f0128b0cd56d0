"""Structured model of a Solidity source file.

The model is deliberately shallow: declarations, statement skeletons and
extracted identifiers, not full expression trees.  Everything downstream
(graph construction, heuristic detectors) operates on names, ordering and
containment, so expressions stay as raw text.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional


class ContractKind(str, Enum):
    CONTRACT = "contract"
    INTERFACE = "interface"
    LIBRARY = "library"


class Visibility(str, Enum):
    PUBLIC = "public"
    EXTERNAL = "external"
    INTERNAL = "internal"
    PRIVATE = "private"
    DEFAULT = "default"


class Mutability(str, Enum):
    NONE = "none"
    VIEW = "view"
    PURE = "pure"
    PAYABLE = "payable"


class StatementKind(str, Enum):
    ASSIGNMENT = "assignment"
    REQUIRE = "require"
    ASSERT = "assert"
    REVERT = "revert"
    IF = "if"
    LOOP = "loop"
    EMIT = "emit"
    CALL = "call"
    RETURN = "return"
    TRY_CATCH = "try_catch"
    OTHER = "other"


class CallKind(str, Enum):
    INTERNAL = "internal"
    EXTERNAL_MEMBER = "external_member"
    LOW_LEVEL = "low_level"


class DiagnosticSeverity(str, Enum):
    WARNING = "warning"
    ERROR = "error"


@dataclass
class ParseDiagnostic:
    line: int
    severity: DiagnosticSeverity
    message: str


@dataclass
class ImportRef:
    path: str
    line: int


@dataclass
class ParamDef:
    type_name: str
    name: str = ""


@dataclass
class CallSite:
    """One call expression: ``rebase()``, ``token.transfer(...)``, ``addr.call(...)``."""

    callee: str
    kind: CallKind
    line: int
    arg_count: int = 0


@dataclass
class Statement:
    kind: StatementKind
    line: int
    text: str
    children: list["Statement"] = field(default_factory=list)

    def walk(self) -> Iterator["Statement"]:
        """Yield this statement and all nested statements in source order."""
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass
class StateVarDef:
    name: str
    type_name: str
    visibility: Visibility = Visibility.DEFAULT
    is_constant: bool = False
    line: int = 0


@dataclass
class EventDef:
    name: str
    params_text: str = ""
    line: int = 0


@dataclass
class StructDef:
    name: str
    fields: list[ParamDef] = field(default_factory=list)
    line: int = 0


@dataclass
class ModifierDef:
    name: str
    params: list[ParamDef] = field(default_factory=list)
    body: list[Statement] = field(default_factory=list)
    line_span: tuple[int, int] = (0, 0)


@dataclass
class FunctionDef:
    name: str
    visibility: Visibility = Visibility.DEFAULT
    mutability: Mutability = Mutability.NONE
    modifiers: list[str] = field(default_factory=list)
    params: list[ParamDef] = field(default_factory=list)
    returns: list[ParamDef] = field(default_factory=list)
    body: list[Statement] = field(default_factory=list)
    line_span: tuple[int, int] = (0, 0)
    # Populated by resolve_access_sets.
    writes: set[str] = field(default_factory=set)
    reads: set[str] = field(default_factory=set)
    # State vars whose first body occurrence is a read (drives input edges).
    reads_before_write: set[str] = field(default_factory=set)
    write_lines: dict[str, int] = field(default_factory=dict)
    read_lines: dict[str, int] = field(default_factory=dict)
    calls: list[CallSite] = field(default_factory=list)
    # Raw char offsets of the body into the noise-stripped source.
    body_span: tuple[int, int] = field(default=(0, 0), repr=False, compare=False)

    def modifier_names(self) -> list[str]:
        """Base names of attached modifiers, argument text stripped."""
        return [m.split("(", 1)[0].strip() for m in self.modifiers]

    def statements(self) -> Iterator[Statement]:
        """All body statements flattened in source order."""
        for stmt in self.body:
            yield from stmt.walk()


@dataclass
class ContractDef:
    name: str
    kind: ContractKind = ContractKind.CONTRACT
    inherits: list[str] = field(default_factory=list)
    state_vars: list[StateVarDef] = field(default_factory=list)
    functions: list[FunctionDef] = field(default_factory=list)
    modifiers: list[ModifierDef] = field(default_factory=list)
    events: list[EventDef] = field(default_factory=list)
    structs: list[StructDef] = field(default_factory=list)
    constructor: Optional[FunctionDef] = None
    line_span: tuple[int, int] = (0, 0)
    # State vars inherited from parents resolved within the same unit.
    parent_state_vars: list[StateVarDef] = field(default_factory=list)

    def state_scope(self) -> dict[str, str]:
        """Name -> declared type for own and inherited state variables."""
        scope = {v.name: v.type_name for v in self.parent_state_vars}
        scope.update({v.name: v.type_name for v in self.state_vars})
        return scope

    def all_functions(self) -> list[FunctionDef]:
        """Functions plus the constructor, when present."""
        out = list(self.functions)
        if self.constructor is not None:
            out.append(self.constructor)
        return out


@dataclass
class SourceUnit:
    path: str
    pragmas: list[str] = field(default_factory=list)
    imports: list[ImportRef] = field(default_factory=list)
    contracts: list[ContractDef] = field(default_factory=list)
    diagnostics: list[ParseDiagnostic] = field(default_factory=list)
