"""Typed functional-dependency graph of a contract, with DOT export.

Node ids follow ``<contract>.<kind>.<name>``; loop and conditional nodes
extend their enclosing function's id so the owner is recoverable from the
id alone.  Edge lists are kept sorted so equal inputs serialize to
byte-equal output.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .model import CallKind, ContractDef, FunctionDef, Statement, StatementKind


class NodeKind(str, Enum):
    CONTRACT = "contract"
    FUNCTION = "function"
    CONSTRUCTOR = "constructor"
    MODIFIER = "modifier"
    STATE_VAR = "state_var"
    EVENT = "event"
    STRUCT = "struct"
    LOOP = "loop"
    CONDITIONAL = "conditional"
    EXTERNAL_BOUNDARY = "external_boundary"


class EdgeKind(str, Enum):
    DATA_WRITE = "data_write"
    DATA_READ = "data_read"
    INPUT_DEPENDENCY = "input_dependency"
    INITIALIZATION = "initialization"
    SYSTEMIC_CALL = "systemic_call"
    EMITS = "emits"
    GUARDED_BY = "guarded_by"
    CONTAINS = "contains"


@dataclass(frozen=True)
class GraphNode:
    id: str
    kind: NodeKind
    label: str
    line: int
    depth: int = 0


@dataclass(frozen=True)
class GraphEdge:
    src: str
    dst: str
    kind: EdgeKind
    line: int
    label: str = ""


@dataclass
class DependencyGraph:
    contract_name: str
    nodes: list[GraphNode] = field(default_factory=list)
    edges: list[GraphEdge] = field(default_factory=list)

    def node_ids(self) -> set[str]:
        return {n.id for n in self.nodes}

    def sort(self) -> None:
        self.nodes.sort(key=lambda n: n.id)
        self.edges.sort(key=lambda e: (e.src, e.kind.value, e.dst, e.line))


def node_id(contract: str, kind: NodeKind | str, name: str) -> str:
    kind_value = kind.value if isinstance(kind, NodeKind) else kind
    return f"{contract}.{kind_value}.{name}"


_SHAPE = {
    NodeKind.CONTRACT: "box",
    NodeKind.FUNCTION: "ellipse",
    NodeKind.CONSTRUCTOR: "ellipse",
    NodeKind.MODIFIER: "trapezium",
    NodeKind.STATE_VAR: "cylinder",
    NodeKind.EVENT: "note",
    NodeKind.STRUCT: "folder",
    NodeKind.LOOP: "hexagon",
    NodeKind.CONDITIONAL: "diamond",
    NodeKind.EXTERNAL_BOUNDARY: "doubleoctagon",
}

_EDGE_ATTRS = {
    EdgeKind.DATA_WRITE: "style=solid",
    EdgeKind.DATA_READ: "style=dashed",
    EdgeKind.INITIALIZATION: "style=bold",
    EdgeKind.SYSTEMIC_CALL: "style=dotted",
    EdgeKind.INPUT_DEPENDENCY: "style=solid, arrowhead=empty",
    EdgeKind.EMITS: "style=dashed, arrowhead=vee",
    EdgeKind.GUARDED_BY: "style=dotted, arrowhead=diamond",
    EdgeKind.CONTAINS: "style=solid, arrowhead=none",
}


def build_graph(contract: ContractDef) -> DependencyGraph:
    """Build the dependency graph of a contract with resolved access sets."""
    g = DependencyGraph(contract_name=contract.name)
    cname = contract.name
    declared: dict[str, GraphNode] = {}

    def add_node(node: GraphNode) -> None:
        if node.id not in declared:
            declared[node.id] = node
            g.nodes.append(node)

    add_node(GraphNode(node_id(cname, NodeKind.CONTRACT, cname), NodeKind.CONTRACT, cname, contract.line_span[0]))
    for v in contract.state_vars:
        add_node(GraphNode(node_id(cname, NodeKind.STATE_VAR, v.name), NodeKind.STATE_VAR, v.name, v.line))
    for ev in contract.events:
        add_node(GraphNode(node_id(cname, NodeKind.EVENT, ev.name), NodeKind.EVENT, ev.name, ev.line))
    for st in contract.structs:
        add_node(GraphNode(node_id(cname, NodeKind.STRUCT, st.name), NodeKind.STRUCT, st.name, st.line))
    for md in contract.modifiers:
        add_node(GraphNode(node_id(cname, NodeKind.MODIFIER, md.name), NodeKind.MODIFIER, md.name, md.line_span[0]))
    for fn in contract.functions:
        add_node(GraphNode(node_id(cname, NodeKind.FUNCTION, fn.name), NodeKind.FUNCTION, fn.name, fn.line_span[0]))
    if contract.constructor is not None:
        ctor = contract.constructor
        add_node(
            GraphNode(node_id(cname, NodeKind.CONSTRUCTOR, "constructor"), NodeKind.CONSTRUCTOR, "constructor", ctor.line_span[0])
        )

    state_ids = {v.name for v in contract.state_vars} | {v.name for v in contract.parent_state_vars}
    for v in contract.parent_state_vars:
        if any(fn_uses(fn, v.name) for fn in contract.all_functions()):
            add_node(GraphNode(node_id(cname, NodeKind.STATE_VAR, v.name), NodeKind.STATE_VAR, v.name, v.line))

    event_names = {ev.name for ev in contract.events}
    modifier_names = {md.name for md in contract.modifiers}
    struct_names = {st.name for st in contract.structs}
    function_names = {fn.name for fn in contract.functions}
    boundary_id = node_id(cname, NodeKind.EXTERNAL_BOUNDARY, "external")

    def fn_node_id(fn: FunctionDef) -> str:
        if contract.constructor is fn:
            return node_id(cname, NodeKind.CONSTRUCTOR, "constructor")
        return node_id(cname, NodeKind.FUNCTION, fn.name)

    for fn in contract.all_functions():
        fid = fn_node_id(fn)
        is_ctor = contract.constructor is fn

        for name in sorted(fn.writes):
            if name in state_ids:
                vid = node_id(cname, NodeKind.STATE_VAR, name)
                if vid in declared:
                    g.edges.append(GraphEdge(fid, vid, EdgeKind.DATA_WRITE, fn.write_lines.get(name, fn.line_span[0])))
                    if is_ctor:
                        g.edges.append(
                            GraphEdge(fid, vid, EdgeKind.INITIALIZATION, fn.write_lines.get(name, fn.line_span[0]))
                        )
        for name in sorted(fn.reads):
            if name in state_ids:
                vid = node_id(cname, NodeKind.STATE_VAR, name)
                if vid in declared:
                    g.edges.append(GraphEdge(fid, vid, EdgeKind.DATA_READ, fn.read_lines.get(name, fn.line_span[0])))

        # Input dependencies: state read before any write, or struct-typed params.
        for name in sorted(fn.reads_before_write):
            vid = node_id(cname, NodeKind.STATE_VAR, name)
            if vid in declared:
                g.edges.append(GraphEdge(vid, fid, EdgeKind.INPUT_DEPENDENCY, fn.read_lines.get(name, fn.line_span[0])))
        for p in fn.params:
            base_type = p.type_name.split(" ")[0].split("[")[0]
            if base_type in struct_names:
                sid = node_id(cname, NodeKind.STRUCT, base_type)
                g.edges.append(GraphEdge(sid, fid, EdgeKind.INPUT_DEPENDENCY, fn.line_span[0]))

        for mod in fn.modifier_names():
            if mod in modifier_names:
                g.edges.append(
                    GraphEdge(fid, node_id(cname, NodeKind.MODIFIER, mod), EdgeKind.GUARDED_BY, fn.line_span[0])
                )

        for stmt in fn.statements():
            if stmt.kind is StatementKind.EMIT:
                emitted = _emitted_event(stmt)
                if emitted in event_names:
                    g.edges.append(
                        GraphEdge(fid, node_id(cname, NodeKind.EVENT, emitted), EdgeKind.EMITS, stmt.line)
                    )

        for call in fn.calls:
            if call.kind in (CallKind.LOW_LEVEL, CallKind.EXTERNAL_MEMBER):
                if boundary_id not in declared:
                    add_node(GraphNode(boundary_id, NodeKind.EXTERNAL_BOUNDARY, "external", 0))
                g.edges.append(GraphEdge(fid, boundary_id, EdgeKind.SYSTEMIC_CALL, call.line, label=call.callee))
            elif is_ctor and call.kind is CallKind.INTERNAL:
                target = call.callee.split(".")[-1]
                if target in function_names:
                    g.edges.append(
                        GraphEdge(fid, node_id(cname, NodeKind.FUNCTION, target), EdgeKind.INITIALIZATION, call.line)
                    )

        ordinal = 0
        for stmt in fn.body:
            if stmt.kind in (StatementKind.IF, StatementKind.LOOP):
                ordinal += 1
                kind = NodeKind.CONDITIONAL if stmt.kind is StatementKind.IF else NodeKind.LOOP
                nid = f"{fid}.{kind.value}.{ordinal}"
                first_word = stmt.text.split(" ")[0].split("(")[0] or kind.value
                add_node(GraphNode(nid, kind, f"{first_word} L{stmt.line}", stmt.line, depth=_nesting_depth(stmt)))
                g.edges.append(GraphEdge(fid, nid, EdgeKind.CONTAINS, stmt.line))

    g.edges = _dedupe(g.edges)
    g.sort()
    return g


def fn_uses(fn: FunctionDef, name: str) -> bool:
    return name in fn.writes or name in fn.reads


def _emitted_event(stmt: Statement) -> str:
    rest = stmt.text[len("emit") :].strip()
    name = rest.split("(", 1)[0].strip()
    return name.split(".")[-1]


def _nesting_depth(stmt: Statement) -> int:
    block_kinds = (StatementKind.IF, StatementKind.LOOP, StatementKind.TRY_CATCH)
    inner = [c for c in stmt.children if c.kind in block_kinds]
    if not inner:
        return 1
    return 1 + max(_nesting_depth(c) for c in inner)


def _dedupe(edges: list[GraphEdge]) -> list[GraphEdge]:
    seen: set[tuple] = set()
    out = []
    for e in edges:
        key = (e.src, e.dst, e.kind, e.line, e.label)
        if key not in seen:
            seen.add(key)
            out.append(e)
    return out


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(graph: DependencyGraph) -> str:
    """Render the graph in DOT form; byte-identical for equal graphs."""
    lines = [f'digraph "{_dot_escape(graph.contract_name)}" {{']
    lines.append("  rankdir=LR;")
    for node in sorted(graph.nodes, key=lambda n: n.id):
        label = node.label
        if node.kind in (NodeKind.LOOP, NodeKind.CONDITIONAL) and node.depth > 1:
            label = f"{label} depth={node.depth}"
        attrs = f'label="{_dot_escape(label)}", shape={_SHAPE[node.kind]}'
        if node.kind is NodeKind.CONSTRUCTOR:
            attrs += ", peripheries=2"
        lines.append(f'  "{_dot_escape(node.id)}" [{attrs}];')
    for edge in sorted(graph.edges, key=lambda e: (e.src, e.kind.value, e.dst, e.line)):
        attrs = _EDGE_ATTRS[edge.kind]
        if edge.label:
            attrs += f', label="{_dot_escape(edge.label)}"'
        lines.append(f'  "{_dot_escape(edge.src)}" -> "{_dot_escape(edge.dst)}" [{attrs}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def subgraph_for_warning(graph: DependencyGraph, ids: list[str]) -> DependencyGraph:
    """Induced subgraph over the given nodes plus their one-hop neighborhood."""
    known = graph.node_ids()
    for nid in ids:
        if nid not in known:
            raise ValueError(f"unknown graph node id: {nid}")
    selected = set(ids)
    expanded = set(selected)
    for e in graph.edges:
        if e.src in selected:
            expanded.add(e.dst)
        if e.dst in selected:
            expanded.add(e.src)
    sub = DependencyGraph(contract_name=graph.contract_name)
    sub.nodes = [n for n in graph.nodes if n.id in expanded]
    sub.edges = [e for e in graph.edges if e.src in expanded and e.dst in expanded]
    sub.sort()
    return sub
