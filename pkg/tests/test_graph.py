"""Dependency graph construction, DOT export, warning subgraphs."""

from pathlib import Path

import pytest

from dotparse import validate_dot
from smartgraph.access import resolve_unit
from smartgraph.graph import (
    DependencyGraph,
    EdgeKind,
    NodeKind,
    build_graph,
    export_dot,
    node_id,
    subgraph_for_warning,
)
from smartgraph.parser import parse_source

FIXTURES = Path(__file__).parent / "fixtures"


def graph_for(name):
    unit = resolve_unit(parse_source((FIXTURES / name).read_text(), path=name))
    return build_graph(unit.contracts[0])


def edge_set(graph, kinds=None):
    return {
        (e.src, e.dst, e.kind)
        for e in graph.edges
        if kinds is None or e.kind in kinds
    }


def test_auction_graph_edges():
    g = graph_for("simple_auction.sol")
    fn = node_id("SimpleAuction", NodeKind.FUNCTION, "placeBid")
    bid = node_id("SimpleAuction", NodeKind.STATE_VAR, "highestBid")
    bidder = node_id("SimpleAuction", NodeKind.STATE_VAR, "highestBidder")
    event = node_id("SimpleAuction", NodeKind.EVENT, "NewBid")
    core = edge_set(g, kinds={EdgeKind.DATA_WRITE, EdgeKind.DATA_READ, EdgeKind.EMITS})
    assert core == {
        (fn, bidder, EdgeKind.DATA_WRITE),
        (fn, bid, EdgeKind.DATA_WRITE),
        (fn, bid, EdgeKind.DATA_READ),
        (fn, event, EdgeKind.EMITS),
    }
    # Beyond the core: highestBid is read before written, an input dependency.
    assert edge_set(g) - core == {(bid, fn, EdgeKind.INPUT_DEPENDENCY)}


def test_paradigm_graph_edges():
    g = graph_for("smart_paradigm.sol")
    fn = node_id("SmartParadigm", NodeKind.FUNCTION, "updateSupply")
    assert edge_set(g) == {
        (fn, node_id("SmartParadigm", NodeKind.MODIFIER, "onlyOwner"), EdgeKind.GUARDED_BY),
        (fn, node_id("SmartParadigm", NodeKind.STATE_VAR, "totalSupply"), EdgeKind.DATA_WRITE),
        (fn, node_id("SmartParadigm", NodeKind.EVENT, "Transfer"), EdgeKind.EMITS),
    }


def test_state_vars_only_contract_has_nodes_no_edges():
    unit = resolve_unit(parse_source("contract Flat { uint256 public a; uint256 public b; }"))
    g = build_graph(unit.contracts[0])
    assert g.edges == []
    assert {n.kind for n in g.nodes} == {NodeKind.CONTRACT, NodeKind.STATE_VAR}
    assert len(g.nodes) == 3


def test_empty_contract_yields_single_node():
    unit = resolve_unit(parse_source("contract Empty {}"))
    g = build_graph(unit.contracts[0])
    assert len(g.nodes) == 1
    assert g.nodes[0].kind is NodeKind.CONTRACT
    assert g.edges == []


def test_endpoint_closure_and_unique_ids():
    for name in ("simple_auction.sol", "smart_paradigm.sol", "shadowing.sol"):
        g = graph_for(name)
        ids = [n.id for n in g.nodes]
        assert len(ids) == len(set(ids))
        known = set(ids)
        for e in g.edges:
            assert e.src in known and e.dst in known


def test_edges_sorted_deterministically():
    g = graph_for("simple_auction.sol")
    keys = [(e.src, e.kind.value, e.dst, e.line) for e in g.edges]
    assert keys == sorted(keys)


def test_write_edges_match_access_sets_bijectively():
    unit = resolve_unit(parse_source((FIXTURES / "corpus" / "d01_vuln.sol").read_text()))
    c = unit.contracts[0]
    g = build_graph(c)
    for fn in c.functions:
        fid = node_id(c.name, NodeKind.FUNCTION, fn.name)
        edge_targets = {
            e.dst.rsplit(".", 1)[1]
            for e in g.edges
            if e.src == fid and e.kind is EdgeKind.DATA_WRITE
        }
        assert edge_targets == fn.writes


def test_constructor_initialization_edges():
    src = """
    contract C {
        uint256 public supplyCap;
        constructor() {
            supplyCap = 10;
            setup();
        }
        function setup() internal {}
    }
    """
    unit = resolve_unit(parse_source(src))
    g = build_graph(unit.contracts[0])
    ctor = node_id("C", NodeKind.CONSTRUCTOR, "constructor")
    init_edges = edge_set(g, kinds={EdgeKind.INITIALIZATION})
    assert (ctor, node_id("C", NodeKind.STATE_VAR, "supplyCap"), EdgeKind.INITIALIZATION) in init_edges
    assert (ctor, node_id("C", NodeKind.FUNCTION, "setup"), EdgeKind.INITIALIZATION) in init_edges


def test_loop_and_conditional_nodes_top_level_only():
    src = """
    contract C {
        uint256 public total;
        function f(uint256 n) public {
            for (uint i = 0; i < n; i++) {
                if (i > 2) {
                    total += i;
                }
            }
            if (n == 0) {
                total = 0;
            }
        }
    }
    """
    unit = resolve_unit(parse_source(src))
    g = build_graph(unit.contracts[0])
    loops = [n for n in g.nodes if n.kind is NodeKind.LOOP]
    conds = [n for n in g.nodes if n.kind is NodeKind.CONDITIONAL]
    assert len(loops) == 1
    assert len(conds) == 1  # the nested if is summarized by depth, not a node
    assert loops[0].depth == 2
    assert conds[0].depth == 1
    fid = node_id("C", NodeKind.FUNCTION, "f")
    assert loops[0].id.startswith(fid + ".")
    contains = edge_set(g, kinds={EdgeKind.CONTAINS})
    assert (fid, loops[0].id, EdgeKind.CONTAINS) in contains
    assert (fid, conds[0].id, EdgeKind.CONTAINS) in contains


def test_systemic_calls_route_to_boundary():
    src = """
    contract C {
        IERC20 public token;
        function f(address a) public {
            token.transfer(a, 1);
            a.call("");
        }
    }
    """
    unit = resolve_unit(parse_source(src))
    g = build_graph(unit.contracts[0])
    boundary = node_id("C", NodeKind.EXTERNAL_BOUNDARY, "external")
    assert boundary in g.node_ids()
    sys_edges = [e for e in g.edges if e.kind is EdgeKind.SYSTEMIC_CALL]
    assert {e.dst for e in sys_edges} == {boundary}
    assert {e.label for e in sys_edges} == {"token.transfer", "a.call"}


def test_export_dot_matches_hand_written_golden():
    g = graph_for("simple_auction.sol")
    golden = (FIXTURES / "expected" / "simple_auction.dot").read_text()
    assert export_dot(g) == golden


def test_export_dot_contains_both_styles_for_bid():
    dot = export_dot(graph_for("simple_auction.sol"))
    arrow = '"SimpleAuction.function.placeBid" -> "SimpleAuction.state_var.highestBid"'
    assert dot.count(arrow) == 2
    assert f"{arrow} [style=solid];" in dot
    assert f"{arrow} [style=dashed];" in dot


def test_export_dot_empty_graph():
    unit = resolve_unit(parse_source("contract Empty {}"))
    dot = export_dot(build_graph(unit.contracts[0]))
    validate_dot(dot)
    node_lines = [l for l in dot.splitlines() if "shape=" in l]
    assert len(node_lines) == 1


def test_export_dot_is_valid_per_independent_parser():
    for name in ("simple_auction.sol", "smart_paradigm.sol", "shadowing.sol"):
        validate_dot(export_dot(graph_for(name)))


def test_export_dot_deterministic():
    a = export_dot(graph_for("simple_auction.sol"))
    b = export_dot(graph_for("simple_auction.sol"))
    assert a == b


def test_subgraph_identity():
    g = graph_for("simple_auction.sol")
    sub = subgraph_for_warning(g, sorted(g.node_ids()))
    assert edge_set(sub) == edge_set(g)
    assert sub.node_ids() == g.node_ids()


def test_subgraph_neighborhood():
    # Manual enumeration: placeBid touches highestBid (rw), highestBidder (w),
    # NewBid (emit); the contract node is isolated, so it stays out.
    g = graph_for("simple_auction.sol")
    fn = node_id("SimpleAuction", NodeKind.FUNCTION, "placeBid")
    sub = subgraph_for_warning(g, [fn])
    assert sub.node_ids() == {
        fn,
        node_id("SimpleAuction", NodeKind.STATE_VAR, "highestBid"),
        node_id("SimpleAuction", NodeKind.STATE_VAR, "highestBidder"),
        node_id("SimpleAuction", NodeKind.EVENT, "NewBid"),
    }
    assert set(sub.edges) <= set(g.edges)


def test_subgraph_empty_selection():
    g = graph_for("simple_auction.sol")
    sub = subgraph_for_warning(g, [])
    assert sub.nodes == [] and sub.edges == []
    assert sub.contract_name == "SimpleAuction"


def test_subgraph_unknown_id_raises_with_name():
    g = graph_for("simple_auction.sol")
    with pytest.raises(ValueError, match="SimpleAuction.function.ghost"):
        subgraph_for_warning(g, [node_id("SimpleAuction", NodeKind.FUNCTION, "ghost")])


def test_subgraph_edges_monotone():
    g = graph_for("smart_paradigm.sol")
    for nid in sorted(g.node_ids()):
        sub = subgraph_for_warning(g, [nid])
        assert set(sub.edges) <= set(g.edges)
