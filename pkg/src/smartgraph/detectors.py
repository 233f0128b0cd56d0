"""Heuristic detectors for business-logic vulnerability patterns.

Each detector flags a pattern correlated with logical flaws; findings are
triage input for a human reviewer, not proven vulnerabilities.  Catalog:

  D1  stake/unstake write-set asymmetry
  D2  exit function without any validation
  D3  unprotected public/external entry manipulating state via a parameter
  D4  price update and transfer decoupled (ordering or distance)
  D5  supply/fee/price/rate state fed by an external call without a guard
  D6  mint/burn touching supply without modifier or require
  D7  dense arithmetic in functions with multiple state transitions
  D8  low-level call result never checked
  D9  confusably similar declared names
  D10 signature drift against a baseline version
  D11 collateral borrow/release asymmetry (D1 over collateral keywords)
  D12 point earn/spend asymmetry (D1 over point keywords)
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations

from .config import ConfigError, KeywordConfig
from .graph import NodeKind, node_id
from .lexer import IDENT_RE, find_assignment, local_declarations, word_in
from .model import (
    CallKind,
    ContractDef,
    FunctionDef,
    SourceUnit,
    Statement,
    StatementKind,
    Visibility,
)
from .parser import call_candidates, classify_call


class Severity(str, Enum):
    INFO = "info"
    MEDIUM = "medium"
    HIGH = "high"


# Detector id -> risk category.
DETECTOR_CATEGORIES = {
    "D1_stake_asymmetry": "economic_logic",
    "D2_missing_exit_validation": "economic_logic",
    "D3_unprotected_entry": "operational",
    "D4_price_lag": "economic_logic",
    "D5_external_dependency": "state_integrity",
    "D6_supply_hooks": "state_integrity",
    "D7_complex_calculation": "operational",
    "D8_unchecked_low_level": "operational",
    "D9_naming_ambiguity": "semantic",
    "D10_legacy_signature": "semantic",
    "D11_collateral_logic": "state_integrity",
    "D12_point_system": "economic_logic",
}

ALL_DETECTOR_IDS = tuple(DETECTOR_CATEGORIES)


@dataclass
class Warning:
    detector: str
    severity: Severity
    contract: str
    line: int
    message: str
    function: str | None = None
    related_symbols: list[str] = field(default_factory=list)
    related_nodes: list[str] = field(default_factory=list)

    @property
    def category(self) -> str:
        return DETECTOR_CATEGORIES[self.detector]

    def to_dict(self) -> dict:
        return {
            "detector": self.detector,
            "category": self.category,
            "severity": self.severity.value,
            "contract": self.contract,
            "function": self.function,
            "line": self.line,
            "message": self.message,
            "related_symbols": list(self.related_symbols),
            "related_nodes": list(self.related_nodes),
        }


def _matches(name: str, keywords: list[str]) -> bool:
    lowered = name.lower()
    return any(kw in lowered for kw in keywords)


def _fn_node(contract: ContractDef, fn: FunctionDef) -> str:
    if contract.constructor is fn:
        return node_id(contract.name, NodeKind.CONSTRUCTOR, "constructor")
    return node_id(contract.name, NodeKind.FUNCTION, fn.name)


def _var_node(contract: ContractDef, name: str) -> str:
    return node_id(contract.name, NodeKind.STATE_VAR, name)


def _fn_type_map(contract: ContractDef, fn: FunctionDef) -> dict[str, str]:
    tmap = contract.state_scope()
    for p in fn.params:
        if p.name:
            tmap[p.name] = p.type_name
    for r in fn.returns:
        if r.name:
            tmap[r.name] = r.type_name
    for stmt in fn.statements():
        for nm, ty in local_declarations(stmt.text):
            tmap[nm] = ty
    return tmap


def _calls_in_text(
    text: str, tmap: dict[str, str], type_names: set[str]
) -> list[tuple[str, str, CallKind]]:
    """(callee, final segment, kind) for every call expression in a text."""
    out = []
    for cand in call_candidates(text, 0, len(text)):
        kind = classify_call(cand, tmap, type_names)
        if kind is not None:
            out.append((cand.callee, cand.final, kind))
    return out


# ---------------------------------------------------------------------------
# D1 / D11 / D12: asymmetric writes between paired function families
# ---------------------------------------------------------------------------

_PAIR_KINDS = {
    "stake": ("D1_stake_asymmetry", ("Stake", "Unstake")),
    "collateral": ("D11_collateral_logic", ("Borrow", "Release")),
    "points": ("D12_point_system", ("Earn", "Spend")),
}


def detect_stake_asymmetry(
    contract: ContractDef, cfg: KeywordConfig, pair_kind: str = "stake"
) -> list[Warning]:
    detector, (entry_label, exit_label) = _PAIR_KINDS[pair_kind]
    if pair_kind == "stake":
        pairs = [(cfg.stake_names, cfg.unstake_names)]
    elif pair_kind == "collateral":
        pairs = cfg.collateral_pairs
    else:
        pairs = cfg.earn_spend_pairs

    out: list[Warning] = []
    for entry_kws, exit_kws in pairs:
        entry_fns = [fn for fn in contract.functions if _matches(fn.name, entry_kws)]
        exit_fns = [fn for fn in contract.functions if _matches(fn.name, exit_kws)]
        for f in entry_fns:
            if not f.writes:
                continue
            for g in exit_fns:
                for v in sorted(f.writes - g.writes):
                    out.append(
                        Warning(
                            detector=detector,
                            severity=Severity.MEDIUM,
                            contract=contract.name,
                            function=g.name,
                            line=g.line_span[0],
                            message=f"Inconsistent State Update: Missing {exit_label} Logic for {v}",
                            related_symbols=[f.name, g.name, v],
                            related_nodes=[
                                _fn_node(contract, f),
                                _fn_node(contract, g),
                                _var_node(contract, v),
                            ],
                        )
                    )
                for u in sorted(g.writes - f.writes):
                    out.append(
                        Warning(
                            detector=detector,
                            severity=Severity.MEDIUM,
                            contract=contract.name,
                            function=f.name,
                            line=f.line_span[0],
                            message=f"Inconsistent State Update: Missing {entry_label} Logic for {u}",
                            related_symbols=[f.name, g.name, u],
                            related_nodes=[
                                _fn_node(contract, f),
                                _fn_node(contract, g),
                                _var_node(contract, u),
                            ],
                        )
                    )
    return out


# ---------------------------------------------------------------------------
# D2: exit functions without any validation mechanism
# ---------------------------------------------------------------------------

_CHECK_KINDS = (
    StatementKind.REQUIRE,
    StatementKind.ASSERT,
    StatementKind.IF,
    StatementKind.TRY_CATCH,
)


def detect_missing_exit_validation(contract: ContractDef, cfg: KeywordConfig) -> list[Warning]:
    out: list[Warning] = []
    for fn in contract.functions:
        if not _matches(fn.name, cfg.exit_names):
            continue
        found_check = bool(fn.modifiers)
        if not found_check:
            found_check = any(stmt.kind in _CHECK_KINDS for stmt in fn.statements())
        if found_check:
            continue
        callees = []
        for call in fn.calls:
            if call.callee not in callees:
                callees.append(call.callee)
        out.append(
            Warning(
                detector="D2_missing_exit_validation",
                severity=Severity.HIGH,
                contract=contract.name,
                function=fn.name,
                line=fn.line_span[0],
                message=f"High Risk: Missing Validation Logic in function {fn.name}",
                related_symbols=callees,
                related_nodes=[_fn_node(contract, fn)],
            )
        )
    return out


# ---------------------------------------------------------------------------
# D3: unprotected public/external entry points
# ---------------------------------------------------------------------------


def detect_unprotected_entry(
    contract: ContractDef, unit: SourceUnit | None = None
) -> list[Warning]:
    contracts = unit.contracts if unit is not None else [contract]
    invoked: dict[str, set[tuple[str, str]]] = {}
    for c in contracts:
        for fn in c.all_functions():
            for call in fn.calls:
                target = call.callee.split(".")[-1]
                invoked.setdefault(target, set()).add((c.name, fn.name))

    state_names = set(contract.state_scope())
    out: list[Warning] = []
    for fn in contract.functions:
        if fn.visibility not in (Visibility.PUBLIC, Visibility.EXTERNAL):
            continue
        callers = invoked.get(fn.name, set()) - {(contract.name, fn.name)}
        if callers:
            continue
        if any("only" in name.lower() for name in fn.modifier_names()):
            continue
        for p in fn.params:
            if not p.name:
                continue
            hit_line = _param_flows_into_state(fn, p.name, state_names)
            if hit_line is None:
                continue
            out.append(
                Warning(
                    detector="D3_unprotected_entry",
                    severity=Severity.HIGH,
                    contract=contract.name,
                    function=fn.name,
                    line=hit_line,
                    message=(
                        "Potential Vulnerability: Unprotected external function "
                        f"{fn.name} manipulates state via param {p.name}"
                    ),
                    related_symbols=[fn.name, p.name],
                    related_nodes=[_fn_node(contract, fn)],
                )
            )
    return out


def _param_flows_into_state(fn: FunctionDef, param: str, state_names: set[str]) -> int | None:
    for stmt in fn.statements():
        if stmt.kind is not StatementKind.ASSIGNMENT:
            continue
        assign = find_assignment(stmt.text)
        if assign is None or local_declarations(stmt.text):
            continue
        op_pos, op = assign
        lhs = stmt.text[:op_pos]
        rhs = stmt.text[op_pos + len(op) :]
        target = IDENT_RE.search(lhs)
        if target is None:
            continue
        name = target.group()
        if name not in state_names or name not in fn.writes:
            continue
        index_text = " ".join(re.findall(r"\[([^\]]*)\]", lhs))
        if word_in(rhs, param) or word_in(index_text, param):
            return stmt.line
    return None


# ---------------------------------------------------------------------------
# D4: price update / transfer ordering and distance
# ---------------------------------------------------------------------------


def detect_price_lag(contract: ContractDef, cfg: KeywordConfig) -> list[Warning]:
    out: list[Warning] = []
    for fn in contract.all_functions():
        flat = list(fn.statements())
        if not flat:
            continue
        price_sites = []
        transfer_sites = []
        for call in fn.calls:
            final = call.callee.split(".")[-1].lower()
            idx = _statement_index(flat, call.line)
            if any(kw in final for kw in cfg.price_names):
                price_sites.append((idx, call))
            if any(kw in final for kw in cfg.transfer_names):
                transfer_sites.append((idx, call))
        if not price_sites or not transfer_sites:
            continue
        for cp_idx, cp in price_sites:
            for ct_idx, ct in transfer_sites:
                if ct_idx < cp_idx:
                    distance = cp_idx - ct_idx - 1
                    detail = (
                        f"transfer call '{ct.callee}' precedes price update '{cp.callee}' "
                        f"(distance {distance})"
                    )
                elif ct_idx - cp_idx - 1 > cfg.max_distance:
                    distance = ct_idx - cp_idx - 1
                    detail = (
                        f"{distance} statements separate price update '{cp.callee}' from "
                        f"transfer '{ct.callee}' (max allowed {cfg.max_distance})"
                    )
                else:
                    continue
                out.append(
                    Warning(
                        detector="D4_price_lag",
                        severity=Severity.HIGH,
                        contract=contract.name,
                        function=fn.name,
                        line=ct.line,
                        message=(
                            "Potential Price-Lag Vulnerability: Excessive logic gap between "
                            f"price update and transfer in {fn.name}: {detail}; intermediate "
                            "statements flagged for 'Flash Loan' or 'Price Manipulation' risk"
                        ),
                        related_symbols=[cp.callee, ct.callee],
                        related_nodes=[_fn_node(contract, fn)],
                    )
                )
    return out


def _statement_index(flat: list[Statement], line: int) -> int:
    best = 0
    for i, stmt in enumerate(flat):
        if stmt.line <= line:
            best = i
        else:
            break
    return best


# ---------------------------------------------------------------------------
# D5: critical state fed from external calls without range guards
# ---------------------------------------------------------------------------

_CRITICAL_NAME_PARTS = ("supply", "fee", "price", "rate")


def detect_external_dependency(contract: ContractDef) -> list[Warning]:
    out: list[Warning] = []
    type_names = {s.name for s in contract.structs} | {contract.name}
    state_names = set(contract.state_scope())
    for fn in contract.all_functions():
        tmap = None
        guarded: list[str] = [
            stmt.text
            for stmt in fn.statements()
            if stmt.kind in (StatementKind.REQUIRE, StatementKind.IF)
        ]
        for stmt in fn.statements():
            if stmt.kind is not StatementKind.ASSIGNMENT:
                continue
            assign = find_assignment(stmt.text)
            if assign is None or local_declarations(stmt.text):
                continue
            target = IDENT_RE.search(stmt.text[: assign[0]])
            if target is None:
                continue
            name = target.group()
            if name not in state_names or name not in fn.writes:
                continue
            if not any(part in name.lower() for part in _CRITICAL_NAME_PARTS):
                continue
            rhs = stmt.text[assign[0] + len(assign[1]) :]
            if tmap is None:
                tmap = _fn_type_map(contract, fn)
            external = [
                callee
                for callee, _final, kind in _calls_in_text(rhs, tmap, type_names)
                if kind in (CallKind.EXTERNAL_MEMBER, CallKind.LOW_LEVEL)
            ]
            if not external:
                continue
            if any(word_in(text, name) for text in guarded):
                continue
            out.append(
                Warning(
                    detector="D5_external_dependency",
                    severity=Severity.MEDIUM,
                    contract=contract.name,
                    function=fn.name,
                    line=stmt.line,
                    message=(
                        f"External Dependency: state variable '{name}' is assigned from an "
                        f"external call ({external[0]}) with no require/if guard mentioning it"
                    ),
                    related_symbols=[name] + external,
                    related_nodes=[_fn_node(contract, fn), _var_node(contract, name)],
                )
            )
    return out


# ---------------------------------------------------------------------------
# D6: arbitrary mint/burn hooks on supply state
# ---------------------------------------------------------------------------


def detect_supply_hooks(contract: ContractDef) -> list[Warning]:
    out: list[Warning] = []
    for fn in contract.functions:
        lowered = fn.name.lower()
        if "mint" not in lowered and "burn" not in lowered:
            continue
        supply_writes = sorted(v for v in fn.writes if "supply" in v.lower())
        if not supply_writes:
            continue
        if fn.modifiers:
            continue
        if any(stmt.kind is StatementKind.REQUIRE for stmt in fn.statements()):
            continue
        out.append(
            Warning(
                detector="D6_supply_hooks",
                severity=Severity.HIGH,
                contract=contract.name,
                function=fn.name,
                line=fn.line_span[0],
                message=(
                    f"Supply Manipulation Hook: '{fn.name}' mints or burns "
                    f"{', '.join(supply_writes)} without modifier or require guard"
                ),
                related_symbols=[fn.name] + supply_writes,
                related_nodes=[_fn_node(contract, fn)]
                + [_var_node(contract, v) for v in supply_writes],
            )
        )
    return out


# ---------------------------------------------------------------------------
# D7: dense arithmetic with multiple state transitions
# ---------------------------------------------------------------------------

_SAFE_MATH_RE = re.compile(r"(?<![A-Za-z0-9_$])(mul|div|add|sub)\s*\(")


def _arithmetic_ops(text: str) -> int:
    return sum(text.count(ch) for ch in "+-*/%") + len(_SAFE_MATH_RE.findall(text))


def detect_complex_calculation(contract: ContractDef, cfg: KeywordConfig) -> list[Warning]:
    out: list[Warning] = []
    for fn in contract.all_functions():
        if len(fn.writes) < 2:
            continue
        for stmt in fn.statements():
            ops = _arithmetic_ops(stmt.text)
            if ops <= cfg.complexity_threshold:
                continue
            out.append(
                Warning(
                    detector="D7_complex_calculation",
                    severity=Severity.INFO,
                    contract=contract.name,
                    function=fn.name,
                    line=stmt.line,
                    message=(
                        f"Complex Calculation: statement with {ops} arithmetic operations in a "
                        f"function changing {len(fn.writes)} state variables; manual audit advised"
                    ),
                    related_symbols=sorted(fn.writes),
                    related_nodes=[_fn_node(contract, fn)],
                )
            )
    return out


# ---------------------------------------------------------------------------
# D8: unchecked low-level calls
# ---------------------------------------------------------------------------

_CONSUMING_KINDS = (
    StatementKind.REQUIRE,
    StatementKind.ASSERT,
    StatementKind.ASSIGNMENT,
    StatementKind.RETURN,
)


def detect_unchecked_low_level(contract: ContractDef) -> list[Warning]:
    out: list[Warning] = []
    type_names = {s.name for s in contract.structs} | {contract.name}
    for fn in contract.all_functions():
        tmap = _fn_type_map(contract, fn)

        def walk(stmts: list[Statement], in_try: bool) -> None:
            for stmt in stmts:
                if stmt.kind is StatementKind.TRY_CATCH:
                    walk(stmt.children, True)
                    continue
                if stmt.kind in (StatementKind.IF, StatementKind.LOOP):
                    walk(stmt.children, in_try)
                    continue
                if in_try or stmt.kind in _CONSUMING_KINDS:
                    continue
                for callee, final, kind in _calls_in_text(stmt.text, tmap, type_names):
                    if kind is CallKind.LOW_LEVEL and final != "transfer":
                        out.append(
                            Warning(
                                detector="D8_unchecked_low_level",
                                severity=Severity.HIGH,
                                contract=contract.name,
                                function=fn.name,
                                line=stmt.line,
                                message=(
                                    f"Unchecked low-level call '{callee}': result is never "
                                    "validated; review the logical validity of state reversions"
                                ),
                                related_symbols=[callee],
                                related_nodes=[_fn_node(contract, fn)],
                            )
                        )

        walk(fn.body, False)
    return out


# ---------------------------------------------------------------------------
# D9: confusable declared names
# ---------------------------------------------------------------------------


def _edit_distance(a: str, b: str) -> int:
    if len(a) > len(b):
        a, b = b, a
    previous = list(range(len(a) + 1))
    for j, cb in enumerate(b, start=1):
        current = [j]
        for i, ca in enumerate(a, start=1):
            cost = 0 if ca == cb else 1
            current.append(min(previous[i] + 1, current[i - 1] + 1, previous[i - 1] + cost))
        previous = current
    return previous[-1]


def detect_naming_ambiguity(contract: ContractDef, cfg: KeywordConfig) -> list[Warning]:
    symbols: list[tuple[str, NodeKind, int]] = []
    for v in contract.state_vars:
        symbols.append((v.name, NodeKind.STATE_VAR, v.line))
    for fn in contract.functions:
        symbols.append((fn.name, NodeKind.FUNCTION, fn.line_span[0]))
    for md in contract.modifiers:
        symbols.append((md.name, NodeKind.MODIFIER, md.line_span[0]))

    out: list[Warning] = []
    for (a, a_kind, a_line), (b, b_kind, b_line) in combinations(symbols, 2):
        if len(a) < cfg.min_similarity_length or len(b) < cfg.min_similarity_length:
            continue
        la, lb = a.lower(), b.lower()
        severity = None
        if la != lb and la.lstrip("_") == lb.lstrip("_"):
            severity = Severity.INFO
            message = f"Naming Ambiguity: '{a}' and '{b}' differ only by a leading underscore"
        elif (la.startswith(lb) or lb.startswith(la)) and _edit_distance(
            la, lb
        ) <= cfg.similarity_threshold:
            severity = Severity.MEDIUM
            message = f"Naming Ambiguity: '{a}' and '{b}' are confusably similar"
        if severity is None:
            continue
        out.append(
            Warning(
                detector="D9_naming_ambiguity",
                severity=severity,
                contract=contract.name,
                function=None,
                line=max(a_line, b_line),
                message=message,
                related_symbols=[a, b],
                related_nodes=[
                    node_id(contract.name, a_kind, a),
                    node_id(contract.name, b_kind, b),
                ],
            )
        )
    return out


# ---------------------------------------------------------------------------
# D10: signature drift against a baseline unit
# ---------------------------------------------------------------------------


def _signature(fn: FunctionDef) -> str:
    types = ",".join(p.type_name for p in fn.params)
    sig = f"({types})"
    if fn.mutability.value != "none":
        sig += f" {fn.mutability.value}"
    return sig


def _function_index(unit: SourceUnit) -> dict[str, list[tuple[str, FunctionDef]]]:
    index: dict[str, list[tuple[str, FunctionDef]]] = {}
    for contract in unit.contracts:
        for fn in contract.functions:
            index.setdefault(fn.name, []).append((contract.name, fn))
    return index


def detect_legacy_signature_mismatch(
    current: SourceUnit, baseline: SourceUnit, cfg: KeywordConfig | None = None
) -> list[Warning]:
    cfg = cfg or KeywordConfig()
    cur = _function_index(current)
    base = _function_index(baseline)
    out: list[Warning] = []
    for name in sorted(base):
        if name in cur:
            base_sigs = sorted(_signature(fn) for _, fn in base[name])
            cur_sigs = sorted(_signature(fn) for _, fn in cur[name])
            if base_sigs == cur_sigs:
                continue
            contract_name, fn = cur[name][0]
            out.append(
                Warning(
                    detector="D10_legacy_signature",
                    severity=Severity.MEDIUM,
                    contract=contract_name,
                    function=name,
                    line=fn.line_span[0],
                    message=(
                        f"Legacy Signature Mismatch: function '{name}' changed from "
                        f"{' | '.join(base_sigs)} to {' | '.join(cur_sigs)}"
                    ),
                    related_symbols=[name],
                    related_nodes=[node_id(contract_name, NodeKind.FUNCTION, name)],
                )
            )
        elif _matches(name, cfg.exit_names) or _matches(name, cfg.stake_names) or _matches(
            name, cfg.unstake_names
        ):
            contract_name, fn = base[name][0]
            out.append(
                Warning(
                    detector="D10_legacy_signature",
                    severity=Severity.HIGH,
                    contract=contract_name,
                    function=name,
                    line=fn.line_span[0],
                    message=(
                        f"Removed financial function: '{name}' exists in the baseline "
                        "version but not in the current one"
                    ),
                    related_symbols=[name],
                    related_nodes=[],
                )
            )
    return out


# ---------------------------------------------------------------------------
# Orchestration
# ---------------------------------------------------------------------------


def resolve_detector_id(value: str) -> str | None:
    v = value.strip()
    for did in ALL_DETECTOR_IDS:
        if v.lower() == did.lower() or v.upper() == did.split("_", 1)[0]:
            return did
    return None


def run_all(
    unit: SourceUnit,
    cfg: KeywordConfig | None = None,
    baseline: SourceUnit | None = None,
    enabled: set[str] | None = None,
) -> list[Warning]:
    """Run the enabled detectors over every contract; deterministic order."""
    cfg = cfg or KeywordConfig()
    cfg.validate()
    if enabled is None:
        active = set(ALL_DETECTOR_IDS)
    else:
        active = set()
        for entry in enabled:
            resolved = resolve_detector_id(entry)
            if resolved is None:
                raise ConfigError(f"unknown detector id: {entry}")
            active.add(resolved)

    out: list[Warning] = []
    for contract in unit.contracts:
        if "D1_stake_asymmetry" in active:
            out.extend(detect_stake_asymmetry(contract, cfg, "stake"))
        if "D11_collateral_logic" in active:
            out.extend(detect_stake_asymmetry(contract, cfg, "collateral"))
        if "D12_point_system" in active:
            out.extend(detect_stake_asymmetry(contract, cfg, "points"))
        if "D2_missing_exit_validation" in active:
            out.extend(detect_missing_exit_validation(contract, cfg))
        if "D3_unprotected_entry" in active:
            out.extend(detect_unprotected_entry(contract, unit))
        if "D4_price_lag" in active:
            out.extend(detect_price_lag(contract, cfg))
        if "D5_external_dependency" in active:
            out.extend(detect_external_dependency(contract))
        if "D6_supply_hooks" in active:
            out.extend(detect_supply_hooks(contract))
        if "D7_complex_calculation" in active:
            out.extend(detect_complex_calculation(contract, cfg))
        if "D8_unchecked_low_level" in active:
            out.extend(detect_unchecked_low_level(contract))
        if "D9_naming_ambiguity" in active:
            out.extend(detect_naming_ambiguity(contract, cfg))
    if "D10_legacy_signature" in active and baseline is not None:
        out.extend(detect_legacy_signature_mismatch(unit, baseline, cfg))
    out.sort(key=lambda w: (w.contract, w.line, w.detector))
    return out
