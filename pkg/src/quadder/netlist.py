"""Gate-level netlists of unbounded-fan-in quaternary gates.

A netlist is an acyclic DAG with dense node ids; every edge points from a
smaller id to a larger one, so the id order is a topological order and
acyclicity holds by construction.  Evaluation is a single forward pass,
timing uses a unit-delay model (every gate costs 1, wires cost 0).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from . import qudit

# gate kind tags (serialized verbatim)
AND = "and"
OR = "or"
XOR = "xor"
NOT = "not"
INWARD = "inward"
OUTWARD = "outward"
BITSWAP = "bitswap"
CONST = "const"
INPUT = "input"

MULTI_KINDS = frozenset({AND, OR, XOR})
UNARY_KINDS = frozenset({NOT, INWARD, OUTWARD, BITSWAP})
LEAF_KINDS = frozenset({CONST, INPUT})
ALL_KINDS = MULTI_KINDS | UNARY_KINDS | LEAF_KINDS

DOC_VERSION = 1

_SCALAR_OP = {
    AND: qudit.qand,
    OR: qudit.qor,
    XOR: qudit.qxor,
    NOT: qudit.qnot,
    INWARD: qudit.inward,
    OUTWARD: qudit.outward,
    BITSWAP: qudit.bitswap,
}

_BATCH_REDUCE = {AND: np.bitwise_and, OR: np.bitwise_or, XOR: np.bitwise_xor}
_BATCH_LUT = {
    NOT: np.array([3, 2, 1, 0], dtype=np.uint8),
    INWARD: np.array([2, 2, 1, 1], dtype=np.uint8),
    OUTWARD: np.array([3, 3, 0, 0], dtype=np.uint8),
    BITSWAP: np.array([0, 2, 1, 3], dtype=np.uint8),
}


class DocumentError(ValueError):
    """Raised when a netlist document cannot be imported.

    ``reason`` is one of: malformed, version, acyclicity, dangling.
    """

    def __init__(self, reason: str, message: str):
        self.reason = reason
        super().__init__(f"{reason}: {message}")


class Node(NamedTuple):
    id: int
    kind: str
    inputs: tuple[int, ...] = ()
    value: int | None = None  # const nodes
    name: str | None = None   # input nodes


@dataclass(frozen=True)
class Netlist:
    width: int
    nodes: tuple[Node, ...]
    a_ports: tuple[int, ...]
    b_ports: tuple[int, ...]
    cin_port: int
    s_ports: tuple[int, ...]
    cout_port: int
    signals: dict = field(default_factory=dict)   # name -> node id
    meta: dict = field(default_factory=dict)      # kind, params, groups, ...

    def input_names(self) -> list[str]:
        return [n.name for n in self.nodes if n.kind == INPUT]

    def output_map(self) -> dict:
        out = {f"S[{i + 1}]": nid for i, nid in enumerate(self.s_ports)}
        out["cout"] = self.cout_port
        return out

    def node_count(self) -> int:
        return len(self.nodes)

    def gate_nodes(self) -> list[Node]:
        return [n for n in self.nodes if n.kind not in LEAF_KINDS]


def _check_arity(kind: str, n_inputs: int) -> None:
    if kind in MULTI_KINDS and n_inputs < 2:
        raise ValueError(f"{kind} gate needs fan-in >= 2, got {n_inputs}")
    if kind in UNARY_KINDS and n_inputs != 1:
        raise ValueError(f"{kind} gate needs fan-in 1, got {n_inputs}")
    if kind in LEAF_KINDS and n_inputs != 0:
        raise ValueError(f"{kind} node takes no inputs")


class NetlistBuilder:
    """Append-only constructor with optional structural deduplication."""

    def __init__(self, width: int, dedupe: bool = True):
        if width < 1:
            raise ValueError("width must be >= 1")
        self.width = width
        self.nodes: list[Node] = []
        self._memo: dict | None = {} if dedupe else None

    @property
    def size(self) -> int:
        return len(self.nodes)

    def _intern(self, node: Node) -> int:
        if self._memo is not None:
            key = (node.kind, node.inputs, node.value, node.name)
            hit = self._memo.get(key)
            if hit is not None:
                return hit
            self._memo[key] = node.id
        self.nodes.append(node)
        return node.id

    def add_input(self, name: str) -> int:
        return self._intern(Node(len(self.nodes), INPUT, (), None, name))

    def add_const(self, value: int) -> int:
        return self._intern(Node(len(self.nodes), CONST, (), qudit.check_qudit(value), None))

    def add(self, kind: str, *inputs: int) -> int:
        if kind not in MULTI_KINDS and kind not in UNARY_KINDS:
            raise ValueError(f"unknown gate kind: {kind}")
        _check_arity(kind, len(inputs))
        for i in inputs:
            if not 0 <= i < len(self.nodes):
                raise ValueError(f"dangling input id {i}")
        return self._intern(Node(len(self.nodes), kind, tuple(inputs), None, None))

    def finish(
        self,
        a_ports: Sequence[int],
        b_ports: Sequence[int],
        cin_port: int,
        s_ports: Sequence[int],
        cout_port: int,
        signals: Mapping[str, int] | None = None,
        meta: Mapping | None = None,
    ) -> Netlist:
        nl = Netlist(
            width=self.width,
            nodes=tuple(self.nodes),
            a_ports=tuple(a_ports),
            b_ports=tuple(b_ports),
            cin_port=cin_port,
            s_ports=tuple(s_ports),
            cout_port=cout_port,
            signals=dict(signals or {}),
            meta=dict(meta or {}),
        )
        _validate(nl)
        return nl


def _validate(nl: Netlist) -> None:
    n = len(nl.nodes)
    for node in nl.nodes:
        if node.kind not in ALL_KINDS:
            raise DocumentError("malformed", f"unknown kind {node.kind!r}")
        _check_arity(node.kind, len(node.inputs))
        for i in node.inputs:
            if i >= node.id:
                raise DocumentError(
                    "acyclicity", f"node {node.id} reads id {i} >= its own id"
                )
            if i < 0:
                raise DocumentError("dangling", f"node {node.id} reads id {i}")
    ports = [*nl.a_ports, *nl.b_ports, nl.cin_port]
    if len(nl.a_ports) != nl.width or len(nl.b_ports) != nl.width or len(nl.s_ports) != nl.width:
        raise DocumentError("malformed", "port vector width mismatch")
    for pid in ports:
        if not 0 <= pid < n:
            raise DocumentError("dangling", f"input port id {pid} out of range")
        if nl.nodes[pid].kind != INPUT:
            raise DocumentError("malformed", f"input port id {pid} is not an input node")
    for pid in [*nl.s_ports, nl.cout_port, *nl.signals.values()]:
        if not 0 <= pid < n:
            raise DocumentError("dangling", f"referenced id {pid} out of range")
    for group, ids in nl.meta.get("groups", {}).items():
        for pid in ids:
            if not 0 <= pid < n:
                raise DocumentError("dangling", f"group {group!r} id {pid} out of range")


# --- evaluation ---


def evaluate_nodes(nl: Netlist, assignment: Mapping[str, int]) -> list:
    """Single forward pass; returns the value of every node by id."""
    values: list[int] = [0] * len(nl.nodes)
    for node in nl.nodes:
        if node.kind == INPUT:
            if node.name not in assignment:
                raise ValueError(f"missing assignment for port {node.name!r}")
            values[node.id] = qudit.check_qudit(assignment[node.name])
        elif node.kind == CONST:
            values[node.id] = node.value
        elif node.kind in UNARY_KINDS:
            values[node.id] = _SCALAR_OP[node.kind](values[node.inputs[0]])
        else:
            values[node.id] = _SCALAR_OP[node.kind](*[values[i] for i in node.inputs])
    return values


def evaluate(nl: Netlist, assignment: Mapping[str, int]) -> dict:
    """Single forward pass; returns the values of all output ports."""
    values = evaluate_nodes(nl, assignment)
    return {name: values[nid] for name, nid in nl.output_map().items()}


def evaluate_words(nl: Netlist, a, b, cin: int = 0) -> tuple[tuple[int, ...], int]:
    """Evaluate with digit words (index 0 = least significant)."""
    a = qudit.check_word(a, width=nl.width)
    b = qudit.check_word(b, width=nl.width)
    assignment = {"cin": qudit.check_qudit(cin)}
    for i in range(nl.width):
        assignment[f"A[{i + 1}]"] = a[i]
        assignment[f"B[{i + 1}]"] = b[i]
    out = evaluate(nl, assignment)
    return tuple(out[f"S[{i + 1}]"] for i in range(nl.width)), out["cout"]


def evaluate_batch(nl: Netlist, assignment: Mapping[str, np.ndarray]) -> dict:
    """Vectorized forward pass over a batch axis (uint8 arrays)."""
    shape = None
    arrays = {}
    for name, arr in assignment.items():
        arr = np.asarray(arr, dtype=np.uint8)
        if (arr > 3).any():
            raise ValueError(f"assignment for {name!r} holds non-qudit values")
        if shape is None:
            shape = arr.shape
        elif arr.shape != shape:
            raise ValueError("assignment arrays must share one shape")
        arrays[name] = arr
    if shape is None:
        raise ValueError("empty assignment")

    values: list[np.ndarray | None] = [None] * len(nl.nodes)
    for node in nl.nodes:
        if node.kind == INPUT:
            if node.name not in arrays:
                raise ValueError(f"missing assignment for port {node.name!r}")
            values[node.id] = arrays[node.name]
        elif node.kind == CONST:
            values[node.id] = np.full(shape, node.value, dtype=np.uint8)
        elif node.kind in UNARY_KINDS:
            values[node.id] = _BATCH_LUT[node.kind][values[node.inputs[0]]]
        else:
            op = _BATCH_REDUCE[node.kind]
            acc = op(values[node.inputs[0]], values[node.inputs[1]])
            for i in node.inputs[2:]:
                acc = op(acc, values[i])
            values[node.id] = acc
    return {name: values[nid] for name, nid in nl.output_map().items()}


def add_batch(nl: Netlist, a_digits: np.ndarray, b_digits: np.ndarray, cin: np.ndarray):
    """Batch addition: digit matrices of shape (cases, width), cin (cases,).

    Returns (sum digit matrix, carry-out vector).
    """
    a_digits = np.asarray(a_digits, dtype=np.uint8)
    b_digits = np.asarray(b_digits, dtype=np.uint8)
    cin = np.asarray(cin, dtype=np.uint8)
    assignment = {"cin": cin}
    for i in range(nl.width):
        assignment[f"A[{i + 1}]"] = a_digits[:, i]
        assignment[f"B[{i + 1}]"] = b_digits[:, i]
    out = evaluate_batch(nl, assignment)
    s = np.stack([out[f"S[{i + 1}]"] for i in range(nl.width)], axis=1)
    return s, out["cout"]


# --- timing and cost ---


@dataclass(frozen=True)
class CostReport:
    gate_count: int
    input_count: int
    depth: int
    max_fan_in: int
    per_signal_depth: dict
    mask_counting: str   # "included" | "excluded"
    signal_scope: str    # "carry-network" | "full-adder"

    def to_dict(self) -> dict:
        return {
            "gate_count": self.gate_count,
            "input_count": self.input_count,
            "depth": self.depth,
            "max_fan_in": self.max_fan_in,
            "per_signal_depth": dict(self.per_signal_depth),
            "mask_counting": self.mask_counting,
            "signal_scope": self.signal_scope,
        }


def mask_data_input(nl: Netlist, node: Node) -> int | None:
    """For a mask gate And(x, Const 1), return x's id; else None."""
    if node.kind != AND or len(node.inputs) != 2:
        return None
    for one, other in (node.inputs, node.inputs[::-1]):
        n = nl.nodes[one]
        if n.kind == CONST and n.value == 1:
            return other
    return None


def node_depths(nl: Netlist, mask_counting: str = "included") -> list[int]:
    """Unit-delay depth per node; inputs and constants sit at depth 0.

    With mask_counting="excluded", And(x, Const 1) gates are transparent:
    their depth equals x's depth.
    """
    depths = [0] * len(nl.nodes)
    excluded = mask_counting == "excluded"
    for node in nl.nodes:
        if node.kind in LEAF_KINDS:
            continue
        if excluded:
            data = mask_data_input(nl, node)
            if data is not None:
                depths[node.id] = depths[data]
                continue
        depths[node.id] = 1 + max(depths[i] for i in node.inputs)
    return depths


def _resolve_signals(nl: Netlist, signals) -> dict:
    if signals is None:
        return nl.output_map()
    if isinstance(signals, Mapping):
        resolved = dict(signals)
    else:
        space = {**nl.output_map(), **nl.signals}
        resolved = {}
        for name in signals:
            if name not in space:
                raise ValueError(f"unknown signal name: {name!r}")
            resolved[name] = space[name]
    return resolved


def cone(nl: Netlist, node_ids: Iterable[int]) -> set:
    """Set of node ids that can influence any of the given nodes."""
    seen: set = set()
    stack = list(node_ids)
    while stack:
        nid = stack.pop()
        if nid in seen:
            continue
        seen.add(nid)
        stack.extend(nl.nodes[nid].inputs)
    return seen


def measure(
    nl: Netlist,
    signals=None,
    mask_counting: str = "included",
    scope_label: str | None = None,
) -> CostReport:
    """Unit-delay cost report over the cone of influence of the signals.

    ``signals`` is a mapping name -> node id, an iterable of signal/port
    names, or None for all output ports.  With mask_counting="excluded",
    And(x, Const 1) gates are skipped in the gate and input counts and are
    transparent for depth.
    """
    if mask_counting not in ("included", "excluded"):
        raise ValueError(f"bad mask_counting: {mask_counting!r}")
    resolved = _resolve_signals(nl, signals)
    depths = node_depths(nl, mask_counting)
    scope = cone(nl, resolved.values())
    excluded = mask_counting == "excluded"

    gate_count = 0
    input_count = 0
    max_fan_in = 0
    for nid in scope:
        node = nl.nodes[nid]
        if node.kind in LEAF_KINDS:
            continue
        if excluded and mask_data_input(nl, node) is not None:
            continue
        gate_count += 1
        input_count += len(node.inputs)
        max_fan_in = max(max_fan_in, len(node.inputs))

    per_signal = {name: depths[nid] for name, nid in resolved.items()}
    return CostReport(
        gate_count=gate_count,
        input_count=input_count,
        depth=max(per_signal.values(), default=0),
        max_fan_in=max_fan_in,
        per_signal_depth=per_signal,
        mask_counting=mask_counting,
        signal_scope=scope_label or ("full-adder" if signals is None else "carry-network"),
    )


def count_group(nl: Netlist, group: str, mask_counting: str = "included") -> tuple[int, int]:
    """(gate count, input count) over one of the builder-recorded groups."""
    ids = nl.meta.get("groups", {}).get(group)
    if ids is None:
        raise ValueError(f"netlist has no group {group!r}")
    excluded = mask_counting == "excluded"
    gates = 0
    inputs = 0
    for nid in ids:
        node = nl.nodes[nid]
        if node.kind in LEAF_KINDS:
            continue
        if excluded and mask_data_input(nl, node) is not None:
            continue
        gates += 1
        inputs += len(node.inputs)
    return gates, inputs


# --- serialization ---


def to_json(nl: Netlist, indent: int | None = 2) -> str:
    nodes = []
    for node in nl.nodes:
        entry: dict = {"id": node.id, "kind": node.kind, "inputs": list(node.inputs)}
        if node.value is not None:
            entry["value"] = node.value
        if node.name is not None:
            entry["name"] = node.name
        nodes.append(entry)
    meta = {k: v for k, v in nl.meta.items() if k not in ("kind", "params")}
    doc = {
        "version": DOC_VERSION,
        "kind": nl.meta.get("kind", "custom"),
        "width": nl.width,
        "params": nl.meta.get("params", {}),
        "nodes": nodes,
        "ports": {
            "A": list(nl.a_ports),
            "B": list(nl.b_ports),
            "cin": nl.cin_port,
            "S": list(nl.s_ports),
            "cout": nl.cout_port,
        },
        "signals": dict(nl.signals),
        "meta": meta,
    }
    return json.dumps(doc, indent=indent) + "\n"


def from_json(text: str | bytes) -> Netlist:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError("malformed", f"invalid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise DocumentError("malformed", "document is not an object")
    version = doc.get("version")
    if version != DOC_VERSION:
        raise DocumentError("version", f"expected version {DOC_VERSION}, got {version}")
    try:
        width = doc["width"]
        raw_nodes = doc["nodes"]
        ports = doc["ports"]
    except KeyError as exc:
        raise DocumentError("malformed", f"missing field {exc}") from exc

    nodes = []
    for i, entry in enumerate(raw_nodes):
        try:
            nid = entry["id"]
            kind = entry["kind"]
            inputs = tuple(entry.get("inputs", ()))
        except (KeyError, TypeError) as exc:
            raise DocumentError("malformed", f"bad node record at position {i}") from exc
        if nid != i:
            raise DocumentError("malformed", f"node ids must be dense, got {nid} at {i}")
        nodes.append(Node(nid, kind, inputs, entry.get("value"), entry.get("name")))

    meta = dict(doc.get("meta", {}))
    meta["kind"] = doc.get("kind", "custom")
    meta["params"] = doc.get("params", {})
    try:
        nl = Netlist(
            width=width,
            nodes=tuple(nodes),
            a_ports=tuple(ports["A"]),
            b_ports=tuple(ports["B"]),
            cin_port=ports["cin"],
            s_ports=tuple(ports["S"]),
            cout_port=ports["cout"],
            signals=dict(doc.get("signals", {})),
            meta=meta,
        )
    except KeyError as exc:
        raise DocumentError("malformed", f"missing port field {exc}") from exc
    except ValueError as exc:
        if isinstance(exc, DocumentError):
            raise
        raise DocumentError("malformed", str(exc)) from exc
    _validate(nl)
    return nl


def to_dot(nl: Netlist, name: str = "netlist") -> str:
    """Graphviz digraph: one node per gate, one edge per fan-in."""
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for node in nl.nodes:
        if node.kind == INPUT:
            lines.append(f'  n{node.id} [label="{node.name}" shape=box];')
        elif node.kind == CONST:
            lines.append(f'  n{node.id} [label="{node.value}" shape=diamond];')
        else:
            lines.append(f'  n{node.id} [label="{node.kind}"];')
    for node in nl.nodes:
        for src in node.inputs:
            lines.append(f"  n{src} -> n{node.id};")
    for name_, nid in nl.output_map().items():
        lines.append(f'  out_{name_.replace("[", "_").replace("]", "")} '
                     f'[label="{name_}" shape=box]; '
                     f'n{nid} -> out_{name_.replace("[", "_").replace("]", "")};')
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- rewrites ---


def lower_fanin2(nl: Netlist) -> Netlist:
    """Split every wide And/Or/Xor into a balanced tree of 2-input gates.

    Evaluation-equivalent; ports, signals and groups are carried over
    (grouped wide gates map to all gates of their replacement tree).
    """
    nb = NetlistBuilder(nl.width, dedupe=True)
    remap: dict = {}
    produced: dict = {}  # old id -> list of new ids created for it

    def reduce_tree(kind: str, ids: list, created: list) -> int:
        if len(ids) == 1:
            return ids[0]
        if len(ids) == 2:
            nid = nb.add(kind, ids[0], ids[1])
            created.append(nid)
            return nid
        mid = len(ids) // 2
        lo = reduce_tree(kind, ids[:mid], created)
        hi = reduce_tree(kind, ids[mid:], created)
        return reduce_tree(kind, [lo, hi], created)

    for node in nl.nodes:
        created: list = []
        if node.kind == INPUT:
            new = nb.add_input(node.name)
        elif node.kind == CONST:
            new = nb.add_const(node.value)
        elif node.kind in UNARY_KINDS:
            new = nb.add(node.kind, remap[node.inputs[0]])
            created.append(new)
        else:
            new = reduce_tree(node.kind, [remap[i] for i in node.inputs], created)
        remap[node.id] = new
        produced[node.id] = created or [new]

    signals = {name: remap[nid] for name, nid in nl.signals.items()}
    meta = dict(nl.meta)
    if "groups" in meta:
        meta["groups"] = {
            g: sorted({new for old in ids for new in produced[old]})
            for g, ids in meta["groups"].items()
        }
    meta["lowered"] = "fanin2"
    return nb.finish(
        [remap[i] for i in nl.a_ports],
        [remap[i] for i in nl.b_ports],
        remap[nl.cin_port],
        [remap[i] for i in nl.s_ports],
        remap[nl.cout_port],
        signals=signals,
        meta=meta,
    )
