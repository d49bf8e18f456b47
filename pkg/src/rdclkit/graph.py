"""The universal project data model: a typed attributed multigraph.

Nodes carry a type from the project type's description model, scalar
properties, optional containment (parent id), and optionally a nested
expansion (another ProjectGraph of a different project type). Edges carry a
link type and optional port labels. Graphs are immutable snapshots; edits
produce new snapshots, so a failed edit leaves the input untouched.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Callable, Iterable, Mapping

from .descmodel import DescriptionModel, ModelRegistry, NodeTypeDef
from .errors import (
    BoundaryBindingError,
    DocumentSyntaxError,
    MissingNestedDescriptorError,
    NestedParseError,
    NotExpandableError,
    PropertyError,
    SchemaError,
    TypeViolationError,
    UnknownIdError,
    UnknownViewError,
    WorkbenchError,
)

Scalar = str | int | bool

_ID_RE = re.compile(r"^(?P<type>.+)@(?P<n>\d+)$")


def _freeze_props(props: Mapping[str, Scalar] | None) -> Mapping[str, Scalar]:
    return MappingProxyType(dict(props or {}))


@dataclass(frozen=True)
class BoundaryLink:
    """Binding of an outer connection-point node to a nested boundary element."""

    cpd_node: str
    interface: str
    direction: str  # ingress | egress
    element_node: str  # node id inside the expansion graph

    def to_dict(self) -> dict:
        return {
            "cpd_node": self.cpd_node,
            "interface": self.interface,
            "direction": self.direction,
            "element_node": self.element_node,
        }


@dataclass(frozen=True)
class Expansion:
    project_type: str
    graph: "ProjectGraph"
    boundary: tuple[BoundaryLink, ...] = ()


@dataclass(frozen=True)
class GraphNode:
    id: str
    type: str
    label: str = ""
    parent: str | None = None
    properties: Mapping[str, Scalar] = field(default_factory=dict)
    expansion: Expansion | None = None

    def __post_init__(self):
        object.__setattr__(self, "properties", _freeze_props(self.properties))


@dataclass(frozen=True)
class GraphEdge:
    id: str
    type: str
    source: str
    target: str
    source_port: str | None = None
    target_port: str | None = None
    properties: Mapping[str, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "properties", _freeze_props(self.properties))


@dataclass(frozen=True)
class ProjectGraph:
    project_type: str
    nodes: Mapping[str, GraphNode] = field(default_factory=dict)
    edges: Mapping[str, GraphEdge] = field(default_factory=dict)
    source_texts: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "nodes", MappingProxyType(dict(self.nodes)))
        object.__setattr__(self, "edges", MappingProxyType(dict(self.edges)))
        object.__setattr__(self, "source_texts", MappingProxyType(dict(self.source_texts)))

    def node(self, node_id: str) -> GraphNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownIdError(f"no node '{node_id}'") from None

    def children_of(self, node_id: str) -> list[GraphNode]:
        return [n for n in self.nodes.values() if n.parent == node_id]

    def descendants_of(self, node_id: str) -> list[str]:
        out: list[str] = []
        stack = [node_id]
        while stack:
            current = stack.pop()
            for child in self.children_of(current):
                out.append(child.id)
                stack.append(child.id)
        return out

    def edges_touching(self, node_ids: Iterable[str]) -> list[str]:
        wanted = set(node_ids)
        return [e.id for e in self.edges.values() if e.source in wanted or e.target in wanted]

    def nodes_by_type(self, type_name: str) -> list[GraphNode]:
        return [n for n in self.nodes.values() if n.type == type_name]

    def structurally_equals(self, other: "ProjectGraph") -> bool:
        """Equality over type/label/containment/properties/wiring; ignores source texts."""
        return _graph_shape(self) == _graph_shape(other)


def _expansion_shape(exp: Expansion | None):
    if exp is None:
        return None
    return (
        exp.project_type,
        _graph_shape(exp.graph),
        tuple(sorted((b.cpd_node, b.interface, b.direction, b.element_node) for b in exp.boundary)),
    )


def _graph_shape(g: ProjectGraph):
    nodes = tuple(
        (n.id, n.type, n.label, n.parent, tuple(sorted(n.properties.items())), _expansion_shape(n.expansion))
        for n in sorted(g.nodes.values(), key=lambda n: n.id)
    )
    edges = tuple(
        (e.id, e.type, e.source, e.target, e.source_port, e.target_port, tuple(sorted(e.properties.items())))
        for e in sorted(g.edges.values(), key=lambda e: e.id)
    )
    return (g.project_type, nodes, edges)


@dataclass(frozen=True)
class ViewGraph:
    view: str
    nodes: tuple[GraphNode, ...]
    edges: tuple[GraphEdge, ...]


@dataclass(frozen=True)
class EditOp:
    """One graph edit. ``kind`` selects which payload fields apply."""

    kind: str  # addNode | removeNode | addEdge | removeEdge | setProperty | setLabel
    node_id: str | None = None
    node_type: str | None = None
    label: str | None = None
    parent: str | None = None
    properties: Mapping[str, Scalar] | None = None
    edge_id: str | None = None
    edge_type: str | None = None
    source: str | None = None
    target: str | None = None
    source_port: str | None = None
    target_port: str | None = None
    prop_name: str | None = None
    prop_value: Scalar | None = None

    @classmethod
    def from_dict(cls, data: Mapping) -> "EditOp":
        kind = data.get("kind")
        if kind not in ("addNode", "removeNode", "addEdge", "removeEdge", "setProperty", "setLabel"):
            raise SchemaError(f"unknown edit kind '{kind}'", path=("kind",))
        known = {
            "kind", "node_id", "node_type", "label", "parent", "properties",
            "edge_id", "edge_type", "source", "target", "source_port",
            "target_port", "prop_name", "prop_value",
        }
        unknown = set(data) - known
        if unknown:
            raise SchemaError(f"unknown edit fields {sorted(unknown)}", path=())
        return cls(**{k: v for k, v in data.items()})


# --- id generation --------------------------------------------------------------


class IdAllocator:
    """Generates ids of the form ``<type>@<n>`` with per-type monotonic counters."""

    def __init__(self, taken: Iterable[str] = ()):
        self._counters: dict[str, int] = {}
        self._taken: set[str] = set()
        for existing in taken:
            self.reserve(existing)

    def reserve(self, existing_id: str):
        self._taken.add(existing_id)
        m = _ID_RE.match(existing_id)
        if m:
            t, n = m.group("type"), int(m.group("n"))
            if n > self._counters.get(t, 0):
                self._counters[t] = n

    def allocate(self, type_name: str) -> str:
        n = self._counters.get(type_name, 0)
        while True:
            n += 1
            candidate = f"{type_name}@{n}"
            if candidate not in self._taken:
                self._counters[type_name] = n
                self._taken.add(candidate)
                return candidate


class GraphBuilder:
    """Incremental construction of a valid ProjectGraph."""

    def __init__(self, model: DescriptionModel, project_type: str | None = None):
        self.model = model
        self.project_type = project_type or model.name
        self._nodes: dict[str, GraphNode] = {}
        self._edges: dict[str, GraphEdge] = {}
        self._ids = IdAllocator()

    def add_node(
        self,
        type_name: str,
        label: str = "",
        parent: str | None = None,
        properties: Mapping[str, Scalar] | None = None,
        node_id: str | None = None,
    ) -> str:
        node_id = node_id or self._ids.allocate(type_name)
        self._ids.reserve(node_id)
        node = GraphNode(id=node_id, type=type_name, label=label or node_id, parent=parent, properties=properties)
        _check_node(node, self._nodes, self.model)
        self._nodes[node_id] = node
        return node_id

    def add_edge(
        self,
        type_name: str,
        source: str,
        target: str,
        source_port: str | None = None,
        target_port: str | None = None,
        properties: Mapping[str, Scalar] | None = None,
        edge_id: str | None = None,
    ) -> str:
        edge_id = edge_id or self._ids.allocate(type_name)
        self._ids.reserve(edge_id)
        edge = GraphEdge(
            id=edge_id, type=type_name, source=source, target=target,
            source_port=source_port, target_port=target_port, properties=properties,
        )
        _check_edge(edge, self._nodes, self._edges, self.model)
        self._edges[edge_id] = edge
        return edge_id

    def build(self, source_texts: Mapping[str, str] | None = None) -> ProjectGraph:
        return ProjectGraph(
            project_type=self.project_type,
            nodes=self._nodes,
            edges=self._edges,
            source_texts=source_texts or {},
        )


# --- invariant checks -------------------------------------------------------------


def _check_node(node: GraphNode, nodes: Mapping[str, GraphNode], model: DescriptionModel):
    nt = model.node_type(node.type)
    if nt is None:
        raise TypeViolationError(f"unknown node type '{node.type}'", path=(node.id,))
    if node.parent is not None:
        parent = nodes.get(node.parent)
        if parent is None:
            raise UnknownIdError(f"parent '{node.parent}' of '{node.id}' does not exist")
        pt = model.node_type(parent.type)
        if pt is None or node.type not in pt.container_of:
            raise TypeViolationError(
                f"node type '{parent.type}' cannot contain '{node.type}'", path=(node.id,)
            )
        # containment acyclicity
        seen = {node.id}
        cursor = parent
        while cursor is not None:
            if cursor.id in seen:
                raise TypeViolationError("containment cycle", path=(node.id,))
            seen.add(cursor.id)
            cursor = nodes.get(cursor.parent) if cursor.parent else None
    _check_properties(node.id, node.properties, nt)


def _check_properties(node_id: str, props: Mapping[str, Scalar], nt: NodeTypeDef):
    for name, value in props.items():
        spec = nt.properties.get(name)
        if spec is None:
            raise PropertyError(
                f"node type '{nt.name}' declares no property '{name}'", path=(node_id, name)
            )
        if not spec.accepts(value):
            raise PropertyError(
                f"property '{name}' of '{node_id}' rejects value {value!r} (kind {spec.kind})",
                path=(node_id, name),
            )


def _check_edge(
    edge: GraphEdge,
    nodes: Mapping[str, GraphNode],
    edges: Mapping[str, GraphEdge],
    model: DescriptionModel,
):
    lt = model.link_type(edge.type)
    if lt is None:
        raise TypeViolationError(f"unknown link type '{edge.type}'", path=(edge.id,))
    source = nodes.get(edge.source)
    target = nodes.get(edge.target)
    if source is None:
        raise UnknownIdError(f"edge '{edge.id}' source '{edge.source}' does not exist")
    if target is None:
        raise UnknownIdError(f"edge '{edge.id}' target '{edge.target}' does not exist")
    if not lt.permits(source.type, target.type):
        raise TypeViolationError(
            f"link type '{edge.type}' does not permit {source.type} -> {target.type}",
            path=(edge.id,),
        )
    if (edge.source_port is not None or edge.target_port is not None) and not lt.ports:
        raise TypeViolationError(
            f"link type '{edge.type}' does not declare ports", path=(edge.id,)
        )
    if lt.max_out_degree is not None:
        out_degree = sum(1 for e in edges.values() if e.type == edge.type and e.source == edge.source)
        if out_degree + 1 > lt.max_out_degree:
            raise TypeViolationError(
                f"max_out_degree {lt.max_out_degree} of '{edge.type}' exceeded at '{edge.source}'",
                path=(edge.id,),
            )
    if lt.max_in_degree is not None:
        in_degree = sum(1 for e in edges.values() if e.type == edge.type and e.target == edge.target)
        if in_degree + 1 > lt.max_in_degree:
            raise TypeViolationError(
                f"max_in_degree {lt.max_in_degree} of '{edge.type}' exceeded at '{edge.target}'",
                path=(edge.id,),
            )


def check_graph(g: ProjectGraph, model: DescriptionModel):
    """Validate every ProjectGraph invariant; raises on the first violation."""
    for node in g.nodes.values():
        _check_node(node, g.nodes, model)
    staged: dict[str, GraphEdge] = {}
    for edge in g.edges.values():
        _check_edge(edge, g.nodes, staged, model)
        staged[edge.id] = edge


# --- operations ---------------------------------------------------------------------


def project_view(g: ProjectGraph, view_name: str, model: DescriptionModel) -> ViewGraph:
    """Filter the graph to one view; nodes/edges sorted by id."""
    view = model.view(view_name)
    if view is None:
        raise UnknownViewError(f"project type '{g.project_type}' has no view '{view_name}'")
    node_types = set(view.node_types)
    link_types = set(view.link_types)
    nodes = sorted(
        (n for n in g.nodes.values() if n.type in node_types), key=lambda n: n.id
    )
    kept = {n.id for n in nodes}
    edges = sorted(
        (
            e
            for e in g.edges.values()
            if e.type in link_types and e.source in kept and e.target in kept
        ),
        key=lambda e: e.id,
    )
    return ViewGraph(view=view_name, nodes=tuple(nodes), edges=tuple(edges))


def apply_edit(g: ProjectGraph, op: EditOp, model: DescriptionModel) -> ProjectGraph:
    """Apply one edit, returning a new snapshot; the input graph is never touched."""
    nodes = dict(g.nodes)
    edges = dict(g.edges)
    ids = IdAllocator(list(nodes) + list(edges))

    if op.kind == "addNode":
        if not op.node_type:
            raise SchemaError("addNode needs node_type", path=("node_type",))
        node_id = op.node_id or ids.allocate(op.node_type)
        if node_id in nodes:
            raise TypeViolationError(f"node id '{node_id}' already exists")
        node = GraphNode(
            id=node_id, type=op.node_type, label=op.label or node_id,
            parent=op.parent, properties=op.properties,
        )
        _check_node(node, nodes, model)
        nodes[node_id] = node
    elif op.kind == "removeNode":
        node = _must_node(nodes, op.node_id)
        doomed = {node.id, *_descendants(nodes, node.id)}
        for edge in list(edges.values()):
            if edge.source in doomed or edge.target in doomed:
                del edges[edge.id]
        for node_id in doomed:
            del nodes[node_id]
    elif op.kind == "addEdge":
        if not op.edge_type:
            raise SchemaError("addEdge needs edge_type", path=("edge_type",))
        if not op.source or not op.target:
            raise SchemaError("addEdge needs source and target", path=("source",))
        edge_id = op.edge_id or ids.allocate(op.edge_type)
        if edge_id in edges:
            raise TypeViolationError(f"edge id '{edge_id}' already exists")
        edge = GraphEdge(
            id=edge_id, type=op.edge_type, source=op.source, target=op.target,
            source_port=op.source_port, target_port=op.target_port,
            properties=op.properties,
        )
        _check_edge(edge, nodes, edges, model)
        edges[edge_id] = edge
    elif op.kind == "removeEdge":
        if op.edge_id not in edges:
            raise UnknownIdError(f"no edge '{op.edge_id}'")
        del edges[op.edge_id]
    elif op.kind == "setProperty":
        node = _must_node(nodes, op.node_id)
        if op.prop_name is None:
            raise SchemaError("setProperty needs prop_name", path=("prop_name",))
        nt = model.node_type(node.type)
        new_props = dict(node.properties)
        if op.prop_value is None:
            new_props.pop(op.prop_name, None)
        else:
            new_props[op.prop_name] = op.prop_value
        _check_properties(node.id, new_props, nt)
        nodes[node.id] = replace(node, properties=new_props)
    elif op.kind == "setLabel":
        node = _must_node(nodes, op.node_id)
        if op.label is None:
            raise SchemaError("setLabel needs label", path=("label",))
        nodes[node.id] = replace(node, label=op.label)
    else:
        raise SchemaError(f"unknown edit kind '{op.kind}'", path=("kind",))

    return ProjectGraph(
        project_type=g.project_type, nodes=nodes, edges=edges, source_texts=g.source_texts
    )


def _must_node(nodes: Mapping[str, GraphNode], node_id: str | None) -> GraphNode:
    if node_id is None or node_id not in nodes:
        raise UnknownIdError(f"no node '{node_id}'")
    return nodes[node_id]


def _descendants(nodes: Mapping[str, GraphNode], node_id: str) -> list[str]:
    out: list[str] = []
    stack = [node_id]
    while stack:
        current = stack.pop()
        for node in nodes.values():
            if node.parent == current:
                out.append(node.id)
                stack.append(node.id)
    return out


# --- nested expansion ------------------------------------------------------------

#: Property names that may carry a nested-descriptor reference, most specific
#: first. The ETSI names come from the combined-model VDU attributes.
NESTED_REF_KEYS = ("vduNestedDesc", "nested_desc")
NESTED_TYPE_KEYS = ("vduNestedDescType", "nested_desc_type")


def nested_reference(node: GraphNode) -> tuple[str | None, str | None]:
    ref = next((node.properties[k] for k in NESTED_REF_KEYS if k in node.properties), None)
    kind = next((node.properties[k] for k in NESTED_TYPE_KEYS if k in node.properties), None)
    return ref, kind


def expand_node(
    g: ProjectGraph,
    node_id: str,
    registry: ModelRegistry,
    fetch: Callable[[str], str] | None = None,
) -> ProjectGraph:
    """Expand a node into its nested graph (re-expanding replaces the expansion).

    The nested descriptor text is looked up in the graph's source texts, then
    through the optional ``fetch`` callback (usually the project store).
    Boundary binding maps the node's connection-point children (their
    interface-reference property) onto boundary elements of the expansion.
    """
    model = registry.model(g.project_type)
    node = g.node(node_id)
    nt = model.node_type(node.type)
    if nt is None or nt.expandable_into is None:
        raise NotExpandableError(f"node type '{node.type}' is not expandable")

    ref, ref_type = nested_reference(node)
    if not ref:
        raise NotExpandableError(f"node '{node_id}' carries no nested descriptor reference")
    target_type = ref_type or nt.expandable_into
    target_model = registry.model(target_type)  # UnknownProjectType on first use
    adapter = registry.adapter(target_type)

    text = g.source_texts.get(ref)
    if text is None and fetch is not None:
        try:
            text = fetch(ref)
        except WorkbenchError:
            text = None
    if text is None:
        raise MissingNestedDescriptorError(
            f"nested descriptor '{ref}' not found", path=(node_id,)
        )

    try:
        nested = adapter.to_graph({ref: text})
    except WorkbenchError as exc:
        raise NestedParseError(f"nested descriptor '{ref}' failed to parse: {exc}") from exc

    # Requested boundary interfaces come from the node's children.
    requested: dict[str, str] = {}
    for child in sorted(g.children_of(node_id), key=lambda n: n.id):
        if_ref = child.properties.get("internalIfRef")
        if isinstance(if_ref, str) and if_ref:
            requested[child.id] = if_ref

    boundary: list[BoundaryLink] = []
    if requested:
        binding = adapter.boundary(text, sorted(set(requested.values())))
        by_interface: dict[str, list] = {}
        for port in binding.entries:
            by_interface.setdefault(port.interface, []).append(port)
        label_to_node = {n.label: n.id for n in nested.nodes.values() if n.parent is None}
        for cpd_id, if_ref in sorted(requested.items()):
            for port in by_interface.get(if_ref, ()):
                element_node = label_to_node.get(port.element)
                if element_node is None:
                    raise BoundaryBindingError(
                        f"boundary element '{port.element}' missing from expansion",
                        unmatched=[if_ref],
                    )
                boundary.append(
                    BoundaryLink(
                        cpd_node=cpd_id,
                        interface=if_ref,
                        direction=port.direction,
                        element_node=element_node,
                    )
                )

    expansion = Expansion(project_type=target_type, graph=nested, boundary=tuple(boundary))
    nodes = dict(g.nodes)
    nodes[node_id] = replace(node, expansion=expansion)
    return ProjectGraph(
        project_type=g.project_type, nodes=nodes, edges=g.edges, source_texts=g.source_texts
    )


# --- export / import ---------------------------------------------------------------


def export_graph(
    g: ProjectGraph,
    format: str = "json",
    view: str | None = None,
    model: DescriptionModel | None = None,
) -> str:
    """Serialize a graph (or one view of it) as JSON or DOT, deterministically."""
    if view is not None:
        if model is None:
            raise UnknownViewError("view projection requires the description model")
        vg = project_view(g, view, model)
        nodes = list(vg.nodes)
        edges = list(vg.edges)
    else:
        nodes = sorted(g.nodes.values(), key=lambda n: n.id)
        edges = sorted(g.edges.values(), key=lambda e: e.id)

    if format == "json":
        return json.dumps(_graph_dict(g, nodes, edges), indent=2) + "\n"
    if format == "dot":
        return _to_dot(g, nodes, edges, view)
    raise SchemaError(f"unsupported export format '{format}'", path=("format",))


def _node_dict(n: GraphNode) -> dict:
    out = {
        "id": n.id,
        "type": n.type,
        "label": n.label,
        "parent": n.parent,
        "properties": dict(sorted(n.properties.items())),
    }
    if n.expansion is not None:
        exp = n.expansion
        out["expansion"] = {
            "project_type": exp.project_type,
            "graph": _graph_dict(
                exp.graph,
                sorted(exp.graph.nodes.values(), key=lambda x: x.id),
                sorted(exp.graph.edges.values(), key=lambda x: x.id),
            ),
            "boundary": [b.to_dict() for b in exp.boundary],
        }
    return out


def _edge_dict(e: GraphEdge) -> dict:
    out = {
        "id": e.id,
        "type": e.type,
        "source": e.source,
        "target": e.target,
        "source_port": e.source_port,
        "target_port": e.target_port,
    }
    if e.properties:
        out["properties"] = dict(sorted(e.properties.items()))
    return out


def _graph_dict(g: ProjectGraph, nodes: list[GraphNode], edges: list[GraphEdge]) -> dict:
    return {
        "project_type": g.project_type,
        "nodes": [_node_dict(n) for n in nodes],
        "edges": [_edge_dict(e) for e in edges],
    }


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _to_dot(g: ProjectGraph, nodes: list[GraphNode], edges: list[GraphEdge], view: str | None) -> str:
    lines = [f"digraph {_dot_quote(g.project_type)} {{"]
    if view:
        lines.append(f"  graph [rdcl_view={_dot_quote(view)}];")
    for n in nodes:
        attrs = f"label={_dot_quote(n.label)}, rdcl_type={_dot_quote(n.type)}"
        if n.parent:
            attrs += f", rdcl_parent={_dot_quote(n.parent)}"
        lines.append(f"  {_dot_quote(n.id)} [{attrs}];")
    for e in edges:
        attrs = f"rdcl_type={_dot_quote(e.type)}"
        if e.source_port is not None:
            attrs += f", taillabel={_dot_quote(e.source_port)}"
        if e.target_port is not None:
            attrs += f", headlabel={_dot_quote(e.target_port)}"
        lines.append(f"  {_dot_quote(e.source)} -> {_dot_quote(e.target)} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def import_graph(text: str, model: DescriptionModel) -> ProjectGraph:
    """Load a graph-JSON document, validating every graph invariant."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(f"malformed graph JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise SchemaError("graph document must be an object", path=())
    return graph_from_dict(data, model)


def graph_from_dict(data: Mapping, model: DescriptionModel) -> ProjectGraph:
    for key in ("project_type", "nodes", "edges"):
        if key not in data:
            raise SchemaError(f"missing required field '{key}'", path=(key,))
    if not isinstance(data["nodes"], list) or not isinstance(data["edges"], list):
        raise SchemaError("nodes and edges must be arrays", path=("nodes",))

    nodes: dict[str, GraphNode] = {}
    for i, raw in enumerate(data["nodes"]):
        if not isinstance(raw, Mapping):
            raise SchemaError("node must be an object", path=("nodes", i))
        for key in ("id", "type"):
            if key not in raw:
                raise SchemaError(f"missing required field '{key}'", path=("nodes", i, key))
        expansion = None
        if raw.get("expansion") is not None:
            exp = raw["expansion"]
            # Nested graphs are typed by another project type; structural checks
            # against that model happen when the expansion is recomputed.
            nested_nodes = {
                n["id"]: GraphNode(
                    id=n["id"], type=n["type"], label=n.get("label", ""),
                    parent=n.get("parent"), properties=n.get("properties") or {},
                )
                for n in exp.get("graph", {}).get("nodes", [])
            }
            nested_edges = {
                e["id"]: GraphEdge(
                    id=e["id"], type=e["type"], source=e["source"], target=e["target"],
                    source_port=e.get("source_port"), target_port=e.get("target_port"),
                    properties=e.get("properties") or {},
                )
                for e in exp.get("graph", {}).get("edges", [])
            }
            expansion = Expansion(
                project_type=exp.get("project_type", ""),
                graph=ProjectGraph(
                    project_type=exp.get("graph", {}).get("project_type", ""),
                    nodes=nested_nodes,
                    edges=nested_edges,
                ),
                boundary=tuple(
                    BoundaryLink(
                        cpd_node=b["cpd_node"], interface=b["interface"],
                        direction=b["direction"], element_node=b["element_node"],
                    )
                    for b in exp.get("boundary", [])
                ),
            )
        node = GraphNode(
            id=raw["id"], type=raw["type"], label=raw.get("label", ""),
            parent=raw.get("parent"), properties=raw.get("properties") or {},
            expansion=expansion,
        )
        if node.id in nodes:
            raise SchemaError(f"duplicate node id '{node.id}'", path=("nodes", i, "id"))
        nodes[node.id] = node

    edges: dict[str, GraphEdge] = {}
    for i, raw in enumerate(data["edges"]):
        if not isinstance(raw, Mapping):
            raise SchemaError("edge must be an object", path=("edges", i))
        for key in ("id", "type", "source", "target"):
            if key not in raw:
                raise SchemaError(f"missing required field '{key}'", path=("edges", i, key))
        edge = GraphEdge(
            id=raw["id"], type=raw["type"], source=raw["source"], target=raw["target"],
            source_port=raw.get("source_port"), target_port=raw.get("target_port"),
            properties=raw.get("properties") or {},
        )
        if edge.id in edges:
            raise SchemaError(f"duplicate edge id '{edge.id}'", path=("edges", i, "id"))
        edges[edge.id] = edge

    g = ProjectGraph(project_type=data["project_type"], nodes=nodes, edges=edges)
    check_graph(g, model)
    return g
