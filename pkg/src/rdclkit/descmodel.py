"""Description models: per-project-type meta-models.

A description model declares the node types, link types, views, and
composition constraints of one project type. Project types are plugins:
a description-model document plus compiled-in implementations of the hooks
declared in its manifest. The registry binds the two at startup.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Iterable, Mapping

import yaml

from .errors import (
    DocumentSyntaxError,
    DuplicateTypeError,
    IoError,
    NameClashError,
    SchemaError,
    UnknownKeyWarning,
    UnknownProjectTypeError,
)

IDENTIFIER_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.-]*$")

PROPERTY_KINDS = ("string", "integer", "enum", "boolean")

#: Hook names a plugin manifest may declare.
PLUGIN_HOOKS = ("parse", "serialize", "to_graph", "from_graph", "validate_extra")


@dataclass(frozen=True)
class PropertySpec:
    kind: str
    required: bool = False
    allowed_values: tuple[str, ...] | None = None

    def accepts(self, value) -> bool:
        if self.kind == "string":
            return isinstance(value, str)
        if self.kind == "integer":
            return isinstance(value, int) and not isinstance(value, bool)
        if self.kind == "boolean":
            return isinstance(value, bool)
        if self.kind == "enum":
            return isinstance(value, str) and value in (self.allowed_values or ())
        return False


@dataclass(frozen=True)
class NodeTypeDef:
    name: str
    label: str = ""
    properties: Mapping[str, PropertySpec] = field(default_factory=dict)
    container_of: tuple[str, ...] = ()
    expandable_into: str | None = None


@dataclass(frozen=True)
class LinkTypeDef:
    name: str
    directed: bool = True
    source_types: tuple[str, ...] = ()
    target_types: tuple[str, ...] = ()
    max_out_degree: int | None = None
    max_in_degree: int | None = None
    ports: bool = False

    def permits(self, source_type: str, target_type: str) -> bool:
        """Endpoint legality; undirected links also permit the swapped pair."""
        if source_type in self.source_types and target_type in self.target_types:
            return True
        if not self.directed:
            return source_type in self.target_types and target_type in self.source_types
        return False


@dataclass(frozen=True)
class ViewDef:
    name: str
    node_types: tuple[str, ...] = ()
    link_types: tuple[str, ...] = ()


@dataclass(frozen=True)
class DescriptionModel:
    name: str
    version: str = "0.1"
    node_types: tuple[NodeTypeDef, ...] = ()
    link_types: tuple[LinkTypeDef, ...] = ()
    views: tuple[ViewDef, ...] = ()
    callbacks: tuple[str, ...] = ()

    def node_type(self, name: str) -> NodeTypeDef | None:
        for nt in self.node_types:
            if nt.name == name:
                return nt
        return None

    def link_type(self, name: str) -> LinkTypeDef | None:
        for lt in self.link_types:
            if lt.name == name:
                return lt
        return None

    def view(self, name: str) -> ViewDef | None:
        for v in self.views:
            if v.name == name:
                return v
        return None


# --- loading -----------------------------------------------------------------

_TOP_KEYS = ("name", "version", "node_types", "link_types", "views", "callbacks")
_NODE_KEYS = ("name", "label", "properties", "container_of", "expandable_into")
_LINK_KEYS = (
    "name",
    "directed",
    "source_types",
    "target_types",
    "max_out_degree",
    "max_in_degree",
    "ports",
)
_VIEW_KEYS = ("name", "node_types", "link_types")
_PROP_KEYS = ("kind", "required", "allowed_values")


def _require(data: Mapping, key: str, path: tuple):
    if key not in data or data[key] is None:
        raise SchemaError(f"missing required field '{key}'", path=path + (key,))
    return data[key]


def _expect_map(value, path: tuple) -> Mapping:
    if not isinstance(value, Mapping):
        raise SchemaError(
            f"expected a map, got {type(value).__name__}", path=path
        )
    return value


def _expect_list(value, path: tuple) -> list:
    if value is None:
        return []
    if not isinstance(value, list):
        raise SchemaError(f"expected a list, got {type(value).__name__}", path=path)
    return value


def _expect_str(value, path: tuple) -> str:
    if not isinstance(value, str):
        raise SchemaError(f"expected a string, got {type(value).__name__}", path=path)
    return value


def _expect_identifier(value, path: tuple) -> str:
    name = _expect_str(value, path)
    if not IDENTIFIER_RE.match(name):
        raise SchemaError(f"'{name}' is not a legal identifier", path=path)
    return name


def _warn_unknown(data: Mapping, known: Iterable[str], path: tuple):
    for key in data:
        if key not in known:
            warnings.warn(
                f"ignoring unknown key '{format_key(path, key)}'", UnknownKeyWarning,
                stacklevel=3,
            )


def format_key(path: tuple, key) -> str:
    from .errors import format_path

    return format_path(path + (key,))


def _parse_property(name: str, raw, path: tuple) -> PropertySpec:
    data = _expect_map(raw, path)
    _warn_unknown(data, _PROP_KEYS, path)
    kind = _expect_str(_require(data, "kind", path), path + ("kind",))
    if kind not in PROPERTY_KINDS:
        raise SchemaError(
            f"unknown property kind '{kind}' (expected one of {', '.join(PROPERTY_KINDS)})",
            path=path + ("kind",),
        )
    required = bool(data.get("required", False))
    allowed = data.get("allowed_values")
    if allowed is not None:
        allowed = tuple(
            _expect_str(v, path + ("allowed_values", i))
            for i, v in enumerate(_expect_list(allowed, path + ("allowed_values",)))
        )
    if kind == "enum" and not allowed:
        raise SchemaError(
            "enum property needs non-empty allowed_values", path=path + ("allowed_values",)
        )
    return PropertySpec(kind=kind, required=required, allowed_values=allowed)


def _parse_node_type(raw, path: tuple) -> NodeTypeDef:
    data = _expect_map(raw, path)
    _warn_unknown(data, _NODE_KEYS, path)
    name = _expect_identifier(_require(data, "name", path), path + ("name",))
    label = _expect_str(data.get("label", name), path + ("label",))
    props: dict[str, PropertySpec] = {}
    raw_props = data.get("properties") or {}
    _expect_map(raw_props, path + ("properties",)) if raw_props else {}
    for pname, pval in (raw_props or {}).items():
        if pname in props:
            raise SchemaError(f"duplicate property '{pname}'", path=path + ("properties", pname))
        props[pname] = _parse_property(pname, pval, path + ("properties", pname))
    container = tuple(
        _expect_identifier(v, path + ("container_of", i))
        for i, v in enumerate(_expect_list(data.get("container_of"), path + ("container_of",)))
    )
    expandable = data.get("expandable_into")
    if expandable is not None:
        expandable = _expect_identifier(expandable, path + ("expandable_into",))
    return NodeTypeDef(
        name=name,
        label=label,
        properties=props,
        container_of=container,
        expandable_into=expandable,
    )


def _parse_link_type(raw, path: tuple) -> LinkTypeDef:
    data = _expect_map(raw, path)
    _warn_unknown(data, _LINK_KEYS, path)
    name = _expect_identifier(_require(data, "name", path), path + ("name",))
    sources = tuple(
        _expect_identifier(v, path + ("source_types", i))
        for i, v in enumerate(_expect_list(_require(data, "source_types", path), path + ("source_types",)))
    )
    targets = tuple(
        _expect_identifier(v, path + ("target_types", i))
        for i, v in enumerate(_expect_list(_require(data, "target_types", path), path + ("target_types",)))
    )
    if not sources:
        raise SchemaError("source_types must be non-empty", path=path + ("source_types",))
    if not targets:
        raise SchemaError("target_types must be non-empty", path=path + ("target_types",))

    def _degree(key: str) -> int | None:
        value = data.get(key)
        if value is None:
            return None
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise SchemaError("expected a nonnegative integer", path=path + (key,))
        return value

    return LinkTypeDef(
        name=name,
        directed=bool(data.get("directed", True)),
        source_types=sources,
        target_types=targets,
        max_out_degree=_degree("max_out_degree"),
        max_in_degree=_degree("max_in_degree"),
        ports=bool(data.get("ports", False)),
    )


def _parse_view(raw, path: tuple) -> ViewDef:
    data = _expect_map(raw, path)
    _warn_unknown(data, _VIEW_KEYS, path)
    name = _expect_identifier(_require(data, "name", path), path + ("name",))
    nodes = tuple(
        _expect_identifier(v, path + ("node_types", i))
        for i, v in enumerate(_expect_list(_require(data, "node_types", path), path + ("node_types",)))
    )
    links = tuple(
        _expect_identifier(v, path + ("link_types", i))
        for i, v in enumerate(_expect_list(data.get("link_types"), path + ("link_types",)))
    )
    if not nodes:
        raise SchemaError("node_types must be non-empty", path=path + ("node_types",))
    if len(set(nodes)) != len(nodes):
        raise SchemaError("duplicate entries in node_types", path=path + ("node_types",))
    if len(set(links)) != len(links):
        raise SchemaError("duplicate entries in link_types", path=path + ("link_types",))
    return ViewDef(name=name, node_types=nodes, link_types=links)


def load_description_model(text: str) -> DescriptionModel:
    """Parse and check a description-model document (YAML).

    Raises DocumentSyntaxError for malformed YAML and SchemaError (with a
    document path) for missing fields, dangling type references, and
    duplicate names. Unknown keys warn and are ignored.
    """
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise DocumentSyntaxError(f"malformed document: {exc}") from exc
    if data is None:
        raise SchemaError("empty document", path=())
    data = _expect_map(data, ())
    _warn_unknown(data, _TOP_KEYS, ())

    name = _expect_identifier(_require(data, "name", ()), ("name",))
    version = str(data.get("version", "0.1"))

    node_types = tuple(
        _parse_node_type(raw, ("node_types", i))
        for i, raw in enumerate(_expect_list(data.get("node_types"), ("node_types",)))
    )
    link_types = tuple(
        _parse_link_type(raw, ("link_types", i))
        for i, raw in enumerate(_expect_list(data.get("link_types"), ("link_types",)))
    )
    views = tuple(
        _parse_view(raw, ("views", i))
        for i, raw in enumerate(_expect_list(data.get("views"), ("views",)))
    )
    callbacks = tuple(
        _expect_str(v, ("callbacks", i))
        for i, v in enumerate(_expect_list(data.get("callbacks"), ("callbacks",)))
    )

    model = DescriptionModel(
        name=name,
        version=version,
        node_types=node_types,
        link_types=link_types,
        views=views,
        callbacks=callbacks,
    )
    check_model(model)
    return model


def check_model(model: DescriptionModel):
    """Enforce the cross-reference invariants of a description model."""
    node_names = [nt.name for nt in model.node_types]
    if len(set(node_names)) != len(node_names):
        dup = _first_dup(node_names)
        raise SchemaError(
            f"duplicate node type '{dup}'", path=("node_types", node_names.index(dup, node_names.index(dup) + 1))
        )
    link_names = [lt.name for lt in model.link_types]
    if len(set(link_names)) != len(link_names):
        dup = _first_dup(link_names)
        raise SchemaError(
            f"duplicate link type '{dup}'", path=("link_types", link_names.index(dup, link_names.index(dup) + 1))
        )
    view_names = [v.name for v in model.views]
    if len(set(view_names)) != len(view_names):
        dup = _first_dup(view_names)
        raise SchemaError(
            f"duplicate view '{dup}'", path=("views", view_names.index(dup, view_names.index(dup) + 1))
        )

    known_nodes = set(node_names)
    known_links = set(link_names)
    for i, lt in enumerate(model.link_types):
        for j, t in enumerate(lt.source_types):
            if t not in known_nodes:
                raise SchemaError(
                    f"link type '{lt.name}' references unknown node type '{t}'",
                    path=("link_types", i, "source_types", j),
                )
        for j, t in enumerate(lt.target_types):
            if t not in known_nodes:
                raise SchemaError(
                    f"link type '{lt.name}' references unknown node type '{t}'",
                    path=("link_types", i, "target_types", j),
                )
    for i, nt in enumerate(model.node_types):
        for j, child in enumerate(nt.container_of):
            if child not in known_nodes:
                raise SchemaError(
                    f"node type '{nt.name}' contains unknown node type '{child}'",
                    path=("node_types", i, "container_of", j),
                )
    for i, view in enumerate(model.views):
        for j, t in enumerate(view.node_types):
            if t not in known_nodes:
                raise SchemaError(
                    f"view '{view.name}' references unknown node type '{t}'",
                    path=("views", i, "node_types", j),
                )
        for j, t in enumerate(view.link_types):
            if t not in known_links:
                raise SchemaError(
                    f"view '{view.name}' references unknown link type '{t}'",
                    path=("views", i, "link_types", j),
                )


def _first_dup(names: list[str]) -> str:
    seen = set()
    for n in names:
        if n in seen:
            return n
        seen.add(n)
    return names[-1]


# --- canonical serialization ---------------------------------------------------


def serialize_description_model(model: DescriptionModel) -> str:
    """Emit the canonical YAML form (map keys sorted lexicographically)."""

    def prop(spec: PropertySpec) -> dict:
        out: dict[str, Any] = {"kind": spec.kind}
        if spec.required:
            out["required"] = True
        if spec.allowed_values is not None:
            out["allowed_values"] = list(spec.allowed_values)
        return out

    def node(nt: NodeTypeDef) -> dict:
        out: dict[str, Any] = {"name": nt.name, "label": nt.label}
        if nt.properties:
            out["properties"] = {k: prop(v) for k, v in sorted(nt.properties.items())}
        if nt.container_of:
            out["container_of"] = list(nt.container_of)
        if nt.expandable_into:
            out["expandable_into"] = nt.expandable_into
        return out

    def link(lt: LinkTypeDef) -> dict:
        out: dict[str, Any] = {
            "name": lt.name,
            "directed": lt.directed,
            "source_types": list(lt.source_types),
            "target_types": list(lt.target_types),
        }
        if lt.max_out_degree is not None:
            out["max_out_degree"] = lt.max_out_degree
        if lt.max_in_degree is not None:
            out["max_in_degree"] = lt.max_in_degree
        if lt.ports:
            out["ports"] = True
        return out

    doc: dict[str, Any] = {
        "name": model.name,
        "version": model.version,
        "node_types": [node(nt) for nt in model.node_types],
        "link_types": [link(lt) for lt in model.link_types],
        "views": [
            {
                "name": v.name,
                "node_types": list(v.node_types),
                "link_types": list(v.link_types),
            }
            for v in model.views
        ],
    }
    if model.callbacks:
        doc["callbacks"] = list(model.callbacks)
    return yaml.safe_dump(doc, sort_keys=True, default_flow_style=False)


# --- registry -------------------------------------------------------------------


class ModelRegistry:
    """Project-type registry: description models plus their bound adapters.

    Immutable after startup registration by convention; reads are safe to
    share across threads.
    """

    def __init__(self):
        self._models: dict[str, DescriptionModel] = {}
        self._adapters: dict[str, Any] = {}

    def __len__(self) -> int:
        return len(self._models)

    def __contains__(self, name: str) -> bool:
        return name in self._models

    def names(self) -> list[str]:
        return sorted(self._models)

    def register(self, model: DescriptionModel, adapter=None, replace: bool = False) -> "ModelRegistry":
        if model.name in self._models and not replace:
            raise DuplicateTypeError(f"project type '{model.name}' already registered")
        self._models[model.name] = model
        if adapter is not None or model.name not in self._adapters:
            self._adapters[model.name] = adapter
        return self

    def model(self, name: str) -> DescriptionModel:
        try:
            return self._models[name]
        except KeyError:
            raise UnknownProjectTypeError(f"unknown project type '{name}'") from None

    def adapter(self, name: str):
        if name not in self._models:
            raise UnknownProjectTypeError(f"unknown project type '{name}'")
        adapter = self._adapters.get(name)
        if adapter is None:
            from .plugins import GenericAdapter

            adapter = GenericAdapter(name)
            self._adapters[name] = adapter
        return adapter

    def resolve_expansion_target(self, node_type: NodeTypeDef) -> DescriptionModel:
        """Final cross-reference check, deferred to first use."""
        target = node_type.expandable_into
        if target is None:
            raise UnknownProjectTypeError(
                f"node type '{node_type.name}' is not expandable"
            )
        return self.model(target)


def register(model: DescriptionModel, registry: ModelRegistry, *, replace: bool = False) -> ModelRegistry:
    """Functional spelling of ModelRegistry.register."""
    return registry.register(model, replace=replace)


# --- scaffolding -----------------------------------------------------------------

_SKELETON_MODEL = """\
# Description model for the '{name}' project type.
name: {name}
version: "0.1"
node_types:
  - name: {name}_node
    label: "{title} node"
    properties:
      name:
        kind: string
link_types: []
views:
  - name: main
    node_types: [{name}_node]
    link_types: []
callbacks: [parse, serialize, to_graph]
"""

_SKELETON_MANIFEST = """\
# Plugin manifest for the '{name}' project type.
# Map each hook to a compiled-in implementation key; unknown keys stay dormant
# until an implementation with that key is registered.
project_type: {name}
hooks:
  parse: {name}.parse
  serialize: {name}.serialize
  to_graph: {name}.to_graph
  from_graph: {name}.from_graph
  validate_extra: {name}.validate_extra
"""


def scaffold_project_type(name: str, out_dir) -> list[str]:
    """Create the skeleton files for a new project type.

    Returns the created paths: the description-model document, the plugin
    manifest stub, and one (empty) example descriptor in a fixtures directory.
    """
    if not IDENTIFIER_RE.match(name):
        raise SchemaError(f"'{name}' is not a legal identifier", path=("name",))
    root = Path(out_dir) / name
    if root.exists():
        raise NameClashError(f"directory '{root}' already exists")
    try:
        (root / "examples").mkdir(parents=True)
        model_path = root / f"{name}.model.yaml"
        manifest_path = root / f"{name}.manifest.yaml"
        example_path = root / "examples" / f"{name}-example.yaml"
        model_path.write_text(
            _SKELETON_MODEL.format(name=name, title=name.capitalize()), encoding="utf-8"
        )
        manifest_path.write_text(_SKELETON_MANIFEST.format(name=name), encoding="utf-8")
        example_path.write_text("", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write skeleton: {exc}") from exc
    # The generator's own contract: the skeleton must load cleanly.
    load_description_model(model_path.read_text(encoding="utf-8"))
    return [str(model_path), str(manifest_path), str(example_path)]


def load_manifest(text: str) -> dict:
    """Parse a plugin manifest stub; returns {project_type, hooks}."""
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise DocumentSyntaxError(f"malformed manifest: {exc}") from exc
    data = _expect_map(data or {}, ())
    project_type = _expect_identifier(_require(data, "project_type", ()), ("project_type",))
    hooks = data.get("hooks") or {}
    hooks = dict(_expect_map(hooks, ("hooks",)))
    for key in hooks:
        if key not in PLUGIN_HOOKS:
            warnings.warn(f"ignoring unknown hook '{key}'", UnknownKeyWarning, stacklevel=2)
    return {"project_type": project_type, "hooks": hooks}
