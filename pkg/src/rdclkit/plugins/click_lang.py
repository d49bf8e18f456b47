"""Parser, serializer, linter, and graph mapper for Click router configurations.

Supported grammar subset: declarations ``a, b :: Class(args);``, connection
chains ``x [1] -> [0] y -> z;`` (a bracket after an element is its output
port, a bracket before an element is that element's input port), anonymous
elements ``Class(args)`` inline in chains, ``elementclass Name { ... };``
compounds with ``input``/``output`` boundary pseudo-elements, ``//`` and
``/* */`` comments, and config strings with balanced parentheses. Anything
directive-shaped that is not part of the subset (``require(...)`` and
friends) is preserved opaquely with a warning.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

from ..descmodel import DescriptionModel
from ..errors import (
    AmbiguousBindingError,
    BoundaryBindingError,
    DocumentSyntaxError,
    DuplicateNameError,
    UnknownKeyWarning,
    UnresolvedElementError,
)
from ..graph import GraphBuilder, ProjectGraph
from ..report import Finding

#: Boundary element classes of the ClickOS-style combined model; the first
#: config argument names the VM interface the element is attached to.
DEFAULT_BOUNDARY_CLASSES: Mapping[str, str] = {
    "FromDevice": "ingress",
    "FromNetfront": "ingress",
    "ToDevice": "egress",
    "ToNetfront": "egress",
}

_PSEUDO = ("input", "output")


# --- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class ElementInstance:
    name: str
    class_name: str
    config_args: tuple[str, ...] = ()
    raw_config: str = ""
    anonymous: bool = False
    pseudo: bool = False  # input/output boundary markers of compound bodies


@dataclass(frozen=True)
class Hop:
    name: str
    in_port: int = 0
    out_port: int = 0


@dataclass(frozen=True)
class Link:
    source: str
    source_port: int
    target: str
    target_port: int


@dataclass(frozen=True)
class Declaration:
    names: tuple[str, ...]
    class_name: str
    config_args: tuple[str, ...] = ()
    raw_config: str = ""
    anonymous: bool = False


@dataclass(frozen=True)
class Connection:
    hops: tuple[Hop, ...]

    def links(self) -> list[Link]:
        out = []
        for a, b in zip(self.hops, self.hops[1:]):
            out.append(Link(a.name, a.out_port, b.name, b.in_port))
        return out


@dataclass(frozen=True)
class OpaqueDirective:
    name: str
    raw_config: str


@dataclass(frozen=True)
class CompoundDef:
    name: str
    body: "ClickConfig"


Statement = Declaration | Connection | OpaqueDirective | CompoundDef


@dataclass(frozen=True)
class ClickConfig:
    statements: tuple[Statement, ...] = ()
    elements: Mapping[str, ElementInstance] = field(default_factory=dict)
    compounds: Mapping[str, CompoundDef] = field(default_factory=dict)
    links: tuple[Link, ...] = ()

    def structure(self):
        """Comparable shape: names, classes, args, links, compounds."""
        return (
            tuple(sorted((e.name, e.class_name, e.config_args) for e in self.elements.values())),
            tuple(sorted((l.source, l.source_port, l.target, l.target_port) for l in self.links)),
            tuple(sorted((name, c.body.structure()) for name, c in self.compounds.items())),
            tuple(sorted((s.name, s.raw_config) for s in self.statements if isinstance(s, OpaqueDirective))),
        )


# --- scanner ---------------------------------------------------------------------


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def at_end(self) -> bool:
        self.skip_trivia()
        return self.pos >= len(self.text)

    def line_col(self, pos: int | None = None) -> tuple[int, int]:
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, message: str) -> DocumentSyntaxError:
        line, col = self.line_col()
        return DocumentSyntaxError(f"{message} (line {line}, column {col})")

    def skip_trivia(self):
        text, n = self.text, len(self.text)
        while self.pos < n:
            c = text[self.pos]
            if c in " \t\r\n":
                self.pos += 1
            elif text.startswith("//", self.pos):
                nl = text.find("\n", self.pos)
                self.pos = n if nl < 0 else nl + 1
            elif text.startswith("/*", self.pos):
                end = text.find("*/", self.pos + 2)
                if end < 0:
                    raise self.error("unterminated block comment")
                self.pos = end + 2
            else:
                return

    def peek(self) -> str:
        self.skip_trivia()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def startswith(self, literal: str) -> bool:
        self.skip_trivia()
        return self.text.startswith(literal, self.pos)

    def match(self, literal: str) -> bool:
        if self.startswith(literal):
            self.pos += len(literal)
            return True
        return False

    def expect(self, literal: str):
        if not self.match(literal):
            raise self.error(f"expected '{literal}'")

    def read_ident(self) -> str | None:
        self.skip_trivia()
        start = self.pos
        text, n = self.text, len(self.text)
        if start >= n or not (text[start].isalpha() or text[start] == "_"):
            return None
        i = start + 1
        while i < n and (text[i].isalnum() or text[i] in "_@/"):
            i += 1
        self.pos = i
        return text[start:i]

    def read_int(self) -> int | None:
        self.skip_trivia()
        start = self.pos
        text, n = self.text, len(self.text)
        i = start
        while i < n and text[i].isdigit():
            i += 1
        if i == start:
            return None
        self.pos = i
        return int(text[start:i])

    def read_config_string(self) -> str:
        """Raw config between parens; honors nesting, quotes, and comments."""
        assert self.text[self.pos - 1] == "("
        start = self.pos
        depth = 1
        text, n = self.text, len(self.text)
        i = start
        while i < n:
            c = text[i]
            if c == '"':
                i += 1
                while i < n and text[i] != '"':
                    i += 2 if text[i] == "\\" else 1
                if i >= n:
                    self.pos = i
                    raise self.error("unterminated string in config")
                i += 1
            elif text.startswith("//", i):
                nl = text.find("\n", i)
                i = n if nl < 0 else nl + 1
            elif text.startswith("/*", i):
                end = text.find("*/", i + 2)
                if end < 0:
                    self.pos = i
                    raise self.error("unterminated block comment in config")
                i = end + 2
            elif c == "(":
                depth += 1
                i += 1
            elif c == ")":
                depth -= 1
                if depth == 0:
                    self.pos = i + 1
                    return text[start:i].strip()
                i += 1
            else:
                i += 1
        self.pos = i
        raise self.error("unbalanced parentheses in config")


def split_config_args(raw: str) -> tuple[str, ...]:
    """Split a raw config string on top-level commas."""
    if not raw.strip():
        return ()
    args: list[str] = []
    depth = 0
    current: list[str] = []
    i, n = 0, len(raw)
    while i < n:
        c = raw[i]
        if c == '"':
            current.append(c)
            i += 1
            while i < n and raw[i] != '"':
                current.append(raw[i])
                i += 2 if raw[i] == "\\" else 1
            if i < n:
                current.append('"')
                i += 1
            continue
        if c in "([{":
            depth += 1
        elif c in ")]}":
            depth -= 1
        elif c == "," and depth == 0:
            args.append("".join(current).strip())
            current = []
            i += 1
            continue
        current.append(c)
        i += 1
    args.append("".join(current).strip())
    return tuple(args)


# --- raw statement forms (pre-resolution) -----------------------------------------


@dataclass
class _RawRef:
    ident: str
    raw_config: str | None  # None = no parens at all
    in_port: int = 0
    out_port: int = 0


@dataclass
class _RawChain:
    refs: list[_RawRef]


@dataclass
class _RawDecl:
    names: list[str]
    class_name: str
    raw_config: str | None


@dataclass
class _RawCompound:
    name: str
    body_statements: list


def _parse_statements(sc: _Scanner, *, in_compound: bool, depth: int = 0) -> list:
    statements: list = []
    while True:
        if in_compound:
            if sc.peek() == "}":
                return statements
            if sc.at_end():
                raise sc.error("unterminated compound body")
        elif sc.at_end():
            return statements
        statements.append(_parse_statement(sc, in_compound=in_compound, depth=depth))


def _parse_statement(sc: _Scanner, *, in_compound: bool, depth: int):
    if sc.match(";"):  # stray empty statement
        return _RawChain(refs=[])

    mark = sc.pos
    ident = sc.read_ident()
    if ident == "elementclass":
        name = sc.read_ident()
        if name is None:
            raise sc.error("expected compound name after 'elementclass'")
        sc.expect("{")
        body = _parse_statements(sc, in_compound=True, depth=depth + 1)
        sc.expect("}")
        sc.match(";")
        return _RawCompound(name=name, body_statements=body)
    sc.pos = mark  # rewind; chains and declarations share their first token

    refs = [_parse_ref(sc)]
    if sc.peek() in (",", ":"):
        # declaration: name list '::' class
        names = [refs[0].ident]
        if refs[0].raw_config is not None or refs[0].in_port or refs[0].out_port:
            raise sc.error("declaration names cannot carry ports or config")
        while sc.match(","):
            name = sc.read_ident()
            if name is None:
                raise sc.error("expected name in declaration list")
            names.append(name)
        sc.expect("::")
        class_name = sc.read_ident()
        if class_name is None:
            raise sc.error("expected class name after '::'")
        raw = sc.read_config_string() if sc.match("(") else None
        sc.expect(";")
        return _RawDecl(names=names, class_name=class_name, raw_config=raw)

    while sc.match("->"):
        refs.append(_parse_ref(sc))
    sc.expect(";")
    return _RawChain(refs=refs)


def _parse_ref(sc: _Scanner) -> _RawRef:
    in_port = 0
    if sc.match("["):
        value = sc.read_int()
        if value is None:
            raise sc.error("expected port number")
        sc.expect("]")
        in_port = value
    ident = sc.read_ident()
    if ident is None:
        raise sc.error("expected element or class name")
    raw = sc.read_config_string() if sc.match("(") else None
    out_port = 0
    if sc.match("["):
        value = sc.read_int()
        if value is None:
            raise sc.error("expected port number")
        sc.expect("]")
        out_port = value
    return _RawRef(ident=ident, raw_config=raw, in_port=in_port, out_port=out_port)


# --- resolution --------------------------------------------------------------------


class _Scope:
    def __init__(self, *, in_compound: bool, compound_names: set[str]):
        self.in_compound = in_compound
        self.compound_names = compound_names
        self.elements: dict[str, ElementInstance] = {}
        self._anon_counters: dict[str, int] = {}

    def declare(self, name: str, class_name: str, raw: str | None, *, anonymous: bool = False) -> ElementInstance:
        if name in self.elements:
            raise DuplicateNameError(f"element '{name}' declared twice")
        raw_text = raw or ""
        element = ElementInstance(
            name=name,
            class_name=class_name,
            config_args=split_config_args(raw_text),
            raw_config=raw_text,
            anonymous=anonymous,
        )
        self.elements[name] = element
        return element

    def anonymous(self, class_name: str, raw: str | None) -> ElementInstance:
        n = self._anon_counters.get(class_name, 0)
        while True:
            n += 1
            name = f"{class_name}@{n}"
            if name not in self.elements:
                break
        self._anon_counters[class_name] = n
        return self.declare(name, class_name, raw, anonymous=True)

    def pseudo(self, name: str) -> ElementInstance:
        if name not in self.elements:
            self.elements[name] = ElementInstance(
                name=name, class_name=name, pseudo=True
            )
        return self.elements[name]


def _looks_like_class(ident: str, compound_names: set[str]) -> bool:
    return ident[0].isupper() or ident in compound_names


def _resolve_scope(
    raw_statements: list, *, in_compound: bool, outer_compounds: frozenset[str] = frozenset()
) -> ClickConfig:
    own_compounds = {s.name for s in raw_statements if isinstance(s, _RawCompound)}
    compound_names = set(own_compounds) | set(outer_compounds)
    scope = _Scope(in_compound=in_compound, compound_names=compound_names)

    # Pass 1: declarations bind names file-wide; compounds resolve recursively.
    compounds: dict[str, CompoundDef] = {}
    for raw in raw_statements:
        if isinstance(raw, _RawDecl):
            for name in raw.names:
                scope.declare(name, raw.class_name, raw.raw_config)
        elif isinstance(raw, _RawCompound):
            if raw.name in compounds:
                raise DuplicateNameError(f"compound '{raw.name}' defined twice")
            compounds[raw.name] = CompoundDef(
                name=raw.name,
                body=_resolve_scope(
                    raw.body_statements,
                    in_compound=True,
                    outer_compounds=frozenset(compound_names),
                ),
            )

    # Pass 2: chains resolve against the full symbol table; anonymous elements
    # are named in order of first appearance.
    statements: list[Statement] = []
    links: list[Link] = []
    for raw in raw_statements:
        if isinstance(raw, _RawDecl):
            statements.append(
                Declaration(
                    names=tuple(raw.names),
                    class_name=raw.class_name,
                    config_args=split_config_args(raw.raw_config or ""),
                    raw_config=raw.raw_config or "",
                )
            )
        elif isinstance(raw, _RawCompound):
            statements.append(compounds[raw.name])
        elif isinstance(raw, _RawChain):
            if not raw.refs:
                continue
            statement = _resolve_chain(raw, scope)
            if statement is None:
                continue
            statements.append(statement)
            if isinstance(statement, Connection):
                links.extend(statement.links())
        else:  # pragma: no cover - parser emits only the three raw forms
            raise AssertionError(raw)

    return ClickConfig(
        statements=tuple(statements),
        elements=dict(scope.elements),
        compounds=compounds,
        links=tuple(links),
    )


def _resolve_chain(raw: _RawChain, scope: _Scope) -> Statement | None:
    if len(raw.refs) == 1:
        ref = raw.refs[0]
        if ref.ident in scope.elements:
            return None  # bare mention of a declared element: no effect
        if scope.in_compound and ref.ident in _PSEUDO:
            scope.pseudo(ref.ident)
            return None
        if _looks_like_class(ref.ident, scope.compound_names):
            element = scope.anonymous(ref.ident, ref.raw_config)
            return Declaration(
                names=(element.name,),
                class_name=element.class_name,
                config_args=element.config_args,
                raw_config=element.raw_config,
                anonymous=True,
            )
        if ref.raw_config is not None:
            warnings.warn(
                f"preserving unrecognized directive '{ref.ident}(...)'",
                UnknownKeyWarning,
                stacklevel=4,
            )
            return OpaqueDirective(name=ref.ident, raw_config=ref.raw_config)
        raise UnresolvedElementError(f"'{ref.ident}' is not declared")

    hops = []
    for ref in raw.refs:
        hops.append(
            Hop(name=_resolve_ref(ref, scope), in_port=ref.in_port, out_port=ref.out_port)
        )
    return Connection(hops=tuple(hops))


def _resolve_ref(ref: _RawRef, scope: _Scope) -> str:
    if ref.raw_config is None and ref.ident in scope.elements:
        return ref.ident
    if scope.in_compound and ref.ident in _PSEUDO and ref.raw_config is None:
        return scope.pseudo(ref.ident).name
    if _looks_like_class(ref.ident, scope.compound_names):
        return scope.anonymous(ref.ident, ref.raw_config).name
    raise UnresolvedElementError(
        f"'{ref.ident}' is neither declared nor a class-style anonymous form"
    )


def parse_click(text: str) -> ClickConfig:
    """Parse a Click configuration into its AST."""
    sc = _Scanner(text)
    raw_statements = _parse_statements(sc, in_compound=False)
    return _resolve_scope(raw_statements, in_compound=False)


# --- serialization ------------------------------------------------------------------


def serialize_click(cfg: ClickConfig, indent: str = "") -> str:
    """Emit canonical text; parse(serialize(cfg)) is structurally equal to cfg.

    Anonymous elements are re-emitted inline where they appear in exactly one
    chain; anonymous elements referenced from several statements (possible in
    programmatically built configs) get generated declarations instead.
    """
    mentions: dict[str, int] = {}
    for statement in cfg.statements:
        if isinstance(statement, Connection):
            for hop in statement.hops:
                mentions[hop.name] = mentions.get(hop.name, 0) + 1

    def inline_ok(name: str) -> bool:
        element = cfg.elements.get(name)
        return element is not None and element.anonymous and mentions.get(name, 0) == 1

    lines: list[str] = []
    declared: set[str] = {
        name for name, e in cfg.elements.items() if not e.anonymous and not e.pseudo
    }

    def ensure_declared(name: str):
        element = cfg.elements[name]
        if name in declared or element.pseudo or inline_ok(name):
            return
        lines.append(indent + _render_decl((name,), element.class_name, element.raw_config))
        declared.add(name)

    for statement in cfg.statements:
        if isinstance(statement, CompoundDef):
            body = serialize_click(statement.body, indent=indent + "  ")
            lines.append(f"{indent}elementclass {statement.name} {{")
            if body:
                lines.append(body.rstrip("\n"))
            lines.append(f"{indent}}};")
        elif isinstance(statement, Declaration):
            if statement.anonymous:
                name = statement.names[0]
                if mentions.get(name, 0) == 0:
                    lines.append(indent + _render_class(statement.class_name, statement.raw_config) + ";")
                    continue
                ensure_declared(name)
            else:
                lines.append(
                    indent + _render_decl(statement.names, statement.class_name, statement.raw_config)
                )
        elif isinstance(statement, OpaqueDirective):
            lines.append(f"{indent}{statement.name}({statement.raw_config});")
        elif isinstance(statement, Connection):
            for hop in statement.hops:
                if cfg.elements[hop.name].anonymous:
                    ensure_declared(hop.name)
            lines.append(indent + _render_chain(statement, cfg, inline_ok))
    return "\n".join(lines) + ("\n" if lines else "")


def _render_class(class_name: str, raw_config: str) -> str:
    return f"{class_name}({raw_config})" if raw_config else class_name


def _render_decl(names: Sequence[str], class_name: str, raw_config: str) -> str:
    return f"{', '.join(names)} :: {_render_class(class_name, raw_config)};"


def _render_chain(conn: Connection, cfg: ClickConfig, inline_ok) -> str:
    parts = []
    for i, hop in enumerate(conn.hops):
        element = cfg.elements[hop.name]
        if element.pseudo:
            text = element.name
        elif inline_ok(hop.name):
            text = _render_class(element.class_name, element.raw_config)
        else:
            text = hop.name
        if hop.in_port != 0:
            text = f"[{hop.in_port}] {text}"
        if hop.out_port != 0:
            text = f"{text} [{hop.out_port}]"
        parts.append(text)
    return " -> ".join(parts) + ";"


# --- graph mapping -------------------------------------------------------------------


def click_to_graph(cfg: ClickConfig, model: DescriptionModel) -> ProjectGraph:
    """Map a config onto the universal graph: one node per element, one edge per link."""
    builder = GraphBuilder(model, project_type=model.name)
    _emit_scope(builder, cfg, parent=None)
    return builder.build()


def _emit_scope(builder: GraphBuilder, cfg: ClickConfig, parent: str | None):
    node_ids: dict[str, str] = {}
    for element in cfg.elements.values():
        if element.pseudo:
            node_ids[element.name] = builder.add_node(
                "click_io",
                label=element.name,
                parent=parent,
                properties={"direction": element.name},
            )
        else:
            props: dict = {"class": element.class_name}
            if element.raw_config:
                props["config"] = element.raw_config
            node_ids[element.name] = builder.add_node(
                "click_element", label=element.name, parent=parent, properties=props
            )
    for compound in cfg.compounds.values():
        compound_id = builder.add_node("click_compound", label=compound.name, parent=parent)
        _emit_scope(builder, compound.body, parent=compound_id)
    for link in cfg.links:
        builder.add_edge(
            "click_link",
            node_ids[link.source],
            node_ids[link.target],
            source_port=str(link.source_port),
            target_port=str(link.target_port),
        )


def graph_to_click(g: ProjectGraph) -> ClickConfig:
    """Rebuild a config from a click graph (all elements become declarations)."""
    return _scope_from_graph(g, parent=None)


def _scope_from_graph(g: ProjectGraph, parent: str | None) -> ClickConfig:
    statements: list[Statement] = []
    elements: dict[str, ElementInstance] = {}
    compounds: dict[str, CompoundDef] = {}
    node_names: dict[str, str] = {}

    def unique_name(base: str) -> str:
        name = base
        n = 1
        while name in elements or name in compounds:
            n += 1
            name = f"{base}_{n}"
        return name

    level = sorted((n for n in g.nodes.values() if n.parent == parent), key=lambda n: n.id)
    for node in level:
        if node.type == "click_element":
            name = unique_name(node.label or node.id)
            raw = str(node.properties.get("config", ""))
            element = ElementInstance(
                name=name,
                class_name=str(node.properties.get("class", "Unknown")),
                config_args=split_config_args(raw),
                raw_config=raw,
            )
            elements[name] = element
            node_names[node.id] = name
            statements.append(
                Declaration(
                    names=(name,), class_name=element.class_name,
                    config_args=element.config_args, raw_config=raw,
                )
            )
        elif node.type == "click_io":
            direction = str(node.properties.get("direction", node.label))
            elements[direction] = ElementInstance(name=direction, class_name=direction, pseudo=True)
            node_names[node.id] = direction
        elif node.type == "click_compound":
            name = unique_name(node.label or node.id)
            compound = CompoundDef(name=name, body=_scope_from_graph(g, parent=node.id))
            compounds[name] = compound
            statements.append(compound)

    links: list[Link] = []
    level_ids = set(node_names)
    for edge in sorted(g.edges.values(), key=lambda e: e.id):
        if edge.type != "click_link" or edge.source not in level_ids or edge.target not in level_ids:
            continue
        link = Link(
            source=node_names[edge.source],
            source_port=int(edge.source_port or 0),
            target=node_names[edge.target],
            target_port=int(edge.target_port or 0),
        )
        links.append(link)
        statements.append(
            Connection(
                hops=(
                    Hop(name=link.source, out_port=link.source_port),
                    Hop(name=link.target, in_port=link.target_port),
                )
            )
        )
    return ClickConfig(
        statements=tuple(statements), elements=elements, compounds=compounds, links=tuple(links)
    )


# --- lint ------------------------------------------------------------------------------


def lint_click(cfg: ClickConfig, catalog: Iterable[str]) -> list[Finding]:
    """Static findings: isolated elements, double-used ports, unknown classes.

    All findings are warnings or infos; without per-class port metadata the
    linter cannot be certain enough to reject.
    """
    known = set(catalog)
    return _lint_scope(cfg, known, path=(), compound_names=frozenset())


def _lint_scope(
    cfg: ClickConfig, known: set[str], path: tuple, compound_names: frozenset[str] = frozenset()
) -> list[Finding]:
    compound_names = compound_names | frozenset(cfg.compounds)
    findings: list[Finding] = []
    linked: set[str] = set()
    port_use: dict[tuple[str, int, str], int] = {}
    for link in cfg.links:
        linked.add(link.source)
        linked.add(link.target)
        port_use[(link.source, link.source_port, "out")] = (
            port_use.get((link.source, link.source_port, "out"), 0) + 1
        )
        port_use[(link.target, link.target_port, "in")] = (
            port_use.get((link.target, link.target_port, "in"), 0) + 1
        )

    for name, element in sorted(cfg.elements.items()):
        if element.pseudo:
            continue
        if name not in linked:
            findings.append(
                Finding(
                    rule_id="UnconnectedPort",
                    severity="warning",
                    path=path + (name,),
                    message=f"element '{name}' is not connected to anything",
                )
            )
        if element.class_name not in known and element.class_name not in compound_names:
            findings.append(
                Finding(
                    rule_id="UnknownClass",
                    severity="info",
                    path=path + (name,),
                    message=f"class '{element.class_name}' is not in the element catalogue",
                )
            )
    for (name, port, direction), count in sorted(port_use.items()):
        if count > 1:
            findings.append(
                Finding(
                    rule_id="DuplicatePortUse",
                    severity="warning",
                    path=path + (name,),
                    message=f"{direction}put port {port} of '{name}' is linked {count} times",
                )
            )
    for cname, compound in sorted(cfg.compounds.items()):
        findings.extend(_lint_scope(compound.body, known, path + (cname,), compound_names))
    return findings


# --- boundary resolution ------------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryPort:
    interface: str
    direction: str  # ingress | egress
    element: str


@dataclass(frozen=True)
class BoundaryBinding:
    entries: tuple[BoundaryPort, ...] = ()

    def interfaces(self) -> set[str]:
        return {p.interface for p in self.entries}


def _strip_quotes(arg: str) -> str:
    if len(arg) >= 2 and arg[0] == '"' and arg[-1] == '"':
        return arg[1:-1]
    return arg


def resolve_boundary_ports(
    cfg: ClickConfig,
    requested_if_names: Sequence[str],
    boundary_classes: Mapping[str, str] = DEFAULT_BOUNDARY_CLASSES,
) -> BoundaryBinding:
    """Bind requested interface names to the config's boundary elements.

    Boundary elements are the top-level elements whose class is in the
    boundary catalogue; their first config argument is the interface name.
    Every requested name must match at least one element in some direction.
    """
    ports: list[BoundaryPort] = []
    for element in cfg.elements.values():
        direction = boundary_classes.get(element.class_name)
        if direction is None or not element.config_args:
            continue
        interface = _strip_quotes(element.config_args[0])
        ports.append(BoundaryPort(interface=interface, direction=direction, element=element.name))

    requested = list(dict.fromkeys(requested_if_names))  # de-dup, keep order
    matched: list[BoundaryPort] = []
    unmatched: list[str] = []
    for name in requested:
        hits = [p for p in ports if p.interface == name]
        if not hits:
            unmatched.append(name)
            continue
        by_direction: dict[str, list[BoundaryPort]] = {}
        for port in hits:
            by_direction.setdefault(port.direction, []).append(port)
        for direction, group in sorted(by_direction.items()):
            if len(group) > 1:
                names = ", ".join(sorted(p.element for p in group))
                raise AmbiguousBindingError(
                    f"interface '{name}' is claimed by several {direction} elements: {names}"
                )
            matched.append(group[0])
    if unmatched:
        raise BoundaryBindingError(
            f"no boundary port for interface(s): {', '.join(unmatched)}",
            unmatched=unmatched,
        )
    return BoundaryBinding(entries=tuple(matched))
