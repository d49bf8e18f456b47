"""Constraint engine: structural rules from the description model plus
plugin-registered semantic rules, merged into one deterministic report.

Severity policy: structural violations and the descriptor rules are errors
(the agent refuses to deploy on errors); linter imports are warnings or
infos and never block.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

from .descmodel import DescriptionModel, ModelRegistry
from .errors import DuplicateRuleError, UnknownProjectTypeError
from .graph import GraphEdge, GraphNode, ProjectGraph
from .report import Finding, ValidationReport

#: Registered nested-execution-environment types a VDU may reference.
DEFAULT_REE_TYPES = frozenset({"click"})


@dataclass
class RuleContext:
    project_type: str
    graph: ProjectGraph
    files: Mapping[str, str]
    registry: ModelRegistry
    ree_types: frozenset[str]
    artifacts: dict = field(default_factory=dict)
    fetch: Callable[[str], str] | None = None


@dataclass(frozen=True)
class Rule:
    rule_id: str
    severity: str
    project_types: tuple[str, ...]
    check: Callable[[RuleContext], list[Finding]]


class RuleRegistry:
    def __init__(self):
        self._rules: dict[str, Rule] = {}

    def __len__(self) -> int:
        return len(self._rules)

    def register(self, rule: Rule) -> "RuleRegistry":
        if rule.rule_id in self._rules:
            raise DuplicateRuleError(f"rule '{rule.rule_id}' already registered")
        self._rules[rule.rule_id] = rule
        return self

    def for_type(self, project_type: str) -> list[Rule]:
        return sorted(
            (r for r in self._rules.values() if project_type in r.project_types),
            key=lambda r: r.rule_id,
        )


def register_rule(rule: Rule, registry: RuleRegistry) -> RuleRegistry:
    """Functional spelling of RuleRegistry.register."""
    return registry.register(rule)


# --- structural rules -----------------------------------------------------------------


def structural_findings(g: ProjectGraph, model: DescriptionModel) -> list[Finding]:
    findings: list[Finding] = []
    for node in sorted(g.nodes.values(), key=lambda n: n.id):
        findings.extend(_node_findings(node, g, model))
    degree_out: dict[tuple[str, str], int] = {}
    degree_in: dict[tuple[str, str], int] = {}
    for edge in sorted(g.edges.values(), key=lambda e: e.id):
        findings.extend(_edge_findings(edge, g, model, degree_out, degree_in))
    return findings


def _node_findings(node: GraphNode, g: ProjectGraph, model: DescriptionModel) -> list[Finding]:
    findings: list[Finding] = []
    nt = model.node_type(node.type)
    if nt is None:
        return [
            Finding(
                rule_id="structural.types",
                severity="error",
                path=(node.id,),
                graph_ref=node.id,
                message=f"node type '{node.type}' is not in the '{model.name}' description model",
            )
        ]
    for name, value in sorted(node.properties.items()):
        spec = nt.properties.get(name)
        if spec is None:
            findings.append(
                Finding(
                    rule_id="structural.properties",
                    severity="error",
                    path=(node.id, name),
                    graph_ref=node.id,
                    message=f"node type '{node.type}' declares no property '{name}'",
                )
            )
        elif not spec.accepts(value):
            findings.append(
                Finding(
                    rule_id="structural.properties",
                    severity="error",
                    path=(node.id, name),
                    graph_ref=node.id,
                    message=f"property '{name}' rejects value {value!r} (kind {spec.kind})",
                )
            )
    for name, spec in sorted(nt.properties.items()):
        if spec.required and name not in node.properties:
            findings.append(
                Finding(
                    rule_id="structural.required",
                    severity="error",
                    path=(node.id, name),
                    graph_ref=node.id,
                    message=f"required property '{name}' of node type '{node.type}' is missing",
                )
            )
    if node.parent is not None:
        parent = g.nodes.get(node.parent)
        if parent is None:
            findings.append(
                Finding(
                    rule_id="structural.containment",
                    severity="error",
                    path=(node.id,),
                    graph_ref=node.id,
                    message=f"parent '{node.parent}' does not exist",
                )
            )
        else:
            pt = model.node_type(parent.type)
            if pt is None or node.type not in pt.container_of:
                findings.append(
                    Finding(
                        rule_id="structural.containment",
                        severity="error",
                        path=(node.id,),
                        graph_ref=node.id,
                        message=f"node type '{parent.type}' cannot contain '{node.type}'",
                    )
                )
            seen = {node.id}
            cursor = parent
            while cursor is not None:
                if cursor.id in seen:
                    findings.append(
                        Finding(
                            rule_id="structural.containment",
                            severity="error",
                            path=(node.id,),
                            graph_ref=node.id,
                            message="containment cycle",
                        )
                    )
                    break
                seen.add(cursor.id)
                cursor = g.nodes.get(cursor.parent) if cursor.parent else None
    return findings


def _edge_findings(
    edge: GraphEdge,
    g: ProjectGraph,
    model: DescriptionModel,
    degree_out: dict,
    degree_in: dict,
) -> list[Finding]:
    lt = model.link_type(edge.type)
    if lt is None:
        return [
            Finding(
                rule_id="structural.types",
                severity="error",
                path=(edge.id,),
                graph_ref=edge.id,
                message=f"link type '{edge.type}' is not in the '{model.name}' description model",
            )
        ]
    findings: list[Finding] = []
    source = g.nodes.get(edge.source)
    target = g.nodes.get(edge.target)
    if source is None or target is None:
        findings.append(
            Finding(
                rule_id="structural.endpoints",
                severity="error",
                path=(edge.id,),
                graph_ref=edge.id,
                message="edge endpoint does not exist",
            )
        )
        return findings
    if not lt.permits(source.type, target.type):
        findings.append(
            Finding(
                rule_id="structural.endpoints",
                severity="error",
                path=(edge.id,),
                graph_ref=edge.id,
                message=f"link type '{edge.type}' does not permit {source.type} -> {target.type}",
            )
        )
    if (edge.source_port is not None or edge.target_port is not None) and not lt.ports:
        findings.append(
            Finding(
                rule_id="structural.endpoints",
                severity="error",
                path=(edge.id,),
                graph_ref=edge.id,
                message=f"link type '{edge.type}' does not declare ports",
            )
        )
    key_out = (edge.type, edge.source)
    key_in = (edge.type, edge.target)
    degree_out[key_out] = degree_out.get(key_out, 0) + 1
    degree_in[key_in] = degree_in.get(key_in, 0) + 1
    if lt.max_out_degree is not None and degree_out[key_out] == lt.max_out_degree + 1:
        findings.append(
            Finding(
                rule_id="structural.degree",
                severity="error",
                path=(edge.id,),
                graph_ref=edge.id,
                message=f"max_out_degree {lt.max_out_degree} of '{edge.type}' exceeded at '{edge.source}'",
            )
        )
    if lt.max_in_degree is not None and degree_in[key_in] == lt.max_in_degree + 1:
        findings.append(
            Finding(
                rule_id="structural.degree",
                severity="error",
                path=(edge.id,),
                graph_ref=edge.id,
                message=f"max_in_degree {lt.max_in_degree} of '{edge.type}' exceeded at '{edge.target}'",
            )
        )
    return findings


# --- engine -------------------------------------------------------------------------------


def validate_project(
    g: ProjectGraph,
    sources: Mapping[str, str],
    registry: ModelRegistry,
    rules: RuleRegistry | None = None,
    *,
    ree_types: frozenset[str] = DEFAULT_REE_TYPES,
    fetch: Callable[[str], str] | None = None,
) -> ValidationReport:
    """Run structural rules, then the plugin rules registered for the type.

    Rules are pure; findings merge into one deterministically ordered report.
    """
    if g.project_type not in registry:
        raise UnknownProjectTypeError(f"unknown project type '{g.project_type}'")
    model = registry.model(g.project_type)
    findings = structural_findings(g, model)

    adapter = registry.adapter(g.project_type)
    artifacts, parse_findings = adapter.analyze(dict(sources))
    findings.extend(parse_findings)

    ctx = RuleContext(
        project_type=g.project_type,
        graph=g,
        files=dict(sources),
        registry=registry,
        ree_types=ree_types,
        artifacts=artifacts,
        fetch=fetch,
    )

    if rules is not None:
        for rule in rules.for_type(g.project_type):
            findings.extend(rule.check(ctx))
    return ValidationReport(findings=findings)
