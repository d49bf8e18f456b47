"""TOSCA NFV-profile subset: template parsing, graph mapping, and a
best-effort, lossy conversion to the ETSI descriptor model with a report of
everything that was dropped.

Only the four NFV-profile node kinds (VNF, VDU, CP, VL) are interpreted;
templates of other types ride along as opaque nodes.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from typing import Any, Mapping

import yaml

from ..descmodel import DescriptionModel
from ..errors import (
    DanglingRequirementError,
    DocumentSyntaxError,
    NothingToConvertError,
    SchemaError,
    UnknownKeyWarning,
)
from ..graph import GraphBuilder, ProjectGraph
from . import etsi

KNOWN_KINDS = ("VNF", "VDU", "CP", "VL")

#: NFV-profile type names accepted for each interpreted kind.
TYPE_ALIASES: Mapping[str, str] = {
    "tosca.nodes.nfv.VNF": "VNF",
    "tosca.nodes.nfv.VDU": "VDU",
    "tosca.nodes.nfv.CP": "CP",
    "tosca.nodes.nfv.Cpd": "CP",
    "tosca.nodes.nfv.VL": "VL",
    "tosca.nodes.nfv.VnfVirtualLinkDesc": "VL",
}

REQUIREMENT_NAMES = ("virtualBinding", "virtualLink")


@dataclass
class Requirement:
    name: str  # virtualBinding | virtualLink
    target: str


@dataclass
class NodeTemplate:
    name: str
    kind: str  # VNF | VDU | CP | VL | the raw type name for opaque templates
    type_name: str
    properties: dict = field(default_factory=dict)
    requirements: list[Requirement] = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    @property
    def opaque(self) -> bool:
        return self.kind not in KNOWN_KINDS

    def requirement(self, name: str) -> Requirement | None:
        return next((r for r in self.requirements if r.name == name), None)


@dataclass
class ToscaTemplate:
    definitions_version: str
    node_templates: list[NodeTemplate] = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    def template(self, name: str) -> NodeTemplate | None:
        return next((t for t in self.node_templates if t.name == name), None)


@dataclass
class ConversionReport:
    converted: list[str] = field(default_factory=list)
    dropped: list[tuple[str, str]] = field(default_factory=list)  # (path, reason)

    def to_dict(self) -> dict:
        return {
            "converted": list(self.converted),
            "dropped": [{"path": p, "reason": r} for p, r in self.dropped],
        }

    def to_text(self) -> str:
        lines = [f"converted: {len(self.converted)} templates"]
        for path, reason in self.dropped:
            lines.append(f"dropped {path}: {reason}")
        return "\n".join(lines) + "\n"


# --- parsing ------------------------------------------------------------------------

_TEMPLATE_KEYS = ("type", "properties", "requirements")


def parse_tosca(text: str) -> ToscaTemplate:
    """Parse a service template; unknown node types become opaque templates."""
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise DocumentSyntaxError(f"malformed YAML: {exc}") from exc
    if not isinstance(data, Mapping):
        raise SchemaError("template must be a map", path=())
    version = data.get("tosca_definitions_version")
    if not isinstance(version, str):
        raise SchemaError(
            "missing required field 'tosca_definitions_version'",
            path=("tosca_definitions_version",),
        )
    topology = data.get("topology_template")
    if topology is None:
        raise SchemaError("missing required field 'topology_template'", path=("topology_template",))
    if not isinstance(topology, Mapping):
        raise SchemaError("topology_template must be a map", path=("topology_template",))
    raw_templates = topology.get("node_templates") or {}
    if not isinstance(raw_templates, Mapping):
        raise SchemaError(
            "node_templates must be a map", path=("topology_template", "node_templates")
        )

    template = ToscaTemplate(definitions_version=version)
    template.extras = {
        k: v for k, v in data.items() if k not in ("tosca_definitions_version", "topology_template")
    }
    for name, raw in raw_templates.items():
        path = ("topology_template", "node_templates", name)
        if not isinstance(raw, Mapping):
            raise SchemaError("node template must be a map", path=path)
        type_name = raw.get("type")
        if not isinstance(type_name, str):
            raise SchemaError("missing required field 'type'", path=path + ("type",))
        kind = TYPE_ALIASES.get(type_name)
        if kind is None:
            kind = type_name
            warnings.warn(
                f"node template '{name}' has uninterpreted type '{type_name}'",
                UnknownKeyWarning,
                stacklevel=2,
            )
        node = NodeTemplate(
            name=name,
            kind=kind,
            type_name=type_name,
            properties=dict(raw.get("properties") or {}),
            extras={k: v for k, v in raw.items() if k not in _TEMPLATE_KEYS},
        )
        for i, raw_req in enumerate(raw.get("requirements") or []):
            req_path = path + ("requirements", i)
            if not isinstance(raw_req, Mapping) or len(raw_req) != 1:
                raise SchemaError("requirement must be a single-key map", path=req_path)
            req_name, target = next(iter(raw_req.items()))
            if isinstance(target, Mapping):
                target = target.get("node")
            if not isinstance(target, str):
                raise SchemaError("requirement target must name a node", path=req_path)
            if req_name not in REQUIREMENT_NAMES:
                node.extras.setdefault("requirements", []).append({req_name: target})
                warnings.warn(
                    f"keeping unrecognized requirement '{req_name}' of '{name}'",
                    UnknownKeyWarning,
                    stacklevel=2,
                )
                continue
            node.requirements.append(Requirement(name=req_name, target=target))
        template.node_templates.append(node)

    names = {t.name for t in template.node_templates}
    for node in template.node_templates:
        for req in node.requirements:
            if req.target not in names:
                raise DanglingRequirementError(
                    f"'{node.name}' requires unknown node '{req.target}'",
                    path=("topology_template", "node_templates", node.name, "requirements", req.name),
                )
        binding = [r for r in node.requirements if r.name == "virtualBinding"]
        vlink = [r for r in node.requirements if r.name == "virtualLink"]
        if node.kind == "CP" and (len(binding) > 1 or len(vlink) > 1):
            raise SchemaError(
                f"CP '{node.name}' may have at most one virtualBinding and one virtualLink",
                path=("topology_template", "node_templates", node.name, "requirements"),
            )
    return template


def serialize_tosca(template: ToscaTemplate) -> str:
    """Canonical YAML form; round-trips through parse_tosca."""
    node_templates: dict[str, Any] = {}
    for node in template.node_templates:
        entry: dict[str, Any] = {"type": node.type_name}
        if node.properties:
            entry["properties"] = dict(sorted(node.properties.items()))
        reqs = [{r.name: r.target} for r in node.requirements]
        reqs += list(node.extras.get("requirements", []))
        if reqs:
            entry["requirements"] = reqs
        for key in sorted(node.extras):
            if key != "requirements":
                entry[key] = node.extras[key]
        node_templates[node.name] = entry
    doc: dict[str, Any] = {
        "tosca_definitions_version": template.definitions_version,
        "topology_template": {"node_templates": node_templates},
    }
    for key in sorted(template.extras):
        doc[key] = template.extras[key]
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=False)


# --- graph mapping -------------------------------------------------------------------


def tosca_to_graph(template: ToscaTemplate, model: DescriptionModel) -> ProjectGraph:
    """Nodes per template; virtualBinding becomes containment, virtualLink an edge."""
    b = GraphBuilder(model, project_type=model.name)
    node_ids: dict[str, str] = {}
    # Pass 1: everything except CPs (their parent VDU node must exist first).
    for node in template.node_templates:
        if node.kind == "CP":
            continue
        type_name = node.kind if not node.opaque else "OpaqueNode"
        props = {"typeName": node.type_name} if node.opaque else {}
        node_ids[node.name] = b.add_node(type_name, label=node.name, properties=props)
    for node in template.node_templates:
        if node.kind != "CP":
            continue
        binding = node.requirement("virtualBinding")
        parent = node_ids.get(binding.target) if binding else None
        node_ids[node.name] = b.add_node("CP", label=node.name, parent=parent)
    for node in template.node_templates:
        if node.kind != "CP":
            continue
        vlink = node.requirement("virtualLink")
        if vlink is not None:
            b.add_edge("vl_link", node_ids[node.name], node_ids[vlink.target])
    return b.build()


# --- conversion ------------------------------------------------------------------------


def convert_tosca_to_etsi(template: ToscaTemplate) -> tuple[list[etsi.Vnfd], ConversionReport]:
    """Map the template onto ETSI descriptors; the report lists every drop.

    With zero or one VNF templates the whole topology converts into that one
    Vnfd. With several VNF templates the profile subset carries no VNF→VDU
    membership, so VDUs, CPs, and VLs cannot be assigned and are dropped.
    """
    report = ConversionReport()
    interpreted = [t for t in template.node_templates if not t.opaque]
    for node in template.node_templates:
        if node.opaque:
            report.dropped.append((node.name, f"uninterpreted type '{node.type_name}'"))
    if not interpreted:
        raise NothingToConvertError("template contains no recognized node types")

    vnf_templates = [t for t in interpreted if t.kind == "VNF"]
    vdus = [t for t in interpreted if t.kind == "VDU"]
    cps = [t for t in interpreted if t.kind == "CP"]
    vls = [t for t in interpreted if t.kind == "VL"]

    vnfds: list[etsi.Vnfd] = []
    if len(vnf_templates) <= 1:
        if vnf_templates:
            seed = vnf_templates[0]
            vnfd = etsi.Vnfd(
                vnfd_id=str(seed.properties.get("descriptor_id", seed.name)),
                product_name=str(seed.properties.get("product_name", seed.name)),
                provider=str(seed.properties.get("provider", "")),
                software_version=str(seed.properties.get("software_version", "")),
            )
            report.converted.append(seed.name)
        else:
            vnfd = etsi.Vnfd(vnfd_id="converted-template")
        vnfds.append(vnfd)

        for vl in vls:
            vnfd.int_virtual_link_desc.append(etsi.VirtualLinkDesc(vld_id=vl.name))
            report.converted.append(vl.name)
        vdu_by_name: dict[str, etsi.Vdu] = {}
        for tpl in vdus:
            vdu = etsi.Vdu(vdu_id=tpl.name, name=str(tpl.properties.get("name", tpl.name)))
            image = tpl.properties.get("sw_image") or tpl.properties.get("image")
            if image is not None:
                vdu.sw_image = str(image)
            vnfd.vdus.append(vdu)
            vdu_by_name[tpl.name] = vdu
            report.converted.append(tpl.name)
        for cp in cps:
            binding = cp.requirement("virtualBinding")
            if binding is None or binding.target not in vdu_by_name:
                report.dropped.append((cp.name, "CP has no virtualBinding to a VDU"))
                continue
            cpd = etsi.VduCpd(cpd_id=cp.name)
            layer = cp.properties.get("layer_protocol") or cp.properties.get("layer_protocols")
            if isinstance(layer, list):
                layer = layer[0] if layer else None
            if layer is not None:
                cpd.layer_protocol = str(layer)
            vlink = cp.requirement("virtualLink")
            if vlink is not None:
                cpd.int_virtual_link_desc = vlink.target
            else:
                report.dropped.append((f"{cp.name}.virtualLink", "CP is not bound to a virtual link"))
            vdu_by_name[binding.target].int_cpd.append(cpd)
            report.converted.append(cp.name)
    else:
        for seed in vnf_templates:
            vnfds.append(
                etsi.Vnfd(
                    vnfd_id=str(seed.properties.get("descriptor_id", seed.name)),
                    product_name=str(seed.properties.get("product_name", seed.name)),
                )
            )
            report.converted.append(seed.name)
        for tpl in vdus + cps + vls:
            report.dropped.append(
                (tpl.name, "several VNF templates: membership of this node is undeclared")
            )

    return vnfds, report
