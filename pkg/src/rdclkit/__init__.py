"""rdclkit: a model-agnostic workbench for NFV service descriptors.

Project types (ETSI descriptors, Click configurations, TOSCA templates, and
the combined model that nests Click inside a VDU) are data-driven plugins: a
description model plus compiled-in hooks. The core offers a typed attributed
multigraph with views, containment, and nested expansion; on top sit a
validation engine, a filesystem project store, a deployment agent with a
simulated infrastructure manager, an HTTP API, and a CLI.
"""

__version__ = "0.1.0"

from .descmodel import (
    DescriptionModel,
    LinkTypeDef,
    ModelRegistry,
    NodeTypeDef,
    PropertySpec,
    ViewDef,
    load_description_model,
    register,
    scaffold_project_type,
    serialize_description_model,
)
from .graph import (
    EditOp,
    GraphEdge,
    GraphNode,
    ProjectGraph,
    ViewGraph,
    apply_edit,
    expand_node,
    export_graph,
    import_graph,
    project_view,
)
from .report import Finding, ValidationReport
from .validation import Rule, RuleRegistry, register_rule, validate_project

__all__ = [
    "DescriptionModel",
    "EditOp",
    "Finding",
    "GraphEdge",
    "GraphNode",
    "LinkTypeDef",
    "ModelRegistry",
    "NodeTypeDef",
    "ProjectGraph",
    "PropertySpec",
    "Rule",
    "RuleRegistry",
    "ValidationReport",
    "ViewDef",
    "ViewGraph",
    "apply_edit",
    "expand_node",
    "export_graph",
    "import_graph",
    "load_description_model",
    "project_view",
    "register",
    "register_rule",
    "scaffold_project_type",
    "serialize_description_model",
    "validate_project",
    "__version__",
]
