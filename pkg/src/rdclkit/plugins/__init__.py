"""Project-type adapters: a description model bound to compiled-in hooks.

Each adapter implements the plugin hook set (parse/serialize/to_graph/
from_graph/validate_extra) for one project type. The default registry ships
four types; scaffolded types register with the generic adapter until their
hooks are implemented.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Mapping

from ..descmodel import DescriptionModel, ModelRegistry, load_description_model, load_manifest
from ..errors import (
    BoundaryBindingError,
    SchemaError,
    UnsupportedOperationError,
    WorkbenchError,
)
from ..graph import ProjectGraph
from ..report import Finding
from ..validation import Rule, RuleContext, RuleRegistry
from . import click_lang, etsi, tosca

VNFD_SUFFIXES = (".vnfd.yaml", ".vnfd.yml", ".vnfd.json")
NSD_SUFFIXES = (".nsd.yaml", ".nsd.yml", ".nsd.json")
TOSCA_SUFFIXES = (".tosca.yaml", ".tosca.yml", ".tosca.json")


def _syntax_for(filename: str) -> str:
    return "json" if filename.endswith(".json") else "yaml"


def _select(files: Mapping[str, str], suffixes: tuple[str, ...]) -> list[str]:
    return sorted(name for name in files if name.endswith(suffixes))


def data_root():
    return resources.files("rdclkit") / "data"


def click_catalog() -> set[str]:
    """Element classes known to the linter and the palette."""
    text = (data_root() / "catalog" / "click-elements.txt").read_text(encoding="utf-8")
    classes = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            classes.add(line)
    return classes


def _example_files(type_name: str) -> dict[str, str]:
    root = data_root() / "examples" / type_name
    out: dict[str, str] = {}
    try:
        entries = list(root.iterdir())
    except (FileNotFoundError, NotADirectoryError):
        return out
    for entry in sorted(entries, key=lambda e: e.name):
        if entry.is_file():
            out[entry.name] = entry.read_text(encoding="utf-8")
    return out


class ProjectTypeAdapter:
    """Base adapter: hooks default to 'not supported'."""

    hooks: tuple[str, ...] = ()

    def __init__(self, type_name: str, model: DescriptionModel | None = None):
        self.type_name = type_name
        self.model = model

    def to_graph(self, files: Mapping[str, str]) -> ProjectGraph:
        raise UnsupportedOperationError(f"project type '{self.type_name}' has no to_graph hook")

    def from_graph(self, g: ProjectGraph, files: Mapping[str, str]) -> dict[str, str | None]:
        raise UnsupportedOperationError(f"project type '{self.type_name}' has no from_graph hook")

    def analyze(self, files: Mapping[str, str]) -> tuple[dict, list[Finding]]:
        return {}, []

    def boundary(self, text: str, requested: list[str]) -> click_lang.BoundaryBinding:
        if requested:
            raise BoundaryBindingError(
                f"project type '{self.type_name}' exposes no boundary ports",
                unmatched=requested,
            )
        return click_lang.BoundaryBinding()

    def example_files(self) -> dict[str, str]:
        return _example_files(self.type_name)


class GenericAdapter(ProjectTypeAdapter):
    """Fallback for scaffolded types: files are opaque, the graph starts empty."""

    hooks = ()

    def to_graph(self, files: Mapping[str, str]) -> ProjectGraph:
        return ProjectGraph(project_type=self.type_name, source_texts=dict(files))


class EtsiAdapter(ProjectTypeAdapter):
    """VNFD/NSD file sets, including the nested-descriptor extension."""

    hooks = ("parse", "serialize", "to_graph", "from_graph", "validate_extra")

    def _parse_all(self, files: Mapping[str, str], *, strict: bool):
        findings: list[Finding] = []
        vnfds: list[etsi.Vnfd] = []
        vnfd_files: dict[str, str] = {}
        for name in _select(files, VNFD_SUFFIXES):
            if strict:
                vnfd = etsi.parse_vnfd(files[name], _syntax_for(name))
            else:
                vnfd, file_findings = etsi.parse_vnfd_lenient(files[name], _syntax_for(name))
                findings.extend(_prefix_findings(file_findings, name))
            vnfds.append(vnfd)
            vnfd_files[vnfd.vnfd_id] = name
        nsd = None
        nsd_file = None
        for name in _select(files, NSD_SUFFIXES):
            if nsd is not None:
                findings.append(
                    Finding(
                        rule_id="etsi.single-nsd",
                        severity="warning",
                        path=(name,),
                        message="project has several NSD files; only the first is used",
                    )
                )
                continue
            if strict:
                nsd = etsi.parse_nsd(files[name], _syntax_for(name))
            else:
                nsd, file_findings = etsi.parse_nsd_lenient(files[name], _syntax_for(name))
                findings.extend(_prefix_findings(file_findings, name))
            nsd_file = name
        return vnfds, nsd, vnfd_files, nsd_file, findings

    def to_graph(self, files: Mapping[str, str]) -> ProjectGraph:
        vnfds, nsd, _, _, _ = self._parse_all(files, strict=True)
        return etsi.etsi_to_graph(
            vnfds, nsd, self.model, project_type=self.type_name, source_texts=files
        )

    def build_lenient(self, files: Mapping[str, str]) -> ProjectGraph:
        """Best-effort graph for broken projects; findings come from analyze()."""
        vnfds, nsd, _, _, _ = self._parse_all(files, strict=False)
        return etsi.etsi_to_graph(
            vnfds, nsd, self.model, project_type=self.type_name,
            source_texts=files, lenient=True,
        )

    def analyze(self, files: Mapping[str, str]) -> tuple[dict, list[Finding]]:
        vnfds, nsd, vnfd_files, nsd_file, findings = self._parse_all(files, strict=False)
        # Integrity findings pass through; the R-rules re-derive their own
        # findings from the parsed artifacts, so drop the parse-time copies.
        kept = [f for f in findings if not f.rule_id.startswith("R")]
        artifacts = {"vnfds": vnfds, "nsd": nsd, "vnfd_files": vnfd_files, "nsd_file": nsd_file}
        return artifacts, kept

    def from_graph(self, g: ProjectGraph, files: Mapping[str, str]) -> dict[str, str | None]:
        old_vnfds, old_nsd, vnfd_files, nsd_file, _ = self._parse_all(files, strict=False)
        vnfds, nsd = etsi.graph_to_etsi(g, extras_from=(old_vnfds, old_nsd))
        updates: dict[str, str | None] = {}
        for vnfd in vnfds:
            name = vnfd_files.get(vnfd.vnfd_id, f"{vnfd.vnfd_id}.vnfd.yaml")
            updates[name] = etsi.serialize(vnfd, _syntax_for(name))
        for vnfd_id, name in vnfd_files.items():
            if vnfd_id not in {v.vnfd_id for v in vnfds}:
                updates[name] = None
        if nsd is not None:
            name = nsd_file or f"{nsd.nsd_id}.nsd.yaml"
            updates[name] = etsi.serialize(nsd, _syntax_for(name))
        elif nsd_file is not None:
            updates[nsd_file] = None
        return updates


class ClickAdapter(ProjectTypeAdapter):
    hooks = ("parse", "serialize", "to_graph", "from_graph", "validate_extra")

    @staticmethod
    def main_file(files: Mapping[str, str]) -> str | None:
        names = sorted(name for name in files if name.endswith(".click"))
        if not names:
            return None
        if "main.click" in names:
            return "main.click"
        return names[0]

    def to_graph(self, files: Mapping[str, str]) -> ProjectGraph:
        main = self.main_file(files)
        if main is None:
            return ProjectGraph(project_type=self.type_name, source_texts=dict(files))
        cfg = click_lang.parse_click(files[main])
        g = click_lang.click_to_graph(cfg, self.model)
        return ProjectGraph(
            project_type=self.type_name, nodes=g.nodes, edges=g.edges, source_texts=dict(files)
        )

    def analyze(self, files: Mapping[str, str]) -> tuple[dict, list[Finding]]:
        main = self.main_file(files)
        if main is None:
            return {}, []
        try:
            cfg = click_lang.parse_click(files[main])
        except WorkbenchError as exc:
            return {}, [
                Finding(
                    rule_id="click.parse",
                    severity="error",
                    path=(main,),
                    message=str(exc),
                )
            ]
        return {"config": cfg, "main_file": main}, []

    def from_graph(self, g: ProjectGraph, files: Mapping[str, str]) -> dict[str, str | None]:
        main = self.main_file(files) or "config.click"
        cfg = click_lang.graph_to_click(g)
        return {main: click_lang.serialize_click(cfg)}

    def boundary(self, text: str, requested: list[str]) -> click_lang.BoundaryBinding:
        cfg = click_lang.parse_click(text)
        return click_lang.resolve_boundary_ports(cfg, requested)


class ToscaAdapter(ProjectTypeAdapter):
    hooks = ("parse", "serialize", "to_graph", "validate_extra")

    @staticmethod
    def main_file(files: Mapping[str, str]) -> str | None:
        names = _select(files, TOSCA_SUFFIXES)
        return names[0] if names else None

    def to_graph(self, files: Mapping[str, str]) -> ProjectGraph:
        main = self.main_file(files)
        if main is None:
            return ProjectGraph(project_type=self.type_name, source_texts=dict(files))
        template = tosca.parse_tosca(files[main])
        g = tosca.tosca_to_graph(template, self.model)
        return ProjectGraph(
            project_type=self.type_name, nodes=g.nodes, edges=g.edges, source_texts=dict(files)
        )

    def analyze(self, files: Mapping[str, str]) -> tuple[dict, list[Finding]]:
        main = self.main_file(files)
        if main is None:
            return {}, []
        try:
            template = tosca.parse_tosca(files[main])
        except WorkbenchError as exc:
            return {}, [
                Finding(
                    rule_id="tosca.parse",
                    severity="error",
                    path=(main,) + exc.path,
                    message=exc.message,
                )
            ]
        return {"template": template, "main_file": main}, []


def _prefix_findings(findings: list[Finding], filename: str) -> list[Finding]:
    return [
        Finding(
            rule_id=f.rule_id,
            severity=f.severity,
            path=(filename,) + f.path,
            message=f.message,
            graph_ref=f.graph_ref,
        )
        for f in findings
    ]


# --- builtin descriptor rules ------------------------------------------------------------

_ETSI_TYPES = ("etsi", "superfluidity-etsi")


def _vnfd_path(ctx: RuleContext, vnfd: etsi.Vnfd) -> tuple:
    name = ctx.artifacts.get("vnfd_files", {}).get(vnfd.vnfd_id)
    return (name,) if name else ("vnfd", vnfd.vnfd_id)


def _nsd_path(ctx: RuleContext) -> tuple:
    name = ctx.artifacts.get("nsd_file")
    return (name,) if name else ("nsd",)


def _check_r1_dangling_vl(ctx: RuleContext) -> list[Finding]:
    findings = []
    for vnfd in ctx.artifacts.get("vnfds", []):
        vl_ids = {vl.vld_id for vl in vnfd.int_virtual_link_desc}
        for i, vdu in enumerate(vnfd.vdus):
            for j, cpd in enumerate(vdu.int_cpd):
                if cpd.int_virtual_link_desc is not None and cpd.int_virtual_link_desc not in vl_ids:
                    findings.append(
                        Finding(
                            rule_id="R1",
                            severity="error",
                            path=_vnfd_path(ctx, vnfd) + ("vdu", i, "intCpd", j, "intVirtualLinkDesc"),
                            message=(
                                f"cpd '{cpd.cpd_id}' references unknown virtual link "
                                f"'{cpd.int_virtual_link_desc}'"
                            ),
                        )
                    )
    nsd = ctx.artifacts.get("nsd")
    if nsd is not None:
        ns_vls = {vl.vld_id for vl in nsd.virtual_link_desc}
        for i, sapd in enumerate(nsd.sapd):
            if sapd.vld_id is not None and sapd.vld_id not in ns_vls:
                findings.append(
                    Finding(
                        rule_id="R1",
                        severity="error",
                        path=_nsd_path(ctx) + ("sapd", i, "vldId"),
                        message=f"sapd '{sapd.sapd_id}' references unknown virtual link '{sapd.vld_id}'",
                    )
                )
        for i, conn in enumerate(nsd.vl_connectivity):
            if conn.vld_id not in ns_vls:
                findings.append(
                    Finding(
                        rule_id="R1",
                        severity="error",
                        path=_nsd_path(ctx) + ("virtualLinkConnectivity", i, "vldId"),
                        message=f"connectivity references unknown virtual link '{conn.vld_id}'",
                    )
                )
    return findings


def _check_r2_nested_type_required(ctx: RuleContext) -> list[Finding]:
    findings = []
    for vnfd in ctx.artifacts.get("vnfds", []):
        for i, vdu in enumerate(vnfd.vdus):
            if vdu.nested_desc is not None and vdu.nested_desc_type is None:
                findings.append(
                    Finding(
                        rule_id="R2",
                        severity="error",
                        path=_vnfd_path(ctx, vnfd) + ("vdu", i, "vduNestedDescType"),
                        message=(
                            f"vdu '{vdu.vdu_id}' has vduNestedDesc but no vduNestedDescType; "
                            "a nested descriptor reference requires its type"
                        ),
                    )
                )
    return findings


def _check_r3_nested_type_registered(ctx: RuleContext) -> list[Finding]:
    findings = []
    for vnfd in ctx.artifacts.get("vnfds", []):
        for i, vdu in enumerate(vnfd.vdus):
            if vdu.nested_desc_type is not None and vdu.nested_desc_type not in ctx.ree_types:
                findings.append(
                    Finding(
                        rule_id="R3",
                        severity="error",
                        path=_vnfd_path(ctx, vnfd) + ("vdu", i, "vduNestedDescType"),
                        message=(
                            f"vduNestedDescType '{vdu.nested_desc_type}' is not a registered "
                            f"execution-environment type (known: {', '.join(sorted(ctx.ree_types))})"
                        ),
                    )
                )
    return findings


def _check_r4_if_ref_unique(ctx: RuleContext) -> list[Finding]:
    findings = []
    for vnfd in ctx.artifacts.get("vnfds", []):
        for i, vdu in enumerate(vnfd.vdus):
            seen: set[str] = set()
            for j, cpd in enumerate(vdu.int_cpd):
                if cpd.internal_if_ref is None:
                    continue
                if cpd.internal_if_ref in seen:
                    findings.append(
                        Finding(
                            rule_id="R4",
                            severity="error",
                            path=_vnfd_path(ctx, vnfd) + ("vdu", i, "intCpd", j, "internalIfRef"),
                            message=(
                                f"internalIfRef '{cpd.internal_if_ref}' used twice in vdu '{vdu.vdu_id}'"
                            ),
                        )
                    )
                seen.add(cpd.internal_if_ref)
    return findings


def _check_r5_constituents(ctx: RuleContext) -> list[Finding]:
    nsd = ctx.artifacts.get("nsd")
    if nsd is None:
        return []
    known = {v.vnfd_id for v in ctx.artifacts.get("vnfds", [])}
    findings = []
    for i, vnfd_id in enumerate(nsd.vnfd_ids):
        if vnfd_id not in known:
            findings.append(
                Finding(
                    rule_id="R5",
                    severity="error",
                    path=_nsd_path(ctx) + ("vnfdId", i),
                    message=f"nsd constituent vnfd '{vnfd_id}' is not part of the project",
                )
            )
    return findings


def _check_r6_vnffg_closure(ctx: RuleContext) -> list[Finding]:
    nsd = ctx.artifacts.get("nsd")
    if nsd is None:
        return []
    vnfds = {v.vnfd_id: v for v in ctx.artifacts.get("vnfds", [])}
    ns_vls = {vl.vld_id for vl in nsd.virtual_link_desc}
    findings = []
    for i, fg in enumerate(nsd.vnffgd):
        fg_path = _nsd_path(ctx) + ("vnffgd", i)
        for j, vnfd_id in enumerate(fg.vnfd_ids):
            if vnfd_id not in vnfds:
                findings.append(
                    Finding(
                        rule_id="R6",
                        severity="error",
                        path=fg_path + ("vnfdId", j),
                        message=f"vnffgd '{fg.vnffgd_id}' lists unknown vnfd '{vnfd_id}'",
                    )
                )
        for j, vld_id in enumerate(fg.vld_ids):
            if vld_id not in ns_vls:
                findings.append(
                    Finding(
                        rule_id="R6",
                        severity="error",
                        path=fg_path + ("vldId", j),
                        message=f"vnffgd '{fg.vnffgd_id}' lists unknown virtual link '{vld_id}'",
                    )
                )
        for j, nfpd in enumerate(fg.nfpds):
            for k, (vnfd_id, cpd_id) in enumerate(nfpd.hops):
                hop_path = fg_path + ("nfpd", j, k)
                if vnfd_id not in fg.vnfd_ids:
                    findings.append(
                        Finding(
                            rule_id="R6",
                            severity="error",
                            path=hop_path + ("vnfdId",),
                            message=f"nfp hop names vnfd '{vnfd_id}' not listed in vnffgd '{fg.vnffgd_id}'",
                        )
                    )
                    continue
                vnfd = vnfds.get(vnfd_id)
                if vnfd is not None and vnfd.cpd(cpd_id) is None:
                    findings.append(
                        Finding(
                            rule_id="R6",
                            severity="error",
                            path=hop_path + ("cpdId",),
                            message=f"nfp hop ({vnfd_id}, {cpd_id}) does not resolve",
                        )
                    )
    return findings


def _check_r7_nested_boundaries(ctx: RuleContext) -> list[Finding]:
    """Cross-model rule: the nested Click text parses and every interface
    reference of the VDU's connection points matches a boundary port."""
    findings = []
    for vnfd in ctx.artifacts.get("vnfds", []):
        for i, vdu in enumerate(vnfd.vdus):
            if vdu.nested_desc is None or vdu.nested_desc_type != "click":
                continue  # R2/R3 own the missing/unregistered-type cases
            vdu_path = _vnfd_path(ctx, vnfd) + ("vdu", i)
            text = ctx.files.get(vdu.nested_desc)
            if text is None and ctx.fetch is not None:
                try:
                    text = ctx.fetch(vdu.nested_desc)
                except WorkbenchError:
                    text = None
            if text is None:
                findings.append(
                    Finding(
                        rule_id="R7",
                        severity="error",
                        path=vdu_path + ("vduNestedDesc",),
                        message=f"nested descriptor '{vdu.nested_desc}' not found",
                    )
                )
                continue
            try:
                cfg = click_lang.parse_click(text)
            except WorkbenchError as exc:
                findings.append(
                    Finding(
                        rule_id="R7",
                        severity="error",
                        path=vdu_path + ("vduNestedDesc",),
                        message=f"nested descriptor '{vdu.nested_desc}' does not parse: {exc}",
                    )
                )
                continue
            requested = sorted(
                {c.internal_if_ref for c in vdu.int_cpd if c.internal_if_ref is not None}
            )
            try:
                click_lang.resolve_boundary_ports(cfg, requested)
            except WorkbenchError as exc:
                findings.append(
                    Finding(
                        rule_id="R7",
                        severity="error",
                        path=vdu_path + ("intCpd",),
                        message=str(exc),
                    )
                )
    return findings


def _check_etsi_cross_refs(ctx: RuleContext) -> list[Finding]:
    """Cross-file resolution of (vnfdId, extCpdId) pairs in the NSD."""
    nsd = ctx.artifacts.get("nsd")
    if nsd is None:
        return []
    ext_by_vnfd = {
        v.vnfd_id: {e.cpd_id for e in v.ext_cpd} for v in ctx.artifacts.get("vnfds", [])
    }
    findings = []
    for i, conn in enumerate(nsd.vl_connectivity):
        if conn.vnfd_id in ext_by_vnfd and conn.ext_cpd_id not in ext_by_vnfd[conn.vnfd_id]:
            findings.append(
                Finding(
                    rule_id="etsi.connectivity-ref",
                    severity="error",
                    path=_nsd_path(ctx) + ("virtualLinkConnectivity", i),
                    message=(
                        f"connectivity references unknown extCpd "
                        f"({conn.vnfd_id}, {conn.ext_cpd_id})"
                    ),
                )
            )
    for i, sapd in enumerate(nsd.sapd):
        if (
            sapd.vnfd_id is not None
            and sapd.ext_cpd_id is not None
            and sapd.vnfd_id in ext_by_vnfd
            and sapd.ext_cpd_id not in ext_by_vnfd[sapd.vnfd_id]
        ):
            findings.append(
                Finding(
                    rule_id="etsi.sapd-ref",
                    severity="error",
                    path=_nsd_path(ctx) + ("sapd", i),
                    message=(
                        f"sapd '{sapd.sapd_id}' references unknown extCpd "
                        f"({sapd.vnfd_id}, {sapd.ext_cpd_id})"
                    ),
                )
            )
    return findings


def _check_click_lint(ctx: RuleContext) -> list[Finding]:
    cfg = ctx.artifacts.get("config")
    if cfg is None:
        return []
    main = ctx.artifacts.get("main_file", "")
    findings = click_lang.lint_click(cfg, click_catalog())
    return _prefix_findings(findings, main) if main else findings


def builtin_rules() -> RuleRegistry:
    rules = RuleRegistry()
    rules.register(Rule("R1", "error", _ETSI_TYPES, _check_r1_dangling_vl))
    rules.register(Rule("R2", "error", _ETSI_TYPES, _check_r2_nested_type_required))
    rules.register(Rule("R3", "error", _ETSI_TYPES, _check_r3_nested_type_registered))
    rules.register(Rule("R4", "error", _ETSI_TYPES, _check_r4_if_ref_unique))
    rules.register(Rule("R5", "error", _ETSI_TYPES, _check_r5_constituents))
    rules.register(Rule("R6", "error", _ETSI_TYPES, _check_r6_vnffg_closure))
    rules.register(Rule("R7", "error", _ETSI_TYPES, _check_r7_nested_boundaries))
    rules.register(Rule("etsi.cross-refs", "error", _ETSI_TYPES, _check_etsi_cross_refs))
    rules.register(Rule("click.lint", "warning", ("click",), _check_click_lint))
    return rules


# --- default registry ----------------------------------------------------------------------

_ADAPTER_CLASSES = {
    "etsi": EtsiAdapter,
    "superfluidity-etsi": EtsiAdapter,
    "click": ClickAdapter,
    "tosca": ToscaAdapter,
}

BUILTIN_TYPES = ("click", "tosca", "etsi", "superfluidity-etsi")


def make_adapter(type_name: str, model: DescriptionModel) -> ProjectTypeAdapter:
    cls = _ADAPTER_CLASSES.get(type_name, GenericAdapter)
    return cls(type_name, model)


def build_default_registry() -> ModelRegistry:
    """Load the shipped description models and bind their adapters."""
    registry = ModelRegistry()
    for name in BUILTIN_TYPES:
        text = (data_root() / "models" / f"{name}.yaml").read_text(encoding="utf-8")
        model = load_description_model(text)
        if model.name != name:
            raise SchemaError(f"model file for '{name}' declares name '{model.name}'")
        registry.register(model, adapter=make_adapter(name, model))
    return registry


def register_from_directory(registry: ModelRegistry, directory) -> str:
    """Register a scaffolded project type from its skeleton directory."""
    root = Path(directory)
    model_files = sorted(root.glob("*.model.yaml"))
    if not model_files:
        raise SchemaError(f"no *.model.yaml under '{root}'")
    model = load_description_model(model_files[0].read_text(encoding="utf-8"))
    manifest_files = sorted(root.glob("*.manifest.yaml"))
    if manifest_files:
        load_manifest(manifest_files[0].read_text(encoding="utf-8"))  # shape check only
    registry.register(model, adapter=GenericAdapter(model.name, model))
    return model.name
