"""ETSI NFV descriptor subset: VNFD and NSD parsing, serialization, and
graph mapping, including the combined-model VDU attributes (a nested
descriptor reference plus its type) and the per-connection-point interface
reference used to bind a connection point to a VM interface.

Parsing is strict by default (the first violated constraint raises); the
validation engine uses the lenient entry points, which collect violations as
findings and keep going, so one project sweep reports everything at once.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

import yaml

from ..descmodel import DescriptionModel
from ..errors import (
    ConstraintError,
    DanglingReferenceError,
    DocumentSyntaxError,
    IncompleteGraphError,
    SchemaError,
    UnknownKeyWarning,
)
from ..graph import GraphBuilder, GraphNode, ProjectGraph
from ..report import Finding

# --- domain types -----------------------------------------------------------------


@dataclass
class VirtualLinkDesc:
    vld_id: str
    extras: dict = field(default_factory=dict)


@dataclass
class VduCpd:
    cpd_id: str
    layer_protocol: str = ""
    int_virtual_link_desc: str | None = None
    internal_if_ref: str | None = None
    extras: dict = field(default_factory=dict)


@dataclass
class Vdu:
    vdu_id: str
    name: str = ""
    int_cpd: list[VduCpd] = field(default_factory=list)
    sw_image: str | None = None
    nested_desc: str | None = None
    nested_desc_type: str | None = None
    extras: dict = field(default_factory=dict)


@dataclass
class ExtCpd:
    cpd_id: str
    int_vdu_id: str | None = None
    int_cpd_id: str | None = None
    extras: dict = field(default_factory=dict)


@dataclass
class Vnfd:
    vnfd_id: str
    provider: str = ""
    product_name: str = ""
    software_version: str = ""
    vdus: list[Vdu] = field(default_factory=list)
    int_virtual_link_desc: list[VirtualLinkDesc] = field(default_factory=list)
    ext_cpd: list[ExtCpd] = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    def vdu(self, vdu_id: str) -> Vdu | None:
        return next((v for v in self.vdus if v.vdu_id == vdu_id), None)

    def vl(self, vld_id: str) -> VirtualLinkDesc | None:
        return next((v for v in self.int_virtual_link_desc if v.vld_id == vld_id), None)

    def cpd(self, cpd_id: str) -> VduCpd | ExtCpd | None:
        for ext in self.ext_cpd:
            if ext.cpd_id == cpd_id:
                return ext
        for vdu in self.vdus:
            for cpd in vdu.int_cpd:
                if cpd.cpd_id == cpd_id:
                    return cpd
        return None


@dataclass
class Sapd:
    sapd_id: str
    vld_id: str | None = None
    vnfd_id: str | None = None
    ext_cpd_id: str | None = None
    extras: dict = field(default_factory=dict)


@dataclass
class VlConnectivity:
    vnfd_id: str
    ext_cpd_id: str
    vld_id: str


@dataclass
class Nfpd:
    hops: list[tuple[str, str]] = field(default_factory=list)  # (vnfdId, cpdId)


@dataclass
class Vnffgd:
    vnffgd_id: str
    vnfd_ids: list[str] = field(default_factory=list)
    vld_ids: list[str] = field(default_factory=list)
    nfpds: list[Nfpd] = field(default_factory=list)
    extras: dict = field(default_factory=dict)


@dataclass
class Nsd:
    nsd_id: str
    vnfd_ids: list[str] = field(default_factory=list)
    virtual_link_desc: list[VirtualLinkDesc] = field(default_factory=list)
    sapd: list[Sapd] = field(default_factory=list)
    vl_connectivity: list[VlConnectivity] = field(default_factory=list)
    vnffgd: list[Vnffgd] = field(default_factory=list)
    extras: dict = field(default_factory=dict)


# --- parsing helpers -------------------------------------------------------------------


class _Collector:
    """Violation sink: strict parsing raises on the first one, lenient keeps all."""

    def __init__(self, strict: bool):
        self.strict = strict
        self.findings: list[Finding] = []

    def violation(self, rule: str, path: tuple, message: str):
        if self.strict:
            raise ConstraintError(message, path=path, rule=rule)
        self.findings.append(
            Finding(rule_id=rule, severity="error", path=path, message=message)
        )


def _load_document(text: str, syntax: str):
    if syntax == "json":
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise DocumentSyntaxError(f"malformed JSON: {exc}") from exc
    if syntax in ("yaml", "structured-text"):
        try:
            return yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise DocumentSyntaxError(f"malformed YAML: {exc}") from exc
    raise SchemaError(f"unknown syntax '{syntax}'", path=("syntax",))


def _expect_map(value, path: tuple) -> Mapping:
    if not isinstance(value, Mapping):
        raise SchemaError(f"expected a map, got {type(value).__name__}", path=path)
    return value


def _expect_list(value, path: tuple) -> list:
    if value is None:
        return []
    if not isinstance(value, list):
        raise SchemaError(f"expected a list, got {type(value).__name__}", path=path)
    return value


def _get_str(data: Mapping, key: str, path: tuple, *, required: bool = False) -> str | None:
    value = data.get(key)
    if value is None:
        if required:
            raise SchemaError(f"missing required field '{key}'", path=path + (key,))
        return None
    if isinstance(value, bool) or isinstance(value, (int, float)):
        # Tolerate unquoted scalars (YAML writers love bare 0); normalize to text.
        value = str(value)
    if not isinstance(value, str):
        raise SchemaError(f"field '{key}' must be a string", path=path + (key,))
    return value


def _take_extras(data: Mapping, known: Iterable[str], path: tuple) -> dict:
    extras = {}
    for key in data:
        if key not in known:
            extras[key] = data[key]
            warnings.warn(
                f"preserving unknown field '{key}' at {'.'.join(map(str, path)) or 'root'}",
                UnknownKeyWarning,
                stacklevel=3,
            )
    return extras


# --- VNFD ---------------------------------------------------------------------------------

_VNFD_KEYS = (
    "vnfdId", "vnfProvider", "vnfProductName", "vnfSoftwareVersion",
    "vdu", "intVirtualLinkDesc", "extCpd",
)
_VDU_KEYS = ("vduId", "name", "intCpd", "swImage", "vduNestedDesc", "vduNestedDescType")
_VDU_CPD_KEYS = ("cpdId", "layerProtocol", "intVirtualLinkDesc", "internalIfRef")
_EXT_CPD_KEYS = ("cpdId", "intCpd")
_VLD_KEYS = ("vldId",)


def parse_vnfd(text: str, syntax: str = "yaml") -> Vnfd:
    """Parse a VNFD document; raises on the first constraint violation."""
    vnfd, _ = parse_vnfd_lenient(text, syntax, strict=True)
    return vnfd


def parse_vnfd_lenient(
    text: str, syntax: str = "yaml", *, strict: bool = False
) -> tuple[Vnfd, list[Finding]]:
    data = _expect_map(_load_document(text, syntax) or {}, ())
    collector = _Collector(strict)
    vnfd = _vnfd_from_data(data, (), collector)
    return vnfd, collector.findings


def _vnfd_from_data(data: Mapping, path: tuple, c: _Collector) -> Vnfd:
    vnfd = Vnfd(
        vnfd_id=_get_str(data, "vnfdId", path, required=True),
        provider=_get_str(data, "vnfProvider", path) or "",
        product_name=_get_str(data, "vnfProductName", path) or "",
        software_version=_get_str(data, "vnfSoftwareVersion", path) or "",
        extras=_take_extras(data, _VNFD_KEYS, path),
    )

    seen_vlds: set[str] = set()
    for i, raw in enumerate(_expect_list(data.get("intVirtualLinkDesc"), path + ("intVirtualLinkDesc",))):
        vl_path = path + ("intVirtualLinkDesc", i)
        raw = _expect_map(raw, vl_path)
        vld = VirtualLinkDesc(
            vld_id=_get_str(raw, "vldId", vl_path, required=True),
            extras=_take_extras(raw, _VLD_KEYS, vl_path),
        )
        if vld.vld_id in seen_vlds:
            c.violation("etsi.unique-vld-id", vl_path + ("vldId",), f"duplicate virtual link id '{vld.vld_id}'")
        seen_vlds.add(vld.vld_id)
        vnfd.int_virtual_link_desc.append(vld)

    seen_vdus: set[str] = set()
    for i, raw in enumerate(_expect_list(data.get("vdu"), path + ("vdu",))):
        vdu_path = path + ("vdu", i)
        vdu = _vdu_from_data(_expect_map(raw, vdu_path), vdu_path, c, vnfd)
        if vdu.vdu_id in seen_vdus:
            c.violation("etsi.unique-vdu-id", vdu_path + ("vduId",), f"duplicate vduId '{vdu.vdu_id}'")
        seen_vdus.add(vdu.vdu_id)
        vnfd.vdus.append(vdu)

    seen_ext: set[str] = set()
    for i, raw in enumerate(_expect_list(data.get("extCpd"), path + ("extCpd",))):
        ext_path = path + ("extCpd", i)
        raw = _expect_map(raw, ext_path)
        ext = ExtCpd(
            cpd_id=_get_str(raw, "cpdId", ext_path, required=True),
            extras=_take_extras(raw, _EXT_CPD_KEYS, ext_path),
        )
        ref = raw.get("intCpd")
        if ref is not None:
            ref = _expect_map(ref, ext_path + ("intCpd",))
            ext.int_vdu_id = _get_str(ref, "vduId", ext_path + ("intCpd",), required=True)
            ext.int_cpd_id = _get_str(ref, "cpdId", ext_path + ("intCpd",), required=True)
            vdu = vnfd.vdu(ext.int_vdu_id)
            cpd = None
            if vdu is not None:
                cpd = next((x for x in vdu.int_cpd if x.cpd_id == ext.int_cpd_id), None)
            if vdu is None or cpd is None:
                c.violation(
                    "etsi.extcpd-ref",
                    ext_path + ("intCpd",),
                    f"extCpd '{ext.cpd_id}' references unknown ({ext.int_vdu_id}, {ext.int_cpd_id})",
                )
        if ext.cpd_id in seen_ext:
            c.violation("etsi.unique-extcpd-id", ext_path + ("cpdId",), f"duplicate extCpd id '{ext.cpd_id}'")
        seen_ext.add(ext.cpd_id)
        vnfd.ext_cpd.append(ext)

    return vnfd


def _vdu_from_data(data: Mapping, path: tuple, c: _Collector, vnfd: Vnfd) -> Vdu:
    vdu = Vdu(
        vdu_id=_get_str(data, "vduId", path, required=True),
        name=_get_str(data, "name", path) or "",
        sw_image=_get_str(data, "swImage", path),
        nested_desc=_get_str(data, "vduNestedDesc", path),
        nested_desc_type=_get_str(data, "vduNestedDescType", path),
        extras=_take_extras(data, _VDU_KEYS, path),
    )
    if vdu.nested_desc is not None and vdu.nested_desc_type is None:
        c.violation(
            "R2",
            path + ("vduNestedDescType",),
            f"vdu '{vdu.vdu_id}' has vduNestedDesc but no vduNestedDescType; "
            "a nested descriptor reference requires its type",
        )
    seen_cpds: set[str] = set()
    seen_if_refs: set[str] = set()
    for i, raw in enumerate(_expect_list(data.get("intCpd"), path + ("intCpd",))):
        cpd_path = path + ("intCpd", i)
        raw = _expect_map(raw, cpd_path)
        cpd = VduCpd(
            cpd_id=_get_str(raw, "cpdId", cpd_path, required=True),
            layer_protocol=_get_str(raw, "layerProtocol", cpd_path) or "",
            int_virtual_link_desc=_get_str(raw, "intVirtualLinkDesc", cpd_path),
            internal_if_ref=_get_str(raw, "internalIfRef", cpd_path),
            extras=_take_extras(raw, _VDU_CPD_KEYS, cpd_path),
        )
        if cpd.cpd_id in seen_cpds:
            c.violation("etsi.unique-cpd-id", cpd_path + ("cpdId",), f"duplicate cpdId '{cpd.cpd_id}' in vdu '{vdu.vdu_id}'")
        seen_cpds.add(cpd.cpd_id)
        if cpd.internal_if_ref is not None:
            if cpd.internal_if_ref in seen_if_refs:
                c.violation(
                    "R4",
                    cpd_path + ("internalIfRef",),
                    f"internalIfRef '{cpd.internal_if_ref}' used twice in vdu '{vdu.vdu_id}'",
                )
            seen_if_refs.add(cpd.internal_if_ref)
        if cpd.int_virtual_link_desc is not None and vnfd.vl(cpd.int_virtual_link_desc) is None:
            c.violation(
                "R1",
                cpd_path + ("intVirtualLinkDesc",),
                f"cpd '{cpd.cpd_id}' references unknown virtual link '{cpd.int_virtual_link_desc}'",
            )
        vdu.int_cpd.append(cpd)
    return vdu


# --- NSD -----------------------------------------------------------------------------------

_NSD_KEYS = ("nsdIdentifier", "vnfdId", "virtualLinkDesc", "sapd", "virtualLinkConnectivity", "vnffgd")
_SAPD_KEYS = ("sapdId", "vldId", "vnfdId", "extCpdId")
_CONN_KEYS = ("vnfdId", "extCpdId", "vldId")
_VNFFGD_KEYS = ("vnffgdId", "vnfdId", "vldId", "nfpd")


def parse_nsd(text: str, syntax: str = "yaml") -> Nsd:
    nsd, _ = parse_nsd_lenient(text, syntax, strict=True)
    return nsd


def parse_nsd_lenient(
    text: str, syntax: str = "yaml", *, strict: bool = False
) -> tuple[Nsd, list[Finding]]:
    data = _expect_map(_load_document(text, syntax) or {}, ())
    collector = _Collector(strict)
    nsd = _nsd_from_data(data, (), collector)
    return nsd, collector.findings


def _nsd_from_data(data: Mapping, path: tuple, c: _Collector) -> Nsd:
    nsd = Nsd(
        nsd_id=_get_str(data, "nsdIdentifier", path, required=True),
        extras=_take_extras(data, _NSD_KEYS, path),
    )
    for i, raw in enumerate(_expect_list(data.get("vnfdId"), path + ("vnfdId",))):
        if not isinstance(raw, str):
            raise SchemaError("vnfdId entries must be strings", path=path + ("vnfdId", i))
        nsd.vnfd_ids.append(raw)

    seen_vlds: set[str] = set()
    for i, raw in enumerate(_expect_list(data.get("virtualLinkDesc"), path + ("virtualLinkDesc",))):
        vl_path = path + ("virtualLinkDesc", i)
        raw = _expect_map(raw, vl_path)
        vld = VirtualLinkDesc(
            vld_id=_get_str(raw, "vldId", vl_path, required=True),
            extras=_take_extras(raw, _VLD_KEYS, vl_path),
        )
        if vld.vld_id in seen_vlds:
            c.violation("etsi.unique-vld-id", vl_path + ("vldId",), f"duplicate virtual link id '{vld.vld_id}'")
        seen_vlds.add(vld.vld_id)
        nsd.virtual_link_desc.append(vld)

    seen_sapds: set[str] = set()
    for i, raw in enumerate(_expect_list(data.get("sapd"), path + ("sapd",))):
        sap_path = path + ("sapd", i)
        raw = _expect_map(raw, sap_path)
        sapd = Sapd(
            sapd_id=_get_str(raw, "sapdId", sap_path, required=True),
            vld_id=_get_str(raw, "vldId", sap_path),
            vnfd_id=_get_str(raw, "vnfdId", sap_path),
            ext_cpd_id=_get_str(raw, "extCpdId", sap_path),
            extras=_take_extras(raw, _SAPD_KEYS, sap_path),
        )
        has_vl = sapd.vld_id is not None
        has_cpd = sapd.vnfd_id is not None and sapd.ext_cpd_id is not None
        if has_vl == has_cpd:
            c.violation(
                "etsi.sapd-association",
                sap_path,
                f"sapd '{sapd.sapd_id}' must associate with either a vldId or a (vnfdId, extCpdId) pair",
            )
        if sapd.sapd_id in seen_sapds:
            c.violation("etsi.unique-sapd-id", sap_path + ("sapdId",), f"duplicate sapdId '{sapd.sapd_id}'")
        seen_sapds.add(sapd.sapd_id)
        nsd.sapd.append(sapd)

    seen_pairs: set[tuple[str, str]] = set()
    for i, raw in enumerate(
        _expect_list(data.get("virtualLinkConnectivity"), path + ("virtualLinkConnectivity",))
    ):
        conn_path = path + ("virtualLinkConnectivity", i)
        raw = _expect_map(raw, conn_path)
        conn = VlConnectivity(
            vnfd_id=_get_str(raw, "vnfdId", conn_path, required=True),
            ext_cpd_id=_get_str(raw, "extCpdId", conn_path, required=True),
            vld_id=_get_str(raw, "vldId", conn_path, required=True),
        )
        _take_extras(raw, _CONN_KEYS, conn_path)
        pair = (conn.vnfd_id, conn.ext_cpd_id)
        if pair in seen_pairs:
            c.violation(
                "etsi.unique-vl-connectivity",
                conn_path,
                f"duplicate virtualLinkConnectivity for ({conn.vnfd_id}, {conn.ext_cpd_id})",
            )
        seen_pairs.add(pair)
        nsd.vl_connectivity.append(conn)

    seen_fgs: set[str] = set()
    for i, raw in enumerate(_expect_list(data.get("vnffgd"), path + ("vnffgd",))):
        fg_path = path + ("vnffgd", i)
        raw = _expect_map(raw, fg_path)
        fg = Vnffgd(
            vnffgd_id=_get_str(raw, "vnffgdId", fg_path, required=True),
            vnfd_ids=[str(v) for v in _expect_list(raw.get("vnfdId"), fg_path + ("vnfdId",))],
            vld_ids=[str(v) for v in _expect_list(raw.get("vldId"), fg_path + ("vldId",))],
            extras=_take_extras(raw, _VNFFGD_KEYS, fg_path),
        )
        for j, raw_nfpd in enumerate(_expect_list(raw.get("nfpd"), fg_path + ("nfpd",))):
            nfpd_path = fg_path + ("nfpd", j)
            nfpd = Nfpd()
            for k, raw_hop in enumerate(_expect_list(raw_nfpd, nfpd_path)):
                hop_path = nfpd_path + (k,)
                raw_hop = _expect_map(raw_hop, hop_path)
                hop = (
                    _get_str(raw_hop, "vnfdId", hop_path, required=True),
                    _get_str(raw_hop, "cpdId", hop_path, required=True),
                )
                if hop[0] not in fg.vnfd_ids:
                    c.violation(
                        "etsi.nfp-hop-vnfd",
                        hop_path + ("vnfdId",),
                        f"nfp hop names vnfd '{hop[0]}' not listed in vnffgd '{fg.vnffgd_id}'",
                    )
                nfpd.hops.append(hop)
            fg.nfpds.append(nfpd)
        if fg.vnffgd_id in seen_fgs:
            c.violation("etsi.unique-vnffgd-id", fg_path + ("vnffgdId",), f"duplicate vnffgdId '{fg.vnffgd_id}'")
        seen_fgs.add(fg.vnffgd_id)
        nsd.vnffgd.append(fg)

    return nsd


# --- serialization ---------------------------------------------------------------------------


def serialize(desc: Vnfd | Nsd, syntax: str = "yaml") -> str:
    """Canonical text form; parse(serialize(d)) equals d, extras included."""
    if isinstance(desc, Vnfd):
        doc = _vnfd_to_data(desc)
    elif isinstance(desc, Nsd):
        doc = _nsd_to_data(desc)
    else:
        raise SchemaError(f"cannot serialize {type(desc).__name__}")
    if syntax == "json":
        return json.dumps(doc, indent=2) + "\n"
    if syntax in ("yaml", "structured-text"):
        return yaml.safe_dump(doc, sort_keys=False, default_flow_style=False)
    raise SchemaError(f"unknown syntax '{syntax}'", path=("syntax",))


def _with_extras(doc: dict, extras: Mapping) -> dict:
    for key in sorted(extras):
        doc[key] = extras[key]
    return doc


def _drop_empty(doc: dict) -> dict:
    return {k: v for k, v in doc.items() if v is not None and v != [] and v != ""}


def _vnfd_to_data(vnfd: Vnfd) -> dict:
    doc: dict[str, Any] = _drop_empty(
        {
            "vnfdId": vnfd.vnfd_id,
            "vnfProvider": vnfd.provider,
            "vnfProductName": vnfd.product_name,
            "vnfSoftwareVersion": vnfd.software_version,
            "vdu": [_vdu_to_data(v) for v in vnfd.vdus],
            "intVirtualLinkDesc": [
                _with_extras({"vldId": vl.vld_id}, vl.extras) for vl in vnfd.int_virtual_link_desc
            ],
            "extCpd": [_ext_cpd_to_data(e) for e in vnfd.ext_cpd],
        }
    )
    return _with_extras(doc, vnfd.extras)


def _vdu_to_data(vdu: Vdu) -> dict:
    doc = _drop_empty(
        {
            "vduId": vdu.vdu_id,
            "name": vdu.name,
            "swImage": vdu.sw_image,
            "vduNestedDesc": vdu.nested_desc,
            "vduNestedDescType": vdu.nested_desc_type,
            "intCpd": [
                _with_extras(
                    _drop_empty(
                        {
                            "cpdId": c.cpd_id,
                            "layerProtocol": c.layer_protocol,
                            "intVirtualLinkDesc": c.int_virtual_link_desc,
                            "internalIfRef": c.internal_if_ref,
                        }
                    ),
                    c.extras,
                )
                for c in vdu.int_cpd
            ],
        }
    )
    return _with_extras(doc, vdu.extras)


def _ext_cpd_to_data(ext: ExtCpd) -> dict:
    doc: dict[str, Any] = {"cpdId": ext.cpd_id}
    if ext.int_vdu_id is not None:
        doc["intCpd"] = {"vduId": ext.int_vdu_id, "cpdId": ext.int_cpd_id}
    return _with_extras(doc, ext.extras)


def _nsd_to_data(nsd: Nsd) -> dict:
    doc: dict[str, Any] = _drop_empty(
        {
            "nsdIdentifier": nsd.nsd_id,
            "vnfdId": list(nsd.vnfd_ids),
            "virtualLinkDesc": [
                _with_extras({"vldId": vl.vld_id}, vl.extras) for vl in nsd.virtual_link_desc
            ],
            "sapd": [
                _with_extras(
                    _drop_empty(
                        {
                            "sapdId": s.sapd_id,
                            "vldId": s.vld_id,
                            "vnfdId": s.vnfd_id,
                            "extCpdId": s.ext_cpd_id,
                        }
                    ),
                    s.extras,
                )
                for s in nsd.sapd
            ],
            "virtualLinkConnectivity": [
                {"vnfdId": c.vnfd_id, "extCpdId": c.ext_cpd_id, "vldId": c.vld_id}
                for c in nsd.vl_connectivity
            ],
            "vnffgd": [
                _with_extras(
                    _drop_empty(
                        {
                            "vnffgdId": fg.vnffgd_id,
                            "vnfdId": list(fg.vnfd_ids),
                            "vldId": list(fg.vld_ids),
                            "nfpd": [
                                [{"vnfdId": v, "cpdId": c} for v, c in nfpd.hops]
                                for nfpd in fg.nfpds
                            ],
                        }
                    ),
                    fg.extras,
                )
                for fg in nsd.vnffgd
            ],
        }
    )
    return _with_extras(doc, nsd.extras)


# --- graph mapping ------------------------------------------------------------------------------


def etsi_to_graph(
    vnfds: list[Vnfd],
    nsd: Nsd | None,
    model: DescriptionModel,
    *,
    project_type: str | None = None,
    source_texts: Mapping[str, str] | None = None,
    lenient: bool = False,
) -> ProjectGraph:
    """Build the project graph. Dangling references raise; in lenient mode the
    affected edge is skipped instead (the validation rules report it)."""

    def dangle(path: tuple, message: str):
        if not lenient:
            raise DanglingReferenceError(message, path=path)

    b = GraphBuilder(model, project_type=project_type or model.name)
    vnf_nodes: dict[str, str] = {}
    int_vls: dict[tuple[str, str], str] = {}
    int_cpds: dict[tuple[str, str, str], str] = {}
    ext_cpds: dict[tuple[str, str], str] = {}

    for vnfd in vnfds:
        vnf_id = b.add_node(
            "VNF",
            label=vnfd.product_name or vnfd.vnfd_id,
            properties=_drop_empty(
                {
                    "vnfdId": vnfd.vnfd_id,
                    "vnfProvider": vnfd.provider,
                    "vnfProductName": vnfd.product_name,
                    "vnfSoftwareVersion": vnfd.software_version,
                }
            ),
        )
        vnf_nodes[vnfd.vnfd_id] = vnf_id
        for vl in vnfd.int_virtual_link_desc:
            int_vls[(vnfd.vnfd_id, vl.vld_id)] = b.add_node(
                "IntVirtualLink",
                label=vl.vld_id,
                properties={"vldId": vl.vld_id, "vnfdId": vnfd.vnfd_id},
            )
        for vdu in vnfd.vdus:
            vdu_node = b.add_node(
                "VDU",
                label=vdu.name or vdu.vdu_id,
                parent=vnf_id,
                properties=_drop_empty(
                    {
                        "vduId": vdu.vdu_id,
                        "name": vdu.name,
                        "swImage": vdu.sw_image,
                        "vduNestedDesc": vdu.nested_desc,
                        "vduNestedDescType": vdu.nested_desc_type,
                    }
                ),
            )
            for cpd in vdu.int_cpd:
                cpd_node = b.add_node(
                    "IntCpd",
                    label=cpd.cpd_id,
                    parent=vdu_node,
                    properties=_drop_empty(
                        {
                            "cpdId": cpd.cpd_id,
                            "layerProtocol": cpd.layer_protocol,
                            "internalIfRef": cpd.internal_if_ref,
                        }
                    ),
                )
                int_cpds[(vnfd.vnfd_id, vdu.vdu_id, cpd.cpd_id)] = cpd_node
                if cpd.int_virtual_link_desc is not None:
                    vl_node = int_vls.get((vnfd.vnfd_id, cpd.int_virtual_link_desc))
                    if vl_node is None:
                        dangle(
                            ("vnfd", vnfd.vnfd_id, "vdu", vdu.vdu_id, "intCpd", cpd.cpd_id),
                            f"cpd '{cpd.cpd_id}' references unknown virtual link "
                            f"'{cpd.int_virtual_link_desc}'",
                        )
                    else:
                        b.add_edge("vl_link", cpd_node, vl_node)
        for ext in vnfd.ext_cpd:
            ext_node = b.add_node(
                "ExtCpd",
                label=ext.cpd_id,
                parent=vnf_id,
                properties=_drop_empty(
                    {"cpdId": ext.cpd_id, "intVduId": ext.int_vdu_id, "intCpdId": ext.int_cpd_id}
                ),
            )
            ext_cpds[(vnfd.vnfd_id, ext.cpd_id)] = ext_node

    if nsd is not None:
        b.add_node("NS", label=nsd.nsd_id, properties={"nsdIdentifier": nsd.nsd_id})
        for vnfd_id in nsd.vnfd_ids:
            if vnfd_id not in vnf_nodes:
                dangle(
                    ("nsd", nsd.nsd_id, "vnfdId"),
                    f"nsd constituent vnfd '{vnfd_id}' is not part of the project",
                )
        ns_vls: dict[str, str] = {}
        for vl in nsd.virtual_link_desc:
            ns_vls[vl.vld_id] = b.add_node(
                "NsVirtualLink", label=vl.vld_id, properties={"vldId": vl.vld_id}
            )
        for sapd in nsd.sapd:
            sap_node = b.add_node("SAP", label=sapd.sapd_id, properties={"sapdId": sapd.sapd_id})
            if sapd.vld_id is not None:
                target = ns_vls.get(sapd.vld_id)
                if target is None:
                    dangle(
                        ("nsd", nsd.nsd_id, "sapd", sapd.sapd_id),
                        f"sapd '{sapd.sapd_id}' references unknown virtual link '{sapd.vld_id}'",
                    )
                else:
                    b.add_edge("sap_link", sap_node, target)
            elif sapd.vnfd_id is not None and sapd.ext_cpd_id is not None:
                target = ext_cpds.get((sapd.vnfd_id, sapd.ext_cpd_id))
                if target is None:
                    dangle(
                        ("nsd", nsd.nsd_id, "sapd", sapd.sapd_id),
                        f"sapd '{sapd.sapd_id}' references unknown extCpd "
                        f"({sapd.vnfd_id}, {sapd.ext_cpd_id})",
                    )
                else:
                    b.add_edge("sap_link", sap_node, target)
        for conn in nsd.vl_connectivity:
            source = ext_cpds.get((conn.vnfd_id, conn.ext_cpd_id))
            target = ns_vls.get(conn.vld_id)
            if source is None or target is None:
                dangle(
                    ("nsd", nsd.nsd_id, "virtualLinkConnectivity"),
                    f"connectivity ({conn.vnfd_id}, {conn.ext_cpd_id}) -> {conn.vld_id} "
                    "does not resolve",
                )
            else:
                b.add_edge("vl_link", source, target)
        for fg in nsd.vnffgd:
            b.add_node(
                "VNFFG",
                label=fg.vnffgd_id,
                properties={
                    "vnffgdId": fg.vnffgd_id,
                    "vnfdIds": json.dumps(fg.vnfd_ids),
                    "vldIds": json.dumps(fg.vld_ids),
                },
            )
            for nfp_index, nfpd in enumerate(fg.nfpds):
                hop_nodes = []
                broken = False
                for vnfd_id, cpd_id in nfpd.hops:
                    node = _find_cpd_node(vnfd_id, cpd_id, int_cpds, ext_cpds)
                    if node is None:
                        dangle(
                            ("nsd", nsd.nsd_id, "vnffgd", fg.vnffgd_id, "nfpd", nfp_index),
                            f"nfp hop ({vnfd_id}, {cpd_id}) does not resolve",
                        )
                        broken = True
                        break
                    hop_nodes.append(node)
                if broken:
                    continue
                for hop_index in range(len(hop_nodes) - 1):
                    b.add_edge(
                        "nfp_hop",
                        hop_nodes[hop_index],
                        hop_nodes[hop_index + 1],
                        properties={
                            "vnffgdId": fg.vnffgd_id,
                            "nfpIndex": nfp_index,
                            "hopIndex": hop_index,
                        },
                    )

    return b.build(source_texts=source_texts)


def _find_cpd_node(vnfd_id: str, cpd_id: str, int_cpds: Mapping, ext_cpds: Mapping) -> str | None:
    node = ext_cpds.get((vnfd_id, cpd_id))
    if node is not None:
        return node
    for (v, _vdu, c), node_id in int_cpds.items():
        if v == vnfd_id and c == cpd_id:
            return node_id
    return None


def _id_sort_key(node_id: str) -> tuple:
    base, _, suffix = node_id.rpartition("@")
    if base and suffix.isdigit():
        return (base, int(suffix))
    return (node_id, 0)


def graph_to_etsi(
    g: ProjectGraph, extras_from: tuple[list[Vnfd], Nsd | None] | None = None
) -> tuple[list[Vnfd], Nsd | None]:
    """Rebuild descriptors from an ETSI-typed graph.

    ``extras_from`` re-attaches the unknown-field stashes of a previous parse
    by id, so a graph edit round trip does not shed unrecognized fields.
    """
    nodes = sorted(g.nodes.values(), key=lambda n: _id_sort_key(n.id))

    def prop(node: GraphNode, name: str) -> str | None:
        value = node.properties.get(name)
        return str(value) if value is not None else None

    vnfds: list[Vnfd] = []
    vnf_by_node: dict[str, Vnfd] = {}
    for node in nodes:
        if node.type != "VNF":
            continue
        vnfd = Vnfd(
            vnfd_id=prop(node, "vnfdId") or node.label,
            provider=prop(node, "vnfProvider") or "",
            product_name=prop(node, "vnfProductName") or "",
            software_version=prop(node, "vnfSoftwareVersion") or "",
        )
        vnfds.append(vnfd)
        vnf_by_node[node.id] = vnfd

    vl_by_node: dict[str, tuple[str, str]] = {}  # node -> (kind, vldId)
    for node in nodes:
        if node.type == "IntVirtualLink":
            owner_id = prop(node, "vnfdId")
            owner = next((v for v in vnfds if v.vnfd_id == owner_id), None)
            if owner is None:
                raise IncompleteGraphError(
                    f"internal virtual link '{node.id}' names no existing vnfd", path=(node.id,)
                )
            vld_id = prop(node, "vldId") or node.label
            owner.int_virtual_link_desc.append(VirtualLinkDesc(vld_id=vld_id))
            vl_by_node[node.id] = ("int", vld_id)

    vdu_by_node: dict[str, tuple[Vnfd, Vdu]] = {}
    for node in nodes:
        if node.type != "VDU":
            continue
        if node.parent is None or node.parent not in vnf_by_node:
            raise IncompleteGraphError(f"vdu '{node.id}' has no parent VNF", path=(node.id,))
        vnfd = vnf_by_node[node.parent]
        vdu = Vdu(
            vdu_id=prop(node, "vduId") or node.label,
            name=prop(node, "name") or "",
            sw_image=prop(node, "swImage"),
            nested_desc=prop(node, "vduNestedDesc"),
            nested_desc_type=prop(node, "vduNestedDescType"),
        )
        vnfd.vdus.append(vdu)
        vdu_by_node[node.id] = (vnfd, vdu)

    cpd_by_node: dict[str, tuple[Vnfd, str]] = {}  # node -> (owner vnfd, cpdId)
    for node in nodes:
        if node.type == "IntCpd":
            if node.parent is None or node.parent not in vdu_by_node:
                raise IncompleteGraphError(f"cpd '{node.id}' has no parent VDU", path=(node.id,))
            vnfd, vdu = vdu_by_node[node.parent]
            cpd = VduCpd(
                cpd_id=prop(node, "cpdId") or node.label,
                layer_protocol=prop(node, "layerProtocol") or "",
                internal_if_ref=prop(node, "internalIfRef"),
            )
            vdu.int_cpd.append(cpd)
            cpd_by_node[node.id] = (vnfd, cpd.cpd_id)
        elif node.type == "ExtCpd":
            if node.parent is None or node.parent not in vnf_by_node:
                raise IncompleteGraphError(f"extCpd '{node.id}' has no parent VNF", path=(node.id,))
            vnfd = vnf_by_node[node.parent]
            ext = ExtCpd(
                cpd_id=prop(node, "cpdId") or node.label,
                int_vdu_id=prop(node, "intVduId"),
                int_cpd_id=prop(node, "intCpdId"),
            )
            vnfd.ext_cpd.append(ext)
            cpd_by_node[node.id] = (vnfd, ext.cpd_id)

    ns_nodes = [n for n in nodes if n.type == "NS"]
    nsd: Nsd | None = None
    ns_vl_nodes: dict[str, str] = {}
    if ns_nodes:
        ns_node = ns_nodes[0]
        nsd = Nsd(nsd_id=prop(ns_node, "nsdIdentifier") or ns_node.label)
        nsd.vnfd_ids = [v.vnfd_id for v in vnfds]
        for node in nodes:
            if node.type == "NsVirtualLink":
                vld_id = prop(node, "vldId") or node.label
                nsd.virtual_link_desc.append(VirtualLinkDesc(vld_id=vld_id))
                ns_vl_nodes[node.id] = vld_id
                vl_by_node[node.id] = ("ns", vld_id)

    edges = sorted(g.edges.values(), key=lambda e: _id_sort_key(e.id))
    nfp_edges: list = []
    for edge in edges:
        if edge.type == "vl_link":
            ends = {edge.source: g.nodes[edge.source], edge.target: g.nodes[edge.target]}
            cpd_end = next((nid for nid, n in ends.items() if n.type in ("IntCpd", "ExtCpd")), None)
            vl_end = next(
                (nid for nid, n in ends.items() if n.type in ("IntVirtualLink", "NsVirtualLink")),
                None,
            )
            if cpd_end is None or vl_end is None:
                raise IncompleteGraphError(f"vl_link '{edge.id}' does not connect a cpd to a virtual link")
            kind, vld_id = vl_by_node[vl_end]
            cpd_node = g.nodes[cpd_end]
            if cpd_node.type == "IntCpd" and kind == "int":
                vnfd, cpd_id = cpd_by_node[cpd_end]
                _, vdu = vdu_by_node[cpd_node.parent]
                cpd = next(c for c in vdu.int_cpd if c.cpd_id == cpd_id)
                cpd.int_virtual_link_desc = vld_id
            elif cpd_node.type == "ExtCpd" and kind == "ns" and nsd is not None:
                vnfd, cpd_id = cpd_by_node[cpd_end]
                nsd.vl_connectivity.append(
                    VlConnectivity(vnfd_id=vnfd.vnfd_id, ext_cpd_id=cpd_id, vld_id=vld_id)
                )
            else:
                raise IncompleteGraphError(
                    f"vl_link '{edge.id}' connects incompatible endpoints", path=(edge.id,)
                )
        elif edge.type == "sap_link" and nsd is not None:
            sap_node = g.nodes[edge.source]
            if sap_node.type != "SAP":
                sap_node = g.nodes[edge.target]
            other = g.nodes[edge.target if sap_node.id == edge.source else edge.source]
            sapd = Sapd(sapd_id=prop(sap_node, "sapdId") or sap_node.label)
            if other.type == "NsVirtualLink":
                sapd.vld_id = ns_vl_nodes[other.id]
            elif other.type == "ExtCpd":
                vnfd, cpd_id = cpd_by_node[other.id]
                sapd.vnfd_id = vnfd.vnfd_id
                sapd.ext_cpd_id = cpd_id
            nsd.sapd.append(sapd)
        elif edge.type == "nfp_hop":
            nfp_edges.append(edge)

    if nsd is not None:
        for node in nodes:
            if node.type != "VNFFG":
                continue
            fg = Vnffgd(
                vnffgd_id=prop(node, "vnffgdId") or node.label,
                vnfd_ids=json.loads(str(node.properties.get("vnfdIds", "[]"))),
                vld_ids=json.loads(str(node.properties.get("vldIds", "[]"))),
            )
            mine = [e for e in nfp_edges if e.properties.get("vnffgdId") == fg.vnffgd_id]
            by_nfp: dict[int, list] = {}
            for edge in mine:
                by_nfp.setdefault(int(edge.properties.get("nfpIndex", 0)), []).append(edge)
            for nfp_index in sorted(by_nfp):
                chain = sorted(by_nfp[nfp_index], key=lambda e: int(e.properties.get("hopIndex", 0)))
                nfpd = Nfpd()
                first = chain[0]
                vnfd, cpd_id = cpd_by_node[first.source]
                nfpd.hops.append((vnfd.vnfd_id, cpd_id))
                for edge in chain:
                    vnfd, cpd_id = cpd_by_node[edge.target]
                    nfpd.hops.append((vnfd.vnfd_id, cpd_id))
                fg.nfpds.append(nfpd)
            nsd.vnffgd.append(fg)

    if extras_from is not None:
        _carry_extras(vnfds, nsd, extras_from)
    return vnfds, nsd


def _carry_extras(vnfds: list[Vnfd], nsd: Nsd | None, extras_from: tuple[list[Vnfd], Nsd | None]):
    old_vnfds, old_nsd = extras_from
    old_by_id = {v.vnfd_id: v for v in old_vnfds}
    for vnfd in vnfds:
        old = old_by_id.get(vnfd.vnfd_id)
        if old is None:
            continue
        vnfd.extras = dict(old.extras)
        for vdu in vnfd.vdus:
            old_vdu = old.vdu(vdu.vdu_id)
            if old_vdu is None:
                continue
            vdu.extras = dict(old_vdu.extras)
            old_cpds = {c.cpd_id: c for c in old_vdu.int_cpd}
            for cpd in vdu.int_cpd:
                if cpd.cpd_id in old_cpds:
                    cpd.extras = dict(old_cpds[cpd.cpd_id].extras)
        old_exts = {e.cpd_id: e for e in old.ext_cpd}
        for ext in vnfd.ext_cpd:
            if ext.cpd_id in old_exts:
                ext.extras = dict(old_exts[ext.cpd_id].extras)
        old_vls = {v.vld_id: v for v in old.int_virtual_link_desc}
        for vl in vnfd.int_virtual_link_desc:
            if vl.vld_id in old_vls:
                vl.extras = dict(old_vls[vl.vld_id].extras)
    if nsd is not None and old_nsd is not None and nsd.nsd_id == old_nsd.nsd_id:
        nsd.extras = dict(old_nsd.extras)
        old_vls = {v.vld_id: v for v in old_nsd.virtual_link_desc}
        for vl in nsd.virtual_link_desc:
            if vl.vld_id in old_vls:
                vl.extras = dict(old_vls[vl.vld_id].extras)
        old_saps = {s.sapd_id: s for s in old_nsd.sapd}
        for sapd in nsd.sapd:
            if sapd.sapd_id in old_saps:
                sapd.extras = dict(old_saps[sapd.sapd_id].extras)
        old_fgs = {f.vnffgd_id: f for f in old_nsd.vnffgd}
        for fg in nsd.vnffgd:
            if fg.vnffgd_id in old_fgs:
                fg.extras = dict(old_fgs[fg.vnffgd_id].extras)
