"""Validation findings and report rendering.

A report aggregates findings from structural checks and plugin rules. Findings
are addressed by a document path (``vdu[0].intCpd[1]``) and, when the subject
lives in the graph, by the graph node/edge id as well, so both the CLI and the
web frontend can highlight the offending construct.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import format_path

SEVERITIES = ("error", "warning", "info")


@dataclass(frozen=True)
class Finding:
    rule_id: str
    severity: str  # error | warning | info
    path: tuple = ()
    message: str = ""
    graph_ref: str | None = None  # node or edge id, when applicable

    def path_str(self) -> str:
        return format_path(self.path)

    def to_dict(self) -> dict:
        out = {
            "rule_id": self.rule_id,
            "severity": self.severity,
            "path": self.path_str(),
            "message": self.message,
        }
        if self.graph_ref is not None:
            out["graph_ref"] = self.graph_ref
        return out


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    def __post_init__(self):
        # Deterministic ordering: by path, then rule id.
        self.findings = sorted(
            self.findings, key=lambda f: (f.path_str(), f.rule_id, f.message)
        )

    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == "error"]

    def warnings(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == "warning"]

    @property
    def clean(self) -> bool:
        return not self.errors()

    def exit_code(self) -> int:
        """CLI contract: 0 clean, 1 warnings only, 2 errors."""
        if self.errors():
            return 2
        if self.warnings():
            return 1
        return 0

    def to_dict(self) -> dict:
        return {"findings": [f.to_dict() for f in self.findings]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_text(self) -> str:
        """Human rendering, one line per finding plus a summary line."""
        lines = []
        for f in self.findings:
            where = f.path_str() or f.graph_ref or "-"
            lines.append(f"{f.severity.upper():7s} {f.rule_id:24s} {where}: {f.message}")
        n_err = len(self.errors())
        n_warn = len(self.warnings())
        lines.append(f"{n_err} errors, {n_warn} warnings")
        return "\n".join(lines) + "\n"
