"""Filesystem project store: projects are named collections of descriptor
files plus metadata, kept under one root directory with a JSON index.

Filenames are confined below the project directory: relative, normalized,
no traversal. Writes to one project are serialized by an advisory lock file;
distinct projects are independent.
"""

from __future__ import annotations

import fcntl
import json
import os
import re
import time
import urllib.error
import urllib.request
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path, PurePosixPath

from .descmodel import ModelRegistry
from .errors import (
    DuplicateProjectError,
    FetchError,
    IllegalPathError,
    IoError,
    NotFoundError,
    SizeExceededError,
    UnknownProjectTypeError,
)

PROJECT_ID_RE = re.compile(r"^[a-z0-9][a-z0-9._-]*$")

DEFAULT_FETCH_CAP = 1 << 20  # 1 MiB
DEFAULT_FETCH_TIMEOUT = 5.0  # seconds


@dataclass
class Project:
    project_id: str
    project_type: str
    owner: str = ""
    created: float = field(default_factory=time.time)
    modified: float = field(default_factory=time.time)

    def to_dict(self) -> dict:
        return {
            "project_id": self.project_id,
            "project_type": self.project_type,
            "owner": self.owner,
            "created": self.created,
            "modified": self.modified,
        }


def check_filename(filename: str) -> str:
    """Reject traversal, absolute paths, and other escapes from the project root."""
    if not filename or "\x00" in filename:
        raise IllegalPathError(f"illegal filename {filename!r}")
    pure = PurePosixPath(filename)
    if pure.is_absolute() or filename.startswith("\\") or ":" in filename:
        raise IllegalPathError(f"filename '{filename}' must be relative")
    if any(part in ("..", "", ".") for part in pure.parts):
        raise IllegalPathError(f"filename '{filename}' escapes the project root")
    return str(pure)


class ProjectStore:
    """Directory tree ``<root>/<projectId>/files/...`` plus ``<root>/index.json``."""

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._index_path = self.root / "index.json"
        if not self._index_path.exists():
            self._write_index({})

    # --- index ---------------------------------------------------------------

    def _read_index(self) -> dict:
        try:
            return json.loads(self._index_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise IoError(f"cannot read store index: {exc}") from exc

    def _write_index(self, index: dict):
        tmp = self._index_path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(index, indent=2, sort_keys=True), encoding="utf-8")
        os.replace(tmp, self._index_path)

    def _project_dir(self, project_id: str) -> Path:
        return self.root / project_id

    def _files_dir(self, project_id: str) -> Path:
        return self._project_dir(project_id) / "files"

    @contextmanager
    def lock(self, project_id: str):
        """Advisory per-project write lock."""
        lock_path = self._project_dir(project_id) / ".lock"
        lock_path.parent.mkdir(parents=True, exist_ok=True)
        with open(lock_path, "w") as handle:
            fcntl.flock(handle, fcntl.LOCK_EX)
            try:
                yield
            finally:
                fcntl.flock(handle, fcntl.LOCK_UN)

    # --- project lifecycle ------------------------------------------------------

    def create_project(
        self, project_id: str, project_type: str, owner: str = "",
        registry: ModelRegistry | None = None,
    ) -> Project:
        """Create a project, seeding it with the type's predefined example files."""
        if not PROJECT_ID_RE.match(project_id):
            raise IllegalPathError(f"'{project_id}' is not a legal project id")
        index = self._read_index()
        if project_id in index:
            raise DuplicateProjectError(f"project '{project_id}' already exists")
        examples: dict[str, str] = {}
        if registry is not None:
            if project_type not in registry:
                raise UnknownProjectTypeError(f"unknown project type '{project_type}'")
            examples = registry.adapter(project_type).example_files()

        project = Project(project_id=project_id, project_type=project_type, owner=owner)
        self._files_dir(project_id).mkdir(parents=True)
        index[project_id] = project.to_dict()
        self._write_index(index)
        for name, text in examples.items():
            self.put_file(project_id, name, text.encode("utf-8"))
        return self.get_project(project_id)

    def get_project(self, project_id: str) -> Project:
        index = self._read_index()
        if project_id not in index:
            raise NotFoundError(f"no project '{project_id}'")
        data = index[project_id]
        return Project(
            project_id=data["project_id"],
            project_type=data["project_type"],
            owner=data.get("owner", ""),
            created=data.get("created", 0.0),
            modified=data.get("modified", 0.0),
        )

    def list_projects(self) -> list[Project]:
        index = self._read_index()
        return [self.get_project(pid) for pid in sorted(index)]

    def delete_project(self, project_id: str):
        index = self._read_index()
        if project_id not in index:
            raise NotFoundError(f"no project '{project_id}'")
        del index[project_id]
        self._write_index(index)
        directory = self._project_dir(project_id)
        for path in sorted(directory.rglob("*"), reverse=True):
            if path.is_file() or path.is_symlink():
                path.unlink()
            else:
                path.rmdir()
        directory.rmdir()

    # --- files ----------------------------------------------------------------------

    def put_file(self, project_id: str, filename: str, data: bytes):
        filename = check_filename(filename)
        self.get_project(project_id)
        with self.lock(project_id):
            target = self._files_dir(project_id) / filename
            target.parent.mkdir(parents=True, exist_ok=True)
            tmp = target.with_name(target.name + ".tmp")
            tmp.write_bytes(data)
            os.replace(tmp, target)
            index = self._read_index()
            index[project_id]["modified"] = time.time()
            self._write_index(index)

    def get_file(self, project_id: str, filename: str) -> bytes:
        filename = check_filename(filename)
        self.get_project(project_id)
        target = self._files_dir(project_id) / filename
        if not target.is_file():
            raise NotFoundError(f"no file '{filename}' in project '{project_id}'")
        return target.read_bytes()

    def delete_file(self, project_id: str, filename: str):
        filename = check_filename(filename)
        self.get_project(project_id)
        with self.lock(project_id):
            target = self._files_dir(project_id) / filename
            if not target.is_file():
                raise NotFoundError(f"no file '{filename}' in project '{project_id}'")
            target.unlink()

    def list_files(self, project_id: str) -> list[str]:
        self.get_project(project_id)
        base = self._files_dir(project_id)
        if not base.exists():
            return []
        return sorted(
            str(p.relative_to(base)) for p in base.rglob("*") if p.is_file()
        )

    def file_texts(self, project_id: str) -> dict[str, str]:
        """All project files decoded as UTF-8 text (descriptor files are text)."""
        out = {}
        for name in self.list_files(project_id):
            out[name] = self.get_file(project_id, name).decode("utf-8")
        return out

    # --- nested references ---------------------------------------------------------------

    def resolve_nested_ref(
        self,
        project_id: str,
        ref: str,
        *,
        size_cap: int = DEFAULT_FETCH_CAP,
        timeout: float = DEFAULT_FETCH_TIMEOUT,
    ) -> bytes:
        """Resolve a nested-descriptor reference: project-relative path or URL."""
        if ref.startswith(("http://", "https://")):
            return _fetch_url(ref, size_cap=size_cap, timeout=timeout)
        return self.get_file(project_id, ref)


def _fetch_url(url: str, *, size_cap: int, timeout: float) -> bytes:
    try:
        with urllib.request.urlopen(url, timeout=timeout) as response:
            data = response.read(size_cap + 1)
    except (urllib.error.URLError, OSError, ValueError) as exc:
        raise FetchError(f"cannot fetch '{url}': {exc}") from exc
    if len(data) > size_cap:
        raise SizeExceededError(f"'{url}' exceeds the {size_cap} byte cap")
    return data
