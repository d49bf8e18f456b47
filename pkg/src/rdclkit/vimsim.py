"""OpenVIM-flavored infrastructure-manager simulator.

Keeps networks, images, and servers in memory behind a small REST surface.
Servers start in BUILD and are promoted to ACTIVE after a configurable number
of status polls, so agent-side polling is exercised without timers. Failure
injection (``fail_on_create_n``) makes the n-th create call fail, which the
rollback tests lean on. State mutations are serialized behind one lock.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from typing import Any

from fastapi import APIRouter, FastAPI, HTTPException

IMAGE_TYPES = ("qcow2", "clickos")


@dataclass
class VimNetwork:
    id: str
    name: str

    def to_dict(self) -> dict:
        return {"id": self.id, "name": self.name}


@dataclass
class VimImage:
    id: str
    name: str
    type: str
    ref: str = ""

    def to_dict(self) -> dict:
        return {"id": self.id, "name": self.name, "type": self.type, "ref": self.ref}


@dataclass
class VimServer:
    id: str
    name: str
    image_id: str
    image_type: str
    interfaces: list[dict]  # {"position": int, "network_id": str}
    metadata: dict = field(default_factory=dict)
    state: str = "BUILD"
    ticks_left: int = 1

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "image_id": self.image_id,
            "image_type": self.image_type,
            "interfaces": list(self.interfaces),
            "metadata": dict(self.metadata),
            "state": self.state,
        }


class VimSimulator:
    def __init__(self):
        self._lock = threading.Lock()
        self._seq = itertools.count(1)
        self.networks: dict[str, VimNetwork] = {}
        self.images: dict[str, VimImage] = {}
        self.servers: dict[str, VimServer] = {}
        self.build_ticks = 1
        self.fail_on_create_n: int | None = None
        self._create_calls = 0

    def _next_id(self, prefix: str) -> str:
        return f"{prefix}-{next(self._seq)}"

    def _maybe_fail_create(self):
        self._create_calls += 1
        if self.fail_on_create_n is not None and self._create_calls == self.fail_on_create_n:
            raise HTTPException(status_code=500, detail="injected create failure")

    def configure(self, data: dict) -> dict:
        with self._lock:
            if "build_ticks" in data and data["build_ticks"] is not None:
                self.build_ticks = int(data["build_ticks"])
            if "fail_on_create_n" in data:
                value = data["fail_on_create_n"]
                self.fail_on_create_n = None if value is None else int(value)
                self._create_calls = 0
            return {
                "build_ticks": self.build_ticks,
                "fail_on_create_n": self.fail_on_create_n,
            }

    def resource_count(self) -> int:
        with self._lock:
            return len(self.networks) + len(self.images) + len(self.servers)

    # --- networks -------------------------------------------------------------

    def create_network(self, data: dict) -> dict:
        with self._lock:
            self._maybe_fail_create()
            name = data.get("name")
            if not isinstance(name, str) or not name:
                raise HTTPException(status_code=400, detail="network needs a name")
            network = VimNetwork(id=self._next_id("net"), name=name)
            self.networks[network.id] = network
            return network.to_dict()

    def delete_network(self, network_id: str) -> dict:
        with self._lock:
            if network_id not in self.networks:
                raise HTTPException(status_code=404, detail="no such network")
            for server in self.servers.values():
                if any(i["network_id"] == network_id for i in server.interfaces):
                    raise HTTPException(status_code=409, detail="network is in use")
            return self.networks.pop(network_id).to_dict()

    # --- images -----------------------------------------------------------------

    def create_image(self, data: dict) -> dict:
        with self._lock:
            self._maybe_fail_create()
            return self._register_image(data).to_dict()

    def _register_image(self, data: dict) -> VimImage:
        image_type = data.get("type", "qcow2")
        if image_type not in IMAGE_TYPES:
            raise HTTPException(status_code=400, detail=f"unknown image type '{image_type}'")
        ref = str(data.get("ref") or "")
        name = str(data.get("name") or ref or image_type)
        for image in self.images.values():
            if image.type == image_type and image.ref == ref:
                return image
        image = VimImage(id=self._next_id("img"), name=name, type=image_type, ref=ref)
        self.images[image.id] = image
        return image

    def delete_image(self, image_id: str) -> dict:
        with self._lock:
            if image_id not in self.images:
                raise HTTPException(status_code=404, detail="no such image")
            for server in self.servers.values():
                if server.image_id == image_id:
                    raise HTTPException(status_code=409, detail="image is in use")
            return self.images.pop(image_id).to_dict()

    # --- servers ------------------------------------------------------------------

    def create_server(self, data: dict) -> dict:
        with self._lock:
            self._maybe_fail_create()
            name = data.get("name")
            if not isinstance(name, str) or not name:
                raise HTTPException(status_code=400, detail="server needs a name")
            image_spec = data.get("image") or {}
            image = self._register_image(image_spec)  # first reference registers
            interfaces = []
            positions: set[int] = set()
            for raw in data.get("interfaces") or []:
                position = raw.get("position")
                network_id = raw.get("network_id")
                if not isinstance(position, int):
                    raise HTTPException(status_code=400, detail="interface needs an integer position")
                if position in positions:
                    raise HTTPException(
                        status_code=400, detail=f"duplicate interface position {position}"
                    )
                positions.add(position)
                if network_id not in self.networks:
                    raise HTTPException(
                        status_code=400, detail=f"unknown network '{network_id}'"
                    )
                interfaces.append({"position": position, "network_id": network_id})
            interfaces.sort(key=lambda i: i["position"])
            server = VimServer(
                id=self._next_id("srv"),
                name=name,
                image_id=image.id,
                image_type=image.type,
                interfaces=interfaces,
                metadata=dict(data.get("metadata") or {}),
                ticks_left=self.build_ticks,
            )
            if server.ticks_left <= 0:
                server.state = "ACTIVE"
            self.servers[server.id] = server
            return server.to_dict()

    def get_server(self, server_id: str) -> dict:
        """A status poll is the simulator's clock tick."""
        with self._lock:
            server = self.servers.get(server_id)
            if server is None:
                raise HTTPException(status_code=404, detail="no such server")
            if server.state == "BUILD":
                server.ticks_left -= 1
                if server.ticks_left <= 0:
                    server.state = "ACTIVE"
            return server.to_dict()

    def delete_server(self, server_id: str) -> dict:
        with self._lock:
            if server_id not in self.servers:
                raise HTTPException(status_code=404, detail="no such server")
            return self.servers.pop(server_id).to_dict()


def vim_router(sim: VimSimulator) -> APIRouter:
    router = APIRouter(prefix="/vim")

    @router.post("/_config")
    def configure(data: dict) -> dict:
        return sim.configure(data)

    @router.get("/networks")
    def list_networks() -> list[dict]:
        return [n.to_dict() for n in sim.networks.values()]

    @router.post("/networks")
    def create_network(data: dict) -> dict:
        return sim.create_network(data)

    @router.get("/networks/{network_id}")
    def get_network(network_id: str) -> dict:
        network = sim.networks.get(network_id)
        if network is None:
            raise HTTPException(status_code=404, detail="no such network")
        return network.to_dict()

    @router.delete("/networks/{network_id}")
    def delete_network(network_id: str) -> dict:
        return sim.delete_network(network_id)

    @router.get("/images")
    def list_images() -> list[dict]:
        return [i.to_dict() for i in sim.images.values()]

    @router.post("/images")
    def create_image(data: dict) -> dict:
        return sim.create_image(data)

    @router.get("/images/{image_id}")
    def get_image(image_id: str) -> dict:
        image = sim.images.get(image_id)
        if image is None:
            raise HTTPException(status_code=404, detail="no such image")
        return image.to_dict()

    @router.delete("/images/{image_id}")
    def delete_image(image_id: str) -> dict:
        return sim.delete_image(image_id)

    @router.get("/servers")
    def list_servers() -> list[dict]:
        return [s.to_dict() for s in sim.servers.values()]

    @router.post("/servers")
    def create_server(data: dict) -> dict:
        return sim.create_server(data)

    @router.get("/servers/{server_id}")
    def get_server(server_id: str) -> dict:
        return sim.get_server(server_id)

    @router.delete("/servers/{server_id}")
    def delete_server(server_id: str) -> dict:
        return sim.delete_server(server_id)

    return router


def create_vim_app(sim: VimSimulator | None = None) -> FastAPI:
    """Standalone simulator service (also mountable into the main API app)."""
    app = FastAPI(title="VIM simulator")
    app.state.sim = sim or VimSimulator()
    app.include_router(vim_router(app.state.sim))
    return app
