"""Fog configuration: node types, edge occupancy and the latency threshold."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any


class ConfigError(ValueError):
    """Invalid fog or pipeline configuration."""


@dataclass(frozen=True)
class FogNodeType:
    name: str
    max_clients: int
    cost: float
    image: str = "fog-node:latest"
    memory_mb: int | None = None
    cpu_share: float | None = None

    def __post_init__(self) -> None:
        if not self.name:
            raise ConfigError("fog node type needs a name")
        if isinstance(self.max_clients, bool) or int(self.max_clients) != self.max_clients:
            raise ConfigError(f"{self.name}: max_clients must be an integer")
        if self.max_clients < 1:
            raise ConfigError(f"{self.name}: max_clients must be >= 1, got {self.max_clients}")
        if not self.cost > 0:
            raise ConfigError(f"{self.name}: cost must be > 0, got {self.cost}")
        if self.memory_mb is not None and self.memory_mb <= 0:
            raise ConfigError(f"{self.name}: memory_mb must be positive")
        if self.cpu_share is not None and self.cpu_share <= 0:
            raise ConfigError(f"{self.name}: cpu_share must be positive")
        object.__setattr__(self, "max_clients", int(self.max_clients))
        object.__setattr__(self, "cost", float(self.cost))

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "name": self.name,
            "max_clients": self.max_clients,
            "cost": self.cost,
            "image": self.image,
        }
        if self.memory_mb is not None:
            d["memory_mb"] = self.memory_mb
        if self.cpu_share is not None:
            d["cpu_share"] = float(self.cpu_share)
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "FogNodeType":
        unknown = set(d) - {"name", "max_clients", "cost", "image", "memory_mb", "cpu_share"}
        if unknown:
            raise ConfigError(f"unknown node type fields: {sorted(unknown)}")
        try:
            return cls(
                name=str(d["name"]),
                max_clients=d["max_clients"],
                cost=d["cost"],
                image=str(d.get("image", "fog-node:latest")),
                memory_mb=d.get("memory_mb"),
                cpu_share=d.get("cpu_share"),
            )
        except KeyError as exc:
            raise ConfigError(f"node type missing field {exc.args[0]!r}") from None


@dataclass(frozen=True)
class FogConfig:
    node_types: tuple[FogNodeType, ...]
    edge_occupancy: float
    latency_threshold: float
    max_total_nodes: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "node_types", tuple(self.node_types))
        if not self.node_types:
            raise ConfigError("at least one fog node type is required")
        names = [t.name for t in self.node_types]
        if len(set(names)) != len(names):
            raise ConfigError(f"fog node type names must be unique, got {names}")
        if not self.edge_occupancy > 0:
            raise ConfigError(f"edge_occupancy must be > 0, got {self.edge_occupancy}")
        if not self.latency_threshold > 0:
            raise ConfigError(f"latency_threshold_ms must be > 0, got {self.latency_threshold}")
        if self.max_total_nodes is not None and self.max_total_nodes < 0:
            raise ConfigError(f"max_total_nodes must be >= 0, got {self.max_total_nodes}")

    def with_threshold(self, latency_threshold: float) -> "FogConfig":
        return FogConfig(self.node_types, self.edge_occupancy, latency_threshold,
                         self.max_total_nodes)

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "latency_threshold_ms": float(self.latency_threshold),
            "edge_occupancy": float(self.edge_occupancy),
            "node_types": [t.to_dict() for t in self.node_types],
        }
        if self.max_total_nodes is not None:
            d["max_total_nodes"] = self.max_total_nodes
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "FogConfig":
        try:
            return cls(
                node_types=tuple(FogNodeType.from_dict(t) for t in d["node_types"]),
                edge_occupancy=float(d["edge_occupancy"]),
                latency_threshold=float(d["latency_threshold_ms"]),
                max_total_nodes=d.get("max_total_nodes"),
            )
        except KeyError as exc:
            raise ConfigError(f"fog config missing field {exc.args[0]!r}") from None
        except TypeError as exc:
            raise ConfigError(f"malformed fog config: {exc}") from None

    def dumps(self) -> str:
        return canonical_json(self.to_dict())

    def digest(self) -> str:
        return hashlib.sha256(self.dumps().encode()).hexdigest()


def canonical_json(doc: Any) -> str:
    """Sorted keys, two-space indent, shortest round-trip floats, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True, allow_nan=False) + "\n"


def load_fog_config(path: str | Path) -> FogConfig:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return FogConfig.from_dict(doc)


DEFAULT_FOG_CONFIG = FogConfig(
    node_types=(
        FogNodeType("small", max_clients=10, cost=1.0, image="fog-node:small"),
        FogNodeType("large", max_clients=50, cost=4.0, image="fog-node:large"),
    ),
    edge_occupancy=5.0,
    latency_threshold=4.0,
)
