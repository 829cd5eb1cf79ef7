"""Serialized forms of an enhanced topology."""

from fogtopo.export.deployment import export_deployment
from fogtopo.export.dot import export_dot
from fogtopo.export.interchange import (
    ExportError,
    InterchangeDocument,
    export_interchange,
    parse_interchange,
)

__all__ = [
    "ExportError",
    "InterchangeDocument",
    "export_deployment",
    "export_dot",
    "export_interchange",
    "parse_interchange",
]
