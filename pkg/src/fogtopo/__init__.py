"""Fog-computing topology preparation: ingest, edge identification, fog placement, export."""

__version__ = "0.1.0"
