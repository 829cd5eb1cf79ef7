"""Topology sources: the built-in generator and dataset readers."""

from fogtopo.ingest.brite import parse_brite, read_brite
from fogtopo.ingest.caida import CaidaDatasetPaths, parse_caida
from fogtopo.ingest.generate import GeneratorParams, generate_barabasi_albert
from fogtopo.ingest.select import filter_as, select_as_by_size

__all__ = [
    "CaidaDatasetPaths",
    "GeneratorParams",
    "filter_as",
    "generate_barabasi_albert",
    "parse_brite",
    "parse_caida",
    "read_brite",
    "select_as_by_size",
]
