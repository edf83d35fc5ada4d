"""Export dense sentence embeddings of delimited records to DVEC files."""

from .dvec import read_dvec, write_dvec
from .export import EmbedJob, export_embeddings

__version__ = "0.1.0"

__all__ = ["EmbedJob", "export_embeddings", "read_dvec", "write_dvec"]
