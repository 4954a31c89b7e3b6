"""Document embedding export for corpus manifests."""

from .export import (
    EMBED_DIM,
    ExportError,
    ExportJob,
    ExportResult,
    export_embeddings,
    read_manifest,
)

__version__ = "0.1.0"

__all__ = [
    "EMBED_DIM",
    "ExportError",
    "ExportJob",
    "ExportResult",
    "export_embeddings",
    "read_manifest",
    "__version__",
]
