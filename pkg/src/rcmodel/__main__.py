"""Allow running the CLI as ``python -m rcmodel``."""

from .cli import entrypoint

entrypoint()
