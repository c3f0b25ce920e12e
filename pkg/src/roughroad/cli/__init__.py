from .commands import cli, configure_logging

__all__ = ["cli", "configure_logging"]
