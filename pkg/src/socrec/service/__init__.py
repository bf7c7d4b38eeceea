from .app import create_app, serve
from .engine import Engine, Snapshot

__all__ = ["Engine", "Snapshot", "create_app", "serve"]
