"""FastAPI application serving a published service."""

from .main import create_app, status_for

__all__ = ["create_app", "status_for"]
