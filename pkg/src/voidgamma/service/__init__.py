"""HTTP service wrapping the fitting and geometry library."""

from .app import app, create_app

__all__ = ["app", "create_app"]
