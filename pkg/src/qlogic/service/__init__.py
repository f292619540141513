"""HTTP service wrapper around the valuation engine."""

from .app import app

__all__ = ["app"]
